#![allow(dead_code)]

use cartogram_core::{MapBuilder, MapDocument, Point, PolygonInput, RegionInput};

pub fn region(id: &str, outer: &[(f64, f64)]) -> RegionInput {
    RegionInput {
        id: id.into(),
        name: id.into(),
        abbreviation: id.into(),
        polygons: vec![PolygonInput {
            outer: outer.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            holes: vec![],
        }],
    }
}

pub fn rect(id: &str, x0: f64, y0: f64, x1: f64, y1: f64) -> RegionInput {
    region(id, &[(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
}

pub fn build(regions: Vec<RegionInput>) -> MapDocument {
    MapBuilder::new().build(regions).expect("valid test map")
}

pub fn two_squares() -> MapDocument {
    build(vec![
        rect("A", 0.0, 0.0, 1.0, 1.0),
        rect("B", 1.0, 0.0, 2.0, 1.0),
    ])
}

/// Unit squares in a row, each edge split into `k` pieces so the solver has
/// vertices to move.
pub fn strip(n: usize, k: usize) -> MapDocument {
    let regions = (0..n)
        .map(|i| {
            let x = i as f64;
            let mut ring = Vec::new();
            for s in 0..k {
                ring.push((x + s as f64 / k as f64, 0.0));
            }
            for s in 0..k {
                ring.push((x + 1.0, s as f64 / k as f64));
            }
            for s in 0..k {
                ring.push((x + 1.0 - s as f64 / k as f64, 1.0));
            }
            for s in 0..k {
                ring.push((x, 1.0 - s as f64 / k as f64));
            }
            region(&format!("S{i}"), &ring)
        })
        .collect();
    build(regions)
}

/// `cols` x `rows` grid of unit cells.
pub fn grid(cols: usize, rows: usize) -> MapDocument {
    let mut regions = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let (x, y) = (c as f64, r as f64);
            regions.push(rect(&format!("R{r}C{c}"), x, y, x + 1.0, y + 1.0));
        }
    }
    build(regions)
}

/// Shoelace area of a closed polyline given as coordinate pairs; written
/// without the crate's geometry code.
pub fn shoelace(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        let (x0, y0) = pts[i];
        let (x1, y1) = pts[(i + 1) % n];
        s += x0 * y1 - x1 * y0;
    }
    0.5 * s
}

/// Area of region `id` measured from raw pool coordinates.
pub fn measured_area(map: &MapDocument, id: &str) -> f64 {
    let v = map.vertices();
    let coords = |ring: &[usize]| ring.iter().map(|&i| (v[i].x, v[i].y)).collect::<Vec<_>>();
    map.region(id)
        .unwrap()
        .polygons
        .iter()
        .map(|p| {
            shoelace(&coords(&p.outer)).abs()
                - p.holes
                    .iter()
                    .map(|h| shoelace(&coords(h)).abs())
                    .sum::<f64>()
        })
        .sum()
}

pub fn pool_index(map: &MapDocument, x: f64, y: f64) -> usize {
    map.vertices()
        .iter()
        .position(|p| p.x == x && p.y == y)
        .unwrap_or_else(|| panic!("no vertex at ({x}, {y})"))
}
