//! Region geometry over a shared, deduplicated vertex pool.
//!
//! Every ring stores indices into one pool, so a border shared by two regions
//! is literally the same vertices in both rings and moves as one when the pool
//! is deformed.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::geometry::{signed_area_of, signed_ring_area, BBox, Point, RingMoments};
use crate::topology;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("map has no regions")]
    Empty,
    #[error("region id must be a non-empty string")]
    EmptyId,
    #[error("duplicate region id {0:?}")]
    DuplicateId(String),
    #[error("unknown region id {0:?}")]
    UnknownRegion(String),
    #[error("region {0:?} has no polygons")]
    NoPolygons(String),
    #[error("non-finite coordinate in region {0:?}")]
    NonFinite(String),
    #[error("region {id:?}: ring with fewer than 3 distinct vertices")]
    DegenerateRing { id: String },
    #[error("region {id:?}: ring has zero area")]
    ZeroAreaRing { id: String },
    #[error("region {id:?}: self-intersecting ring")]
    SelfIntersectingRing { id: String },
    #[error("region {0:?} has non-positive total area")]
    NonPositiveArea(String),
    #[error("vertex pool length {got} does not match {expected}")]
    PoolLength { expected: usize, got: usize },
    #[error("invalid snap tolerance {0}")]
    InvalidSnap(f64),
}

/// One polygon of a region: an outer ring plus holes, all as pool indices.
///
/// Outer rings are counterclockwise and holes clockwise. Rings are open
/// (the first vertex is not repeated at the end).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pub outer: Vec<usize>,
    pub holes: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub id: String,
    pub name: String,
    pub abbreviation: String,
    pub polygons: Vec<Polygon>,
}

/// Coordinates for one polygon before pooling. Rings may be open or closed
/// and in either orientation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolygonInput {
    pub outer: Vec<Point>,
    pub holes: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegionInput {
    pub id: String,
    pub name: String,
    pub abbreviation: String,
    pub polygons: Vec<PolygonInput>,
}

/// Location of a ring inside a map plus its indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingRef<'a> {
    /// Position in the flattened ring list (region order, then polygon, outer before holes).
    pub ring: usize,
    pub region: usize,
    pub polygon: usize,
    pub hole: Option<usize>,
    pub indices: &'a [usize],
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Snap {
    Exact,
    Absolute(f64),
    RelativeToDiagonal(f64),
}

/// Builds a [`MapDocument`] from coordinate rings.
///
/// Vertices with identical coordinates are merged into a single pool entry.
/// With a snap tolerance, vertices closer than the tolerance merge too.
#[derive(Debug, Clone)]
pub struct MapBuilder {
    snap: Snap,
    units_note: String,
}

impl Default for MapBuilder {
    fn default() -> Self {
        MapBuilder::new()
    }
}

impl MapBuilder {
    pub const DEFAULT_RELATIVE_SNAP: f64 = 1e-9;

    pub fn new() -> Self {
        MapBuilder {
            snap: Snap::Exact,
            units_note: String::new(),
        }
    }

    pub fn units_note(mut self, note: impl Into<String>) -> Self {
        self.units_note = note.into();
        self
    }

    /// Merge vertices within `fraction` of the bounding-box diagonal.
    pub fn snap_relative(mut self, fraction: f64) -> Self {
        self.snap = Snap::RelativeToDiagonal(fraction);
        self
    }

    /// Merge vertices within `tolerance` map units.
    pub fn snap_absolute(mut self, tolerance: f64) -> Self {
        self.snap = Snap::Absolute(tolerance);
        self
    }

    pub fn build(&self, inputs: Vec<RegionInput>) -> Result<MapDocument, MapError> {
        if inputs.is_empty() {
            return Err(MapError::Empty);
        }
        let mut seen = BTreeMap::new();
        for (i, r) in inputs.iter().enumerate() {
            if r.id.is_empty() {
                return Err(MapError::EmptyId);
            }
            if seen.insert(r.id.clone(), i).is_some() {
                return Err(MapError::DuplicateId(r.id.clone()));
            }
            if r.polygons.is_empty() {
                return Err(MapError::NoPolygons(r.id.clone()));
            }
            let all = r
                .polygons
                .iter()
                .flat_map(|p| p.outer.iter().chain(p.holes.iter().flatten()));
            if all.clone().any(|p| !p.is_finite()) {
                return Err(MapError::NonFinite(r.id.clone()));
            }
        }

        let tolerance = match self.snap {
            Snap::Exact => None,
            Snap::Absolute(t) | Snap::RelativeToDiagonal(t) if !(t > 0.0 && t.is_finite()) => {
                return Err(MapError::InvalidSnap(t))
            }
            Snap::Absolute(t) => Some(t),
            Snap::RelativeToDiagonal(f) => {
                let bbox = BBox::enclosing(inputs.iter().flat_map(|r| {
                    r.polygons
                        .iter()
                        .flat_map(|p| p.outer.iter().chain(p.holes.iter().flatten()).copied())
                }));
                bbox.map(|b| b.diagonal() * f).filter(|t| *t > 0.0)
            }
        };

        let mut pool = VertexPool::new(tolerance);
        let mut regions = Vec::with_capacity(inputs.len());
        for r in inputs {
            let mut polygons = Vec::with_capacity(r.polygons.len());
            for p in &r.polygons {
                let outer = pool.intern_ring(&p.outer, true, &r.id)?;
                let holes = p
                    .holes
                    .iter()
                    .map(|h| pool.intern_ring(h, false, &r.id))
                    .collect::<Result<Vec<_>, _>>()?;
                polygons.push(Polygon { outer, holes });
            }
            regions.push(Region {
                id: r.id,
                name: r.name,
                abbreviation: r.abbreviation,
                polygons,
            });
        }

        let doc = MapDocument::assemble(regions, pool.points, self.units_note.clone());
        for (i, region) in doc.regions.iter().enumerate() {
            if !(doc.area_at(i) > 0.0) {
                return Err(MapError::NonPositiveArea(region.id.clone()));
            }
        }
        for ring in doc.rings() {
            if topology::ring_self_intersection(&doc.vertices, ring.indices).is_some() {
                return Err(MapError::SelfIntersectingRing {
                    id: doc.regions[ring.region].id.clone(),
                });
            }
        }
        Ok(doc)
    }
}

struct VertexPool {
    points: Vec<Point>,
    tolerance: Option<f64>,
    exact: BTreeMap<(u64, u64), usize>,
    grid: BTreeMap<(i64, i64), Vec<usize>>,
}

fn coord_key(p: Point) -> (u64, u64) {
    // +0.0 and -0.0 must land on the same key
    ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits())
}

impl VertexPool {
    fn new(tolerance: Option<f64>) -> Self {
        VertexPool {
            points: Vec::new(),
            tolerance,
            exact: BTreeMap::new(),
            grid: BTreeMap::new(),
        }
    }

    fn intern(&mut self, p: Point) -> usize {
        if let Some(&i) = self.exact.get(&coord_key(p)) {
            return i;
        }
        let idx = match self.tolerance {
            None => self.points.len(),
            Some(tol) => {
                let cx = libm::floor(p.x / tol) as i64;
                let cy = libm::floor(p.y / tol) as i64;
                let mut found = None;
                'search: for dx in -1..=1 {
                    for dy in -1..=1 {
                        if let Some(bucket) = self.grid.get(&(cx + dx, cy + dy)) {
                            for &i in bucket {
                                if (self.points[i] - p).norm() <= tol {
                                    found = Some(i);
                                    break 'search;
                                }
                            }
                        }
                    }
                }
                match found {
                    Some(i) => i,
                    None => {
                        let i = self.points.len();
                        self.grid.entry((cx, cy)).or_default().push(i);
                        i
                    }
                }
            }
        };
        if idx == self.points.len() {
            self.points.push(p);
        }
        self.exact.insert(coord_key(p), idx);
        idx
    }

    /// Normalise orientation (keeping the start vertex), then pool the vertices.
    fn intern_ring(
        &mut self,
        coords: &[Point],
        outer: bool,
        id: &str,
    ) -> Result<Vec<usize>, MapError> {
        let mut coords: Vec<Point> = coords.to_vec();
        if coords.len() > 1 && coords.first() == coords.last() {
            coords.pop();
        }
        let area = signed_area_of(&coords);
        if (outer && area < 0.0) || (!outer && area > 0.0) {
            coords[1..].reverse();
        }
        let mut ring: Vec<usize> = Vec::with_capacity(coords.len());
        for p in coords {
            let i = self.intern(p);
            if ring.last() != Some(&i) {
                ring.push(i);
            }
        }
        while ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        let mut distinct = ring.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() < 3 {
            return Err(MapError::DegenerateRing { id: id.into() });
        }
        if signed_ring_area(&self.points, &ring) == 0.0 {
            return Err(MapError::ZeroAreaRing { id: id.into() });
        }
        Ok(ring)
    }
}

/// Planar regions over a shared vertex pool.
///
/// Immutable once built; deformations produce a new document through
/// [`MapDocument::with_vertices`], which keeps the ring structure.
#[derive(Debug, Clone, PartialEq)]
pub struct MapDocument {
    regions: Vec<Region>,
    vertices: Vec<Point>,
    bbox: BBox,
    units_note: String,
    index: BTreeMap<String, usize>,
}

impl MapDocument {
    fn assemble(regions: Vec<Region>, vertices: Vec<Point>, units_note: String) -> Self {
        let bbox = BBox::enclosing(vertices.iter().copied()).unwrap_or(BBox {
            xmin: 0.0,
            ymin: 0.0,
            xmax: 0.0,
            ymax: 0.0,
        });
        let index = regions
            .iter()
            .enumerate()
            .map(|(i, r)| (r.id.clone(), i))
            .collect();
        MapDocument {
            regions,
            vertices,
            bbox,
            units_note,
            index,
        }
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn units_note(&self) -> &str {
        &self.units_note
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn region_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn region(&self, id: &str) -> Option<&Region> {
        self.region_index(id).map(|i| &self.regions[i])
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.regions.iter().map(|r| r.id.as_str())
    }

    /// All rings in flattened order: per region, per polygon, outer then holes.
    pub fn rings(&self) -> impl Iterator<Item = RingRef<'_>> {
        let mut counter = 0usize;
        self.regions
            .iter()
            .enumerate()
            .flat_map(|(ri, r)| {
                r.polygons.iter().enumerate().flat_map(move |(pi, p)| {
                    core::iter::once((ri, pi, None, p.outer.as_slice())).chain(
                        p.holes
                            .iter()
                            .enumerate()
                            .map(move |(hi, h)| (ri, pi, Some(hi), h.as_slice())),
                    )
                })
            })
            .map(move |(region, polygon, hole, indices)| {
                let ring = counter;
                counter += 1;
                RingRef {
                    ring,
                    region,
                    polygon,
                    hole,
                    indices,
                }
            })
    }

    fn region_moments(&self, i: usize) -> (RingMoments, Point) {
        let region = &self.regions[i];
        let origin = self.vertices[region.polygons[0].outer[0]];
        let mut m = RingMoments::default();
        for p in &region.polygons {
            m.accumulate(RingMoments::of(&self.vertices, &p.outer, origin));
            for h in &p.holes {
                m.accumulate(RingMoments::of(&self.vertices, h, origin));
            }
        }
        (m, origin)
    }

    /// Signed area of region `i`: outer rings minus holes given normalised orientation.
    pub fn area_at(&self, i: usize) -> f64 {
        self.region_moments(i).0.signed_area()
    }

    /// Area-weighted centroid of region `i`, holes subtracting.
    pub fn centroid_at(&self, i: usize) -> Point {
        let (m, origin) = self.region_moments(i);
        m.centroid(origin).unwrap_or(origin)
    }

    pub fn region_area(&self, id: &str) -> Result<f64, MapError> {
        self.region_index(id)
            .map(|i| self.area_at(i))
            .ok_or_else(|| MapError::UnknownRegion(id.into()))
    }

    pub fn region_centroid(&self, id: &str) -> Result<Point, MapError> {
        self.region_index(id)
            .map(|i| self.centroid_at(i))
            .ok_or_else(|| MapError::UnknownRegion(id.into()))
    }

    /// Areas in region order.
    pub fn areas(&self) -> Vec<f64> {
        (0..self.regions.len()).map(|i| self.area_at(i)).collect()
    }

    pub fn centroids(&self) -> Vec<Point> {
        (0..self.regions.len())
            .map(|i| self.centroid_at(i))
            .collect()
    }

    pub fn total_area(&self) -> f64 {
        self.areas().iter().sum()
    }

    /// Area-weighted centroid of all regions together.
    pub fn mass_centroid(&self) -> Point {
        let origin = self.vertices.first().copied().unwrap_or_default();
        let mut m = RingMoments::default();
        for ring in self.rings() {
            m.accumulate(RingMoments::of(&self.vertices, ring.indices, origin));
        }
        m.centroid(origin).unwrap_or(origin)
    }

    /// Same regions and rings over a new vertex pool.
    pub fn with_vertices(&self, vertices: Vec<Point>) -> Result<MapDocument, MapError> {
        if vertices.len() != self.vertices.len() {
            return Err(MapError::PoolLength {
                expected: self.vertices.len(),
                got: vertices.len(),
            });
        }
        let bbox = BBox::enclosing(vertices.iter().copied()).unwrap_or(self.bbox);
        Ok(MapDocument {
            regions: self.regions.clone(),
            vertices,
            bbox,
            units_note: self.units_note.clone(),
            index: self.index.clone(),
        })
    }

    /// Applies `f` to every pool vertex.
    pub fn map_vertices(&self, f: impl FnMut(Point) -> Point) -> MapDocument {
        let v: Vec<Point> = self.vertices.iter().copied().map(f).collect();
        self.with_vertices(v).expect("pool length unchanged")
    }

    /// Same ids, pool length and ring indices.
    pub fn structurally_identical(&self, other: &MapDocument) -> bool {
        self.vertices.len() == other.vertices.len()
            && self.regions.len() == other.regions.len()
            && self
                .regions
                .iter()
                .zip(&other.regions)
                .all(|(a, b)| a.id == b.id && a.polygons == b.polygons)
    }
}
