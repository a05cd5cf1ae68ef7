//! Colours: the six-class palette, highlight shades and map colouring.
//!
//! One [`ColorAssignment`] is computed per map and shared by the conventional
//! map, every cartogram of it and the pie chart, so a region keeps its colour
//! everywhere.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::adjacency::AdjacencyGraph;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColorError {
    #[error("invalid hex colour {0:?}")]
    InvalidHex(String),
    #[error("colour {color} for region {id:?} is reserved for missing data")]
    ReservedColor { id: String, color: Rgb },
    #[error("colour override for unknown region {0:?}")]
    UnknownRegion(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub fn parse(s: &str) -> Result<Rgb, ColorError> {
        let hex = s.trim().strip_prefix('#').unwrap_or(s.trim());
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(ColorError::InvalidHex(s.into()));
        }
        let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).expect("validated hex");
        Ok(Rgb(byte(0), byte(2), byte(4)))
    }

    pub fn hex(&self) -> String {
        format!("{self}")
    }

    fn distance2(&self, other: &Rgb) -> i32 {
        let d = |a: u8, b: u8| (a as i32 - b as i32).pow(2);
        d(self.0, other.0) + d(self.1, other.1) + d(self.2, other.2)
    }

    /// Raises HSL lightness by `delta` (0..1), capped at `cap`.
    pub fn lighten(&self, delta: f64, cap: f64) -> Rgb {
        let (h, s, l) = rgb_to_hsl(*self);
        let target = (l + delta).min(cap).max(l);
        hsl_to_rgb(h, s, target)
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02X}{:02X}{:02X}", self.0, self.1, self.2)
    }
}

fn rgb_to_hsl(c: Rgb) -> (f64, f64, f64) {
    let r = c.0 as f64 / 255.0;
    let g = c.1 as f64 / 255.0;
    let b = c.2 as f64 / 255.0;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let l = 0.5 * (max + min);
    if max == min {
        return (0.0, 0.0, l);
    }
    let d = max - min;
    let s = if l > 0.5 {
        d / (2.0 - max - min)
    } else {
        d / (max + min)
    };
    let h = if max == r {
        (g - b) / d + if g < b { 6.0 } else { 0.0 }
    } else if max == g {
        (b - r) / d + 2.0
    } else {
        (r - g) / d + 4.0
    };
    (h / 6.0, s, l)
}

fn hsl_to_rgb(h: f64, s: f64, l: f64) -> Rgb {
    let to_byte = |v: f64| libm::round((v * 255.0).clamp(0.0, 255.0)) as u8;
    if s == 0.0 {
        let v = to_byte(l);
        return Rgb(v, v, v);
    }
    let q = if l < 0.5 {
        l * (1.0 + s)
    } else {
        l + s - l * s
    };
    let p = 2.0 * l - q;
    let channel = |mut t: f64| {
        if t < 0.0 {
            t += 1.0;
        }
        if t > 1.0 {
            t -= 1.0;
        }
        if t < 1.0 / 6.0 {
            p + (q - p) * 6.0 * t
        } else if t < 0.5 {
            q
        } else if t < 2.0 / 3.0 {
            p + (q - p) * (2.0 / 3.0 - t) * 6.0
        } else {
            p
        }
    };
    Rgb(
        to_byte(channel(h + 1.0 / 3.0)),
        to_byte(channel(h)),
        to_byte(channel(h - 1.0 / 3.0)),
    )
}

/// Six-class Dark2 base colours.
pub const DARK2: [Rgb; 6] = [
    Rgb(0x1B, 0x9E, 0x77),
    Rgb(0xD9, 0x5F, 0x02),
    Rgb(0x75, 0x70, 0xB3),
    Rgb(0xE7, 0x29, 0x8A),
    Rgb(0x66, 0xA6, 0x1E),
    Rgb(0xE6, 0xAB, 0x02),
];
pub const MISSING_GRAY: Rgb = Rgb(0xCC, 0xCC, 0xCC);
pub const LEGEND_GRAY: Rgb = Rgb(0x70, 0x70, 0x70);
/// Fixed hover shade for the purple entry.
pub const PURPLE_HIGHLIGHT: (Rgb, Rgb) = (Rgb(0xE7, 0x29, 0x8A), Rgb(0xFF, 0x5C, 0xBD));

const HIGHLIGHT_DELTA: f64 = 0.15;
const HIGHLIGHT_CAP: f64 = 0.95;

/// Highlight shade for an arbitrary fill.
pub fn highlight_of(c: Rgb) -> Rgb {
    if c == PURPLE_HIGHLIGHT.0 {
        PURPLE_HIGHLIGHT.1
    } else {
        c.lighten(HIGHLIGHT_DELTA, HIGHLIGHT_CAP)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    pub base: [Rgb; 6],
    pub highlight: [Rgb; 6],
    pub missing: Rgb,
    pub legend: Rgb,
}

impl Palette {
    pub fn dark2() -> Palette {
        Palette {
            base: DARK2,
            highlight: DARK2.map(highlight_of),
            missing: MISSING_GRAY,
            legend: LEGEND_GRAY,
        }
    }

    fn nearest_index(&self, c: &Rgb) -> usize {
        (0..self.base.len())
            .min_by_key(|&i| (self.base[i].distance2(c), i))
            .unwrap_or(0)
    }
}

impl Default for Palette {
    fn default() -> Self {
        Palette::dark2()
    }
}

/// Palette index per region plus user colour overrides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorAssignment {
    ids: Vec<String>,
    indices: Vec<usize>,
    overrides: BTreeMap<usize, Rgb>,
    palette: Palette,
}

impl ColorAssignment {
    pub fn palette(&self) -> &Palette {
        &self.palette
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Palette index per region, in graph node order.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    fn position(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.position(id).map(|i| self.indices[i])
    }

    pub fn override_of(&self, id: &str) -> Option<Rgb> {
        self.position(id)
            .and_then(|i| self.overrides.get(&i).copied())
    }

    /// Fill for region `id`: its override if any, otherwise its palette colour.
    pub fn fill(&self, id: &str) -> Option<Rgb> {
        let i = self.position(id)?;
        Some(
            self.overrides
                .get(&i)
                .copied()
                .unwrap_or(self.palette.base[self.indices[i]]),
        )
    }

    /// Fill for a dataset in which the region may have no data.
    pub fn fill_for(&self, id: &str, missing: bool) -> Option<Rgb> {
        if missing {
            self.position(id).map(|_| self.palette.missing)
        } else {
            self.fill(id)
        }
    }

    pub fn highlight(&self, id: &str) -> Option<Rgb> {
        let i = self.position(id)?;
        Some(match self.overrides.get(&i) {
            Some(c) => highlight_of(*c),
            None => self.palette.highlight[self.indices[i]],
        })
    }

    /// Number of distinct palette indices in use.
    pub fn distinct_indices(&self) -> usize {
        let mut seen = [false; 6];
        for &i in &self.indices {
            seen[i] = true;
        }
        seen.iter().filter(|&&b| b).count()
    }
}

/// Smallest-last order: repeatedly remove a vertex of minimum remaining degree.
/// Among tied vertices the one with the greatest id is removed first, so that
/// in the reversed (colouring) order ties are coloured by ascending id.
fn smallest_last_order(ids: &[String], neighbors: &[Vec<usize>]) -> Vec<usize> {
    let n = ids.len();
    let mut degree: Vec<usize> = neighbors.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut removal = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by(|&a, &b| degree[a].cmp(&degree[b]).then_with(|| ids[b].cmp(&ids[a])))
            .expect("vertices remain");
        removed[v] = true;
        removal.push(v);
        for &u in &neighbors[v] {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    removal.reverse();
    removal
}

/// Greedy colouring in smallest-last order with the lowest free palette index.
///
/// Planar graphs are 5-degenerate, so six indices always suffice. Overridden
/// regions take the palette index nearest to their custom colour before the
/// rest are coloured; the missing-data grey cannot be used as an override.
pub fn assign_colors(
    adjacency: &AdjacencyGraph,
    overrides: &BTreeMap<String, String>,
) -> Result<ColorAssignment, ColorError> {
    let palette = Palette::dark2();
    let ids = adjacency.nodes().to_vec();
    let n = ids.len();
    let neighbors = adjacency.neighbor_lists();

    let mut fixed = BTreeMap::new();
    for (id, hex) in overrides {
        let pos = ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| ColorError::UnknownRegion(id.clone()))?;
        let c = Rgb::parse(hex)?;
        if c == palette.missing {
            return Err(ColorError::ReservedColor {
                id: id.clone(),
                color: c,
            });
        }
        fixed.insert(pos, c);
    }

    let mut indices: Vec<Option<usize>> = vec![None; n];
    for (&pos, c) in &fixed {
        indices[pos] = Some(palette.nearest_index(c));
    }
    for v in smallest_last_order(&ids, &neighbors) {
        if indices[v].is_some() {
            continue;
        }
        let mut used = [0usize; 6];
        for &u in &neighbors[v] {
            if let Some(c) = indices[u] {
                used[c] += 1;
            }
        }
        // only precoloured overrides can exhaust the palette
        let pick = (0..6)
            .find(|&c| used[c] == 0)
            .unwrap_or_else(|| (0..6).min_by_key(|&c| (used[c], c)).unwrap_or(0));
        indices[v] = Some(pick);
    }

    Ok(ColorAssignment {
        ids,
        indices: indices.into_iter().map(|c| c.unwrap_or(0)).collect(),
        overrides: fixed,
        palette,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn graph(ids: &[&str], edges: &[(usize, usize)]) -> AdjacencyGraph {
        AdjacencyGraph::new(
            ids.iter().map(|s| s.to_string()).collect(),
            edges.iter().copied(),
        )
    }

    #[test]
    fn palette_constants() {
        let p = Palette::dark2();
        let hex: Vec<String> = p.base.iter().map(Rgb::hex).collect();
        assert_eq!(
            hex,
            ["#1B9E77", "#D95F02", "#7570B3", "#E7298A", "#66A61E", "#E6AB02"]
        );
        assert_eq!(p.highlight[3].hex(), "#FF5CBD");
        assert_eq!(p.missing.hex(), "#CCCCCC");
        assert_eq!(p.legend.hex(), "#707070");
        for (i, c) in p.base.iter().enumerate() {
            assert_ne!(*c, p.missing);
            assert_ne!(*c, p.legend);
            assert!(p.base[i + 1..].iter().all(|d| d != c));
            // highlight is lighter
            assert!(rgb_to_hsl(p.highlight[i]).2 > rgb_to_hsl(*c).2);
        }
    }

    #[test]
    fn hsl_round_trip() {
        for c in DARK2 {
            let (h, s, l) = rgb_to_hsl(c);
            assert_eq!(hsl_to_rgb(h, s, l), c);
        }
    }

    #[test]
    fn no_edges_all_first_colour() {
        let a = assign_colors(&graph(&["A", "B", "C"], &[]), &BTreeMap::new()).unwrap();
        assert_eq!(a.indices(), &[0, 0, 0]);
        assert_eq!(a.fill("A").unwrap().hex(), "#1B9E77");
    }

    #[test]
    fn triangle_takes_three_colours_in_id_order() {
        let a = assign_colors(
            &graph(&["A", "B", "C"], &[(0, 1), (1, 2), (0, 2)]),
            &BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(a.indices(), &[0, 1, 2]);
    }

    #[test]
    fn overrides() {
        let g = graph(&["A", "B"], &[(0, 1)]);
        let mut o = BTreeMap::new();
        o.insert("A".to_string(), "#1C9F78".to_string());
        let a = assign_colors(&g, &o).unwrap();
        assert_eq!(a.fill("A").unwrap().hex(), "#1C9F78");
        assert_eq!(a.index_of("A"), Some(0));
        assert_eq!(a.index_of("B"), Some(1));
        assert_eq!(a.fill_for("A", true).unwrap(), MISSING_GRAY);

        o.insert("B".to_string(), "#cccccc".to_string());
        assert!(matches!(
            assign_colors(&g, &o),
            Err(ColorError::ReservedColor { .. })
        ));
        o.insert("B".to_string(), "#12345".to_string());
        assert!(matches!(
            assign_colors(&g, &o),
            Err(ColorError::InvalidHex(_))
        ));
        let mut o = BTreeMap::new();
        o.insert("Z".to_string(), "#000000".to_string());
        assert!(matches!(
            assign_colors(&g, &o),
            Err(ColorError::UnknownRegion(_))
        ));
    }
}
