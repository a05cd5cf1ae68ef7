//! Topology checks between a map and its deformation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::adjacency::build_adjacency;
use crate::geometry::{folds_back, segments_cross, segments_intersect, signed_ring_area, Point};
use crate::map::MapDocument;

/// Outcome of [`verify_topology`].
///
/// A structural mismatch (different pool length, ids or ring indexing) is
/// reported in `structural_mismatch` and leaves every other check false.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TopologyReport {
    pub structural_mismatch: Option<String>,
    pub adjacency_preserved: bool,
    pub all_rings_simple: bool,
    pub all_areas_positive: bool,
    /// No ring crosses a ring of another region or polygon.
    pub no_ring_crossings: bool,
    /// Flattened ring positions (see [`MapDocument::rings`]) that failed a check.
    pub offending_rings: Vec<usize>,
}

impl TopologyReport {
    pub fn passed(&self) -> bool {
        self.structural_mismatch.is_none()
            && self.adjacency_preserved
            && self.all_rings_simple
            && self.all_areas_positive
            && self.no_ring_crossings
    }
}

#[derive(Debug, Clone, Copy)]
struct Seg {
    a: usize,
    b: usize,
    ring: usize,
    pos: usize,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Seg {
    fn new(points: &[Point], a: usize, b: usize, ring: usize, pos: usize) -> Seg {
        let (p, q) = (points[a], points[b]);
        Seg {
            a,
            b,
            ring,
            pos,
            xmin: p.x.min(q.x),
            xmax: p.x.max(q.x),
            ymin: p.y.min(q.y),
            ymax: p.y.max(q.y),
        }
    }
}

/// Visits every pair of segments whose bounding boxes overlap. Stops at the
/// first pair for which `hit` returns true and returns it.
fn sweep<F>(segs: &mut [Seg], mut hit: F) -> Option<(Seg, Seg)>
where
    F: FnMut(&Seg, &Seg) -> bool,
{
    segs.sort_by(|s, t| s.xmin.total_cmp(&t.xmin));
    for i in 0..segs.len() {
        let s = segs[i];
        for t in &segs[i + 1..] {
            if t.xmin > s.xmax {
                break;
            }
            if t.ymin > s.ymax || t.ymax < s.ymin {
                continue;
            }
            if hit(&s, t) {
                return Some((s, *t));
            }
        }
    }
    None
}

fn shared_vertex(s: &Seg, t: &Seg) -> Option<(usize, usize, usize)> {
    if s.a == t.a {
        Some((s.a, s.b, t.b))
    } else if s.a == t.b {
        Some((s.a, s.b, t.a))
    } else if s.b == t.a {
        Some((s.b, s.a, t.b))
    } else if s.b == t.b {
        Some((s.b, s.a, t.a))
    } else {
        None
    }
}

/// Positions of the first pair of segments that make `ring` non-simple.
///
/// Segment `k` joins `ring[k]` and `ring[k + 1]`. Adjacent segments only fail
/// when they fold back onto each other; all other pairs fail on any contact.
pub fn ring_self_intersection(points: &[Point], ring: &[usize]) -> Option<(usize, usize)> {
    let n = ring.len();
    if n < 3 {
        return Some((0, 0));
    }
    let mut segs: Vec<Seg> = (0..n)
        .map(|k| Seg::new(points, ring[k], ring[(k + 1) % n], 0, k))
        .collect();
    sweep(&mut segs, |s, t| {
        let (k, l) = (s.pos.min(t.pos), s.pos.max(t.pos));
        let adjacent = l == k + 1 || (k == 0 && l == n - 1);
        if adjacent {
            let (shared, u, v) = if l == k + 1 {
                (ring[l], ring[k], ring[(l + 1) % n])
            } else {
                (ring[0], ring[1], ring[n - 1])
            };
            folds_back(points[shared], points[u], points[v])
        } else {
            segments_intersect(points[s.a], points[s.b], points[t.a], points[t.b])
        }
    })
    .map(|(s, t)| (s.pos.min(t.pos), s.pos.max(t.pos)))
}

/// First pair of flattened ring positions whose boundaries cross.
fn ring_crossing(map: &MapDocument) -> Option<(usize, usize)> {
    let points = map.vertices();
    let mut unique: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut segs = Vec::new();
    for ring in map.rings() {
        let n = ring.indices.len();
        for k in 0..n {
            let (a, b) = (ring.indices[k], ring.indices[(k + 1) % n]);
            let key = (a.min(b), a.max(b));
            if unique.insert(key, ring.ring).is_none() {
                segs.push(Seg::new(points, a, b, ring.ring, k));
            }
        }
    }
    sweep(&mut segs, |s, t| match shared_vertex(s, t) {
        Some((shared, u, v)) => folds_back(points[shared], points[u], points[v]),
        None if s.ring == t.ring => false,
        None => segments_cross(points[s.a], points[s.b], points[t.a], points[t.b]),
    })
    .map(|(s, t)| (s.ring, t.ring))
}

fn structure_mismatch(before: &MapDocument, after: &MapDocument) -> Option<String> {
    if before.vertices().len() != after.vertices().len() {
        return Some(format!(
            "vertex pool length {} vs {}",
            before.vertices().len(),
            after.vertices().len()
        ));
    }
    if before.len() != after.len() {
        return Some(format!("region count {} vs {}", before.len(), after.len()));
    }
    for (a, b) in before.regions().iter().zip(after.regions()) {
        if a.id != b.id {
            return Some(format!("region id {:?} vs {:?}", a.id, b.id));
        }
        if a.polygons != b.polygons {
            return Some(format!("ring indexing differs for region {:?}", a.id));
        }
    }
    None
}

/// Checks that `after` is a topology-preserving deformation of `before`.
pub fn verify_topology(before: &MapDocument, after: &MapDocument) -> TopologyReport {
    if let Some(reason) = structure_mismatch(before, after) {
        return TopologyReport {
            structural_mismatch: Some(reason),
            ..TopologyReport::default()
        };
    }
    let mut offending = Vec::new();

    let adjacency_preserved = build_adjacency(before).edges() == build_adjacency(after).edges();

    let points = after.vertices();
    let mut all_rings_simple = true;
    let mut all_areas_positive = true;
    for ring in after.rings() {
        let mut bad = false;
        if ring_self_intersection(points, ring.indices).is_some() {
            all_rings_simple = false;
            bad = true;
        }
        let signed = signed_ring_area(points, ring.indices);
        let oriented = if ring.hole.is_some() {
            signed < 0.0
        } else {
            signed > 0.0
        };
        if !oriented {
            all_areas_positive = false;
            bad = true;
        }
        if bad {
            offending.push(ring.ring);
        }
    }
    for i in 0..after.len() {
        if !(after.area_at(i) > 0.0) {
            all_areas_positive = false;
            if let Some(r) = after.rings().find(|r| r.region == i) {
                offending.push(r.ring);
            }
        }
    }

    let crossing = ring_crossing(after);
    if let Some((r1, r2)) = crossing {
        offending.push(r1);
        offending.push(r2);
    }
    offending.sort_unstable();
    offending.dedup();

    TopologyReport {
        structural_mismatch: None,
        adjacency_preserved,
        all_rings_simple,
        all_areas_positive,
        no_ring_crossings: crossing.is_none(),
        offending_rings: offending,
    }
}
