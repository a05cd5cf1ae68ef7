//! Region adjacency from shared boundary segments.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::map::MapDocument;

/// Undirected, irreflexive adjacency between regions, stored by region position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdjacencyGraph {
    nodes: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl AdjacencyGraph {
    /// Graph over `nodes` with the given edges; self-loops are dropped and
    /// pairs are stored with the smaller position first.
    ///
    /// Panics if an edge refers past the end of `nodes`.
    pub fn new<I>(nodes: Vec<String>, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = nodes.len();
        let edges = edges
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| {
                assert!(a < n && b < n, "edge ({a}, {b}) out of range for {n} nodes");
                (a.min(b), a.max(b))
            })
            .collect();
        AdjacencyGraph { nodes, edges }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Edge set as sorted id pairs.
    pub fn id_edges(&self) -> BTreeSet<(String, String)> {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (&self.nodes[a], &self.nodes[b]);
                if x <= y {
                    (x.clone(), y.clone())
                } else {
                    (y.clone(), x.clone())
                }
            })
            .collect()
    }

    /// Neighbour lists, each sorted ascending.
    pub fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        let mut out = alloc::vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            out[a].push(b);
            out[b].push(a);
        }
        for l in &mut out {
            l.sort_unstable();
        }
        out
    }
}

/// Two regions are adjacent when their rings contain the same undirected pair
/// of consecutive pool indices, i.e. they share a boundary segment. Touching
/// at a single vertex does not count.
pub fn build_adjacency(map: &MapDocument) -> AdjacencyGraph {
    let mut owners: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for ring in map.rings() {
        let n = ring.indices.len();
        for k in 0..n {
            let (a, b) = (ring.indices[k], ring.indices[(k + 1) % n]);
            let list = owners.entry((a.min(b), a.max(b))).or_default();
            if !list.contains(&ring.region) {
                list.push(ring.region);
            }
        }
    }
    let mut edges = BTreeSet::new();
    for regions in owners.values() {
        for (i, &a) in regions.iter().enumerate() {
            for &b in &regions[i + 1..] {
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    AdjacencyGraph {
        nodes: map.ids().map(String::from).collect(),
        edges,
    }
}
