//! Viewer bundle: one JSON file carrying everything the interactive viewer
//! needs (topology, one vertex pool per view, colours, legends, infotips).

use std::collections::HashSet;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use cartogram_core::{format_value, BoundDataset, ColorAssignment, LegendSpec, MapDocument};

use crate::error::{Error, Result};
use crate::svg::Canvas;

pub const BUNDLE_VERSION: u32 = 1;
/// Duration of the morph between two views.
pub const ANIMATION_MS: u32 = 1000;
pub const CONVENTIONAL_VIEW: &str = "conventional";
pub const NO_DATA: &str = "no data";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanvasSize {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundlePalette {
    pub base: Vec<String>,
    pub highlight: Vec<String>,
    pub missing: String,
    pub legend: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BundleRegion {
    pub id: String,
    pub name: String,
    pub abbr: String,
    pub color_index: usize,
    /// Resolved fill, differing from the palette entry only for overrides.
    pub color: String,
    pub ring_ids: Vec<usize>,
    pub hole_ids: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub rings: Vec<Vec<usize>>,
    pub regions: Vec<BundleRegion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BundleLegend {
    pub value: f64,
    pub side_px: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BundleDataset {
    pub name: String,
    pub unit: String,
    pub total_label: String,
    pub legend: BundleLegend,
    pub values: IndexMap<String, Option<f64>>,
    pub display: IndexMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ViewerBundle {
    pub version: u32,
    pub canvas: CanvasSize,
    pub animation_ms: u32,
    pub palette: BundlePalette,
    pub topology: Topology,
    pub pools: IndexMap<String, Vec<[f64; 2]>>,
    pub datasets: Vec<BundleDataset>,
}

/// One cartogram view of the bundle.
#[derive(Debug, Clone, Copy)]
pub struct DatasetView<'a> {
    pub data: &'a BoundDataset,
    pub cartogram: &'a MapDocument,
    pub legend: &'a LegendSpec,
}

fn pool(map: &MapDocument) -> Vec<[f64; 2]> {
    map.vertices().iter().map(|p| [p.x, p.y]).collect()
}

/// Assembles the bundle; every cartogram must share the conventional map's
/// pool length and ring indexing.
pub fn build_viewer_bundle(
    conventional: &MapDocument,
    views: &[DatasetView<'_>],
    colors: &ColorAssignment,
    canvas: Canvas,
) -> Result<ViewerBundle> {
    if views.is_empty() {
        return Err(Error::NoDatasets);
    }
    let mut names = HashSet::from([CONVENTIONAL_VIEW]);
    for v in views {
        if !names.insert(v.data.name()) {
            return Err(Error::DuplicateView(v.data.name().to_string()));
        }
        if !conventional.structurally_identical(v.cartogram) {
            return Err(Error::StructuralMismatch(format!(
                "cartogram for {:?} does not share the conventional map's vertex pool and rings",
                v.data.name()
            )));
        }
    }

    let mut rings = Vec::new();
    let mut regions = Vec::new();
    for r in conventional.regions() {
        let (mut ring_ids, mut hole_ids) = (Vec::new(), Vec::new());
        for p in &r.polygons {
            ring_ids.push(rings.len());
            rings.push(p.outer.clone());
            for h in &p.holes {
                hole_ids.push(rings.len());
                rings.push(h.clone());
            }
        }
        regions.push(BundleRegion {
            id: r.id.clone(),
            name: r.name.clone(),
            abbr: r.abbreviation.clone(),
            color_index: colors.index_of(&r.id).unwrap_or(0),
            color: colors.fill(&r.id).map(|c| c.hex()).unwrap_or_default(),
            ring_ids,
            hole_ids,
        });
    }

    let mut pools = IndexMap::new();
    pools.insert(CONVENTIONAL_VIEW.to_string(), pool(conventional));
    let mut datasets = Vec::new();
    for v in views {
        pools.insert(v.data.name().to_string(), pool(v.cartogram));
        let values: IndexMap<String, Option<f64>> = v
            .data
            .ids()
            .iter()
            .cloned()
            .zip(v.data.values().iter().copied())
            .collect();
        let display = values
            .iter()
            .map(|(id, val)| {
                let s = match val {
                    Some(x) => format_value(*x, v.data.unit()),
                    None => NO_DATA.to_string(),
                };
                (id.clone(), s)
            })
            .collect();
        datasets.push(BundleDataset {
            name: v.data.name().to_string(),
            unit: v.data.unit().to_string(),
            total_label: format_value(v.data.total(), v.data.unit()),
            legend: BundleLegend {
                value: v.legend.value,
                side_px: v.legend.side_px,
                label: v.legend.label.clone(),
            },
            values,
            display,
        });
    }

    let palette = colors.palette();
    Ok(ViewerBundle {
        version: BUNDLE_VERSION,
        canvas: CanvasSize {
            width: canvas.width,
            height: canvas.height,
        },
        animation_ms: ANIMATION_MS,
        palette: BundlePalette {
            base: palette.base.iter().map(|c| c.hex()).collect(),
            highlight: palette.highlight.iter().map(|c| c.hex()).collect(),
            missing: palette.missing.hex(),
            legend: palette.legend.hex(),
        },
        topology: Topology { rings, regions },
        pools,
        datasets,
    })
}

impl ViewerBundle {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Equal pool lengths and in-range ring indices.
    pub fn check_structure(&self) -> Result<()> {
        let mut lengths = self.pools.values().map(Vec::len);
        let n = lengths.next().unwrap_or(0);
        if lengths.any(|l| l != n) {
            return Err(Error::StructuralMismatch(
                "vertex pools differ in length".into(),
            ));
        }
        if self.topology.rings.iter().flatten().any(|&i| i >= n) {
            return Err(Error::StructuralMismatch(
                "ring index outside the vertex pool".into(),
            ));
        }
        Ok(())
    }
}
