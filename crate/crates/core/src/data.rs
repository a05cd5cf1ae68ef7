//! Datasets, binding to a map, the additivity summary and target areas.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::format::format_value;
use crate::map::MapDocument;

/// The question shown with every dataset total before a cartogram is drawn.
pub const CONFIRMATION_QUESTION: &str = "Is this a meaningful quantity?";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DataError {
    #[error("dataset {dataset:?}: empty region id")]
    EmptyId { dataset: String },
    #[error("dataset {dataset:?}: duplicate region id {id:?}")]
    DuplicateId { dataset: String, id: String },
    #[error("dataset {dataset:?}: negative value {value} for region {id:?}")]
    Negative {
        dataset: String,
        id: String,
        value: f64,
    },
    #[error("dataset {dataset:?}: non-finite value for region {id:?}")]
    NonFinite { dataset: String, id: String },
    #[error("dataset {dataset:?} has no positive value")]
    NoPositiveValue { dataset: String },
    #[error("dataset {dataset:?}: region {id:?} is not on the map")]
    UnknownRegion { dataset: String, id: String },
    #[error("dataset {dataset:?}: every region is missing")]
    AllMissing { dataset: String },
    #[error("dataset {dataset:?}: region {id:?} has value 0; mark it missing instead")]
    ZeroValue { dataset: String, id: String },
    #[error("dataset {dataset:?} was bound to a different map")]
    MapMismatch { dataset: String },
}

/// Named per-region values; `None` marks missing data.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    unit: String,
    entries: Vec<(String, Option<f64>)>,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        unit: impl Into<String>,
        entries: Vec<(String, Option<f64>)>,
    ) -> Result<Dataset, DataError> {
        let name = name.into();
        let mut seen = BTreeSet::new();
        for (id, v) in &entries {
            if id.is_empty() {
                return Err(DataError::EmptyId { dataset: name });
            }
            if !seen.insert(id.as_str()) {
                return Err(DataError::DuplicateId {
                    dataset: name,
                    id: id.clone(),
                });
            }
            if let Some(v) = *v {
                if !v.is_finite() {
                    return Err(DataError::NonFinite {
                        dataset: name,
                        id: id.clone(),
                    });
                }
                if v < 0.0 {
                    return Err(DataError::Negative {
                        dataset: name,
                        id: id.clone(),
                        value: v,
                    });
                }
            }
        }
        if !entries.iter().any(|(_, v)| v.is_some_and(|v| v > 0.0)) {
            return Err(DataError::NoPositiveValue { dataset: name });
        }
        Ok(Dataset {
            name,
            unit: unit.into(),
            entries,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn entries(&self) -> &[(String, Option<f64>)] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<Option<f64>> {
        self.entries.iter().find(|(k, _)| k == id).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BindWarning {
    /// The region has no row in the data, so it is treated as missing.
    NotInData(String),
}

/// A dataset aligned with a map's region order. Every region has an entry.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundDataset {
    name: String,
    unit: String,
    ids: Vec<String>,
    values: Vec<Option<f64>>,
    warnings: Vec<BindWarning>,
}

impl BoundDataset {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Values in map region order.
    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn value(&self, id: &str) -> Option<Option<f64>> {
        self.ids
            .iter()
            .position(|x| x == id)
            .map(|i| self.values[i])
    }

    pub fn warnings(&self) -> &[BindWarning] {
        &self.warnings
    }

    /// Ids of regions without data, in map order.
    pub fn missing_ids(&self) -> impl Iterator<Item = &str> {
        self.ids
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| v.is_none())
            .map(|(id, _)| id.as_str())
    }

    pub fn total(&self) -> f64 {
        self.values.iter().flatten().sum()
    }
}

/// Aligns `dataset` with `map`. Regions without a row become missing with a
/// warning; rows for regions not on the map are an error.
pub fn bind(map: &MapDocument, dataset: &Dataset) -> Result<BoundDataset, DataError> {
    for (id, _) in &dataset.entries {
        if map.region_index(id).is_none() {
            return Err(DataError::UnknownRegion {
                dataset: dataset.name.clone(),
                id: id.clone(),
            });
        }
    }
    let mut values = Vec::with_capacity(map.len());
    let mut warnings = Vec::new();
    for id in map.ids() {
        match dataset.get(id) {
            Some(v) => values.push(v),
            None => {
                values.push(None);
                warnings.push(BindWarning::NotInData(id.into()));
            }
        }
    }
    Ok(BoundDataset {
        name: dataset.name.clone(),
        unit: dataset.unit.clone(),
        ids: map.ids().map(String::from).collect(),
        values,
        warnings,
    })
}

/// Sum of a dataset with each region's share, shown to the user for
/// confirmation before any cartogram is computed.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditivitySummary {
    pub dataset: String,
    pub total: f64,
    pub formatted_total: String,
    /// Share of the total per region with data, in map order.
    pub slice_shares: Vec<(String, f64)>,
    pub confirmation_prompt: String,
}

pub fn additivity_summary(bound: &BoundDataset) -> AdditivitySummary {
    let total = bound.total();
    let formatted_total = format_value(total, &bound.unit);
    let slice_shares = bound
        .ids
        .iter()
        .zip(&bound.values)
        .filter_map(|(id, v)| v.map(|v| (id.clone(), if total > 0.0 { v / total } else { 0.0 })))
        .collect();
    AdditivitySummary {
        dataset: bound.name.clone(),
        total,
        confirmation_prompt: format!(
            "The values of \"{}\" add up to {}. {}",
            bound.name, formatted_total, CONFIRMATION_QUESTION
        ),
        formatted_total,
        slice_shares,
    }
}

/// One pie slice, angles in degrees clockwise from 12 o'clock.
#[derive(Debug, Clone, PartialEq)]
pub struct PieSlice {
    pub id: String,
    pub start_deg: f64,
    pub sweep_deg: f64,
}

/// Slices in region order starting at 12 o'clock; zero shares are skipped.
pub fn pie_slices(summary: &AdditivitySummary) -> Vec<PieSlice> {
    let mut start = 0.0;
    let mut out = Vec::new();
    for (id, share) in &summary.slice_shares {
        let sweep = 360.0 * share;
        if sweep > 0.0 {
            out.push(PieSlice {
                id: id.clone(),
                start_deg: start,
                sweep_deg: sweep,
            });
        }
        start += sweep;
    }
    out
}

/// Desired area per region, in map region order.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetAreas {
    ids: Vec<String>,
    targets: Vec<f64>,
    total_area: f64,
}

impl TargetAreas {
    /// Targets given directly, in the map's region order. Every target must
    /// be positive and finite.
    pub fn from_parts(ids: Vec<String>, targets: Vec<f64>) -> Option<TargetAreas> {
        if ids.len() != targets.len() || targets.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return None;
        }
        let total_area = targets.iter().sum();
        Some(TargetAreas {
            ids,
            targets,
            total_area,
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn total_area(&self) -> f64 {
        self.total_area
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.ids
            .iter()
            .position(|x| x == id)
            .map(|i| self.targets[i])
    }
}

/// Target areas preserving the map's total region area.
///
/// Regions with missing data keep their current area. The remaining area is
/// split among the other regions in proportion to their values.
pub fn compute_target_areas(
    map: &MapDocument,
    bound: &BoundDataset,
) -> Result<TargetAreas, DataError> {
    if bound.ids.len() != map.len() || !bound.ids.iter().zip(map.ids()).all(|(a, b)| a == b) {
        return Err(DataError::MapMismatch {
            dataset: bound.name.clone(),
        });
    }
    if let Some((id, _)) = bound
        .ids
        .iter()
        .zip(&bound.values)
        .find(|(_, v)| **v == Some(0.0))
    {
        return Err(DataError::ZeroValue {
            dataset: bound.name.clone(),
            id: id.clone(),
        });
    }
    let value_total = bound.total();
    if bound.values.iter().all(Option::is_none) || !(value_total > 0.0) {
        return Err(DataError::AllMissing {
            dataset: bound.name.clone(),
        });
    }
    let areas = map.areas();
    let total_area: f64 = areas.iter().sum();
    let missing_area: f64 = areas
        .iter()
        .zip(&bound.values)
        .filter(|(_, v)| v.is_none())
        .map(|(a, _)| *a)
        .sum();
    let available = total_area - missing_area;
    let targets = areas
        .iter()
        .zip(&bound.values)
        .map(|(&a, v)| match v {
            Some(v) => available * v / value_total,
            None => a,
        })
        .collect();
    Ok(TargetAreas {
        ids: bound.ids.clone(),
        targets,
        total_area,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::map::{MapBuilder, PolygonInput, RegionInput};
    use alloc::string::ToString;
    use alloc::vec;

    fn strip(widths: &[f64]) -> MapDocument {
        let mut x = 0.0;
        let mut regions = Vec::new();
        for (i, w) in widths.iter().enumerate() {
            regions.push(RegionInput {
                id: ["A", "B", "C", "D"][i].into(),
                polygons: vec![PolygonInput {
                    outer: vec![
                        Point::new(x, 0.0),
                        Point::new(x + w, 0.0),
                        Point::new(x + w, 1.0),
                        Point::new(x, 1.0),
                    ],
                    holes: vec![],
                }],
                ..Default::default()
            });
            x += w;
        }
        MapBuilder::new().build(regions).unwrap()
    }

    fn ds(values: &[(&str, Option<f64>)]) -> Dataset {
        Dataset::new(
            "X",
            "",
            values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn dataset_validation() {
        assert!(matches!(
            Dataset::new("X", "", vec![("A".into(), Some(-5.0))]),
            Err(DataError::Negative { .. })
        ));
        assert!(matches!(
            Dataset::new(
                "X",
                "",
                vec![("A".into(), Some(1.0)), ("A".into(), Some(2.0))]
            ),
            Err(DataError::DuplicateId { .. })
        ));
        assert!(matches!(
            Dataset::new("X", "", vec![("A".into(), None)]),
            Err(DataError::NoPositiveValue { .. })
        ));
        assert!(matches!(
            Dataset::new("X", "", vec![("A".into(), Some(f64::INFINITY))]),
            Err(DataError::NonFinite { .. })
        ));
    }

    #[test]
    fn binding() {
        let m = strip(&[1.0, 1.0]);
        let b = bind(&m, &ds(&[("A", Some(1.0)), ("B", Some(2.0))])).unwrap();
        assert!(b.warnings().is_empty());
        let b = bind(&m, &ds(&[("A", Some(1.0))])).unwrap();
        assert_eq!(b.values(), &[Some(1.0), None]);
        assert_eq!(b.warnings(), &[BindWarning::NotInData("B".into())]);
        assert!(matches!(
            bind(&m, &ds(&[("ZZ", Some(1.0))])),
            Err(DataError::UnknownRegion { .. })
        ));
    }

    #[test]
    fn summary_and_pie() {
        let m = strip(&[1.0]);
        let s = additivity_summary(&bind(&m, &ds(&[("A", Some(1.0))])).unwrap());
        assert_eq!(s.total, 1.0);
        assert_eq!(s.slice_shares, vec![("A".to_string(), 1.0)]);
        assert!(s.confirmation_prompt.contains(CONFIRMATION_QUESTION));

        let m = strip(&[1.0, 1.0]);
        let s = additivity_summary(&bind(&m, &ds(&[("A", Some(3.0)), ("B", Some(1.0))])).unwrap());
        let p = pie_slices(&s);
        assert_eq!(p[0].sweep_deg, 270.0);
        assert_eq!(p[1].start_deg, 270.0);
        assert_eq!(p[1].sweep_deg, 90.0);
    }

    #[test]
    fn targets_proportional() {
        let m = strip(&[1.0, 1.0]);
        let t = compute_target_areas(
            &m,
            &bind(&m, &ds(&[("A", Some(3.0)), ("B", Some(1.0))])).unwrap(),
        )
        .unwrap();
        assert_eq!(t.targets(), &[1.5, 0.5]);
        assert_eq!(t.total_area(), 2.0);
    }

    #[test]
    fn equal_values_equal_areas_is_identity() {
        let m = strip(&[1.0, 1.0, 1.0]);
        let b = bind(
            &m,
            &ds(&[("A", Some(7.0)), ("B", Some(7.0)), ("C", Some(7.0))]),
        )
        .unwrap();
        let t = compute_target_areas(&m, &b).unwrap();
        assert_eq!(t.targets(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn missing_region_keeps_its_area() {
        let m = strip(&[1.0, 2.0, 1.0]);
        let b = bind(&m, &ds(&[("A", Some(1.0)), ("C", Some(3.0))])).unwrap();
        let t = compute_target_areas(&m, &b).unwrap();
        assert_eq!(t.get("B"), Some(2.0));
        assert_eq!(t.get("A"), Some(0.5));
        assert_eq!(t.get("C"), Some(1.5));
    }

    #[test]
    fn target_errors() {
        let m = strip(&[1.0, 1.0]);
        let b = bind(&m, &ds(&[("A", Some(0.0)), ("B", Some(1.0))])).unwrap();
        assert!(matches!(
            compute_target_areas(&m, &b),
            Err(DataError::ZeroValue { .. })
        ));
        let other = strip(&[1.0, 1.0, 1.0]);
        let b = bind(&other, &ds(&[("A", Some(1.0))])).unwrap();
        assert!(matches!(
            compute_target_areas(&m, &b),
            Err(DataError::MapMismatch { .. })
        ));
    }
}
