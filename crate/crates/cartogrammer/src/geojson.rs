//! GeoJSON FeatureCollections in and out.
//!
//! Parsing goes through `serde_json::Value`; only Polygon and MultiPolygon
//! geometries are accepted. Export writes rings closed, outer rings
//! counterclockwise, with coordinates in shortest round-trip form so that a
//! re-parse reproduces the vertex pool exactly.

use serde_json::{json, Map, Value};

use cartogram_core::{
    BoundDataset, CylindricalEqualArea, MapBuilder, MapDocument, Point, PolygonInput, RegionInput,
};

use crate::error::{Error, Result};

/// Feature property names for region id, display name and abbreviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyKeys {
    pub id: String,
    pub name: String,
    pub abbr: String,
}

impl Default for PropertyKeys {
    fn default() -> Self {
        PropertyKeys {
            id: "id".into(),
            name: "name".into(),
            abbr: "abbr".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Snapping {
    /// Merge only exactly equal coordinates.
    #[default]
    Exact,
    /// Also merge vertices within this fraction of the bounding-box diagonal.
    Relative(f64),
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::GeoJson(msg.into())
}

fn features(root: &Value) -> Result<&Vec<Value>> {
    if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(malformed("top-level object is not a FeatureCollection"));
    }
    root.get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("FeatureCollection without a features array"))
}

fn property_string(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn position(v: &Value) -> Result<Point> {
    let a = v
        .as_array()
        .ok_or_else(|| malformed("position is not an array"))?;
    if a.len() < 2 {
        return Err(malformed("position with fewer than two numbers"));
    }
    let x = a[0]
        .as_f64()
        .ok_or_else(|| malformed("non-numeric coordinate"))?;
    let y = a[1]
        .as_f64()
        .ok_or_else(|| malformed("non-numeric coordinate"))?;
    Ok(Point::new(x, y))
}

fn ring(v: &Value) -> Result<Vec<Point>> {
    v.as_array()
        .ok_or_else(|| malformed("ring is not an array"))?
        .iter()
        .map(position)
        .collect()
}

fn polygon(v: &Value) -> Result<PolygonInput> {
    let rings = v
        .as_array()
        .ok_or_else(|| malformed("polygon is not an array of rings"))?;
    let (outer, holes) = rings
        .split_first()
        .ok_or_else(|| malformed("polygon without rings"))?;
    Ok(PolygonInput {
        outer: ring(outer)?,
        holes: holes.iter().map(ring).collect::<Result<_>>()?,
    })
}

/// Parses a FeatureCollection of Polygon/MultiPolygon features into a map.
///
/// Region order follows feature order. The id property is looked up in the
/// feature properties, falling back to the feature's own `id` member.
pub fn parse_geojson(text: &str, keys: &PropertyKeys, snapping: Snapping) -> Result<MapDocument> {
    let root: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let mut regions = Vec::new();
    for (i, f) in features(&root)?.iter().enumerate() {
        let props = f.get("properties").and_then(Value::as_object);
        let prop = |k: &str| props.and_then(|p| p.get(k)).and_then(property_string);
        let id = prop(&keys.id)
            .or_else(|| f.get("id").and_then(property_string))
            .ok_or_else(|| Error::MissingId {
                feature: i,
                property: keys.id.clone(),
            })?;
        let geometry = f
            .get("geometry")
            .filter(|g| !g.is_null())
            .ok_or_else(|| malformed(format!("feature {i} has no geometry")))?;
        let kind = geometry.get("type").and_then(Value::as_str).unwrap_or("");
        let coords = geometry
            .get("coordinates")
            .ok_or_else(|| malformed(format!("feature {i} geometry has no coordinates")));
        let polygons = match kind {
            "Polygon" => vec![polygon(coords?)?],
            "MultiPolygon" => coords?
                .as_array()
                .ok_or_else(|| malformed("MultiPolygon coordinates are not an array"))?
                .iter()
                .map(polygon)
                .collect::<Result<_>>()?,
            other => {
                return Err(Error::NonPolygonal {
                    feature: i,
                    kind: other.to_string(),
                })
            }
        };
        regions.push(RegionInput {
            name: prop(&keys.name).unwrap_or_else(|| id.clone()),
            abbreviation: prop(&keys.abbr).unwrap_or_default(),
            id,
            polygons,
        });
    }
    let builder = match snapping {
        Snapping::Exact => MapBuilder::new(),
        Snapping::Relative(f) => MapBuilder::new().snap_relative(f),
    };
    Ok(builder.units_note("planar map units").build(regions)?)
}

/// What to attach to exported features besides id, name and abbreviation.
#[derive(Debug, Clone, Default)]
pub struct GeoJsonMetadata<'a> {
    pub keys: PropertyKeys,
    /// Values written under the dataset's name (null when missing).
    pub dataset: Option<&'a BoundDataset>,
}

fn ring_coords(map: &MapDocument, ring: &[usize]) -> Value {
    let v = map.vertices();
    let mut out: Vec<Value> = ring.iter().map(|&i| json!([v[i].x, v[i].y])).collect();
    if let Some(&first) = ring.first() {
        out.push(json!([v[first].x, v[first].y]));
    }
    Value::Array(out)
}

pub fn export_geojson(map: &MapDocument, meta: &GeoJsonMetadata<'_>) -> String {
    let features: Vec<Value> = map
        .regions()
        .iter()
        .map(|r| {
            let mut props = Map::new();
            props.insert(meta.keys.id.clone(), json!(r.id));
            props.insert(meta.keys.name.clone(), json!(r.name));
            props.insert(meta.keys.abbr.clone(), json!(r.abbreviation));
            if let Some(ds) = meta.dataset {
                props.insert(ds.name().to_string(), json!(ds.value(&r.id).flatten()));
            }
            let polys: Vec<Value> = r
                .polygons
                .iter()
                .map(|p| {
                    let mut rings = vec![ring_coords(map, &p.outer)];
                    rings.extend(p.holes.iter().map(|h| ring_coords(map, h)));
                    Value::Array(rings)
                })
                .collect();
            let geometry = if polys.len() == 1 {
                json!({"type": "Polygon", "coordinates": polys[0]})
            } else {
                json!({"type": "MultiPolygon", "coordinates": polys})
            };
            json!({"type": "Feature", "properties": props, "geometry": geometry})
        })
        .collect();
    let doc = json!({"type": "FeatureCollection", "features": features});
    serde_json::to_string(&doc).expect("JSON values always serialise")
}

fn visit_positions(v: &mut Value, f: &mut dyn FnMut(&mut Vec<Value>) -> Result<()>) -> Result<()> {
    match v {
        Value::Array(items) if items.first().is_some_and(Value::is_number) => f(items),
        Value::Array(items) => items.iter_mut().try_for_each(|i| visit_positions(i, f)),
        _ => Err(malformed("coordinates must be nested arrays of numbers")),
    }
}

fn geometries(root: &mut Value) -> Result<Vec<&mut Value>> {
    if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(malformed("top-level object is not a FeatureCollection"));
    }
    let feats = root
        .get_mut("features")
        .and_then(Value::as_array_mut)
        .ok_or_else(|| malformed("FeatureCollection without a features array"))?;
    Ok(feats
        .iter_mut()
        .filter_map(|f| f.get_mut("geometry").and_then(|g| g.get_mut("coordinates")))
        .collect())
}

/// Projects a longitude/latitude FeatureCollection with a cylindrical
/// equal-area projection whose standard parallel is the latitude at the
/// centre of the data's bounding box. Output coordinates are kilometres.
pub fn project_cea(text: &str) -> Result<String> {
    let mut root: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let (mut lat_min, mut lat_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let check = CylindricalEqualArea::new(0.0)?;
    for g in geometries(&mut root)? {
        visit_positions(g, &mut |p| {
            let pt = position(&Value::Array(p.clone()))?;
            check.project(pt.x, pt.y)?;
            lat_min = lat_min.min(pt.y);
            lat_max = lat_max.max(pt.y);
            Ok(())
        })?;
    }
    if !lat_min.is_finite() {
        return Err(malformed("no coordinates to project"));
    }
    let proj = CylindricalEqualArea::for_latitude_range(lat_min, lat_max)?;
    for g in geometries(&mut root)? {
        visit_positions(g, &mut |p| {
            let pt = position(&Value::Array(p.clone()))?;
            let q = proj.project(pt.x, pt.y)?;
            p.truncate(2);
            p[0] = json!(q.x);
            p[1] = json!(q.y);
            Ok(())
        })?;
    }
    Ok(serde_json::to_string(&root)?)
}
