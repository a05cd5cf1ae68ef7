//! File formats and the command line around `cartogram-core`: GeoJSON and
//! CSV input, GeoJSON/SVG/viewer-bundle output.

pub mod bundle;
pub mod cli;
pub mod error;
pub mod geojson;
pub mod svg;
pub mod table;

pub use error::{Error, Result};
