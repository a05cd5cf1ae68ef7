use std::path::PathBuf;

use cartogram_core::{ColorError, DataError, LegendError, MapError, ProjectionError, SolveError};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed GeoJSON: {0}")]
    GeoJson(String),
    #[error("feature {feature}: non-polygonal geometry ({kind})")]
    NonPolygonal { feature: usize, kind: String },
    #[error("feature {feature}: missing id property {property:?}")]
    MissingId { feature: usize, property: String },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("CSV has no value columns")]
    NoValueColumns,
    #[error("CSV line {line}: duplicate region id {id:?}")]
    DuplicateRow { line: u64, id: String },
    #[error("CSV line {line}: empty region id")]
    EmptyRowId { line: u64 },
    #[error("CSV line {line}, column {column:?}: non-numeric value {cell:?} for region {id:?}")]
    NonNumeric {
        line: u64,
        column: String,
        id: String,
        cell: String,
    },
    #[error("CSV line {line}, column {column:?}: negative value {cell} for region {id:?}")]
    NegativeValue {
        line: u64,
        column: String,
        id: String,
        cell: String,
    },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error(transparent)]
    Legend(#[from] LegendError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("canvas must have positive width and height")]
    ZeroCanvas,
    #[error("structural mismatch: {0}")]
    StructuralMismatch(String),
    #[error("bundle needs at least one dataset")]
    NoDatasets,
    #[error("duplicate view name {0:?}")]
    DuplicateView(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
