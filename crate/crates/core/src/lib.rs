//! Contiguous area cartograms over a shared vertex pool.
//!
//! The crate is `no_std` and only needs `alloc`. It covers the numerical part
//! of the workflow: planar map model and topology checks, binding of numeric
//! datasets to regions, target areas (including the missing-data rule), the
//! iterative force solver, colour assignment, value-to-area legends and value
//! formatting. File formats and the command line live in `cartogrammer`.
#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![forbid(unsafe_code)]
// `!(x > 0.0)` deliberately rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod adjacency;
pub mod color;
pub mod data;
pub mod engine;
pub mod format;
pub mod geometry;
pub mod legend;
pub mod map;
pub mod projection;
pub mod topology;

pub use adjacency::{build_adjacency, AdjacencyGraph};
pub use color::{assign_colors, ColorAssignment, ColorError, Palette, Rgb};
pub use data::{
    additivity_summary, bind, compute_target_areas, pie_slices, AdditivitySummary, BindWarning,
    BoundDataset, DataError, Dataset, PieSlice, TargetAreas, CONFIRMATION_QUESTION,
};
pub use engine::{
    dcn_iterate, run_dcn, size_error, CartogramResult, IterationStats, SolveError, SolveStatus,
    SolverParams,
};
pub use format::format_value;
pub use geometry::{BBox, Point};
pub use legend::{compute_legend, nice_number, LegendError, LegendSpec};
pub use map::{
    MapBuilder, MapDocument, MapError, Polygon, PolygonInput, Region, RegionInput, RingRef,
};
pub use projection::{CylindricalEqualArea, ProjectionError};
pub use topology::{verify_topology, TopologyReport};
