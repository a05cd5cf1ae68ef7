//! Contiguous cartograms by iterative force relaxation (Dougenik, Chrisman
//! and Niemeyer).
//!
//! Each pass treats every region as a circle centred on its centroid with
//! the radius of its current area, and pushes or pulls every pool vertex by
//! the mass each region has to gain or lose. All vertices move
//! simultaneously from the same pre-pass state; shared vertices exist once
//! in the pool so shared borders stay shared.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::data::TargetAreas;
use crate::geometry::Point;
use crate::map::MapDocument;
use crate::topology::verify_topology;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    pub max_iterations: usize,
    /// Convergence threshold on the largest relative area error.
    pub area_tolerance: f64,
    /// How often a pass that breaks topology is retried with half the force.
    pub max_retries_per_iteration: usize,
    /// Keep a copy of the vertex pool every this many passes.
    pub snapshot_every: Option<usize>,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            max_iterations: 512,
            area_tolerance: 0.01,
            max_retries_per_iteration: 8,
            snapshot_every: None,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<(), SolveError> {
        if self.max_iterations < 1 {
            return Err(SolveError::InvalidParams(
                "max_iterations must be at least 1",
            ));
        }
        if !(self.area_tolerance > 0.0 && self.area_tolerance < 1.0) {
            return Err(SolveError::InvalidParams(
                "area_tolerance must lie in (0, 1)",
            ));
        }
        if self.snapshot_every == Some(0) {
            return Err(SolveError::InvalidParams("snapshot_every must be positive"));
        }
        Ok(())
    }
}

/// Diagnostics for one force pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationStats {
    /// Mean of max(A, D) / min(A, D) before the pass.
    pub size_error: f64,
    /// Multiplier applied to the displacements, 1 / (1 + size error) times any damping.
    pub force_reduction: f64,
    /// Largest vertex displacement of the pass.
    pub max_displacement: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    NonConvergence,
    TopologyFailure { region: String, ring: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CartogramResult {
    /// Same ids, pool length and ring indices as the input map.
    pub cartogram: MapDocument,
    pub iterations: usize,
    pub initial_max_rel_error: f64,
    pub final_max_rel_error: f64,
    pub final_size_error: f64,
    /// Area per region id, in map order.
    pub achieved_areas: Vec<(String, f64)>,
    /// Largest relative area error after each accepted pass.
    pub per_iteration_errors: Vec<f64>,
    /// Passes that were rolled back and retried with half the force.
    pub retries: usize,
    pub status: SolveStatus,
    /// `(iteration, pool)` copies when [`SolverParams::snapshot_every`] is set.
    pub snapshots: Vec<(usize, Vec<Point>)>,
}

impl CartogramResult {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    pub fn achieved_area(&self, id: &str) -> Option<f64> {
        self.achieved_areas
            .iter()
            .find(|(k, _)| k == id)
            .map(|(_, a)| *a)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("invalid solver parameters: {0}")]
    InvalidParams(&'static str),
    #[error("target areas do not match the map's regions")]
    TargetMismatch,
    #[error("areas and targets must be positive")]
    NonPositive,
    #[error("no convergence after {} iterations (max relative error {:.4})", .0.iterations, .0.final_max_rel_error)]
    NonConvergence(Box<CartogramResult>),
    #[error("topology could not be preserved at ring {ring} of region {region:?}")]
    TopologyFailure {
        region: String,
        ring: usize,
        result: Box<CartogramResult>,
    },
}

impl SolveError {
    /// Best state reached before the failure, when there is one.
    pub fn partial_result(&self) -> Option<&CartogramResult> {
        match self {
            SolveError::NonConvergence(r) | SolveError::TopologyFailure { result: r, .. } => {
                Some(r)
            }
            _ => None,
        }
    }
}

/// Mean over regions of max(A, D) / min(A, D); 1 exactly when all match.
pub fn size_error(areas: &[f64], targets: &[f64]) -> Result<f64, SolveError> {
    if areas.len() != targets.len() || areas.is_empty() {
        return Err(SolveError::TargetMismatch);
    }
    let mut sum = 0.0;
    for (&a, &d) in areas.iter().zip(targets) {
        if !(a > 0.0 && d > 0.0) {
            return Err(SolveError::NonPositive);
        }
        sum += a.max(d) / a.min(d);
    }
    Ok(sum / areas.len() as f64)
}

fn max_rel_error(areas: &[f64], targets: &[f64]) -> f64 {
    areas
        .iter()
        .zip(targets)
        .map(|(a, d)| libm::fabs(a - d) / d)
        .fold(0.0, f64::max)
}

/// Displaced pool after one pass towards `desired`, with the force scaled by
/// `damping` on top of the usual 1 / (1 + size error) reduction.
fn force_pass(map: &MapDocument, desired: &[f64], damping: f64) -> (Vec<Point>, IterationStats) {
    let areas = map.areas();
    let centroids = map.centroids();
    // size error is finite here: areas are positive on every accepted state
    let err = size_error(&areas, desired).unwrap_or(f64::INFINITY);
    let reduction = damping / (1.0 + err);

    let forces: Vec<(Point, f64, f64)> = areas
        .iter()
        .zip(desired)
        .zip(&centroids)
        .map(|((&a, &d), &c)| {
            let radius = libm::sqrt(a / PI);
            let mass = libm::sqrt(d / PI) - radius;
            (c, radius, mass)
        })
        .collect();

    let mut max_displacement: f64 = 0.0;
    let moved = map
        .vertices()
        .iter()
        .map(|&p| {
            let mut delta = Point::default();
            // region order, so the sum does not depend on scheduling
            for &(c, radius, mass) in &forces {
                let offset = p - c;
                let dist = offset.norm();
                if dist == 0.0 || mass == 0.0 {
                    continue;
                }
                let magnitude = if dist > radius {
                    mass * radius / dist
                } else {
                    let q = dist / radius;
                    mass * q * q * (4.0 - 3.0 * q)
                };
                delta = delta + offset * (magnitude / dist);
            }
            let step = delta * reduction;
            max_displacement = max_displacement.max(step.norm());
            p + step
        })
        .collect();
    (
        moved,
        IterationStats {
            size_error: err,
            force_reduction: reduction,
            max_displacement,
        },
    )
}

/// One full force pass towards `targets` (no damping, no safeguards).
pub fn dcn_iterate(
    map: &MapDocument,
    targets: &TargetAreas,
) -> Result<(MapDocument, IterationStats), SolveError> {
    check_targets(map, targets)?;
    let (pool, stats) = force_pass(map, targets.targets(), 1.0);
    let next = map
        .with_vertices(pool)
        .map_err(|_| SolveError::TargetMismatch)?;
    Ok((next, stats))
}

fn check_targets(map: &MapDocument, targets: &TargetAreas) -> Result<(), SolveError> {
    if targets.ids().len() != map.len() || !targets.ids().iter().map(String::as_str).eq(map.ids()) {
        return Err(SolveError::TargetMismatch);
    }
    Ok(())
}

/// Targets rescaled so they sum to the map's current total area.
fn renormalized(targets: &[f64], target_total: f64, current_total: f64) -> Vec<f64> {
    let k = current_total / target_total;
    targets.iter().map(|t| t * k).collect()
}

/// Uniform scaling about the area centroid so the total area equals `total`.
fn rescale_to_total(map: &MapDocument, total: f64) -> MapDocument {
    let current = map.total_area();
    if current == total || !(current > 0.0) {
        return map.clone();
    }
    let s = libm::sqrt(total / current);
    let c = map.mass_centroid();
    map.map_vertices(|p| c + (p - c) * s)
}

/// Iterates force passes until every region's area is within
/// `area_tolerance` (relative) of its target.
///
/// Targets are renormalised to the current total area before each pass. A
/// pass that breaks topology is rolled back and retried with half the force,
/// at most `max_retries_per_iteration` times. The result is finally scaled
/// about its area centroid so the total area equals the targets' total.
pub fn run_dcn(
    map: &MapDocument,
    targets: &TargetAreas,
    params: &SolverParams,
) -> Result<CartogramResult, SolveError> {
    params.validate()?;
    check_targets(map, targets)?;
    let goal = targets.targets();
    let goal_total = targets.total_area();

    let areas = map.areas();
    let initial_error = max_rel_error(&areas, &renormalized(goal, goal_total, areas.iter().sum()));
    if initial_error < params.area_tolerance {
        return Ok(finish(
            map.clone(),
            goal,
            0,
            initial_error,
            Vec::new(),
            0,
            SolveStatus::Converged,
            Vec::new(),
        ));
    }

    let mut current = map.clone();
    let mut best = (map.clone(), initial_error);
    let mut errors = Vec::new();
    let mut snapshots = Vec::new();
    let mut retries = 0;
    let mut iterations = 0;
    let mut status = SolveStatus::NonConvergence;

    'outer: while iterations < params.max_iterations {
        let areas = current.areas();
        let desired = renormalized(goal, goal_total, areas.iter().sum());
        let mut damping = 1.0;
        let mut attempt = 0;
        let next = loop {
            let (pool, _) = force_pass(&current, &desired, damping);
            let candidate = current.with_vertices(pool).expect("pool length unchanged");
            let report = verify_topology(&current, &candidate);
            if report.passed() {
                break candidate;
            }
            if attempt == params.max_retries_per_iteration {
                let ring = report.offending_rings.first().copied().unwrap_or(0);
                let region = current
                    .rings()
                    .find(|r| r.ring == ring)
                    .map(|r| current.regions()[r.region].id.clone())
                    .unwrap_or_default();
                status = SolveStatus::TopologyFailure { region, ring };
                break 'outer;
            }
            attempt += 1;
            retries += 1;
            damping *= 0.5;
        };
        iterations += 1;
        current = next;

        let areas = current.areas();
        let err = max_rel_error(&areas, &renormalized(goal, goal_total, areas.iter().sum()));
        errors.push(err);
        if let Some(every) = params.snapshot_every {
            if iterations % every == 0 {
                snapshots.push((iterations, current.vertices().to_vec()));
            }
        }
        if err < best.1 {
            best = (current.clone(), err);
        }
        if err < params.area_tolerance {
            status = SolveStatus::Converged;
            break;
        }
    }

    let state = if status == SolveStatus::Converged {
        current
    } else {
        best.0
    };
    let result = finish(
        rescale_to_total(&state, goal_total),
        goal,
        iterations,
        initial_error,
        errors,
        retries,
        status.clone(),
        snapshots,
    );
    match status {
        SolveStatus::Converged => Ok(result),
        SolveStatus::NonConvergence => Err(SolveError::NonConvergence(Box::new(result))),
        SolveStatus::TopologyFailure { region, ring } => Err(SolveError::TopologyFailure {
            region,
            ring,
            result: Box::new(result),
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    cartogram: MapDocument,
    goal: &[f64],
    iterations: usize,
    initial_max_rel_error: f64,
    per_iteration_errors: Vec<f64>,
    retries: usize,
    status: SolveStatus,
    snapshots: Vec<(usize, Vec<Point>)>,
) -> CartogramResult {
    let areas = cartogram.areas();
    CartogramResult {
        iterations,
        initial_max_rel_error,
        final_max_rel_error: max_rel_error(&areas, goal),
        final_size_error: size_error(&areas, goal).unwrap_or(f64::INFINITY),
        achieved_areas: cartogram.ids().map(String::from).zip(areas).collect(),
        per_iteration_errors,
        retries,
        status,
        snapshots,
        cartogram,
    }
}
