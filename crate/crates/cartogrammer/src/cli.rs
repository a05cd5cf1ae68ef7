//! The `cartogrammer` command line: `validate`, `generate` and `bundle`.
//!
//! [`run`] does all the work and returns the process exit code, so tests can
//! drive it with an injected confirmation source and captured output.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cartogram_core::{
    additivity_summary, assign_colors, bind, build_adjacency, compute_legend, compute_target_areas,
    run_dcn, AdditivitySummary, BoundDataset, CartogramResult, ColorAssignment, LegendSpec,
    MapDocument, SolveError, SolveStatus, SolverParams,
};

use crate::bundle::{build_viewer_bundle, DatasetView};
use crate::error::{Error, Result};
use crate::geojson::{
    export_geojson, parse_geojson, project_cea, GeoJsonMetadata, PropertyKeys, Snapping,
};
use crate::svg::{export_svg, render_pie_svg, Canvas, Fit};
use crate::table::parse_csv;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_TOPOLOGY: i32 = 3;
pub const EXIT_UNCONFIRMED: i32 = 4;

pub const NO_COLOR_ENV: &str = "CARTOGRAMMER_NO_COLOR";

#[derive(Debug, Parser)]
#[command(
    name = "cartogrammer",
    version,
    about = "Contiguous area cartograms from GeoJSON maps and CSV data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check map and data, print each dataset's total and write its pie chart.
    Validate(InputArgs),
    /// Compute one cartogram per dataset.
    Generate(GenerateArgs),
    /// Write bundle.json for the interactive viewer.
    Bundle(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Projection {
    /// Cylindrical equal-area; input coordinates are longitude/latitude.
    Cea,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// GeoJSON FeatureCollection of Polygon/MultiPolygon regions.
    #[arg(long)]
    pub map: PathBuf,
    /// CSV with region ids in the first column and one dataset per further column.
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "id")]
    pub id_property: String,
    #[arg(long, default_value = "name")]
    pub name_property: String,
    #[arg(long, default_value = "abbr")]
    pub abbr_property: String,
    /// Output size in pixels.
    #[arg(long, default_value = "800x500", value_parser = parse_canvas)]
    pub canvas: Canvas,
    #[arg(long, value_enum)]
    pub project: Option<Projection>,
    /// Merge vertices closer than this fraction of the map's diagonal.
    #[arg(long)]
    pub snap: Option<f64>,
    /// Fixed colour for a region, as ID=#RRGGBB. Repeatable.
    #[arg(long = "color", value_name = "ID=HEX", value_parser = parse_color_override)]
    pub colors: Vec<(String, String)>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Skip the confirmation of each dataset's total.
    #[arg(long)]
    pub assume_additive: bool,
    #[arg(long, default_value_t = SolverParams::default().max_iterations)]
    pub max_iter: usize,
    /// Largest accepted relative area error.
    #[arg(long, default_value_t = SolverParams::default().area_tolerance)]
    pub tolerance: f64,
    /// Also write the cartogram every N iterations.
    #[arg(long)]
    pub snapshot_every: Option<usize>,
}

impl GenerateArgs {
    pub fn solver(&self) -> SolverParams {
        SolverParams {
            max_iterations: self.max_iter,
            area_tolerance: self.tolerance,
            snapshot_every: self.snapshot_every,
            ..SolverParams::default()
        }
    }
}

fn parse_canvas(s: &str) -> std::result::Result<Canvas, String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s:?}"))?;
    let w: f64 = w.trim().parse().map_err(|_| format!("bad width {w:?}"))?;
    let h: f64 = h.trim().parse().map_err(|_| format!("bad height {h:?}"))?;
    Canvas::new(w, h).map_err(|e| e.to_string())
}

fn parse_color_override(s: &str) -> std::result::Result<(String, String), String> {
    match s.split_once('=') {
        Some((id, hex)) if !id.is_empty() => Ok((id.to_string(), hex.to_string())),
        _ => Err(format!("expected ID=HEX, got {s:?}")),
    }
}

/// Where confirmations of dataset totals come from.
pub enum Confirmation {
    /// `--assume-additive`: every total is accepted.
    Assume,
    /// Answers read line by line; `y` or `yes` accepts.
    Interactive(Box<dyn BufRead>),
    /// No terminal to ask on.
    Unavailable,
}

enum Answer {
    Yes,
    No,
    Unavailable,
}

impl Confirmation {
    fn ask(&mut self, summary: &AdditivitySummary, out: &mut dyn Write) -> Answer {
        match self {
            Confirmation::Assume => Answer::Yes,
            Confirmation::Unavailable => Answer::Unavailable,
            Confirmation::Interactive(input) => {
                let _ = write!(out, "{} [y/N] ", summary.confirmation_prompt);
                let _ = out.flush();
                let mut line = String::new();
                match input.read_line(&mut line) {
                    Ok(n) if n > 0 => {
                        let a = line.trim().to_ascii_lowercase();
                        if a == "y" || a == "yes" {
                            Answer::Yes
                        } else {
                            Answer::No
                        }
                    }
                    _ => Answer::No,
                }
            }
        }
    }
}

/// Output streams and whether they take ANSI styling.
pub struct Console<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    pub ansi: bool,
}

impl Console<'_> {
    fn paint(&self, code: &str, s: &str) -> String {
        if self.ansi {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn warn(&mut self, msg: &str) {
        let tag = self.paint("33", "warning:");
        let _ = writeln!(self.err, "{tag} {msg}");
    }

    fn error(&mut self, msg: &str) {
        let tag = self.paint("31", "error:");
        let _ = writeln!(self.err, "{tag} {msg}");
    }
}

/// Whether reports may use ANSI escapes, given that the stream is a terminal.
pub fn ansi_enabled(is_terminal: bool) -> bool {
    is_terminal && std::env::var_os(NO_COLOR_ENV).is_none()
}

/// Replaces characters that are unsafe in file names with `_`.
pub fn sanitize_file_stem(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect();
    let s = s.trim_start_matches('.');
    if s.is_empty() {
        "dataset".to_string()
    } else {
        s.to_string()
    }
}

/// Everything loaded from the input files, before anything is written.
struct Inputs {
    map: MapDocument,
    keys: PropertyKeys,
    datasets: Vec<BoundDataset>,
    colors: ColorAssignment,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn load(args: &InputArgs, console: &mut Console<'_>) -> Result<Inputs> {
    let keys = PropertyKeys {
        id: args.id_property.clone(),
        name: args.name_property.clone(),
        abbr: args.abbr_property.clone(),
    };
    let mut text = read(&args.map)?;
    if args.project == Some(Projection::Cea) {
        text = project_cea(&text)?;
    }
    let snapping = args.snap.map_or(Snapping::Exact, Snapping::Relative);
    let map = parse_geojson(&text, &keys, snapping)?;
    let datasets = parse_csv(&read(&args.csv)?)?
        .iter()
        .map(|d| bind(&map, d))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    for ds in &datasets {
        for id in ds.missing_ids() {
            console.warn(&format!(
                "{id}: no data \u{2014} area will be preserved ({})",
                ds.name()
            ));
        }
    }
    let overrides: BTreeMap<String, String> = args.colors.iter().cloned().collect();
    let colors = assign_colors(&build_adjacency(&map), &overrides)?;
    Ok(Inputs {
        map,
        keys,
        datasets,
        colors,
    })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn cmd_validate(args: &InputArgs, console: &mut Console<'_>) -> Result<i32> {
    let inputs = load(args, console)?;
    ensure_dir(&args.out)?;
    for ds in &inputs.datasets {
        let summary = additivity_summary(ds);
        let _ = writeln!(
            console.out,
            "{}",
            console.paint("1", &format!("Dataset: {}", ds.name()))
        );
        let _ = writeln!(console.out, "  total: {}", summary.formatted_total);
        for (id, share) in &summary.slice_shares {
            let _ = writeln!(console.out, "  {id}: {:.2}%", 100.0 * share);
        }
        let _ = writeln!(console.out, "  {}", summary.confirmation_prompt);
        let path = args
            .out
            .join(format!("{}.pie.svg", sanitize_file_stem(ds.name())));
        write_file(&path, &render_pie_svg(&summary, &inputs.colors))?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Diagnostics<'a> {
    dataset: &'a str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    failed_region: Option<&'a str>,
    iterations: usize,
    retries: usize,
    initial_max_rel_error: f64,
    final_max_rel_error: f64,
    final_size_error: f64,
    target_areas: BTreeMap<&'a str, f64>,
    achieved_areas: BTreeMap<&'a str, f64>,
    per_iteration_errors: &'a [f64],
}

fn diagnostics_json(
    ds: &BoundDataset,
    targets: &cartogram_core::TargetAreas,
    r: &CartogramResult,
) -> Result<String> {
    let (status, failed_region) = match &r.status {
        SolveStatus::Converged => ("converged", None),
        SolveStatus::NonConvergence => ("nonconvergence", None),
        SolveStatus::TopologyFailure { region, .. } => ("topologyFailure", Some(region.as_str())),
    };
    let d = Diagnostics {
        dataset: ds.name(),
        status,
        failed_region,
        iterations: r.iterations,
        retries: r.retries,
        initial_max_rel_error: r.initial_max_rel_error,
        final_max_rel_error: r.final_max_rel_error,
        final_size_error: r.final_size_error,
        target_areas: targets
            .ids()
            .iter()
            .map(String::as_str)
            .zip(targets.targets().iter().copied())
            .collect(),
        achieved_areas: r
            .achieved_areas
            .iter()
            .map(|(k, a)| (k.as_str(), *a))
            .collect(),
        per_iteration_errors: &r.per_iteration_errors,
    };
    Ok(serde_json::to_string_pretty(&d)?)
}

/// Legend for `cartogram`, scaled on the rendered area of the regions that
/// carry data.
pub fn legend_for(
    cartogram: &MapDocument,
    ds: &BoundDataset,
    canvas: Canvas,
) -> Result<LegendSpec> {
    let fit = Fit::new(cartogram.bbox(), canvas, true)?;
    let data_area: f64 = (0..cartogram.len())
        .filter(|&i| ds.values()[i].is_some())
        .map(|i| cartogram.area_at(i))
        .sum();
    Ok(compute_legend(
        ds.total(),
        ds.unit(),
        data_area * fit.scale * fit.scale,
    )?)
}

enum Outcome {
    Done(MapDocument),
    Failed(i32),
}

/// Runs the gate and the solver for one dataset and writes its artifacts.
fn generate_one(
    args: &GenerateArgs,
    inputs: &Inputs,
    ds: &BoundDataset,
    confirm: &mut Confirmation,
    console: &mut Console<'_>,
) -> Result<Outcome> {
    let summary = additivity_summary(ds);
    match confirm.ask(&summary, console.out) {
        Answer::Yes => {}
        Answer::No => {
            console.error(&format!(
                "{}: total not confirmed, dataset skipped",
                ds.name()
            ));
            return Ok(Outcome::Failed(EXIT_UNCONFIRMED));
        }
        Answer::Unavailable => {
            console.error(&format!(
                "{}: {} The total must be confirmed on a terminal, or pass --assume-additive.",
                ds.name(),
                summary.confirmation_prompt
            ));
            return Ok(Outcome::Failed(EXIT_UNCONFIRMED));
        }
    }

    let stem = sanitize_file_stem(ds.name());
    let out = &args.input.out;
    let targets = compute_target_areas(&inputs.map, ds)?;
    let (result, code) = match run_dcn(&inputs.map, &targets, &args.solver()) {
        Ok(r) => (r, EXIT_OK),
        Err(SolveError::NonConvergence(r)) => (*r, EXIT_NONCONVERGENCE),
        Err(SolveError::TopologyFailure { result, .. }) => (*result, EXIT_TOPOLOGY),
        Err(e) => return Err(e.into()),
    };
    write_file(
        &out.join(format!("{stem}.diagnostics.json")),
        &diagnostics_json(ds, &targets, &result)?,
    )?;
    for (iter, pool) in &result.snapshots {
        let snap = inputs.map.with_vertices(pool.clone())?;
        let meta = GeoJsonMetadata {
            keys: inputs.keys.clone(),
            dataset: Some(ds),
        };
        write_file(
            &out.join(format!("{stem}.snapshot-{iter:04}.geojson")),
            &export_geojson(&snap, &meta),
        )?;
    }
    if code != EXIT_OK {
        console.error(&format!(
            "{}: {} after {} iterations (max relative area error {:.4})",
            ds.name(),
            if code == EXIT_TOPOLOGY {
                "topology could not be preserved"
            } else {
                "no convergence"
            },
            result.iterations,
            result.final_max_rel_error
        ));
        return Ok(Outcome::Failed(code));
    }

    let cartogram = result.cartogram;
    let meta = GeoJsonMetadata {
        keys: inputs.keys.clone(),
        dataset: Some(ds),
    };
    write_file(
        &out.join(format!("{stem}.cartogram.geojson")),
        &export_geojson(&cartogram, &meta),
    )?;
    let legend = legend_for(&cartogram, ds, args.input.canvas)?;
    let missing: BTreeSet<String> = ds.missing_ids().map(String::from).collect();
    let svg = export_svg(
        &cartogram,
        &inputs.colors,
        Some(&legend),
        &missing,
        args.input.canvas,
    )?;
    write_file(&out.join(format!("{stem}.cartogram.svg")), &svg)?;
    let _ = writeln!(
        console.out,
        "{}: converged in {} iterations (max relative area error {:.4}); legend {}",
        ds.name(),
        result.iterations,
        result.final_max_rel_error,
        legend.label
    );
    Ok(Outcome::Done(cartogram))
}

fn write_conventional(args: &GenerateArgs, inputs: &Inputs) -> Result<()> {
    let svg = export_svg(
        &inputs.map,
        &inputs.colors,
        None,
        &BTreeSet::new(),
        args.input.canvas,
    )?;
    write_file(&args.input.out.join("conventional.svg"), &svg)
}

pub fn cmd_generate(
    args: &GenerateArgs,
    confirm: &mut Confirmation,
    console: &mut Console<'_>,
) -> Result<i32> {
    args.solver().validate()?;
    let inputs = load(&args.input, console)?;
    ensure_dir(&args.input.out)?;
    write_conventional(args, &inputs)?;
    let mut code = EXIT_OK;
    for ds in &inputs.datasets {
        if let Outcome::Failed(c) = generate_one(args, &inputs, ds, confirm, console)? {
            if code == EXIT_OK {
                code = c;
            }
        }
    }
    Ok(code)
}

pub fn cmd_bundle(
    args: &GenerateArgs,
    confirm: &mut Confirmation,
    console: &mut Console<'_>,
) -> Result<i32> {
    args.solver().validate()?;
    let inputs = load(&args.input, console)?;
    if inputs.datasets.is_empty() {
        return Err(Error::NoDatasets);
    }
    ensure_dir(&args.input.out)?;
    let mut cartograms = Vec::with_capacity(inputs.datasets.len());
    for ds in &inputs.datasets {
        let path = args.input.out.join(format!(
            "{}.cartogram.geojson",
            sanitize_file_stem(ds.name())
        ));
        let cartogram = if path.exists() {
            let existing = parse_geojson(&read(&path)?, &inputs.keys, Snapping::Exact)?;
            if !inputs.map.structurally_identical(&existing) {
                return Err(Error::StructuralMismatch(format!(
                    "{} does not match the map's regions, rings and vertex pool",
                    path.display()
                )));
            }
            existing
        } else {
            match generate_one(args, &inputs, ds, confirm, console)? {
                Outcome::Done(c) => c,
                Outcome::Failed(code) => return Ok(code),
            }
        };
        cartograms.push(cartogram);
    }
    let legends = inputs
        .datasets
        .iter()
        .zip(&cartograms)
        .map(|(ds, c)| legend_for(c, ds, args.input.canvas))
        .collect::<Result<Vec<_>>>()?;
    let views: Vec<DatasetView<'_>> = inputs
        .datasets
        .iter()
        .zip(&cartograms)
        .zip(&legends)
        .map(|((data, cartogram), legend)| DatasetView {
            data,
            cartogram,
            legend,
        })
        .collect();
    let bundle = build_viewer_bundle(&inputs.map, &views, &inputs.colors, args.input.canvas)?;
    bundle.check_structure()?;
    let path = args.input.out.join("bundle.json");
    write_file(&path, &bundle.to_json()?)?;
    let _ = writeln!(console.out, "wrote {}", path.display());
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: &Cli, confirm: &mut Confirmation, console: &mut Console<'_>) -> i32 {
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(a, console),
        Command::Generate(a) => cmd_generate(a, confirm, console),
        Command::Bundle(a) => cmd_bundle(a, confirm, console),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            console.error(&e.to_string());
            EXIT_ERROR
        }
    }
}
