use std::fs;
use std::io::Cursor;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use cartogrammer::cli::{run, Cli, Confirmation, Console, EXIT_OK, EXIT_UNCONFIRMED};
use clap::Parser;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn cartogrammer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartogrammer"))
        .args(args)
        .stdin(Stdio::null())
        .output()
        .unwrap()
}

fn cmd(sub: &str, map: &str, csv: &str, out: &Path, extra: &[&str]) -> Output {
    let (map, csv) = (fixture(map), fixture(csv));
    let mut args = vec![
        sub,
        "--map",
        map.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    cartogrammer(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .map(|d| {
            d.map(|e| e.unwrap().file_name().into_string().unwrap())
                .collect()
        })
        .unwrap_or_default();
    v.sort();
    v
}

#[test]
fn validate_prints_totals_and_writes_pies() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmd(
        "validate",
        "austria.geojson",
        "austria_gdp.csv",
        dir.path(),
        &[],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("375.4 billion €"));
    assert!(text.contains("Is this a meaningful quantity?"));
    assert_eq!(files(dir.path()), ["GDP.pie.svg"]);
    let pie = fs::read_to_string(dir.path().join("GDP.pie.svg")).unwrap();
    assert_eq!(pie.matches("data-sweep").count(), 9);

    let o = cmd(
        "validate",
        "austria.geojson",
        "austria_gdp_per_capita.csv",
        dir.path(),
        &[],
    );
    assert!(stdout(&o).contains("384,300 €"));
}

#[test]
fn validate_warns_about_missing_regions() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmd(
        "validate",
        "austria.geojson",
        "austria_nursery_workers.csv",
        dir.path(),
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("WI: no data \u{2014} area will be preserved"));
    // Wien is left out of the pie
    let pie = fs::read_to_string(dir.path().join("Day_nursery_workers.pie.svg")).unwrap();
    assert!(!pie.contains("data-id=\"WI\""));
}

#[test]
fn missing_input_fails_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = cmd("validate", "nope.geojson", "austria_gdp.csv", &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
    let o = cmd(
        "generate",
        "austria.geojson",
        "nope.csv",
        &out,
        &["--assume-additive"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn unknown_region_in_csv_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    fs::write(&csv, "id,Value\nA,1\nZZ,2\n").unwrap();
    let map = fixture("two_squares.geojson");
    let out = dir.path().join("out");
    let o = cartogrammer(&[
        "validate",
        "--map",
        map.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ZZ"));
    assert!(!out.exists());
}

#[test]
fn generate_refuses_without_confirmation() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmd(
        "generate",
        "two_squares.geojson",
        "two_squares.csv",
        dir.path(),
        &[],
    );
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("--assume-additive"));
    assert!(stderr(&o).contains("confirmed"));
    assert!(files(dir.path()).iter().all(|f| !f.contains("cartogram")));
}

#[test]
fn generate_two_squares() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmd(
        "generate",
        "two_squares.geojson",
        "two_squares.csv",
        dir.path(),
        &["--assume-additive"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        files(dir.path()),
        [
            "Value.cartogram.geojson",
            "Value.cartogram.svg",
            "Value.diagnostics.json",
            "conventional.svg"
        ]
    );
    let diag: Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("Value.diagnostics.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(diag["status"], "converged");
    let a = diag["achievedAreas"]["A"].as_f64().unwrap();
    assert!((a / 1.5 - 1.0).abs() < 0.01);
    let conventional = fs::read_to_string(dir.path().join("conventional.svg")).unwrap();
    assert!(!conventional.contains("legend"));
}

#[test]
fn generate_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = cmd(
            "bundle",
            "austria.geojson",
            "austria_population.csv",
            d.path(),
            &["--assume-additive"],
        );
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for f in files(a.path()) {
        assert_eq!(
            fs::read(a.path().join(&f)).unwrap(),
            fs::read(b.path().join(&f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn population_legend_uses_a_nice_number() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmd(
        "generate",
        "austria.geojson",
        "austria_population.csv",
        dir.path(),
        &["--assume-additive"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = fs::read_to_string(dir.path().join("Population.cartogram.svg")).unwrap();
    assert!(svg.contains(">represents 50,000 persons</text>"));
}

#[test]
fn solver_flags_reach_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmd(
        "generate",
        "austria.geojson",
        "austria_population.csv",
        dir.path(),
        &[
            "--assume-additive",
            "--max-iter",
            "3",
            "--snapshot-every",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    let names = files(dir.path());
    assert!(names.contains(&"Population.diagnostics.json".to_string()));
    assert!(names.contains(&"Population.snapshot-0001.geojson".to_string()));
    assert!(!names.contains(&"Population.cartogram.geojson".to_string()));
    let o = cmd(
        "generate",
        "two_squares.geojson",
        "two_squares.csv",
        dir.path(),
        &["--assume-additive", "--tolerance", "2"],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn colour_overrides_apply_to_every_svg() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmd(
        "generate",
        "two_squares.geojson",
        "two_squares.csv",
        dir.path(),
        &["--assume-additive", "--color", "A=#123456"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in ["conventional.svg", "Value.cartogram.svg"] {
        assert!(fs::read_to_string(dir.path().join(f))
            .unwrap()
            .contains("#123456"));
    }
    let o = cmd(
        "generate",
        "two_squares.geojson",
        "two_squares.csv",
        dir.path(),
        &["--assume-additive", "--color", "A=#CCCCCC"],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bundle_with_two_datasets_has_three_pools() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("two.csv");
    let pop = fs::read_to_string(fixture("austria_population.csv")).unwrap();
    let gdp = fs::read_to_string(fixture("austria_gdp.csv")).unwrap();
    let rows: Vec<String> = pop
        .lines()
        .zip(gdp.lines())
        .map(|(p, g)| format!("{},{}", p, g.split_once(',').unwrap().1))
        .collect();
    fs::write(&csv, rows.join("\n")).unwrap();
    let map = fixture("austria.geojson");
    let out = dir.path().join("out");
    let args = [
        "bundle",
        "--map",
        map.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    let mut with_flag = args.to_vec();
    with_flag.push("--assume-additive");
    let o = cartogrammer(&with_flag);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let bundle: Value =
        serde_json::from_str(&fs::read_to_string(out.join("bundle.json")).unwrap()).unwrap();
    let pools: Vec<&String> = bundle["pools"].as_object().unwrap().keys().collect();
    assert_eq!(pools, ["conventional", "Population", "GDP"]);
    assert_eq!(bundle["datasets"][1]["totalLabel"], "375.4 billion €");

    // existing cartograms are reused, so no confirmation is needed
    fs::remove_file(out.join("bundle.json")).unwrap();
    let o = cartogrammer(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    // a corrupted intermediate is refused
    let path = out.join("GDP.cartogram.geojson");
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["features"].as_array_mut().unwrap().pop();
    fs::write(&path, doc.to_string()).unwrap();
    fs::remove_file(out.join("bundle.json")).unwrap();
    let o = cartogrammer(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("structural mismatch"));
    assert!(!out.join("bundle.json").exists());
}

#[test]
fn bundle_without_confirmation_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmd(
        "bundle",
        "two_squares.geojson",
        "two_squares.csv",
        dir.path(),
        &[],
    );
    assert_eq!(o.status.code(), Some(4));
    assert!(!dir.path().join("bundle.json").exists());
}

fn run_with_answer(answer: &str, out: &Path) -> (i32, String) {
    let (map, csv) = (fixture("two_squares.geojson"), fixture("two_squares.csv"));
    let cli = Cli::parse_from([
        "cartogrammer",
        "generate",
        "--map",
        map.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let mut confirm = Confirmation::Interactive(Box::new(Cursor::new(answer.as_bytes().to_vec())));
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(
        &cli,
        &mut confirm,
        &mut Console {
            out: &mut o,
            err: &mut e,
            ansi: false,
        },
    );
    (code, String::from_utf8(o).unwrap())
}

#[test]
fn interactive_confirmation_accepts_y_and_yes_only() {
    for answer in ["y\n", "YES\n"] {
        let dir = tempfile::tempdir().unwrap();
        let (code, prompt) = run_with_answer(answer, dir.path());
        assert_eq!(code, EXIT_OK);
        assert!(prompt.contains("add up to 4. Is this a meaningful quantity?"));
        assert!(dir.path().join("Value.cartogram.geojson").exists());
    }
    for answer in ["n\n", "sure\n", ""] {
        let dir = tempfile::tempdir().unwrap();
        let (code, _) = run_with_answer(answer, dir.path());
        assert_eq!(code, EXIT_UNCONFIRMED);
        assert!(!dir.path().join("Value.cartogram.geojson").exists());
    }
}

#[test]
fn reports_are_plain_when_not_on_a_terminal() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmd(
        "generate",
        "two_squares.geojson",
        "two_squares.csv",
        dir.path(),
        &[],
    );
    assert!(!stderr(&o).contains('\x1b'));
    assert!(!cartogrammer::cli::ansi_enabled(false));
}

#[test]
fn dataset_names_become_safe_file_names() {
    use cartogrammer::cli::sanitize_file_stem;
    assert_eq!(sanitize_file_stem("GDP per capita"), "GDP_per_capita");
    assert_eq!(sanitize_file_stem("../etc/passwd"), "_etc_passwd");
    assert_eq!(sanitize_file_stem(""), "dataset");
}
