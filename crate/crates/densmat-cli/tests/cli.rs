//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use densmat::bipartite::{state_to_json, PureBipartiteState};
use densmat::export::{parse_scan_csv, parse_schmidt_csv, parse_spectrum_csv};
use densmat::{Complex64, ComplexMatrix};

fn densmat_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_densmat"))
}

fn run(args: &[&str]) -> Output {
    densmat_bin()
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn bell_json() -> String {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let state =
        PureBipartiteState::new(ComplexMatrix::from_real_diag(&[s, s]).unwrap()).unwrap();
    state_to_json(&state)
}

fn product_json() -> String {
    let u = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    let v = [
        Complex64::new(0.5, 0.5),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 0.5),
    ];
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let d = ComplexMatrix::from_fn(2, 3, |i, j| u[i] * v[j].conj() / norm).unwrap();
    state_to_json(&PureBipartiteState::new(d).unwrap())
}

#[test]
fn bell_fixture_reports_half_purity() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bell.json");
    let out = dir.path().join("spectrum.csv");
    let summary = dir.path().join("summary.json");
    fs::write(&input, bell_json()).unwrap();

    let output = run(&[
        "schmidt",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    assert!(stdout_of(&output).is_empty(), "file mode keeps stdout quiet");

    let lambdas = parse_schmidt_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(lambdas.len(), 2);
    for lambda in &lambdas {
        assert!((lambda - 0.5).abs() < 1e-12);
    }

    let value = read_json(&summary);
    assert_eq!(value["format_version"], 1);
    assert_eq!(value["rank"], 2);
    assert!((value["purity"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let ln2 = std::f64::consts::LN_2;
    assert!((value["entropy"].as_f64().unwrap() - ln2).abs() < 1e-9);
    assert_eq!(value["warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn product_fixture_is_rank_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("product.json");
    let summary = dir.path().join("summary.json");
    fs::write(&input, product_json()).unwrap();

    let output = run(&[
        "schmidt",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().join("spectrum.csv").to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));

    let value = read_json(&summary);
    assert_eq!(value["rank"], 1);
    assert!((value["purity"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(value["entropy"].as_f64().unwrap() < 1e-8);
}

#[test]
fn malformed_json_exits_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("broken.json");
    fs::write(&input, "{\"dim_u\": 2,").unwrap();

    let output = run(&["schmidt", "--input", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_of(&output).contains("JSON"),
        "diagnostic missing: {}",
        stderr_of(&output)
    );
}

#[test]
fn missing_input_file_exits_with_validation_code() {
    let output = run(&["schmidt", "--input", "/definitely/not/here.json"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("cannot read"));
}

#[test]
fn identical_configs_produce_identical_bytes() {
    let first = run(&["hydrogen", "--n-bins", "64"]);
    let second = run(&["hydrogen", "--n-bins", "64"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "hydrogen output must be stable");

    let args = ["lattice", "--n-sites", "32", "--decay", "2.0,3.0"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "scan output must be stable");
}

#[test]
fn short_cutoff_warns_but_still_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let output = run(&[
        "hydrogen",
        "--k-max",
        "2",
        "--out",
        dir.path().join("radial.csv").to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));

    let value = read_json(&summary);
    let warnings = value["warnings"].as_array().unwrap();
    assert_eq!(warnings.len(), 1);
    assert!(warnings[0].as_str().unwrap().contains("k_max"));
}

#[test]
fn boosted_mean_follows_the_light_mass_share() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let output = run(&[
        "hydrogen",
        "--momentum",
        "400,-300,500",
        "--out",
        dir.path().join("radial.csv").to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));

    let value = read_json(&summary);
    let share = 1.0 / (1.0 + 1836.15267);
    let mean = value["mean_momentum"].as_array().unwrap();
    for (component, total) in mean.iter().zip([400.0, -300.0, 500.0]) {
        assert!((component.as_f64().unwrap() - share * total).abs() < 1e-6);
    }
    let spread = value["delta_p"].as_f64().unwrap();
    assert!((spread - 1.0).abs() < 1e-6, "spread moved under boost");
}

#[test]
fn bad_parameters_exit_with_validation_code() {
    for args in [
        vec!["hydrogen", "--a0", "-1"],
        vec!["hydrogen", "--momentum", "1,2"],
        vec!["hydrogen", "--n-bins", "4"],
        vec!["lattice", "--decay", "1.0", "--n-sites", "15"],
        vec!["lattice", "--decay", "1.0", "--n-sites", "2048"],
        vec!["lattice", "--decay", "-2.0"],
        vec!["lattice", "--decay", "1.0", "--tol", "1e-2"],
    ] {
        let output = run(&args);
        assert_eq!(
            output.status.code(),
            Some(2),
            "args {args:?} should fail validation, stderr: {}",
            stderr_of(&output)
        );
        assert!(!stderr_of(&output).is_empty(), "args {args:?} kept quiet");
    }
}

#[test]
fn incommensurate_boost_is_rejected_with_explanation() {
    let output = run(&[
        "lattice",
        "--decay",
        "1.0",
        "--com-index",
        "1",
        "--mass-ratio",
        "1836.15",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_of(&output).contains("mass ratio"),
        "explanation missing: {}",
        stderr_of(&output)
    );
}

#[test]
fn lattice_spectrum_cross_checks_both_routes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spectrum.csv");
    let summary = dir.path().join("summary.json");
    let output = run(&[
        "lattice",
        "--n-sites",
        "64",
        "--box-length",
        "40",
        "--decay",
        "1.0",
        "--out",
        out.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));

    let value = read_json(&summary);
    assert_eq!(value["mode"], "spectrum");
    assert!(value["max_spectral_deviation"].as_f64().unwrap() <= 1e-9);

    let spectrum = parse_spectrum_csv(&fs::read_to_string(&out).unwrap(), 1.0).unwrap();
    assert_eq!(spectrum.len(), 64);
    let total: f64 = spectrum.lambdas().iter().sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn scan_emits_monotone_rows_inside_the_regime() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let summary = dir.path().join("summary.json");
    let output = run(&[
        "lattice",
        "--n-sites",
        "64",
        "--box-length",
        "40",
        "--decay",
        "2.5,3.0,3.5,4.0",
        "--out",
        out.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));

    let rows = parse_scan_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert!(row.in_regime, "decay {} flagged out of regime", row.decay);
    }
    for pair in rows.windows(2) {
        assert!(pair[1].delta_p < pair[0].delta_p, "spread must fall");
    }

    let value = read_json(&summary);
    assert_eq!(value["mode"], "scan");
    assert_eq!(value["rows"], 4);
    assert_eq!(value["rows_in_regime"], 4);
}

#[test]
fn scan_warns_when_the_boost_index_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let output = run(&[
        "lattice",
        "--n-sites",
        "16",
        "--box-length",
        "10",
        "--decay",
        "1.0,2.0",
        "--com-index",
        "3",
        "--out",
        dir.path().join("scan.csv").to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let value = read_json(&summary);
    let warnings = value["warnings"].as_array().unwrap();
    assert_eq!(warnings.len(), 1);
    assert!(warnings[0].as_str().unwrap().contains("com-index"));
}
