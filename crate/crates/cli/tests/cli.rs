//! End-to-end behavior of the `modflow` binary: exit codes, determinism,
//! format/override resolution, and a closed-form spot check of the flow
//! table.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const TAU: f64 = std::f64::consts::TAU;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_modflow")
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).expect("write config");
    path
}

fn modflow(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn modflow")
}

fn modflow_path_args(sub: &str, cfg: &Path, extra: &[&str]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.arg(sub).arg("--config").arg(cfg).args(extra);
    cmd.output().expect("spawn modflow")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "expected success, got {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn missing_config_flag_is_a_usage_error() {
    let out = modflow(&["flow"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreadable_config_path_exits_with_the_config_code() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    let out = modflow_path_args("flow", &missing, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn overlapping_intervals_exit_with_the_config_code() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "bad.json",
        r#"{ "intervals": [[0.0, 2.0], [1.0, 3.0]] }"#,
    );
    let out = modflow_path_args("flow", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disjoint"));
}

#[test]
fn nonpositive_epsilon_exits_with_the_config_code() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "bad_eps.json",
        r#"{ "symmetric": { "n": 2, "arc": [1.5707963267948966, 3.141592653589793] }, "epsilons": [1e-3, 0.0] }"#,
    );
    let out = modflow_path_args("kms", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "typo.json",
        r#"{ "intervals": [[0.0, 1.0]], "zom": 10.0 }"#,
    );
    let out = modflow_path_args("flow", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn svg_is_rejected_for_table_only_commands() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "flow.json", r#"{ "intervals": [[0.0, 1.0]] }"#);
    let out = modflow_path_args("flow", &cfg, &["--format", "svg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn halfline_flow_matches_the_exponential_closed_form() {
    // The one-component root region of the upper semicircle is the halfline
    // x > 0, where the flow is exactly x(t) = exp(-2 pi t) x0.
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "halfline.json",
        r#"{
            "symmetric": { "n": 1, "arc": [0.0, 3.141592653589793] },
            "seeds": [0.25, 1.0, 4.0],
            "grids": { "flow": { "t": { "from": -2.0, "to": 2.0, "count": 9 } } }
        }"#,
    );
    let table = stdout_of(&modflow_path_args("flow", &cfg, &[]));
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("t,component,x"));
    let seeds = [0.25, 1.0, 4.0];
    let mut rows = 0;
    for line in lines {
        let fields: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let (t, x) = (fields[0], fields[2]);
        let expected = (-TAU * t).exp() * seeds[rows % 3];
        // x = tan(xi/2) loses relative accuracy like x/2 ulps as the flowed
        // angle approaches the excluded circle point (x ~ 1e6 at t = -2), so
        // the bound is set by conditioning, not by the flow itself.
        assert!(
            (x - expected).abs() <= 1e-9 * expected.abs(),
            "flow({t}, {}) = {x}, expected {expected}",
            seeds[rows % 3]
        );
        rows += 1;
    }
    assert_eq!(rows, 9 * 3);
}

#[test]
fn time_zero_rows_reproduce_the_seeds() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "roundtrip.json",
        r#"{
            "intervals": [[0.0, 1.0], [2.0, 3.0]],
            "seeds": [0.5, 2.25, 2.75],
            "grids": { "flow": { "t": { "from": 0.0, "to": 1.0, "count": 2 } } }
        }"#,
    );
    let table = stdout_of(&modflow_path_args("flow", &cfg, &[]));
    let zero_rows: Vec<Vec<f64>> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|s| s.parse().unwrap()).collect())
        .filter(|f: &Vec<f64>| f[0] == 0.0)
        .collect();
    assert_eq!(zero_rows.len(), 3);
    // Component-minor ordering: component 0 seed first, then component 1's.
    assert_eq!(zero_rows[0][1], 0.0);
    assert!((zero_rows[0][2] - 0.5).abs() < 1e-13);
    assert_eq!(zero_rows[1][1], 1.0);
    assert!((zero_rows[1][2] - 2.25).abs() < 1e-13);
    assert!((zero_rows[2][2] - 2.75).abs() < 1e-13);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "kms.json",
        r#"{
            "symmetric": { "n": 2, "arc": [1.5707963267948966, 3.141592653589793] },
            "seed": 11,
            "grids": { "kms": { "pairs": 20 } }
        }"#,
    );
    let a = stdout_of(&modflow_path_args("kms", &cfg, &[]));
    let b = stdout_of(&modflow_path_args("kms", &cfg, &[]));
    assert_eq!(a, b);
    assert!(a.lines().count() > 20);
}

#[test]
fn out_flag_overrides_the_config_path_and_format() {
    let dir = TempDir::new().unwrap();
    let cfg_path = dir.path().join("mix.json");
    let cfg_out = dir.path().join("from_config.csv");
    fs::write(
        &cfg_path,
        format!(
            r#"{{
                "symmetric": {{ "n": 2, "arc": [1.5707963267948966, 3.141592653589793] }},
                "grids": {{ "mixing": {{ "t": {{ "from": 0.0, "to": 1.0, "count": 3 }} }} }},
                "output": {{ "path": {:?}, "format": "json" }}
            }}"#,
            cfg_out.to_str().unwrap()
        ),
    )
    .unwrap();

    // Config alone: json artifact at the config's path.
    let out = modflow_path_args("mixing", &cfg_path, &[]);
    assert!(out.status.success());
    let body = fs::read_to_string(&cfg_out).unwrap();
    assert!(
        body.starts_with('['),
        "config-selected format should be json"
    );

    // Flags override both the destination and the format.
    let flag_out = dir.path().join("from_flag.csv");
    let out = modflow_path_args(
        "mixing",
        &cfg_path,
        &["--out", flag_out.to_str().unwrap(), "--format", "csv"],
    );
    assert!(out.status.success());
    let body = fs::read_to_string(&flag_out).unwrap();
    assert_eq!(
        body.lines().next(),
        Some("t,O_00,O_01,O_10,O_11,defect,theta")
    );
}

#[test]
fn mixing_matrix_at_time_zero_is_the_identity() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "mix0.json",
        r#"{
            "symmetric": { "n": 3, "arc": [0.5, 2.5] },
            "grids": { "mixing": { "t": { "from": 0.0, "to": 1.0, "count": 2 } } }
        }"#,
    );
    let table = stdout_of(&modflow_path_args("mixing", &cfg, &[]));
    let row0: Vec<f64> = table
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    // t, then the 3x3 entries row-major, then the defect.
    assert_eq!(row0[0], 0.0);
    let expected = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
    for (got, want) in row0[1..10].iter().zip(expected) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn thermo_writes_the_boost_companion_only_for_mirror_cones() {
    let dir = TempDir::new().unwrap();
    // Mirror cone: left component is the inversion image of the right one.
    let mirror = write_config(
        &dir,
        "mirror.json",
        r#"{
            "intervals": [[-2.0, -0.4], [0.5, 2.5]],
            "grids": { "thermo": { "nu": 8, "nv": 8, "boost_points": 11 } }
        }"#,
    );
    let out_path = dir.path().join("thermo.csv");
    assert!(
        modflow_path_args("thermo", &mirror, &["--out", out_path.to_str().unwrap()])
            .status
            .success()
    );
    let boost = fs::read_to_string(dir.path().join("thermo_boost.csv")).unwrap();
    let mut lines = boost.lines();
    assert_eq!(lines.next(), Some("tau,beta_tau"));
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    assert!(
        (first[0] - 0.5_f64.ln()).abs() < 1e-15,
        "profile starts at ln(a)"
    );
    assert_eq!(first[1], 0.0, "temperature diverges (beta = 0) at the tip");

    // A generic cone gets no companion table.
    let generic = write_config(
        &dir,
        "generic.json",
        r#"{
            "intervals": [[-3.0, -1.5], [0.5, 2.5]],
            "grids": { "thermo": { "nu": 8, "nv": 8 } }
        }"#,
    );
    let out_path2 = dir.path().join("thermo2.csv");
    assert!(
        modflow_path_args("thermo", &generic, &["--out", out_path2.to_str().unwrap()])
            .status
            .success()
    );
    assert!(out_path2.exists());
    assert!(!dir.path().join("thermo2_boost.csv").exists());
}

#[test]
fn verify_reports_every_check_and_honors_tighten() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "verify.json", "{}");
    let report_path = dir.path().join("report.json");
    let out = modflow_path_args("verify", &cfg, &["--out", report_path.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "verify failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = fs::read_to_string(&report_path).unwrap();
    for name in [
        "flow_equivalence",
        "mixing_closed_vs_ode",
        "kms_condition",
        "unruh_bound",
        "figure_reproduction",
    ] {
        assert!(report.contains(name), "report is missing {name}");
    }
    assert!(report.contains("\"passed\": true"));
    assert!(!report.contains("\"passed\": false"));

    // Tightening tolerances far beyond the achievable residuals must flip
    // some checks to failed (exit 4) while leaving the residuals unchanged.
    let tight_path = dir.path().join("tight.json");
    let out = modflow_path_args(
        "verify",
        &cfg,
        &["--out", tight_path.to_str().unwrap(), "--tighten", "1e-8"],
    );
    assert_eq!(out.status.code(), Some(4));
    let tight = fs::read_to_string(&tight_path).unwrap();
    assert!(tight.contains("\"passed\": false"));
    let residuals = |body: &str| -> Vec<String> {
        body.lines()
            .filter_map(|l| l.split("\"residual\": ").nth(1))
            .map(|tail| tail.split(',').next().unwrap().to_string())
            .collect()
    };
    assert_eq!(residuals(&report), residuals(&tight));
}

#[test]
fn orbit_svg_is_well_formed_and_marks_the_cone() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "orbit.json",
        r#"{
            "intervals": [[-1.0, -0.5], [1.0, 2.0]],
            "grids": { "orbit": { "s": { "from": -0.5, "to": 0.5, "count": 51 } } }
        }"#,
    );
    let svg = stdout_of(&modflow_path_args("orbit", &cfg, &["--format", "svg"]));
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("<svg"));
    assert!(svg.ends_with("</svg>\n"));
    assert_eq!(svg.matches("<polyline").count(), 4);
    assert_eq!(svg.matches("<circle").count(), 1);
}

#[test]
fn fig3_flags_boundary_pairs_exactly_when_uv_is_minus_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "boundary.json",
        r#"{ "intervals": [[-1.0, -0.5], [1.0, 2.0]], "point": [1.6, -0.625] }"#,
    );
    let table = stdout_of(&modflow_path_args("fig3", &cfg, &[]));
    let boundary_rows = table.lines().filter(|l| l.ends_with(",true")).count();
    assert_eq!(
        boundary_rows, 2,
        "u v = -1 degenerates exactly two pairs:\n{table}"
    );

    let cfg2 = write_config(
        &dir,
        "interior.json",
        r#"{ "intervals": [[-1.0, -0.5], [1.0, 2.0]], "point": [1.6, -0.8] }"#,
    );
    let table2 = stdout_of(&modflow_path_args("fig3", &cfg2, &[]));
    assert_eq!(table2.lines().filter(|l| l.ends_with(",true")).count(), 0);
    assert_eq!(table2.lines().count(), 7);
}

#[test]
fn orbit_start_outside_the_cone_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "outside.json",
        r#"{ "intervals": [[-1.0, -0.5], [1.0, 2.0]], "orbit_start": [5.0, 5.0] }"#,
    );
    let out = modflow_path_args("orbit", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
}
