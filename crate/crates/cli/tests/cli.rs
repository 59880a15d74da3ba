use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn landau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_landau"))
        .args(args)
        .output()
        .expect("spawn landau")
}

fn run_ok(args: &[&str]) -> String {
    let out = landau(args);
    assert!(
        out.status.success(),
        "landau {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn value(csv: &str, key: &str, col: usize) -> f64 {
    rows(csv)
        .into_iter()
        .find(|r| r[0] == key)
        .unwrap_or_else(|| panic!("no row {key}"))[col]
        .parse()
        .unwrap()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn density_has_one_row_per_point_and_a_sidecar() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("d.csv");
    run_ok(&[
        "density",
        "-n",
        "1",
        "-m",
        "-1",
        "--nx",
        "48",
        "--ny",
        "40",
        "-o",
        path_arg(&csv),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,y,density");
    assert_eq!(rows(&text).len(), 48 * 40);
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    assert_eq!(side["config"]["grid"]["nx"], 48);
    assert_eq!(side["derived"]["omega_c"], 1.0);
    assert_eq!(side["results"]["state"], "S(n=1;m=-1)");
}

#[test]
fn first_gauge_band_current_flows_against_x_above_its_centre() {
    let out = run_ok(&[
        "current", "--gauge", "landau1", "--kx", "0", "--nx", "64", "-o", "-",
    ]);
    let mut above = 0.0;
    let mut below = 0.0;
    for r in rows(&out) {
        let y: f64 = r[1].parse().unwrap();
        let jx: f64 = r[2].parse().unwrap();
        if y > 0.5 {
            above += jx;
        } else if y < -0.5 {
            below += jx;
        }
    }
    assert!(above < 0.0 && below > 0.0, "above {above}, below {below}");
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["density", "-m", "0", "--nx", "0", "-o", "-"][..],
        &["density", "--gauge", "landau1", "-o", "-"],
        &["density", "-n", "0", "-m", "3", "-o", "-"],
        &["hall", "-E", "1", "--sigma", "-1", "-o", "-"],
        &["overlap", "--nk", "1", "-o", "-"],
        &["--threads", "0", "zeeman", "-o", "-"],
    ] {
        let out = landau(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with("error: "), "{args:?}: {err}");
    }
}

#[test]
fn ground_state_table() {
    let out = run_ok(&["expect", "-n", "0", "-m", "0", "-o", "-"]);
    assert!((value(&out, "Rc2", 2) - 1.0).abs() < 1e-10);
    assert!((value(&out, "R2", 2) - 1.0).abs() < 1e-10);
    assert!(value(&out, "Lcan_z", 2).abs() < 1e-10);
    assert!((value(&out, "H", 2) - 0.5).abs() < 1e-10);
}

#[test]
fn guiding_mode_reports_the_residual() {
    let out = run_ok(&[
        "expect", "--mode", "guiding", "-n", "2", "-m", "1", "-o", "-",
    ]);
    assert!((value(&out, "Rc2", 2) - 5.0).abs() < 1e-9);
    assert!((value(&out, "R2", 2) - 3.0).abs() < 1e-9);
    assert!(value(&out, "johnson_lippmann_residual", 2) < 1e-9);
}

#[test]
fn packet_mechanical_angular_momentum() {
    let out = run_ok(&[
        "expect", "--gauge", "packet", "-n", "1", "--kx", "2", "--sigma", "0.1", "-o", "-",
    ]);
    assert!((value(&out, "Lmech_z", 2) - 3.0).abs() < 1e-8);
    assert!((value(&out, "Pcan_x", 2) - 2.0).abs() < 1e-8);
}

#[test]
fn inequality_flags() {
    let out = run_ok(&[
        "expect",
        "--mode",
        "inequality",
        "-n",
        "1",
        "-m",
        "-1",
        "--sigma",
        "0.1",
        "-o",
        "-",
    ]);
    let rows = rows(&out);
    assert_eq!(rows.len(), 8);
    for r in &rows {
        let want = if r[0].starts_with("Pmech") || r[0].starts_with("Lmech") {
            "EQUAL"
        } else {
            "UNEQUAL"
        };
        assert_eq!(r[5], want, "{r:?}");
    }
}

#[test]
fn hall_drift_is_e_over_b_against_x() {
    let out = run_ok(&["hall", "-E", "1", "-o", "-"]);
    assert!((value(&out, "v_x", 1) + 1.0).abs() < 1e-8);
    assert!(value(&out, "cancellation", 1) < 1e-10);
    let out = run_ok(&["-B", "2", "hall", "-E", "1", "--kx", "1", "-o", "-"]);
    assert!((value(&out, "v_x", 1) + 0.5).abs() < 1e-8);
}

#[test]
fn zeeman_tables() {
    let out = run_ok(&["zeeman", "--shell", "2", "--lambda", "0.5", "-o", "-"]);
    let mut levels: Vec<f64> = rows(&out).iter().map(|r| r[1].parse().unwrap()).collect();
    levels.dedup();
    assert_eq!(levels.len(), 3);
    for (got, want) in levels.iter().zip([1.0, 0.0, -1.0]) {
        assert!((got - want).abs() < 1e-12);
    }

    let out = run_ok(&["zeeman", "--delta-b", "0.4", "-o", "-"]);
    let shifts: Vec<(String, f64)> = rows(&out)
        .into_iter()
        .map(|r| (r[0].clone(), r[2].parse().unwrap()))
        .collect();
    for (family, s) in &shifts {
        if family == "landau" {
            assert!((s - 0.2).abs() < 1e-12);
        }
    }
    let osc: Vec<f64> = shifts
        .iter()
        .filter(|(f, _)| f == "oscillator")
        .map(|(_, s)| *s)
        .collect();
    assert!((osc[0] - 0.2).abs() < 1e-12 && (osc[1] + 0.2).abs() < 1e-12);
}

#[test]
fn overlap_matches_the_gaussian_and_reports_parseval() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("o.csv");
    run_ok(&["overlap", "-o", path_arg(&csv)]);
    let text = std::fs::read_to_string(&csv).unwrap();
    for r in rows(&text) {
        let k: f64 = r[0].parse().unwrap();
        let abs_u: f64 = r[3].parse().unwrap();
        let want = (-k * k / 2.0).exp() / std::f64::consts::PI.powf(0.25);
        assert!((abs_u - want).abs() < 1e-10, "k {k}");
    }
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o.json")).unwrap()).unwrap();
    assert!((side["results"]["parseval"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(side["results"]["superposition_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    for (i, threads) in ["1", "4"].iter().enumerate() {
        let csv = dir.path().join(format!("c{i}.csv"));
        run_ok(&[
            "--threads",
            threads,
            "current",
            "-n",
            "2",
            "-m",
            "1",
            "--nx",
            "96",
            "-o",
            path_arg(&csv),
        ]);
    }
    let a = std::fs::read(dir.path().join("c0.csv")).unwrap();
    let b = std::fs::read(dir.path().join("c1.csv")).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        run_ok(&["expect", "-n", "1", "-m", "1", "-o", "-"]),
        run_ok(&["expect", "-n", "1", "-m", "1", "-o", "-"])
    );
}

#[test]
fn fast_verify_passes() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("v.json");
    let out = run_ok(&["verify", "--fast", "-o", path_arg(&report)]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["criteria"].as_array().unwrap().len(), 10);
    assert!(doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
    let saved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(saved, doc);
}
