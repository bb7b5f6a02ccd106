use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn nmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmat")).args(args).env("NMAT_THREADS", "2").output().expect("spawn nmat")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn gaussian(k: f64) -> String {
    format!(
        r#"{{"potential": {{"radial": {{"kind": "power", "C": 1.0, "b": 1.0}}, "poly": [[{k}, 0.0]]}},
            "sampler": {{"n": 8, "sweeps": 800, "burn_in": 100, "thin": 20, "seed": 5, "chains": 2}}}}"#
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn curve_center_radius(b: &Value) -> (f64, f64, f64) {
    let pts: Vec<(f64, f64)> =
        b["curve"].as_array().unwrap().iter().map(|p| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap())).collect();
    let n = pts.len() as f64;
    let (cx, cy) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let r: Vec<f64> = pts.iter().map(|p| ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()).collect();
    let spread = r.iter().cloned().fold(0.0, f64::max) - r.iter().cloned().fold(f64::INFINITY, f64::min);
    (cx, r[0], spread + cy.abs())
}

#[test]
fn boundary_worked_cases() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "g.json", &gaussian(0.0));
    let out = dir.path().join("b.json");
    let svg = dir.path().join("b.svg");
    let o = nmat(&["boundary", "--config", s(&cfg), "--out", s(&out), "--svg", s(&svg)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let b = read_json(&out);
    assert!((b["a"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    let (cx, r, defect) = curve_center_radius(&b);
    assert!(cx.abs() < 1e-10 && (r - 1.0).abs() < 1e-10 && defect < 1e-10);
    assert_eq!(b["config_fingerprint"].as_str().unwrap().len(), 16);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));

    let cfg = write_config(dir.path(), "k.json", &gaussian(0.2));
    let o = nmat(&["boundary", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let (cx, r, defect) = curve_center_radius(&read_json(&out));
    assert!((cx - 0.2).abs() < 1e-8 && (r - 1.0).abs() < 1e-8 && defect < 1e-8);
}

#[test]
fn huge_linear_term_is_breakdown() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "k.json", &gaussian(5.0));
    let o = nmat(&["boundary", "--config", s(&cfg), "--out", s(&dir.path().join("b.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("boundary breakdown"));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"potential": {"radial": {"kind": "power", "C": 1, "b": 1}}, "typo": 3}"#);
    let o = nmat(&["boundary", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    assert_eq!(nmat(&["boundary", "--config", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(nmat(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn closed_form_prints_a_and_beta() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cf.json");
    let o = nmat(&["closed-form", "--C", "1", "--b", "1", "--K", "0.2", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["a"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((v["beta"].as_f64().unwrap() - 0.2).abs() < 1e-10);
    assert_eq!(read_json(&out)["curve"].as_array().unwrap().len(), 1024);
}

fn trajectory(path: &Path) -> Vec<(u64, u64, Value)> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            (v["sweep"].as_u64().unwrap(), v["chain"].as_u64().unwrap(), v["z"].clone())
        })
        .collect()
}

#[test]
fn sample_is_deterministic_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "g.json", &gaussian(0.2));
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    assert_eq!(nmat(&["sample", "--config", s(&cfg), "--out", s(&a)]).status.code(), Some(0));
    assert_eq!(nmat(&["sample", "--config", s(&cfg), "--out", s(&b)]).status.code(), Some(0));
    let bytes = std::fs::read(&a).unwrap();
    assert!(!bytes.is_empty());
    assert_eq!(bytes, std::fs::read(&b).unwrap());

    let other = dir.path().join("c.jsonl");
    assert_eq!(nmat(&["sample", "--config", s(&cfg), "--seed", "6", "--out", s(&other)]).status.code(), Some(0));
    assert_ne!(bytes, std::fs::read(&other).unwrap());

    // stop at 400 sweeps, then resume to 800
    let ck = dir.path().join("ck");
    let (first, second) = (dir.path().join("p1.jsonl"), dir.path().join("p2.jsonl"));
    let o = nmat(&["sample", "--config", s(&cfg), "--sweeps", "400", "--checkpoint-dir", s(&ck), "--out", s(&first)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = nmat(&["sample", "--config", s(&cfg), "--checkpoint-dir", s(&ck), "--resume", "--out", s(&second)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut joined = trajectory(&first);
    joined.extend(trajectory(&second));
    assert_eq!(joined, trajectory(&a));

    let csv = dir.path().join("d.csv");
    let o = nmat(&["density", "--snapshots", s(&a), "--grid", "16", "--out", s(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,density"));
    assert_eq!(text.lines().count(), 1 + 16 * 16);
}

#[test]
fn verify_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "k.json", &gaussian(0.2));
    let bnd = dir.path().join("b.json");
    assert_eq!(nmat(&["boundary", "--config", s(&cfg), "--out", s(&bnd)]).status.code(), Some(0));

    let rep = dir.path().join("r.json");
    let o = nmat(&["verify", "--boundary", s(&bnd), "--config", s(&cfg), "--out", s(&rep)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&rep);
    assert_eq!(r["pass"]["overall"], Value::Bool(true));
    assert!(r["variational_inside_dev"].as_f64().unwrap() < 5e-3);

    // an impossible tolerance fails with exit 3
    let o = nmat(&["verify", "--boundary", s(&bnd), "--config", s(&cfg), "--tol", "0", "--out", s(&rep)]);
    assert_eq!(o.status.code(), Some(3));

    let other = write_config(dir.path(), "o.json", &gaussian(0.1));
    let o = nmat(&["verify", "--boundary", s(&bnd), "--config", s(&other)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fingerprint"));

    let snaps = dir.path().join("s.jsonl");
    assert_eq!(nmat(&["sample", "--config", s(&cfg), "--out", s(&snaps)]).status.code(), Some(0));
    let svg = dir.path().join("o.svg");
    let o = nmat(&["compare", "--boundary", s(&bnd), "--snapshots", s(&snaps), "--eps", "0.5", "--svg", s(&svg)]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["outside_fraction"].as_f64().unwrap() <= 1.0);
    assert_eq!(o.status.code(), Some(if v["pass"].as_bool().unwrap() { 0 } else { 3 }));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<circle"));
}

#[test]
fn genmat_demo_diagnostics() {
    let o = nmat(&["genmat-demo", "--alphas", "-1,0.5,2", "--n", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["commutator_defect"].as_f64().unwrap() < 1e-10);
    assert!(v["spectrum_err"].as_f64().unwrap() < 1e-8);
    assert!(v["round_trip_err"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["lambdas"].as_array().unwrap().len(), 3);
}
