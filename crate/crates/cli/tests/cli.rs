//! End-to-end checks of the binary: exit-code conventions, JSON report
//! schema, CSV emission, and manifest reproducibility.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_carleman"))
}

fn tmpdir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("carleman-cli-{name}"));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn check_exit_codes_follow_verdicts() {
    // holds -> 0
    let st = bin()
        .args(["check", "gamma_r", "--m", "gevrey:s=2", "--r", "1", "--horizon", "20000"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{:?}", st);

    // fails -> 1
    let st = bin()
        .args(["check", "gamma_r", "--m", "gevrey:s=1", "--r", "1", "--horizon", "20000"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));

    // sv_r holds -> 0
    let st = bin()
        .args(["check", "sv_r", "--m", "gevrey:s=2", "--n", "gevrey:s=2", "--r", "1", "--horizon", "20000"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));

    // integral condition on gevrey 3, r = 2 -> 0
    let st = bin()
        .args(["check", "integral", "--m", "gevrey:s=3", "--n", "gevrey:s=3", "--r", "2"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
}

#[test]
fn parse_errors_exit_2() {
    let st = bin().args(["analyze", "gevreyy:s=1"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let err = String::from_utf8_lossy(&st.stderr);
    assert!(err.contains("parse error"), "stderr: {err}");

    // Bad table: non-contiguous indices.
    let dir = tmpdir("badtable");
    let path = dir.join("bad.csv");
    std::fs::write(&path, "p,logM\n0,0.0\n2,1.0\n").unwrap();
    let st = bin().args(["analyze", &format!("table:{}", path.display())]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn json_report_schema_is_exact() {
    let st = bin()
        .args(["check", "gamma_r", "--m", "gevrey:s=2", "--r", "1", "--horizon", "10000", "--json"])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&st.stdout).unwrap();
    let rep = &doc["report"];
    let keys: Vec<&str> = rep.as_object().unwrap().keys().map(String::as_str).collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    assert_eq!(
        sorted,
        vec!["condition", "horizon", "params", "sup_value", "tail_bound", "verdict", "witness_p"]
    );
    assert_eq!(rep["condition"], "gamma_r");
    assert_eq!(rep["verdict"], "holds");
    let params: Vec<&str> = rep["params"].as_object().unwrap().keys().map(String::as_str).collect();
    let mut p = params.clone();
    p.sort_unstable();
    assert_eq!(p, vec!["Q", "r", "s"]);
    assert!(doc["manifest"]["version"].is_string());
}

#[test]
fn analyze_emits_bundle() {
    let st = bin()
        .args(["analyze", "qgevrey:q=2", "--horizon", "5000", "--json"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&st.stdout).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    let mg = reports.iter().find(|r| r["condition"] == "mg").unwrap();
    assert_eq!(mg["verdict"], "fails");
    let dc = reports.iter().find(|r| r["condition"] == "dc").unwrap();
    assert_eq!(dc["verdict"], "holds");
}

#[test]
fn assoc_csv_and_reproducibility() {
    let dir = tmpdir("assoc");
    let out1 = dir.join("a1.csv");
    let out2 = dir.join("a2.csv");
    for out in [&out1, &out2] {
        let st = bin()
            .args([
                "assoc", "--m", "gevrey:s=2", "--t-min", "2", "--t-max", "100", "--points", "10",
                "--out", out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
    }
    let a = std::fs::read_to_string(&out1).unwrap();
    let b = std::fs::read_to_string(&out2).unwrap();
    assert_eq!(a, b, "assoc output must be byte-reproducible");
    assert!(a.starts_with("t,omega,sigma,integral_check_err\n"));
    assert_eq!(a.lines().count(), 11);
}

#[test]
fn jets_classify_reads_jet_json() {
    let dir = tmpdir("jets");
    let path = dir.join("jet.json");
    std::fs::write(
        &path,
        r#"{"r":1,"coeffs":[[1.0,0.0],[1.0,0.0],[2.0,0.0]],"envelope":{"C":1.0,"h":1.0},"flavor":"roumieu"}"#,
    )
    .unwrap();
    let st = bin()
        .args(["jets", "classify", "--jet", path.to_str().unwrap(), "--m", "gevrey:s=2", "--h-grid", "1,2,4"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let out = String::from_utf8_lossy(&st.stdout);
    assert!(out.contains("roumieu(h*=1)"), "got: {out}");
}

#[test]
fn interpolate_writes_csv_and_identity_sidecar() {
    let dir = tmpdir("interp");
    let out = dir.join("p.csv");
    let st = bin()
        .args(["interpolate", "--m", "gevrey:s=2", "--r", "3", "--horizon", "600", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("p.json")).unwrap()).unwrap();
    assert!(sidecar["quotient_identity_rel_err"].as_f64().unwrap() <= 1e-12);
    let lhs = sidecar["partial_sum_identity"]["lhs"].as_f64().unwrap();
    let rhs = sidecar["partial_sum_identity"]["rhs"].as_f64().unwrap();
    assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
}
