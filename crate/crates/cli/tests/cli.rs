use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use intconj_cli::{run, Command as Cmd, Options, Problem};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn intconj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intconj")).args(args).output().expect("binary runs")
}

fn summary(dir: &Path, name: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{name}.summary"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn check_map_on_pinch() {
    let dir = tempfile::tempdir().unwrap();
    let out = intconj(&["check-map", fixture("pinch.json").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let s = summary(dir.path(), "pinch-check-map");
    assert_eq!(s["maps"]["pinch"]["isc"], false);
    assert_eq!(s["maps"]["pinch"]["isc_violations"], serde_json::json!([0.5]));
    assert_eq!(s["maps"]["pinch"]["osc"], true);
    assert_eq!(s["maps"]["pinch_down"]["outer_mu_regular"], false);
    let csv = std::fs::read_to_string(dir.path().join("pinch-check-map.csv")).unwrap();
    assert!(csv.starts_with("map,node,t,isc,osc,outer_mu_regular,mu_continuous,tau_full,full_lsc\n"));
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn support_on_pinch_atom() {
    let dir = tempfile::tempdir().unwrap();
    let out = intconj(&[
        "support",
        fixture("pinch.json").to_str().unwrap(),
        "--measure",
        "atom05",
        "--grid",
        "64",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s = summary(dir.path(), "pinch-support");
    assert_eq!(s["lp"], 0.0);
    assert_eq!(s["formula"], 1.0);
    assert_eq!(s["gap"], 1.0);
    let csv = std::fs::read_to_string(dir.path().join("pinch-support.csv")).unwrap();
    assert_eq!(
        csv,
        "refinement,lp,formula,gap\n64,0.0000000000000000e0,1.0000000000000000e0,1.0000000000000000e0\n"
    );
}

#[test]
fn duality_on_spike_matches_in_process_call() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture("spike.json");
    let out = intconj(&[
        "duality",
        path.to_str().unwrap(),
        "--grid",
        "8,64,512,4096",
        "--out",
        dir.path().to_str().unwrap(),
        "--name",
        "spike",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(dir.path(), "spike");
    let gaps: Vec<f64> = s["levels"].as_array().unwrap().iter().map(|l| l["gap"].as_f64().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    assert!(*gaps.last().unwrap() <= 1e-3);

    let p = Problem::load(&path).unwrap();
    let o = Options {
        grid: vec![8, 64, 512, 4096],
        ..Options::default()
    };
    let rep = run(Cmd::Duality, &p, &o).unwrap();
    assert_eq!(rep.summary, s);
    assert_eq!(std::fs::read_to_string(dir.path().join("spike.csv")).unwrap(), rep.csv());
}

#[test]
fn conjugate_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = intconj(&["conjugate", fixture("convex.json").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let s = summary(dir.path(), "convex-conjugate");
    assert_eq!(s["functions"]["kinked"]["dom"], serde_json::json!([-1.0, 2.0]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"complex": [0, 1], "bogus": 1}"#).unwrap();
    assert_eq!(intconj(&["proper", bad.to_str().unwrap(), "--out", d]).status.code(), Some(2));

    let unordered = dir.path().join("unordered.json");
    std::fs::write(&unordered, r#"{"complex": [1, 0]}"#).unwrap();
    assert_eq!(intconj(&["proper", unordered.to_str().unwrap(), "--out", d]).status.code(), Some(2));

    let out = intconj(&["ic-check", fixture("non_isc_domain.json").to_str().unwrap(), "--out", d]);
    assert_eq!(out.status.code(), Some(3));

    let infinite = dir.path().join("inf.json");
    std::fs::write(
        &infinite,
        r#"{"complex": [0, 1], "convex": {"ray": {"pieces": [[1, 0]], "dom": [0, "inf"]}}}"#,
    )
    .unwrap();
    assert_eq!(intconj(&["conjugate", infinite.to_str().unwrap(), "--out", d]).status.code(), Some(0));
    let s = summary(dir.path(), "inf-conjugate");
    assert_eq!(s["functions"]["ray"]["dom"], serde_json::json!(["-inf", 1.0]));
}

#[test]
fn selftest_reports_corrupted_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let fx = dir.path().join("fixtures");
    std::fs::create_dir(&fx).unwrap();
    let text = std::fs::read_to_string(fixture("spike.json")).unwrap();
    std::fs::write(fx.join("spike.json"), text.replace("\"j\": 1,", "\"j\": 2,")).unwrap();
    let out = intconj(&[
        "selftest",
        "--family",
        "fixtures",
        "--fixtures",
        fx.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("spike.json"), "{stdout}");
    let repro = dir.path().join("selftest-reproducer.json");
    assert!(stdout.contains(repro.to_str().unwrap()));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(repro).unwrap()).unwrap();
    assert_eq!(r["family"], "fixtures");
}

#[test]
fn selftest_fixture_family_is_deterministic() {
    let a = intconj(&["selftest", "--seed", "5", "--family", "fixtures"]);
    let b = intconj(&["selftest", "--seed", "5", "--family", "fixtures"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
