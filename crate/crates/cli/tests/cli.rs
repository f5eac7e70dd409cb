use std::io::Write;
use std::process::{Command, Output, Stdio};

use patchfold::io::{parse_layout, prismatoid_json, to_json, LayoutJson};
use patchfold::search::{random_prismatoid, GeneratorConfig, ShapeBias};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_patchfold"));
    c.env_remove("PATCHFOLD_TOL");
    c
}

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn fixture(name: &str) -> String {
    let o = run(&["fixture", name], "");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn every_band_of_the_banded_hexagon_fails_verify() {
    let bands = run(&["unfold", "band", "--all"], &fixture("banded-hexagon"));
    assert!(bands.status.success());
    let v = run(&["verify"], &stdout(&bands));
    assert_eq!(v.status.code(), Some(1));
    let reports = lines(&v);
    assert_eq!(reports.len(), 12);
    assert!(reports.iter().all(|r| r["overlapping"] == Value::Bool(true)));
}

#[test]
fn counterexample_enumeration_is_reported_per_layout() {
    let layouts = run(&["unfold", "petal", "--enumerate"], &fixture("counterexample-nv"));
    assert!(layouts.status.success());
    assert_eq!(stdout(&layouts).lines().count(), 8);
    let v = run(&["verify"], &stdout(&layouts));
    let reports = lines(&v);
    assert_eq!(reports.len(), 8);
    let any = reports.iter().any(|r| r["overlapping"] == Value::Bool(true));
    assert_eq!(v.status.code(), Some(if any { 1 } else { 0 }));
    assert!(reports.iter().all(|r| r["choice"].is_string()));
}

#[test]
fn topless_petal_always_verifies() {
    let dir = tempfile::tempdir().unwrap();
    for (k, bias) in ShapeBias::ALL.into_iter().enumerate() {
        let cfg = GeneratorConfig { seed: 99, bias, ..Default::default() };
        for i in 0..5 {
            let p = random_prismatoid(&cfg, i).unwrap();
            let path = dir.path().join(format!("p{k}_{i}.json"));
            std::fs::write(&path, prismatoid_json(&p).unwrap()).unwrap();
            let u = bin().args(["unfold", "petal", "--topless", path.to_str().unwrap()]).output().unwrap();
            assert!(u.status.success(), "{}", String::from_utf8_lossy(&u.stderr));
            let v = run(&["verify"], &stdout(&u));
            assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
        }
    }
}

#[test]
fn layout_output_round_trips_byte_for_byte() {
    let out = run(&["unfold", "petal"], &fixture("drum"));
    let line = stdout(&out);
    let l = parse_layout(line.trim()).unwrap();
    let again = to_json(&LayoutJson::from_layout(&l)).unwrap();
    let mut v: Value = serde_json::from_str(line.trim()).unwrap();
    v.as_object_mut().unwrap().remove("choice");
    assert_eq!(to_json(&v).unwrap(), again);
    // Deterministic across runs.
    assert_eq!(stdout(&run(&["unfold", "petal"], &fixture("drum"))), line);
}

#[test]
fn fixtures_reemit_identically() {
    for name in ["banded-hexagon", "drum", "wings-ccw"] {
        let text = fixture(name);
        let p = match patchfold::io::parse_input(&text).unwrap() {
            patchfold::io::Input::Prismatoid(p) => p,
            other => panic!("{name}: {other:?}"),
        };
        assert_eq!(prismatoid_json(&p).unwrap(), text.trim());
    }
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(run(&["unfold", "petal"], "{not json").status.code(), Some(2));
    assert_eq!(run(&["unfold", "petal"], r#"{"A":[[0,0],[1,0]],"B":[],"z":1}"#).status.code(), Some(2));
    assert_eq!(run(&["fixture", "nope"], "").status.code(), Some(2));
    assert_eq!(run(&["unfold", "band"], &fixture("counterexample-nv")).status.code(), Some(2));
    assert_eq!(run(&["verify"], "").status.code(), Some(2));
}

#[test]
fn sweep_reports_holding_properties() {
    let o = run(&["sweep"], &fixture("drum"));
    assert!(o.status.success());
    let r = &lines(&o)[0];
    assert_eq!(r["holds"], Value::Bool(true));
    assert_eq!(r["z"].as_array().unwrap().len(), 9);
    let o = run(&["sweep", "--z-grid", "0,0.5,2"], &fixture("wings-ccw"));
    assert!(o.status.success());
    assert_eq!(run(&["sweep", "--z-grid", "1,0.5"], &fixture("wings-ccw")).status.code(), Some(2));
}

#[test]
fn svg_outputs_carry_rays_and_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let part = dir.path().join("part.svg");
    let o = run(&["partition", "-o", part.to_str().unwrap()], &fixture("drum"));
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&part).unwrap();
    assert!(svg.contains("stroke-dasharray"));

    let band = run(&["unfold", "band", "--cut", "0"], &fixture("banded-hexagon"));
    let w = dir.path().join("w.svg");
    let v = run(&["verify", "--svg", w.to_str().unwrap()], &stdout(&band));
    assert_eq!(v.status.code(), Some(1));
    assert!(std::fs::read_to_string(&w).unwrap().contains("data-witness"));
}

#[test]
fn tree_unfoldings_of_the_topless_hexagon_all_overlap() {
    let t = run(&["fixture", "banded-hexagon", "--topless"], "");
    let trees = run(&["unfold", "tree"], &stdout(&t));
    assert!(trees.status.success());
    let v = run(&["verify"], &stdout(&trees));
    assert_eq!(v.status.code(), Some(1));
    let reports = lines(&v);
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["overlapping"] == Value::Bool(true)));
}

#[test]
fn nonobtuse_enumeration_never_overlaps() {
    let p = patchfold::search::random_nonobtuse_prismatoid(5, 0, 500).unwrap();
    let o = run(&["unfold", "nonobtuse", "--include-top", "--enumerate"], &prismatoid_json(&p).unwrap());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 24);
    assert_eq!(run(&["verify"], &stdout(&o)).status.code(), Some(0));
}

#[test]
fn search_persists_a_run_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["search", "--seed", "4", "--count", "8", "--bias", "drum_like", "--out", dir.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = &lines(&o)[0];
    assert_eq!(s["tried"], Value::from(8));
    assert_eq!(s["failed"], Value::from(0));
    let summary = dir.path().join("runs").join("4").join("summary.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
    assert!(doc["timestamp"].is_u64());
    // Same seed, same counts.
    let again = bin().args(["search", "--seed", "4", "--count", "8", "--bias", "drum_like"]).output().unwrap();
    assert_eq!(lines(&again)[0]["stats"], s["stats"]);
}

#[test]
fn obtuse_turn_search_runs() {
    let o = bin().args(["search", "--seed", "2", "--count", "16", "--mode", "obtuse-turn"]).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = &lines(&o)[0];
    assert_eq!(s["tried"], Value::from(16));
    assert_eq!(s["config"]["mode"], Value::from("obtuse_turn"));
}
