use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn rin(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rin")).args(args).current_dir(dir).env("RUST_LOG", "warn").output().unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = rin(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn build_analyze_layout_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["synth", "--kind", "bundle", "--frames", "2", "--out", "bundle.json"], d);
    ok(&["build", "--input", "bundle.json", "--criterion", "min", "--cutoff", "4.5", "--out", "g.json"], d);
    ok(&["build", "--input", "bundle.json", "--format", "json", "--criterion", "min", "--cutoff", "4.5", "--frame", "1", "--out", "g1.graphml"], d);
    ok(&["build", "--input", "bundle.json", "--criterion", "min", "--cutoff", "4.5", "--exclude-backbone", "--out", "gx.json"], d);

    let graph = json(&d.join("g.json"));
    assert_eq!(graph["n"], 73);
    assert_eq!(graph["config"]["criterion"], "min");
    let edges = graph["edges"].as_array().unwrap().len();
    assert!(edges > 72);
    assert!(json(&d.join("gx.json"))["edges"].as_array().unwrap().len() < edges);
    let graphml = std::fs::read_to_string(d.join("g1.graphml")).unwrap();
    assert!(graphml.starts_with("<?xml") && graphml.contains("<graphml"));

    ok(&["analyze", "--graph", "g.json", "--measure", "betweenness", "--out", "bc.json"], d);
    let bc = json(&d.join("bc.json"));
    assert_eq!(bc["measure"], "betweenness");
    assert_eq!(bc["values"].as_array().unwrap().len(), 73);

    ok(&["analyze", "--graph", "g.json", "--measure", "leiden", "--gamma", "1.0", "--seed", "3", "--out", "ld.json"], d);
    let ld = json(&d.join("ld.json"));
    assert_eq!(ld["labels"].as_array().unwrap().len(), 73);
    assert!(ld["community_count"].as_u64().unwrap() >= 2);

    ok(&["layout", "--graph", "g.json", "--seed", "1", "--out", "l.json"], d);
    ok(&["layout", "--graph", "g.json", "--seed", "1", "--out", "l_again.json"], d);
    ok(&["layout", "--graph", "g.json", "--seed", "1", "--warm", "l.json", "--out", "l_warm.json"], d);
    let layout = json(&d.join("l.json"));
    assert_eq!(layout["kind"], "maxent_stress");
    assert_eq!(layout["coords"].as_array().unwrap().len(), 73);
    assert_eq!(layout, json(&d.join("l_again.json")));
    assert_eq!(json(&d.join("l_warm.json"))["coords"].as_array().unwrap().len(), 73);
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["synth", "--residues", "40", "--frames", "3", "--out", "t.json"], d);
    ok(&["bench", "--input", "t.json", "--criterion", "calpha", "--cutoffs", "5,7", "--measures", "degree,pagerank", "--frames", "0,2", "--reps", "3", "--out", "out/b.csv", "--cold"], d);
    let text = std::fs::read_to_string(d.join("out/b.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "protein_id,n_nodes,n_edges,event_kind,cutoff,measure,edge_update_ms,layout_ms,measure_ms,total_ms,repetitions");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 2 * 3);
    assert!(rows.iter().all(|r| r.starts_with("t,40,") && r.ends_with(",3")));

    let stdout = ok(&["bench", "--synthetic", "30", "--cutoffs", "4.5", "--measures", "degree", "--reps", "3"], d);
    assert_eq!(stdout.lines().count(), 1 + 3);
}

#[test]
fn bad_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        vec!["build", "--input", "missing.pdb", "--out", "g.json"],
        vec!["build", "--input", "x.pdb", "--criterion", "nearest", "--out", "g.json"],
        vec!["analyze", "--graph", "g.json", "--measure", "eigenvector", "--out", "a.json"],
        vec!["bench", "--synthetic", "30", "--reps", "2"],
        vec!["bench", "--synthetic", "30", "--cutoffs", "4.5,x"],
        vec!["frobnicate"],
    ] {
        let out = rin(&args, d);
        assert!(!out.status.success(), "{args:?}");
    }
}
