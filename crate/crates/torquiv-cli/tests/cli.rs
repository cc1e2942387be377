use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn torquiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torquiv")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn certify_kronecker_is_vacuous_below_the_bound() {
    let out = torquiv(&["certify", path(&corpus("kronecker.json")), "--bound", "3", "--horizon", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["command"], "certify");
    assert!(v["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn certify_birkhoff_below_three_fails_with_witness() {
    let out = torquiv(&["certify", path(&corpus("bipartite-3-3.json")), "--bound", "2", "--horizon", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], false);
    assert_eq!(v["witnesses"]["violation"]["degree"], 3);
}

#[test]
fn malformed_input_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    fs::write(&f, r#"{"vertices":["v1","v2"],"arrows":[{"id":"a","tail":"v1"}]}"#).unwrap();
    let out = torquiv(&["vertices", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"], "MalformedInput");
    assert!(v["message"].as_str().unwrap().contains("head"));
}

#[test]
fn unknown_vertex_is_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    fs::write(&f, r#"{"vertices":["v1"],"arrows":[{"id":"a","tail":"v1","head":"v9"}]}"#).unwrap();
    assert_eq!(torquiv(&["vertices", f.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn cyclic_lattice_points_are_refused() {
    let out = torquiv(&["lattice-points", path(&corpus("affine-degree-3.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "UnboundedPolyhedron");
}

#[test]
fn mixed_case_ideal_is_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("mixed.json");
    fs::write(
        &f,
        r#"{"vertices":["v1","v2"],"arrows":[{"id":"a","tail":"v1","head":"v2"},{"id":"b","tail":"v2","head":"v1"}],"weight":{"v1":-1,"v2":1}}"#,
    )
    .unwrap();
    let out = torquiv(&["ideal-gens", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "UnsupportedCase");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(torquiv(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(torquiv(&["skeletons"]).status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    let f = corpus("twodim-4-bl3p2.json");
    for args in [
        vec!["ideal-gens", path(&f), "--max-degree", "3"],
        vec!["certify", path(&f)],
        vec!["lattice-points", path(&f), "--degree", "2"],
    ] {
        let a = torquiv(&args);
        let b = torquiv(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn job_count_does_not_change_output() {
    let f = corpus("bipartite-3-3.json");
    let one = Command::new(env!("CARGO_BIN_EXE_torquiv"))
        .args(["ideal-gens", path(&f)])
        .env("TORQUIV_JOBS", "1")
        .output()
        .unwrap();
    let many = torquiv(&["ideal-gens", path(&f), "--jobs", "4"]);
    assert_eq!(one.stdout, many.stdout);
    let v = json(&one);
    assert_eq!(v["binomials"].as_array().unwrap().len(), 1);
    assert_eq!(v["generators"].as_array().unwrap().len(), 6);
}

#[test]
fn csv_lists_flows_by_arrow() {
    let out = torquiv(&["--format", "csv", "lattice-points", path(&corpus("kronecker.json")), "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["a1,a2", "0,2", "1,1", "2,0"]);
    assert_eq!(torquiv(&["--format", "csv", "skeletons", "--d", "2"]).status.code(), Some(1));
}

#[test]
fn tighten_writes_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let out = torquiv(&["tighten", path(&corpus("square.json")), "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let steps: Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(!steps.as_array().unwrap().is_empty());
    let tight = json(&out);
    assert!(tight["weight"].is_object());
}

#[test]
fn decompose_double_and_localize() {
    let tight = torquiv(&["tighten", path(&corpus("square.json"))]);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("tight.json");
    fs::write(&f, &tight.stdout).unwrap();
    let parts = json(&torquiv(&["decompose", f.to_str().unwrap()]));
    assert_eq!(parts.as_array().unwrap().len(), 2);
    let double = torquiv(&["double", path(&corpus("kronecker.json")), "--d", "3"]);
    assert_eq!(double.status.code(), Some(0));
    let chart = torquiv(&["localize", path(&corpus("twodim-1-p2.json")), "--vertex-index", "0"]);
    assert_eq!(chart.status.code(), Some(0));
    let out = torquiv(&["localize", path(&corpus("twodim-1-p2.json")), "--vertex-index", "99"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumerations_report_counts() {
    let v = json(&torquiv(&["skeletons", "--d", "3", "--maximal"]));
    assert_eq!(v["count"], 2);
    let v = json(&torquiv(&["skeletons", "--d", "2"]));
    assert_eq!(v["count"], 1);
    let v = json(&torquiv(&["affine-list", "--d", "4"]));
    assert_eq!(v["count"], 3);
    let v = json(&torquiv(&["affine-list", "--d", "2"]));
    assert_eq!(v["count"], 0);
}

#[test]
fn surfaces_and_degrees() {
    let names = ["twodim-1-p2", "twodim-2-bl1p2", "twodim-3-bl2p2", "twodim-4-bl3p2", "twodim-5-p1xp1"];
    let want = ["P2", "Bl1P2", "Bl2P2", "Bl3P2", "P1xP1"];
    for (n, w) in names.iter().zip(want) {
        let v = json(&torquiv(&["classify2d", path(&corpus(&format!("{n}.json")))]));
        assert_eq!(v["surface"], w);
    }
    for d in 3..=5 {
        let v = json(&torquiv(&["affine-degree", path(&corpus(&format!("affine-degree-{d}.json")))]));
        assert_eq!(v["degree"], d);
    }
}

#[test]
fn osm_lists_and_certifies() {
    let f = corpus("bipartite-2-2.json");
    let v = json(&torquiv(&["osm", path(&f)]));
    assert_eq!(v["count"], 2);
    let v = json(&torquiv(&["osm", path(&f), "--certify"]));
    assert_eq!(v["verdict"], true);
    let out = torquiv(&["osm", path(&corpus("kronecker.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let out = torquiv(&["osm", path(&corpus("affine-degree-3.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "NotBipartite");
}

#[test]
fn regenerated_corpus_matches_checked_in_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = torquiv(&["corpus-regen", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let listed = json(&out)["files"].as_array().unwrap().len();
    let mut n = 0;
    for entry in fs::read_dir(dir.path()).unwrap() {
        let entry = entry.unwrap();
        let fresh = fs::read(entry.path()).unwrap();
        let stored = fs::read(corpus(entry.file_name().to_str().unwrap())).unwrap();
        assert_eq!(fresh, stored, "{:?}", entry.file_name());
        n += 1;
    }
    assert_eq!(n, listed);
    assert_eq!(fs::read_dir(corpus("")).unwrap().count(), n);
}
