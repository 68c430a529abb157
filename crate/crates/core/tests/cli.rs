use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn igl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igl")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = igl(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn path_graph_brute() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("p4.txt");
    std::fs::write(&f, "# P4\n4 3\n0 1 1\n1 2 1\n2 3 1\n").unwrap();
    let r = report(&["run", path(&f), "--algorithm", "brute"]);
    assert_eq!(r["exact"], "13/3");
    assert_eq!(r["igl"], "4.33333333333333");
    assert_eq!(r["n"], 4);
    assert_eq!(r["m"], 3);
    assert_eq!(r["params"]["mode"], "exact");
    let r = report(&["run", path(&f), "--arith", "float"]);
    assert!(r.get("exact").is_none());
    assert_eq!(r["params"]["mode"], "float");
}

#[test]
fn wiener_index_of_tree() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("star.txt");
    // star with 4 leaves: 4 pairs at 1, 6 pairs at 2
    std::fs::write(&f, "5 4\n0 1 1\n0 2 1\n0 3 1\n0 4 1\n").unwrap();
    let r = report(&["run", path(&f), "--algorithm", "treewidth", "--kernel", "identity"]);
    assert_eq!(r["exact"], "16/1");
    assert_eq!(r["params"]["width"], 1);
}

#[test]
fn grid_planar_matches_brute() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("grid.txt");
    let out = igl(&["gen", "grid", "6", "5", "--weights", "int:1:7", "--seed", "3", "--out", path(&f)]);
    assert!(out.status.success());
    let svg = dir.path().join("g.svg");
    let p = report(&["run", path(&f), "--algorithm", "planar", "--r", "9", "--audit", "--svg", path(&svg)]);
    let b = report(&["run", path(&f), "--algorithm", "brute"]);
    assert_eq!(p["exact"], b["exact"]);
    assert_eq!(p["params"]["r"], 9);
    assert_eq!(p["audit"]["pairs"]["miscounted"], 0);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn ktree_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("kt.txt");
    assert!(igl(&["gen", "ktree", "3", "300", "--seed", "1", "--out", path(&f)]).status.success());
    let td = dir.path().join("kt.txt.td");
    let head = std::fs::read_to_string(&td).unwrap();
    assert!(head.starts_with("s td 297 4 300"), "{head}");
    let t = report(&["run", path(&f), "--algorithm", "treewidth", "--td", path(&td), "--audit"]);
    let b = report(&["run", path(&f)]);
    assert_eq!(t["exact"], b["exact"]);
    assert_eq!(t["params"]["width"], 3);
    assert!(t["audit"]["stats"]["canonical_sets"].as_u64().unwrap() > 0);
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for f in [&a, &b] {
        assert!(igl(&["gen", "triangulation", "40", "--seed", "7", "--weights", "rational:9:4", "--out", path(f)])
            .status
            .success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let text = String::from_utf8(igl(&["gen", "grid", "4", "4"]).stdout).unwrap();
    let parsed = igl_core::graph::io::parse_graph(&text).unwrap();
    let pg = igl_core::planar::PlaneGraph::from_parsed(&parsed).unwrap();
    assert_eq!(pg.n(), 16);
    assert_eq!(pg.to_text(), text);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 2\n0 1 1\n").unwrap();
    assert_eq!(igl(&["run", path(&bad)]).status.code(), Some(2));
    assert_eq!(igl(&["run", path(&dir.path().join("missing.txt"))]).status.code(), Some(2));
    let plain = dir.path().join("plain.txt");
    std::fs::write(&plain, "2 1\n0 1 1\n").unwrap();
    assert_eq!(igl(&["run", path(&plain), "--algorithm", "planar"]).status.code(), Some(2));
    let td = dir.path().join("wrong.td");
    std::fs::write(&td, "s td 1 1 2\nb 1 1\n").unwrap();
    assert_eq!(igl(&["run", path(&plain), "--algorithm", "treewidth", "--td", path(&td)]).status.code(), Some(3));
    assert_eq!(igl(&["run", path(&plain), "--kernel", "cubic"]).status.code(), Some(2));
}

#[test]
fn bench_rows() {
    let out = igl(&["bench", "treewidth-scaling", "--sizes", "64,128,256", "--runs", "1"]);
    assert!(out.status.success());
    let rows: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0]["ratio"].is_null());
    assert!(rows[1]["ratio"].as_f64().unwrap() > 0.0);
    assert_eq!(rows[0]["checksum_ok"], true);
    let out = igl(&["bench", "poly-micro", "--sizes", "100", "--runs", "1"]);
    let row: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(row["rel_diff"].as_f64().unwrap() < 1e-10);
}
