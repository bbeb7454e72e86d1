use std::fs;
use std::path::Path;
use std::process::Command;

use dimp8_cli::ResultRecord;

fn dimp8(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_dimp8")).args(args).output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const P5: &str = "p dim 5 4\nc path\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 4 5 1\n";
const C4: &str = "p dim 4 4\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 1 4 1\n";

#[test]
fn solve_found_and_none() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.dim", P5);
    let (out, _, code) = dimp8(&["solve", &p5, "--json", "--no-timing"]);
    assert_eq!(code, 0);
    let rec: ResultRecord = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(rec.status, "dim_found");
    assert_eq!(rec.weight, Some(dimp8_cli::WeightField::Finite(2)));

    let c4 = write(dir.path(), "c4.dim", C4);
    let (out, _, code) = dimp8(&["solve", &c4]);
    assert_eq!(code, 1);
    assert!(out.starts_with("status: no_dim"));
}

#[test]
fn oracle_agrees_with_solve() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.dim", P5);
    let (a, _, _) = dimp8(&["solve", &p5, "--json", "--no-timing"]);
    let (b, _, code) = dimp8(&["oracle", &p5, "--json", "--no-timing"]);
    assert_eq!(code, 0);
    let a: ResultRecord = serde_json::from_str(a.trim()).unwrap();
    let b: ResultRecord = serde_json::from_str(b.trim()).unwrap();
    assert_eq!((a.status, a.weight), (b.status, b.weight));
}

#[test]
fn check_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.dim", P5);
    let good = write(dir.path(), "good.m", "e 1 2\ne 4 5\n");
    let (out, _, code) = dimp8(&["check", &p5, "--matching", &good]);
    assert_eq!((out.as_str(), code), ("ok: dominating induced matching, weight 2\n", 0));

    let adjacent = write(dir.path(), "adj.m", "e 1 2\ne 3 4\n");
    let (out, _, code) = dimp8(&["check", &p5, "--matching", &adjacent]);
    assert_eq!(code, 1);
    assert!(out.starts_with("violation: not an induced matching"), "{out}");

    let short = write(dir.path(), "short.m", "e 1 2\n");
    let (out, _, code) = dimp8(&["check", &p5, "--matching", &short]);
    assert_eq!(code, 1);
    assert_eq!(out, "violation: edge (3,4) count 0\n");
}

#[test]
fn malformed_input_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.dim", "p dim 3 2\ne 1 2 1\ne 1 9 1\n");
    let (out, err, code) = dimp8(&["solve", &bad]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 3"), "{err}");

    let (_, _, code) = dimp8(&["solve", "/nonexistent/graph.dim"]);
    assert_eq!(code, 2);
    let (_, _, code) = dimp8(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn gen_is_reproducible_and_solvable() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gen", "--kind", "planted", "--n", "30", "--seed", "7", "--wmax", "5"];
    let (a, _, code) = dimp8(&args);
    assert_eq!(code, 0);
    let (b, _, _) = dimp8(&args);
    assert_eq!(a, b);
    assert!(a.contains("c generator chacha8 seed 7"));
    let planted: u64 = a
        .lines()
        .find_map(|l| l.strip_prefix("c planted weight "))
        .unwrap()
        .parse()
        .unwrap();
    let path = write(dir.path(), "g.dim", &a);
    let (out, _, code) = dimp8(&["solve", &path, "--json"]);
    assert_eq!(code, 0);
    let rec: ResultRecord = serde_json::from_str(out.trim()).unwrap();
    match rec.weight {
        Some(dimp8_cli::WeightField::Finite(w)) => assert!(w <= planted),
        other => panic!("{other:?}"),
    }

    let (out, _, code) = dimp8(&["gen", "--kind", "named", "--family", "cycle", "--n", "6"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("p dim 6 6\n"));
    let (_, _, code) = dimp8(&["gen", "--kind", "named", "--n", "6"]);
    assert_eq!(code, 2);
}

#[test]
fn bench_groups_by_size() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    let inst_s = inst.to_string_lossy().into_owned();
    for (n, p) in [("12", "0.3"), ("20", "0.6")] {
        let (_, _, code) = dimp8(&[
            "gen", "--kind", "random", "--n", n, "--p", p, "--count", "3", "--out", &inst_s,
        ]);
        assert_eq!(code, 0);
    }
    let (out, _, code) = dimp8(&["bench", &inst_s, "--no-timing"]);
    assert_eq!(code, 0);
    let mut parts = out.split("\n\n");
    let rows: Vec<&str> = parts.next().unwrap().lines().collect();
    assert_eq!(rows[0], "instance,n,m,status,weight,millis");
    assert_eq!(rows.len(), 7);
    let summary: Vec<&str> = parts.next().unwrap().lines().collect();
    assert_eq!(
        summary,
        ["n,instances,median_millis,max_millis", "12,3,0,0", "20,3,0,0"]
    );
}
