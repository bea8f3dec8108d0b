//! End-to-end runs of the `layercake` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn layercake(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_layercake"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn gen_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let o = layercake(&[&["gen"], args].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let path = dir.join(name);
    fs::write(&path, &o.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_is_deterministic() {
    let a = layercake(&[
        "gen",
        "--agents",
        "2",
        "--layers",
        "2",
        "--breakpoints",
        "0",
        "--seed",
        "1",
    ]);
    let b = layercake(&[
        "gen",
        "--agents",
        "2",
        "--layers",
        "2",
        "--breakpoints",
        "0",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn solve_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_to(
        dir.path(),
        "i.json",
        &[
            "--agents",
            "4",
            "--layers",
            "3",
            "--breakpoints",
            "8",
            "--seed",
            "7",
        ],
    );
    let out = dir.path().join("a.json");
    let svg = dir.path().join("a.svg");
    for p in ["ef-perfect", "prop-matching"] {
        let o = layercake(&[
            "solve",
            "--protocol",
            p,
            "--instance",
            &inst,
            "--out",
            out.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{p}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 4);
        assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
        let v = layercake(&[
            "verify",
            "--instance",
            &inst,
            "--allocation",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&v), 0, "{}", String::from_utf8_lossy(&v.stderr));
        let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
        assert_eq!(report["proportional"], true);
    }
}

#[test]
fn tampered_allocation_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_to(
        dir.path(),
        "i.json",
        &[
            "--agents",
            "2",
            "--layers",
            "2",
            "--breakpoints",
            "3",
            "--seed",
            "3",
        ],
    );
    let o = layercake(&["solve", "--protocol", "cut-and-choose", "--instance", &inst]);
    assert_eq!(code(&o), 0);
    let mut alloc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    alloc["agents"][0]["layers"] = serde_json::json!([[], []]);
    let path = dir.path().join("bad.json");
    fs::write(&path, alloc.to_string()).unwrap();
    let v = layercake(&[
        "verify",
        "--instance",
        &inst,
        "--allocation",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&v), 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_to(
        dir.path(),
        "i.json",
        &["--agents", "2", "--layers", "3", "--seed", "5"],
    );
    let o = layercake(&["solve", "--protocol", "prop-matching", "--instance", &inst]);
    assert_eq!(code(&o), 2);
    let three = gen_to(
        dir.path(),
        "t.json",
        &[
            "--agents",
            "3",
            "--layers",
            "2",
            "--breakpoints",
            "2",
            "--seed",
            "5",
        ],
    );
    let o = layercake(&["solve", "--protocol", "moving-knife", "--instance", &three]);
    assert_eq!(code(&o), 2);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"layers":[{"start":"0","end":"1"}],"agents":[{"name":"a","densities":[[{"to":"1","value":"-1"}]]}]}"#).unwrap();
    let o = layercake(&[
        "solve",
        "--protocol",
        "ef-perfect",
        "--instance",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3);
    let o = layercake(&["solve", "--protocol", "nope", "--instance", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let o = layercake(&[
        "bench",
        "--protocol",
        "prop-pow2",
        "--max-agents",
        "4",
        "--seed",
        "1",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "protocol,n,m,seed,short_eval,short_cut,long_eval,long_cut,reveal,micros,ok"
    );
    assert_eq!(lines.count(), 8);
    assert!(!text.contains(",false"));
}
