use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn so5cg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_so5cg")).args(args).env_remove("SO5_STORE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for sub in ["", "records"] {
        for e in fs::read_dir(root.join(sub)).unwrap() {
            let p = e.unwrap().path();
            if p.is_file() {
                out.insert(p.strip_prefix(root).unwrap().display().to_string(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn couple_small_block() {
    let o = so5cg(&[
        "couple",
        "--g1",
        "(1/2,1/2)",
        "--g2",
        "(1/2,0)",
        "--g",
        "(1/2,0)",
        "--chain",
        "so4",
        "--format",
        "text",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let values: Vec<&str> = text.lines().skip(2).map(|l| l.split_whitespace().last().unwrap()).collect();
    assert_eq!(values, ["-sqrt(1/5)", "-sqrt(4/5)", "+sqrt(1/5)", "+sqrt(4/5)"]);
}

#[test]
fn couple_isospin_table() {
    let o = so5cg(&[
        "couple", "--g1", "(1,0)", "--g2", "(1,1/2)", "--g", "(1,1/2)", "--chain", "isospin", "--format", "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 33);
    assert_eq!(lines[0], "ms1,ms2,ms,t1,t2,t,rho1,rho2");
    assert_eq!(lines[1], "1,1/2,3/2,1,1/2,1/2,+sqrt(1/3),+sqrt(1/7)");
}

#[test]
fn identity_coupling_is_all_ones() {
    let o = so5cg(&["couple", "--g1", "(0,0)", "--g2", "(1,0)", "--g", "(1,0)", "--format", "csv"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",+sqrt(1)")));
}

#[test]
fn float_output_digits() {
    let o = so5cg(&[
        "couple",
        "--g1",
        "(1/2,1/2)",
        "--g2",
        "(1/2,0)",
        "--g",
        "(1/2,0)",
        "--format",
        "float",
        "--digits",
        "30",
    ]);
    assert!(stdout(&o).contains("-0.447213595499957939281834733746"));
    let o = so5cg(&[
        "couple",
        "--g1",
        "(1/2,1/2)",
        "--g2",
        "(1/2,0)",
        "--g",
        "(1/2,0)",
        "--format",
        "float",
        "--digits",
        "31",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(so5cg(&["couple", "--g1", "(1,x)", "--g2", "(0,0)", "--g", "(0,0)"]).status.code(), Some(2));
    assert_eq!(so5cg(&["couple", "--g1", "(1,0)", "--g2", "(0,0)", "--g", "(1/2,0)"]).status.code(), Some(3));
    assert_eq!(so5cg(&["branch", "--g", "(0,1)"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("file");
    fs::write(&file, "").unwrap();
    let blocked = file.join("store");
    let o = so5cg(&["tabulate", "--max-r", "1/2", "--store", blocked.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(so5cg(&["verify", "--store", blocked.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn branch_listings() {
    let o = so5cg(&["branch", "--g", "(7/2,3/2)", "--chain", "isospin", "--ms", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "ms,t,multiplicity\n2,1,2\n2,2,2\n2,3,2\n2,4,1\n2,5,1\n");
    let o = so5cg(&["branch", "--g", "(1/2,0)", "--chain", "so4", "--format", "csv"]);
    assert_eq!(stdout(&o), "xy\n\"(0,1/2)\"\n\"(1/2,0)\"\n");
    let o = so5cg(&["branch", "--g", "(1,0)", "--chain", "angmom", "--format", "csv"]);
    assert_eq!(stdout(&o), "l,multiplicity\n1,1\n3,1\n");
    let o = so5cg(&["branch", "--g", "(1,1/2)", "--chain", "isospin", "--ms", "-1/2", "--format", "csv"]);
    assert_eq!(stdout(&o), "ms,t,multiplicity\n-1/2,1/2,1\n-1/2,3/2,1\n");
}

#[test]
fn brackets_listing_contains_worked_vectors() {
    let o = so5cg(&["brackets", "--g", "(1,1/2)", "--chain", "isospin", "--format", "csv"]);
    let text = stdout(&o);
    for line in [
        "1/2,3/2,1,3/2,\"(1,1/2)\",1,-1/2,+sqrt(1)",
        "1/2,3/2,1,1/2,\"(1/2,0)\",1/2,0,+sqrt(5/6)",
        "1/2,3/2,1,1/2,\"(1/2,1)\",1/2,0,+sqrt(1/6)",
        "1/2,1/2,1,1/2,\"(1/2,0)\",1/2,0,+sqrt(1/6)",
        "1/2,1/2,1,1/2,\"(1/2,1)\",1/2,0,-sqrt(5/6)",
    ] {
        assert!(text.lines().any(|l| l == line), "missing {line}");
    }
}

#[test]
fn transform_matches_direct_couple() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("block.json");
    let o = so5cg(&[
        "couple",
        "--g1",
        "(1,0)",
        "--g2",
        "(1/2,1/2)",
        "--g",
        "(1/2,1/2)",
        "--format",
        "json",
        "-o",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    for chain in ["isospin", "angmom"] {
        let direct = so5cg(&[
            "couple",
            "--g1",
            "(1,0)",
            "--g2",
            "(1/2,1/2)",
            "--g",
            "(1/2,1/2)",
            "--chain",
            chain,
            "--format",
            "csv",
        ]);
        let via = so5cg(&["transform", "--input", json.to_str().unwrap(), "--chain", chain, "--format", "csv"]);
        assert!(via.status.success());
        assert_eq!(stdout(&direct), stdout(&via));
    }
}

#[test]
fn tabulate_is_deterministic_and_cached() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, jobs) in [(&a, "1"), (&b, "8")] {
        let o = so5cg(&[
            "tabulate",
            "--max-r",
            "1",
            "--chain",
            "so4",
            "--jobs",
            jobs,
            "--store",
            dir.path().to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(tree(a.path()), tree(b.path()));
    let o = Command::new(env!("CARGO_BIN_EXE_so5cg"))
        .args(["tabulate", "--max-r", "1", "--chain", "so4"])
        .env("SO5_STORE", a.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("0 computed"));
    assert_eq!(tree(a.path()), tree(b.path()));
}

#[test]
fn verify_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().to_str().unwrap();
    assert!(so5cg(&["tabulate", "--max-r", "1/2", "--store", store]).status.success());
    assert_eq!(so5cg(&["verify", "--store", store]).status.code(), Some(0));
    let record = fs::read_dir(dir.path().join("records"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| fs::read_to_string(p).unwrap().contains("-sqrt(4/5)"));
    let record = record.unwrap();
    let text = fs::read_to_string(&record).unwrap();
    fs::write(&record, text.replacen("-sqrt(4/5)", "+sqrt(4/5)", 1)).unwrap();
    let o = so5cg(&["verify", "--store", store]);
    assert_eq!(o.status.code(), Some(1));
    let report = stdout(&o);
    assert!(report.contains("hash mismatch"));
    assert!(report.contains("bra-sum") || report.contains("violates row"), "{report}");
}

#[test]
fn couple_uses_the_store() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().to_str().unwrap();
    let args = ["couple", "--g1", "(1/2,0)", "--g2", "(1/2,0)", "--g", "(1,0)", "--store", store];
    let first = so5cg(&args);
    assert!(first.status.success());
    assert_eq!(fs::read_dir(dir.path().join("records")).unwrap().count(), 1);
    assert_eq!(stdout(&so5cg(&args)), stdout(&first));
}
