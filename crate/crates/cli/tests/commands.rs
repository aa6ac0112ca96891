use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn kfib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kfib-pillai"))
        .args(args)
        .env_remove("KFIB_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fib_prints_term() {
    let o = kfib(&["fib", "--k", "4", "--n", "13"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1490");
    assert_eq!(stdout(&kfib(&["fib", "--k", "3", "--n", "-1"])).trim(), "0");
}

#[test]
fn bad_usage_exits_2() {
    for args in [
        &["fib", "--k", "4"][..],
        &["search", "--k-min", "3", "--k-max", "5", "--n-max", "20"],
        &["search", "--k-min", "6", "--k-max", "5", "--n-max", "20"],
        &[
            "search",
            "--k-min",
            "4",
            "--k-max",
            "4",
            "--n-max",
            "20",
            "--modulus",
            "1",
        ],
        &["nonsense"],
    ] {
        assert_eq!(kfib(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn families_lists_verified_instances() {
    let o = kfib(&["families", "--k", "5", "--n-max", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let list = v.as_array().unwrap();
    assert!(list.iter().all(|f| f["verified"] == Value::Bool(true)));
    assert!(list.iter().any(|f| f["family"] == "iv" && f["c"] == "-255"));
}

#[test]
fn families_flags_unverified_statement_form() {
    let o = kfib(&["families", "--k", "4", "--n-max", "40"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f["verified"] == Value::Bool(false) && f["form"] == "statement"));
}

#[test]
fn search_jsonl_and_csv_agree() {
    let dir = tempfile::tempdir().unwrap();
    let jl = dir.path().join("s.jsonl");
    let cv = dir.path().join("s.csv");
    let base = ["search", "--k-min", "4", "--k-max", "4", "--n-max", "10"];
    let o = kfib(&[&base[..], &["--out", jl.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let o = kfib(
        &[
            &base[..],
            &["--mode", "naive", "--format", "csv", "--out", cv.to_str().unwrap()],
        ]
        .concat(),
    );
    assert_eq!(o.status.code(), Some(0));
    let recs: Vec<Value> = fs::read_to_string(&jl)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(recs.len(), 11);
    assert_eq!(recs.iter().filter(|r| r["c"] != "0").count(), 5);
    let csv = fs::read_to_string(&cv).unwrap();
    assert_eq!(csv.lines().count(), 12);
    assert!(csv.lines().next().unwrap().starts_with("k,c,n,m,n1,m1"));
}

#[test]
fn root_uses_cache_and_refuses_corrupt_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["root", "--k", "4", "--bits", "300", "--cache", d];
    let first: Value = serde_json::from_str(&stdout(&kfib(&args))).unwrap();
    let second: Value = serde_json::from_str(&stdout(&kfib(&args))).unwrap();
    assert_eq!(first["cache_hit"], Value::Bool(false));
    assert_eq!(second["cache_hit"], Value::Bool(true));
    assert_eq!(first["lo_exact"], second["lo_exact"]);
    let nocache: Value = serde_json::from_str(&stdout(&kfib(&[&args[..], &["--no-cache"]].concat()))).unwrap();
    assert_eq!(nocache["cache_hit"], Value::Null);
    assert_eq!(nocache["hi_exact"], first["hi_exact"]);

    let file = dir.path().join("root-k4-p300.kfc");
    fs::write(&file, "KFIBCACHE v1\nk 4\nbits 300\nlo zz p 0\nhi 1 p 1\n").unwrap();
    assert_eq!(kfib(&args).status.code(), Some(3));
}

#[test]
fn bounds_reports_chain() {
    let o = kfib(&["bounds", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["consistent"], Value::Bool(true));
    assert!(v["chain"].is_object());
}

#[test]
fn report_matches_families() {
    let o = kfib(&["report", "--k-min", "4", "--k-max", "6", "--n-max", "60"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn reduce_writes_cells_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let cells = dir.path().join("g1.jsonl");
    let args = [
        "reduce",
        "--case",
        "gamma1",
        "--k",
        "4",
        "--l-max",
        "3",
        "--bits",
        "300",
        "--m",
        "1000000",
        "--no-cache",
        "--cells",
        cells.to_str().unwrap(),
    ];
    let first = kfib(&args);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let text = fs::read_to_string(&cells).unwrap();
    assert!(!text.is_empty());
    let again = kfib(&args);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&cells).unwrap(), text);
    assert_eq!(stdout(&again), stdout(&first));
}
