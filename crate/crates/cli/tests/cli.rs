use std::process::{Command, Output};

use bvis_core::{is_visible_int, ExponentVector, LatticePoint};
use serde_json::Value;

fn bvis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvis"))
        .args(args)
        .env_remove("BVIS_BRUTE_LIMIT")
        .output()
        .expect("spawn bvis")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(args: &[&str]) -> i32 {
    bvis(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = bvis(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    serde_json::from_str(stdout(&o).trim()).unwrap()
}

#[test]
fn check_worked_example() {
    let o = bvis(&["check", "--b", "2,4,3,7", "--point", "4,16,40,128"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("invisible"), "{s}");
    assert!(s.contains("witness p=2"));
    assert!(s.contains("image (1,1,5,1)"));
    assert!(s.contains("oracle image (1,1,5,1)"));
}

#[test]
fn check_verdicts() {
    assert_eq!(
        stdout(&bvis(&["check", "--b", "1,1", "--point", "1,1"])).trim(),
        "visible"
    );
    let v = json(&["check", "--b", "1,-2", "--point", "5,4", "--format", "json"]);
    assert_eq!(v["case"], "signed");
    assert_eq!(v["visible"], false);
    assert_eq!(v["witness"], "2");
    let v = json(&[
        "check", "--b", "1/2,1/2", "--point", "2,4", "--format", "json",
    ]);
    assert_eq!(v["visible"], false);
    let v = json(&[
        "check", "--b", "1/2,1/2", "--point", "2,3", "--format", "json",
    ]);
    assert_eq!(v["visible"], true);
}

#[test]
fn check_expanded_coordinates() {
    // (2/3,1/2): α = 6, lattice exponents (2,3); (4,27) has base (2,3).
    let v = json(&[
        "check",
        "--b",
        "2/3,1/2",
        "--point",
        "4,27",
        "--expanded",
        "--format",
        "json",
    ]);
    assert_eq!(v["base"], serde_json::json!(["2", "3"]));
    assert_eq!(
        code(&["check", "--b", "2/3,1/2", "--point", "5,27", "--expanded"]),
        2
    );
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["check", "--b", "1,1", "--point", "1,2,3"]), 2);
    assert_eq!(code(&["check", "--b", "1,x", "--point", "1,2"]), 2);
    assert_eq!(code(&["density", "--b", "1,1", "--N", "0"]), 2);
    assert_eq!(code(&["density", "--b", "1,1"]), 2);
    assert_eq!(
        code(&["density", "--b", "2,4", "--N", "10", "--case", "rat"]),
        3
    );
    assert_eq!(code(&["density", "--b", "2/3,4/3", "--N", "10"]), 3);
    assert_eq!(code(&["zeta", "--s", "1"]), 3);
    assert_eq!(
        code(&["sieve", "--b", "1,1", "--N", "10", "--limit", "10"]),
        4
    );
    assert_eq!(
        code(&["count", "--b", "1,1", "--N", "4", "--box", "2,2"]),
        2
    );
    assert_eq!(
        code(&["count", "--b", "1,1", "--N", "100000000000000000000000"]),
        4
    );
    assert_eq!(code(&["zeta", "--s", "3"]), 0);
}

#[test]
fn brute_limit_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_bvis"))
        .args(["sieve", "--b", "1,1", "--N", "4"])
        .env("BVIS_BRUTE_LIMIT", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn density_json_round_trip() {
    for (b, n) in [
        ("1,1", "1000"),
        ("2,3", "500"),
        ("1/2,1/2", "100"),
        ("3,-2,-3", "50"),
        ("2/3,1/2", "64"),
    ] {
        let v = json(&["density", "--b", b, "--N", n, "--format", "json"]);
        let emp = v["empirical"].as_f64().unwrap();
        let theo = v["theoretical"].as_f64().unwrap();
        let err = v["abs_error"].as_f64().unwrap();
        assert!(((emp - theo).abs() - err).abs() <= 1e-12, "{b}");
        let visible: f64 = v["visible"].as_str().unwrap().parse().unwrap();
        let total: f64 = v["total"].as_str().unwrap().parse().unwrap();
        assert!((visible / total - emp).abs() <= 1e-15);
    }
}

#[test]
fn density_without_theoretical_value() {
    let v = json(&[
        "density", "--b", "1,2", "--N", "10", "--case", "signed", "--format", "json",
    ]);
    assert_eq!(v["visible"], "100");
    assert!(v["theoretical"].is_null() && v["abs_error"].is_null());
}

#[test]
fn csv_matches_json() {
    for (b, n) in [("1,1", "1000"), ("2/3,1/2", "64"), ("1,-2", "100")] {
        let j = json(&["density", "--b", b, "--N", n, "--format", "json"]);
        let o = bvis(&["density", "--b", b, "--N", n, "--format", "csv"]);
        assert!(o.status.success());
        let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
        let headers = rdr.headers().unwrap().clone();
        let keys: Vec<&str> = j.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(headers.iter().collect::<Vec<_>>(), keys);
        let row = rdr.records().next().unwrap().unwrap();
        for (k, field) in headers.iter().zip(row.iter()) {
            match &j[k] {
                Value::Number(x) => {
                    assert_eq!(x.as_f64().unwrap(), field.parse::<f64>().unwrap(), "{k}")
                }
                Value::String(s) => assert_eq!(s, field, "{k}"),
                Value::Array(a) => {
                    let joined: Vec<&str> = a.iter().map(|x| x.as_str().unwrap()).collect();
                    assert_eq!(joined.join(" "), field, "{k}");
                }
                Value::Null => assert_eq!(field, "", "{k}"),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn density_reduction_warning() {
    let o = bvis(&["density", "--b", "2,4", "--N", "100", "--format", "json"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("b'=(1,2)"), "{}", stderr(&o));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["exponent_sum"], 3);
    let reduced = json(&["density", "--b", "1,2", "--N", "100", "--format", "json"]);
    assert_eq!(v["visible"], reduced["visible"]);
}

#[test]
fn rational_density_box() {
    let v = json(&["density", "--b", "2/3,1/2", "--N", "64", "--format", "json"]);
    assert_eq!(v["box"], serde_json::json!(["8", "4"]));
    assert_eq!(v["visible"], "28");
    let v = json(&[
        "density", "--b", "1/2,1/2", "--N", "100", "--format", "json",
    ]);
    assert_eq!(v["box"], serde_json::json!(["100", "100"]));
}

/// Visible points of `[1,n]²` by direct enumeration.
fn oracle_rows(b: &[u32], n: u64) -> Vec<String> {
    let b = ExponentVector::new(b.to_vec()).unwrap();
    let mut rows = Vec::new();
    for x in 1..=n {
        for y in 1..=n {
            if is_visible_int(&LatticePoint::new(vec![x, y]).unwrap(), &b).unwrap() {
                rows.push(format!("({x},{y})"));
            }
        }
    }
    rows
}

#[test]
fn sieve_rows() {
    let s = stdout(&bvis(&["sieve", "--b", "1,1", "--N", "3"]));
    let rows: Vec<&str> = s.lines().collect();
    assert_eq!(rows, oracle_rows(&[1, 1], 3));
    assert_eq!(rows.len(), 7);

    let s = stdout(&bvis(&["sieve", "--b", "2,3", "--N", "8"]));
    assert_eq!(s.lines().count(), 62);
    assert!(!s.lines().any(|l| l == "(4,8)" || l == "(8,8)"));
    assert_eq!(s.lines().collect::<Vec<_>>(), oracle_rows(&[2, 3], 8));

    assert_eq!(
        stdout(&bvis(&["sieve", "--b", "1", "--N", "5"])).trim(),
        "(1)"
    );
}

#[test]
fn sieve_rational_rows_are_expanded() {
    let o = bvis(&["sieve", "--b", "2/3,1/2", "--N", "64", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 28);
    for r in &rows {
        let p: Vec<u64> = r[0].split(' ').map(|x| x.parse().unwrap()).collect();
        let l: Vec<u64> = r[1].split(' ').map(|x| x.parse().unwrap()).collect();
        assert_eq!(p, [l[0].pow(2), l[1].pow(3)]);
        assert!(p.iter().all(|&c| c <= 64));
    }
}

#[test]
fn count_box_and_n() {
    let v = json(&[
        "count", "--b", "2/3,1/2", "--box", "8,4", "--format", "json",
    ]);
    assert_eq!(v["visible"], "28");
    assert_eq!(v["total"], "32");
    let v = json(&["count", "--b", "1,1", "--N", "10", "--format", "json"]);
    assert_eq!(v["visible"], "63");
}

#[test]
fn zeta_output() {
    let v = json(&[
        "zeta",
        "--s",
        "2",
        "--tol",
        "1e-9",
        "--prime-limit",
        "100000",
        "--format",
        "json",
    ]);
    let exact = std::f64::consts::PI.powi(2) / 6.0;
    assert!(v["value"].as_f64().unwrap() <= exact && exact <= v["upper"].as_f64().unwrap());
    assert!((v["euler_product"].as_f64().unwrap() - exact).abs() < 1e-4);
}

#[test]
fn verify_reports_every_check() {
    let o = bvis(&["verify", "--format", "json"]);
    let rows: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 9);
    let all_passed = rows.iter().all(|r| r["passed"] == true);
    assert_eq!(o.status.success(), all_passed);
    if !all_passed {
        assert_eq!(o.status.code(), Some(1));
    }
}
