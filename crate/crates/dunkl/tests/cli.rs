use std::process::{Command, Output};

use serde_json::Value;

use dunkl::text::{format_poly, parse_poly};

fn dunkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dunkl")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout={} stderr={}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &Value) {
    let s = schema();
    let errors: Vec<String> = s.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

const Z2: [&str; 6] = ["--family", "z2", "--d", "2", "--kappa", "1/2,1/2"];

fn with_z2<'a>(head: &[&'a str], tail: &[&'a str]) -> Vec<&'a str> {
    head.iter().chain(Z2.iter()).chain(tail).copied().collect()
}

#[test]
fn gegenbauer_three_is_not_fundamental() {
    let out = dunkl(&with_z2(&["check-fundamental"], &["--g", "gegenbauer:3"]));
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_valid(&v);
    let w: Vec<u64> = v["result"]["witnesses"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert!(w.contains(&0));
    assert!(!w.contains(&3));
    assert_eq!(v["result"]["overall"], "not-fundamental");
    assert_eq!(v["result"]["lambda"]["exact"], "1");
}

#[test]
fn exp_is_fundamental_at_low_order() {
    let out = dunkl(&with_z2(&["check-fundamental"], &["--g", "exp", "--nmax", "8"]));
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_valid(&v);
    assert_eq!(v["result"]["overall"], "fundamental-up-to-8");
    assert_eq!(v["result"]["route"], "quadrature");
}

#[test]
fn kernel_check_example_passes() {
    let out = dunkl(&with_z2(&["kernel-check"], &["--nmax", "6"]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_valid(&v);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["residual"].as_f64().unwrap() <= 1e-9));
}

#[test]
fn expand_odd_cubic_has_parity_zeros() {
    let out = dunkl(&["expand", "--lambda", "1", "--g", "poly:0,0,0,1", "--nmax", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_valid(&v);
    let c = v["result"]["coefficients"].as_array().unwrap();
    for n in [0, 2, 4, 5] {
        assert_eq!(c[n]["exact"], "0", "b_{n}");
    }
    for n in [1, 3] {
        assert_ne!(c[n]["exact"], "0", "b_{n}");
    }
    // t^3 = (C_3 + 2 C_1)/8 at lambda = 1, and C_n enters with weight (n + 1) b_n
    assert_eq!(c[3]["exact"], "1/32");
}

#[test]
fn expand_writes_csv() {
    let out = dunkl(&["expand", "--lambda", "1/2", "--g", "abs", "--nmax", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(lines[0], "n,b_n");
    assert_eq!(lines.len(), 6);
    // odd Legendre coefficients of |t| vanish
    let b1: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!(b1.abs() < 1e-14);
    let b0: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((b0 - 0.5).abs() < 1e-14);
}

#[test]
fn dunkl_apply_matches_hand_computation() {
    // D_1 x1 = 1 + 2 kappa_1, D_2 x1 = 0; D_1 x1^2 = 2 x1
    let out = dunkl(&with_z2(&["dunkl-apply"], &["--poly", "x1", "--format", "text"]));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "D1 p = 2\nD2 p = 0\n");
    let out = dunkl(&with_z2(&["dunkl-apply"], &["--poly", "x1^2", "--axis", "1"]));
    let v = json_of(&out);
    assert_valid(&v);
    assert_eq!(v["result"]["results"][0]["output"], "2*x1");
}

#[test]
fn dunkl_apply_output_parses_back() {
    let out = dunkl(&with_z2(&["dunkl-apply"], &["--poly", "3*x1^3*x2^2 - 1/5*x2^3 + x1", "--laplacian"]));
    let v = json_of(&out);
    let s = v["result"]["results"][0]["output"].as_str().unwrap();
    let p = parse_poly(s, 2).unwrap();
    assert_eq!(format_poly(&p), s);
}

#[test]
fn dihedral_three_is_computed_over_sqrt3() {
    // the sqrt3 parts from the two oblique roots cancel: D_2 x1^2 = -3/2 x2
    let out = dunkl(&["dunkl-apply", "--family", "dihedral", "--m", "3", "--kappa", "1", "--poly", "x1^2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["results"][1]["output"], "-3/2*x2");
}

#[test]
fn exact_commands_refuse_inexact_groups() {
    let out = dunkl(&["intertwine", "--family", "dihedral", "--m", "5", "--kappa", "1", "--nmax", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exact"));
}

#[test]
fn intertwine_dumps_rational_matrices() {
    let out = dunkl(&with_z2(&["intertwine"], &["--nmax", "3", "--poly", "x1"]));
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_valid(&v);
    let r = &v["result"];
    assert_eq!(r["relation_holds"], true);
    assert_eq!(r["degrees"].as_array().unwrap().len(), 4);
    // V x1 = x1 / (1 + 2 kappa_1)
    assert_eq!(r["degrees"][1]["matrix"][0][0], "1/2");
    assert_eq!(r["image"]["output"], "1/2*x1");
}

#[test]
fn rule_exports_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rule.csv");
    let p = path.to_str().unwrap();
    let out = dunkl(&with_z2(&["rule"], &["--degree", "10", "--export", p]));
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_valid(&v);
    assert!(v["result"]["certificate_max_error"].as_f64().unwrap() < 1e-13);
    assert!((v["result"]["sigma"].as_f64().unwrap() - 2.0).abs() < 1e-13);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,weight"));
    let total: f64 = lines.map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-13);
}

#[test]
fn harmonics_prints_basis_and_residual() {
    let out = dunkl(&with_z2(&["harmonics"], &["--degree", "3", "--format", "text"]));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // dim A_3 = 2 in two variables
    assert_eq!(lines.len(), 3);
    for l in &lines[..2] {
        parse_poly(l, 2).unwrap();
    }
    assert!(lines[2].starts_with("gram_residual = "));
}

#[test]
fn validate_roots_reports_violations() {
    let out = dunkl(&["validate-roots", "--family", "custom", "--roots", "1,0;0,1;0,-1", "--kappa", "1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_valid(&v);
    let kinds: Vec<&str> = v["result"]["violations"].as_array().unwrap().iter().map(|x| x["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"axiom1-missing-negative"), "{kinds:?}");

    let out = dunkl(&["validate-roots", "--family", "dihedral", "--m", "4", "--kappa", "1/2,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["group_order"], 8);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"family":"z2","d":2,"kappa":["1/2","1/2"],"g":"exp","nmax":40}"#).unwrap();
    let out = dunkl(&["check-fundamental", "--config", path.to_str().unwrap(), "--nmax", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_valid(&v);
    assert_eq!(v["config"]["nmax"], 5);
    assert_eq!(v["config"]["g"], "exp");
    assert_eq!(v["result"]["coefficients"].as_array().unwrap().len(), 6);
}

#[test]
fn bad_input_exits_one_with_diagnostic() {
    for args in [
        vec!["expand", "--lambda", "1", "--g", "sin"],
        vec!["dunkl-apply", "--family", "z2", "--d", "2", "--kappa", "1,1", "--poly", "x3"],
        vec!["check-fundamental", "--family", "z2", "--d", "2", "--kappa", "0,0", "--g", "exp"],
        vec!["expand", "--lambda", "abc", "--g", "exp"],
        vec!["cesaro", "--lambda", "1", "--g", "exp", "--format", "csv"],
    ] {
        let out = dunkl(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "), "{args:?}");
    }
}

#[test]
fn cesaro_reports_uniform_error() {
    let out = dunkl(&["cesaro", "--lambda", "1", "--g", "abs", "--nmax", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_valid(&v);
    assert_eq!(v["result"]["delta"], 2.0);
    let e = v["result"]["uniform_error"].as_f64().unwrap();
    assert!(e > 0.0 && e < 0.2, "{e}");
}

#[test]
fn reports_are_reproducible() {
    let args = with_z2(&["kernel-check"], &["--nmax", "3", "--samples", "20", "--seed", "7"]);
    assert_eq!(dunkl(&args).stdout, dunkl(&args).stdout);
    let other = with_z2(&["kernel-check"], &["--nmax", "3", "--samples", "20", "--seed", "8"]);
    assert_ne!(dunkl(&args).stdout, dunkl(&other).stdout);
}
