use std::process::{Command, Output};

use orbitrep::angular::{CgRow, SixJRow};
use serde_json::Value;

fn orbitrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitrep")).args(args).env_remove("ORBITREP_CAP").output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = orbitrep(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn d_matrix(v: &Value) -> [[(f64, f64); 2]; 2] {
    std::array::from_fn(|r| std::array::from_fn(|c| (v["d"][r][c][0].as_f64().unwrap(), v["d"][r][c][1].as_f64().unwrap())))
}

#[test]
fn cg_highest_weight_is_one() {
    let v = json(&["cg", "--j1", "1", "--j2", "1", "--j", "2", "--m1", "1", "--m2", "1", "--m", "2"]);
    assert_eq!(v["value"], 1.0);
    assert_eq!((v["sign"].as_i64(), v["p"].as_str(), v["q"].as_str()), (Some(1), Some("1"), Some("1")));
}

#[test]
fn cg_singlet_condon_shortley_signs() {
    for (m1, m2, sign) in [("1", "-1", 1), ("-1", "1", -1)] {
        let v = json(&["cg", "--j1", "1", "--j2", "1", "--j", "0", "--m1", m1, "--m2", m2, "--m", "0"]);
        assert_eq!(v["sign"], sign);
        assert_eq!((v["p"].as_str(), v["q"].as_str()), (Some("1"), Some("2")));
        assert!((v["value"].as_f64().unwrap() - f64::from(sign) / 2f64.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn cg_table_round_trips() {
    let out = orbitrep(&["cg", "--j1", "2", "--j2", "1", "--format", "json"]);
    let rows: Vec<CgRow> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 10);
    let sum: f64 = rows.iter().filter(|r| r.two_j == 3 && r.two_m == 1).map(|r| r.value * r.value).sum();
    assert!((sum - 1.0).abs() < 1e-14);
}

#[test]
fn selection_rule_zero_exit_codes() {
    let args = ["sixj", "2", "2", "8", "2", "2", "2", "--format", "json"];
    let out = orbitrep(&args);
    assert_eq!(out.status.code(), Some(0));
    let row: SixJRow = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((row.sign, row.value), (0, 0.0));
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(orbitrep(&strict).status.code(), Some(2));
    let cg = ["--strict", "cg", "--j1", "1", "--j2", "1", "--j", "2", "--m1", "1", "--m2", "1", "--m", "0"];
    assert_eq!(orbitrep(&cg).status.code(), Some(2));
    let accidental = ["--strict", "cg", "--j1", "2", "--j2", "2", "--j", "2", "--m1", "0", "--m2", "0", "--m", "0", "--format", "json"];
    let out = orbitrep(&accidental);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap()["value"], 0.0);
    let fine = ["--strict", "sixj", "2", "2", "2", "2", "2", "2"];
    assert_eq!(orbitrep(&fine).status.code(), Some(0));
}

#[test]
fn malformed_input_exits_one() {
    for args in [
        vec!["sixj", "2", "2", "x", "2", "2", "2"],
        vec!["cg", "--j1", "1", "--j2", "1", "--j", "2", "--m1", "2", "--m2", "0", "--m", "2"],
        vec!["cg", "--j1", "1", "--j2", "1", "--j", "2"],
        vec!["cg", "--j1", "-1", "--j2", "1"],
        vec!["wigner-rot", "--n", "1,2"],
        vec!["nonsense"],
    ] {
        let out = orbitrep(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn wigner_rot_identity() {
    let v = json(&["wigner-rot"]);
    assert_eq!(d_matrix(&v), [[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (1.0, 0.0)]]);
    assert_eq!(v["unitarity_residual"], 0.0);
}

#[test]
fn wigner_rot_pure_rotation_at_rest_is_spinor_rotation() {
    let (theta, axis) = (1.2f64, [2.0f64 / 7.0, 3.0 / 7.0, 6.0 / 7.0]);
    let v = json(&["wigner-rot", "--axis", "2,3,6", "--angle", "1.2"]);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let want = [[(c, -s * axis[2]), (-s * axis[1], -s * axis[0])], [(s * axis[1], -s * axis[0]), (c, s * axis[2])]];
    let got = d_matrix(&v);
    for r in 0..2 {
        for k in 0..2 {
            assert!((got[r][k].0 - want[r][k].0).abs() < 1e-12 && (got[r][k].1 - want[r][k].1).abs() < 1e-12, "{got:?}");
        }
    }
    assert!((v["rotation_angle"].as_f64().unwrap() - theta).abs() < 1e-12);
}

#[test]
fn wigner_rot_boost_at_rest_is_trivial() {
    let v = json(&["wigner-rot", "--boost", "1,-2,0.5", "--rapidity", "1.3"]);
    let d = d_matrix(&v);
    let sign = d[0][0].0.signum();
    for r in 0..2 {
        for k in 0..2 {
            let want = if r == k { sign } else { 0.0 };
            assert!((d[r][k].0 - want).abs() < 1e-12 && d[r][k].1.abs() < 1e-12);
        }
    }
}

#[test]
fn wigner_rot_rejects_spacelike_and_rescales_timelike() {
    assert_eq!(orbitrep(&["wigner-rot", "--n", "0,1,0,0"]).status.code(), Some(1));
    let out = orbitrep(&["wigner-rot", "--n", "2,0,0,0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["renormalized"], true);
    assert_eq!(v["n"][0], 1.0);
}

#[test]
fn decompose_examples() {
    let two = json(&["decompose", "--spins", "2"]);
    assert_eq!(two["blocks"], serde_json::json!([{"two_s": 0, "multiplicity": 1, "dimension": 1}, {"two_s": 2, "multiplicity": 1, "dimension": 3}]));
    assert_eq!(two["counts"], serde_json::json!({"a": 1, "c": 2, "d": 1}));
    let three = json(&["decompose", "--spins", "3", "--trees", "unordered"]);
    assert_eq!(three["counts"], serde_json::json!({"a": 2, "c": 12, "d": 3}));
    assert_eq!(three["trees"].as_array().unwrap().len(), 3);
    let four = json(&["decompose", "--spins", "4", "--matrix"]);
    let top = four["blocks"].as_array().unwrap().iter().map(|b| b["dimension"].as_u64().unwrap()).max();
    assert_eq!(top, Some(5));
    assert_eq!(four["matrix"]["columns"].as_array().unwrap().len(), 16);
}

#[test]
fn decompose_honours_cap() {
    let run = |cap: &str| Command::new(env!("CARGO_BIN_EXE_orbitrep")).args(["decompose", "--spins", "5"]).env("ORBITREP_CAP", cap).output().unwrap();
    assert_eq!(run("16").status.code(), Some(1));
    assert_eq!(run("32").status.code(), Some(0));
    assert_eq!(orbitrep(&["decompose", "--spins", "11"]).status.code(), Some(1));
}

#[test]
fn field_diagnostics() {
    let wave = json(&["field", "--model", &data("null_wave.json"), "--at", "0.3,-0.2,0.1,0.7"]);
    for r in wave["maxwell_residual"].as_array().unwrap() {
        assert!(r.as_f64().unwrap().abs() < 1e-12);
    }
    assert!(wave["ff"].as_f64().unwrap().abs() < 1e-12);
    let b = json(&["field", "--model", &data("uniform_b.json"), "--at", "0,1,2,3"]);
    assert_eq!(b["magnetic"], serde_json::json!([0.0, 0.0, 1.0]));
    assert_eq!(b["electric"], serde_json::json!([0.0, 0.0, 0.0]));
    assert_eq!(orbitrep(&["field", "--model", &data("missing.json")]).status.code(), Some(1));
}

#[test]
fn verify_poincare_suite_contents() {
    let v = json(&["verify", "--suite", "poincare", "--trials", "20"]);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.iter().any(|n| n.contains("M_n closure")));
    assert!(names.iter().any(|n| n.contains("finite differences")));
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_unattainable_tolerance_fails_with_residuals() {
    let out = orbitrep(&["verify", "--suite", "little-group", "--trials", "10", "--tol", "1e-30", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).any(|l| l.ends_with(",FAIL")));
    assert!(text.contains("1e-30"));
}

#[test]
fn outputs_are_byte_stable() {
    for args in [
        vec!["cg", "--j1", "3", "--j2", "2", "--format", "csv"],
        vec!["cg", "--j1", "3", "--j2", "2", "--format", "json"],
        vec!["ninej", "1", "1", "2", "1", "1", "2", "2", "2", "4", "--format", "json"],
        vec!["decompose", "--spins", "4", "--matrix", "--trees", "shapes", "--format", "json"],
        vec!["wigner-rot", "--rapidity", "0.4", "--boost", "0,1,1", "--n", "1.25,0,0.75,0", "--format", "csv"],
        vec!["verify", "--suite", "fields", "--trials", "15", "--format", "json"],
    ] {
        let (a, b) = (orbitrep(&args), orbitrep(&args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn golden_tables_match() {
    let root = env!("CARGO_MANIFEST_DIR");
    for (args, path) in [
        (vec!["cg", "--j1", "3", "--j2", "2", "--format", "csv"], format!("{root}/tests/golden/cg_3_2.csv")),
        (vec!["decompose", "--spins", "4", "--matrix", "--trees", "shapes", "--format", "json"], format!("{root}/tests/golden/decompose_4.json")),
        (vec!["cg", "--j1", "2", "--j2", "1", "--format", "json"], format!("{root}/../core/tests/golden/cg_2_1.json")),
    ] {
        let golden = std::fs::read(&path).expect("golden file");
        assert_eq!(orbitrep(&args).stdout, golden, "{path}");
    }
}
