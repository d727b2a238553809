use orbitrep::verify::{run_verify, Suite, VerifyOptions};

#[test]
fn full_battery_passes() {
    let report = run_verify(&VerifyOptions::default());
    for c in &report.checks {
        println!("{:>12} {:<55} cases={:<6} res={:.3e} tol={:.1e} {}", c.suite.name(), c.name, c.cases, c.max_residual, c.tolerance, if c.passed { "ok" } else { "FAIL" });
    }
    assert!(report.passed);
}

#[test]
fn report_is_deterministic() {
    let opts = VerifyOptions { suite: Suite::Fields, trials: 30, ..Default::default() };
    let a = serde_json::to_string(&run_verify(&opts)).unwrap();
    let b = serde_json::to_string(&run_verify(&opts)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn impossible_tolerance_fails_numeric_checks() {
    let opts = VerifyOptions { suite: Suite::LittleGroup, trials: 20, tol: Some(1e-30), ..Default::default() };
    let report = run_verify(&opts);
    assert!(!report.passed);
    assert!(report.checks.iter().all(|c| c.tolerance == 1e-30));
}

#[test]
fn suite_names_round_trip() {
    for s in [Suite::All, Suite::LittleGroup, Suite::Angular, Suite::Dirac, Suite::Poincare, Suite::Fields] {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("nope".parse::<Suite>().is_err());
}
