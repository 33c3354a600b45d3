use starprod_core::verify::{CheckKind, KernelFamily};
use starprod_core::{run_suite, Error, Suite, VerifyOptions};

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        assert_eq!(s.to_string(), s.name());
    }
    assert!(matches!("nope".parse::<Suite>(), Err(Error::InvalidConfig(_))));
    assert_eq!("photon".parse::<KernelFamily>().unwrap(), KernelFamily::Photon);
    assert!("weyl".parse::<KernelFamily>().is_err());
}

#[test]
fn options_are_validated() {
    let small = VerifyOptions { dim: Some(4), ..Default::default() };
    assert!(matches!(run_suite(Suite::KernelRelation, &small), Err(Error::InvalidDimension { dim: 4, min: 8 })));
    let zero = VerifyOptions { tolerance: Some(0.0), ..Default::default() };
    assert!(run_suite(Suite::KernelRelation, &zero).is_err());
}

#[test]
fn kernel_relation_report() {
    let r = run_suite(Suite::KernelRelation, &VerifyOptions::default()).unwrap();
    assert!(r.pass, "{}", r.to_json());
    assert_eq!(r.suite, "kernel-relation");
    assert_eq!(r.failed().count(), 0);

    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["suite"], "kernel-relation");
    assert_eq!(json["pass"], true);
    let checks = json["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "value", "tolerance", "pass", "kind"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn tolerance_override_tightens_accuracy_gates() {
    let opts = VerifyOptions { tolerance: Some(1e-300), ..Default::default() };
    let r = run_suite(Suite::ClosedForms, &opts).unwrap();
    assert!(!r.pass);
    assert!(r.failed().all(|c| c.tolerance == 1e-300));
}

#[test]
fn seed_changes_samples_but_not_verdict() {
    let a = run_suite(Suite::KernelRelation, &VerifyOptions { seed: 1, ..Default::default() }).unwrap();
    let b = run_suite(Suite::KernelRelation, &VerifyOptions { seed: 2, ..Default::default() }).unwrap();
    assert!(a.pass && b.pass);
    let again = run_suite(Suite::KernelRelation, &VerifyOptions { seed: 1, ..Default::default() }).unwrap();
    let va: Vec<f64> = a.checks.iter().map(|c| c.value).collect();
    let vr: Vec<f64> = again.checks.iter().map(|c| c.value).collect();
    assert_eq!(va, vr);
}

#[test]
fn groenewold_reports_prefactor_flag() {
    let r = run_suite(Suite::Groenewold, &VerifyOptions::default()).unwrap();
    assert!(r.pass, "{}", r.to_json());
    assert!(r.flags.iter().any(|f| f.contains("prefactor")));
    assert!(r.checks.iter().any(|c| c.kind == CheckKind::Diagnostic));
}

#[test]
fn photon_kernel_flags_closed_form() {
    let r = run_suite(Suite::PhotonKernel, &VerifyOptions::default()).unwrap();
    assert!(r.pass, "{}", r.to_json());
    assert!(r.flags.iter().any(|f| f.contains("closed-form photon kernel")));
}

#[test]
fn fast_suites_pass() {
    for s in [Suite::ClosedForms, Suite::HermiteLaguerre, Suite::SymplecticKernel, Suite::Transforms] {
        let r = run_suite(s, &VerifyOptions::default()).unwrap();
        assert!(r.pass, "{}", r.to_json());
    }
}
