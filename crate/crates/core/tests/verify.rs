use std::collections::HashSet;

use g2hitchin::curve::CurveParams;
use g2hitchin::verify::{check_ids, run_check, run_suite, Status, Suite, VerifyConfig, CHECKS};

#[test]
fn check_ids_are_unique_and_cover_every_suite() {
    let ids: HashSet<&str> = CHECKS.iter().map(|c| c.id).collect();
    assert_eq!(ids.len(), CHECKS.len());
    let all = check_ids(Suite::All);
    assert_eq!(all.len(), CHECKS.len());
    for s in Suite::NAMED {
        assert!(!check_ids(s).is_empty(), "{s}");
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        if s != Suite::All {
            assert!(check_ids(s).iter().all(|id| id.starts_with(&format!("{}.", s.name()))));
        }
    }
    assert!("geometry".parse::<Suite>().is_err());
}

#[test]
fn reports_are_reproducible_and_tallied() {
    let cfg = VerifyConfig { seed: 9, samples: 10, ..VerifyConfig::default() };
    let a = run_suite(Suite::Torsion, &cfg);
    let b = run_suite(Suite::Torsion, &cfg);
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.summary.total, a.checks.len());
    assert_eq!(a.summary.pass + a.summary.fail + a.summary.skipped, a.summary.total);
    assert!(a.checks.iter().all(|c| c.elapsed_ms.is_none()));
    assert!(a.all_passed());
    let other = run_suite(Suite::Torsion, &VerifyConfig { seed: 10, ..cfg.clone() });
    assert_ne!(a.to_json(), other.to_json());
}

#[test]
fn fixed_parameters_reach_the_sampled_checks() {
    let params = CurveParams::from_ints(2, 3, 5).unwrap();
    let cfg = VerifyConfig { params: Some(params), samples: 5, timings: true, ..VerifyConfig::default() };
    let rec = run_check("torsion.multiplication-table", &cfg).unwrap();
    assert_eq!(rec.status, Status::Pass);
    assert_eq!(rec.witness["params"]["r"], "2");
    assert!(rec.elapsed_ms.is_some());
    assert!(run_check("no.such-check", &cfg).is_err());
}

#[test]
fn literal_determinant_identity_fails_with_a_sign_witness() {
    let rec = run_check("higgs.determinant-identity", &VerifyConfig::default()).unwrap();
    assert_eq!(rec.status, Status::Fail);
    assert_eq!(rec.witness["table_equals_minus_F_det"], serde_json::json!([true, true, true]));
    let signed = run_check("higgs.determinant-identity-negated", &VerifyConfig::default()).unwrap();
    assert_eq!(signed.status, Status::Pass);
}
