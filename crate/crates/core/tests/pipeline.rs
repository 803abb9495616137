use num_rational::BigRational;
use serde_json::json;

use mbl::conditions::{cayley_test, HyperellipticParams, G2};
use mbl::confocal::{CausticCase, Gamma2};
use mbl::pell::{certificate, compose_pell, parse_certificate, solve_pell, variants_for, verify_pell};
use mbl::search::{cross_validate, find_periodic, Candidate, SearchSpec, ValidateOptions};

fn search(v: serde_json::Value) -> Vec<Candidate> {
    let spec: SearchSpec = serde_json::from_value(v).unwrap();
    find_periodic(&spec).unwrap()
}

fn only(v: serde_json::Value) -> Candidate {
    let mut c = search(v);
    assert_eq!(c.len(), 1);
    c.pop().unwrap()
}

/// Float caustics of a candidate, rounded to rationals: close to the
/// periodic configuration but not on it.
fn rounded(c: &Candidate) -> HyperellipticParams<BigRational> {
    let e = c.ellipsoid();
    let cp = c.caustics();
    let q = |x: f64| BigRational::from_float(x).unwrap();
    let g2 = match cp.gamma2 {
        Gamma2::Finite(g) => G2::Finite(q(g)),
        Gamma2::Infinity => G2::Infinity,
    };
    HyperellipticParams::new([q(e.a1), q(e.a2), q(e.a3)], q(cp.gamma1), g2)
}

#[test]
fn s1_period_four_closes_with_odd_winding() {
    let c = only(json!({"ellipsoid": [4, 2, 1], "case": "S1", "n": 4}));
    let r = cross_validate(&c.params, CausticCase::S1, 4, &ValidateOptions::default());
    assert!(r.valid, "{:?}", r.failure_stage);
    let sig = r.signature.unwrap();
    assert_eq!((sig.n, sig.m1 % 2, sig.n1 % 2), (4, 1, 1));
    assert!(r.closure_error <= 1e-6);
}

#[test]
fn pell_identities_hold_exactly_on_periodic_configurations() {
    for (case, n) in [("S1", 4), ("S2", 5)] {
        let c = only(json!({"ellipsoid": [4, 2, 1], "case": case, "n": n}));
        let sol = variants_for(c.case, n)
            .into_iter()
            .find_map(|v| solve_pell(&c.params, n, v).unwrap())
            .expect("no Pell solution");
        assert!(verify_pell(&sol));
        assert!(verify_pell(&compose_pell(&sol).unwrap()));
        let cert = parse_certificate(&certificate(&sol)).unwrap();
        assert!(cert.verify());
        assert_eq!(cert.n(), n);
        assert_eq!(cert.variant(), sol.variant);

        // a nearby rational configuration is not periodic
        let near = rounded(&c);
        assert!(!cayley_test(&near, c.case, n).unwrap());
        for v in variants_for(c.case, n) {
            assert!(solve_pell(&near, n, v).unwrap().is_none());
        }
    }
}

#[test]
fn tampered_certificate_fails() {
    let c = only(json!({"ellipsoid": [4, 2, 1], "case": "S2", "n": 5}));
    let sol = variants_for(c.case, 5).into_iter().find_map(|v| solve_pell(&c.params, 5, v).unwrap()).unwrap();
    let mut cert = certificate(&sol);
    cert["norm"] = json!(match &cert["norm"] {
        serde_json::Value::Array(a) => {
            let mut a = a.clone();
            a[0] = json!("12345/7");
            serde_json::Value::Array(a)
        }
        _ => json!("12345/7"),
    });
    assert!(!parse_certificate(&cert).unwrap().verify());
}

#[test]
fn light_like_period_five_along_a3() {
    let cands = search(json!({
        "ellipsoid": [4, 2, 1], "case": "light", "n": 5,
        "vary": {"axis": "a3", "range": ["1/2", 8]}
    }));
    assert!(!cands.is_empty());
    let r = cross_validate(&cands[0].params, cands[0].case, 5, &ValidateOptions::default());
    assert!(r.valid, "{:?}", r.failure_stage);
}

#[test]
fn fixed_ellipsoid_has_no_light_like_period_five() {
    assert!(search(json!({"ellipsoid": [4, 2, 1], "case": "light", "n": 5})).is_empty());
}
