use num::rational::BigRational;
use proptest::prelude::*;
use quivar::algebra::field::{Field, Gf};
use quivar::algebra::matrix::{invariant_polynomial, Sigma};
use quivar::validate::cross_validate;
use quivar::{Characteristic, CyclicWord, EngineConfig, Quiver};

fn fixtures() -> Vec<(&'static str, Quiver, usize)> {
    vec![
        ("three loops", Quiver::from_pairs(1, &[(0, 0), (0, 0), (0, 0)]).unwrap(), 5),
        ("2-cycle with loop", Quiver::from_pairs(2, &[(0, 1), (1, 0), (0, 0)]).unwrap(), 6),
        ("parallel arrows", Quiver::from_pairs(2, &[(0, 1), (0, 1), (1, 0)]).unwrap(), 6),
        ("3-cycle with chord", Quiver::from_pairs(3, &[(0, 1), (1, 2), (2, 0), (1, 0)]).unwrap(), 6),
    ]
}

#[test]
fn engine_agrees_with_trace_decomposability() {
    for (name, q, cutoff) in fixtures() {
        let cfg = EngineConfig::default();
        let r = cross_validate::<Gf<2>>(&q, Characteristic::Two, cutoff, cfg, false).unwrap();
        assert!(r.passed(), "{name} gf2: {:?}", r.mismatches);
        let r = cross_validate::<BigRational>(&q, Characteristic::NotTwo, cutoff, cfg, false).unwrap();
        assert!(r.passed(), "{name} rationals: {:?}", r.mismatches);
        let r = cross_validate::<Gf<3>>(&q, Characteristic::NotTwo, cutoff.min(5), cfg, false).unwrap();
        assert!(r.passed(), "{name} gf3: {:?}", r.mismatches);
    }
}

#[test]
fn injected_faults_are_reported() {
    let q = Quiver::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
    let r = cross_validate::<Gf<2>>(&q, Characteristic::Two, 4, EngineConfig::default(), true).unwrap();
    assert_eq!(r.mismatches.len(), r.checked);
}

fn gf_inverse_ok<F: Field>(x: i64) -> bool {
    let v = F::from_i64(x);
    v.is_zero() || v.inverse().is_some_and(|i| v.clone() * i == F::one())
}

proptest! {
    #[test]
    fn traces_are_rotation_invariant(word in prop::collection::vec(0usize..3, 1..6), k in 0usize..6) {
        let q = Quiver::from_pairs(1, &[(0, 0), (0, 0), (0, 0)]).unwrap();
        let w = CyclicWord::new(&q, word).unwrap();
        let r = w.rotate(k % w.degree());
        prop_assert_eq!(
            invariant_polynomial::<BigRational>(&q, &w, Sigma::Trace),
            invariant_polynomial::<BigRational>(&q, &r, Sigma::Trace)
        );
    }

    #[test]
    fn determinants_multiply(word in prop::collection::vec(0usize..2, 1..5)) {
        let q = Quiver::from_pairs(1, &[(0, 0), (0, 0)]).unwrap();
        let w = CyclicWord::new(&q, word.clone()).unwrap();
        let mut prod = None;
        for a in word {
            let p = invariant_polynomial::<BigRational>(&q, &CyclicWord::new(&q, vec![a]).unwrap(), Sigma::Det);
            prod = Some(match prod { None => p, Some(acc) => &acc * &p });
        }
        prop_assert_eq!(invariant_polynomial::<BigRational>(&q, &w, Sigma::Det), prod.unwrap());
    }

    #[test]
    fn finite_field_inverses(x in -50i64..50) {
        prop_assert!(gf_inverse_ok::<Gf<2>>(x));
        prop_assert!(gf_inverse_ok::<Gf<3>>(x));
        prop_assert!(gf_inverse_ok::<Gf<7>>(x));
    }
}
