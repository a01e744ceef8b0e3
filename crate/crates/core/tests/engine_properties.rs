use std::sync::OnceLock;

use proptest::prelude::*;
use quivar::acceptance::acceptance_sweep;
use quivar::equiv::SignRelation;
use quivar::paths::{closed_words, WordConstraint};
use quivar::{Characteristic, CyclicWord, Engine, Quiver};

fn corpus() -> &'static Vec<(Quiver, Vec<CyclicWord>)> {
    static C: OnceLock<Vec<(Quiver, Vec<CyclicWord>)>> = OnceLock::new();
    C.get_or_init(|| {
        acceptance_sweep()
            .into_iter()
            .map(|q| {
                let ws = closed_words(&q, &WordConstraint::UpTo(7));
                (q, ws)
            })
            .filter(|(_, ws)| !ws.is_empty())
            .collect()
    })
}

fn chi_of(b: bool) -> Characteristic {
    if b {
        Characteristic::Two
    } else {
        Characteristic::NotTwo
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn reachable_states_keep_the_multidegree(qi in any::<prop::sample::Index>(), wi in any::<prop::sample::Index>(), two in any::<bool>()) {
        let (q, ws) = qi.get(corpus());
        let w = wi.get(ws);
        let comp = Engine::new(q, chi_of(two)).component(w).unwrap();
        let md = w.multidegree(q);
        for s in comp.words() {
            prop_assert_eq!(s.multidegree(q), md.clone());
        }
    }

    #[test]
    fn rotations_are_the_same_element(qi in any::<prop::sample::Index>(), wi in any::<prop::sample::Index>(), k in 0usize..8, two in any::<bool>()) {
        let (q, ws) = qi.get(corpus());
        let w = wi.get(ws);
        let r = w.rotate(k % w.degree());
        let engine = Engine::new(q, chi_of(two));
        let zero = engine.decide(w).unwrap().equiv_zero;
        prop_assert_eq!(engine.decide(&r).unwrap().equiv_zero, zero);
        let rel = engine.equivalent_sign(w, &r).unwrap();
        if zero && !two {
            prop_assert!(matches!(rel, SignRelation::Plus | SignRelation::Both));
        } else if !zero {
            prop_assert_eq!(rel, SignRelation::Plus);
        }
    }

    #[test]
    fn zero_is_absorbing(qi in any::<prop::sample::Index>(), wi in any::<prop::sample::Index>(), two in any::<bool>()) {
        let (q, ws) = qi.get(corpus());
        let w = wi.get(ws);
        let engine = Engine::new(q, chi_of(two));
        let comp = engine.component(w).unwrap();
        prop_assert_eq!(comp.is_zero(), engine.decide(w).unwrap().equiv_zero);
        for s in comp.words().take(50) {
            prop_assert_eq!(engine.decide(&s).unwrap().equiv_zero, comp.is_zero());
        }
    }

    #[test]
    fn nonzero_components_carry_one_sign(qi in any::<prop::sample::Index>(), wi in any::<prop::sample::Index>()) {
        let (q, ws) = qi.get(corpus());
        let w = wi.get(ws);
        let comp = Engine::new(q, Characteristic::NotTwo).component(w).unwrap();
        if !comp.is_zero() {
            prop_assert!(comp.states.values().all(|&m| m == 1 || m == 2));
        }
    }
}

#[test]
fn squares_and_fourth_visits() {
    let one = Quiver::from_pairs(1, &[(0, 0)]).unwrap();
    let x2 = CyclicWord::parse(&one, "a0 a0").unwrap();
    assert!(Engine::new(&one, Characteristic::Two).decide(&x2).unwrap().equiv_zero);
    assert!(!Engine::new(&one, Characteristic::NotTwo).decide(&x2).unwrap().equiv_zero);
    let x3 = CyclicWord::parse(&one, "a0 a0 a0").unwrap();
    assert!(Engine::new(&one, Characteristic::NotTwo).decide(&x3).unwrap().equiv_zero);
    let three = Quiver::from_pairs(1, &[(0, 0), (0, 0), (0, 0), (0, 0)]).unwrap();
    let w = CyclicWord::parse(&three, "a0 a1 a2 a3").unwrap();
    assert!(Engine::new(&three, Characteristic::NotTwo).decide(&w).unwrap().equiv_zero);
    assert!(!Engine::new(&three, Characteristic::Two).decide(&w).unwrap().equiv_zero);
    let w = CyclicWord::parse(&three, "a0 a1 a2").unwrap();
    let odd = CyclicWord::parse(&three, "a1 a0 a2").unwrap();
    let e = Engine::new(&three, Characteristic::NotTwo);
    assert_eq!(e.equivalent_sign(&w, &odd).unwrap(), SignRelation::Minus);
}
