//! Cross-checking the engine against exact decomposability of traces.

use serde::Serialize;

use crate::algebra::decompose::InvariantOracle;
use crate::algebra::field::Field;
use crate::algebra::matrix::Sigma;
use crate::equiv::{Characteristic, Engine, EngineConfig};
use crate::error::{Error, Result};
use crate::paths::{closed_words, WordConstraint};
use crate::quiver::Quiver;
use crate::word::CyclicWord;

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub word: Vec<String>,
    pub engine_zero: bool,
    pub oracle_decomposable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossValidationReport {
    pub char: Characteristic,
    pub field: String,
    pub cutoff: usize,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CrossValidationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `equiv_zero` with decomposability of `tr` for every closed word
/// of degree at most `cutoff`. `fault` flips every engine answer, to test
/// that the harness notices.
pub fn cross_validate<F: Field>(
    q: &Quiver,
    chi: Characteristic,
    cutoff: usize,
    cfg: EngineConfig,
    fault: bool,
) -> Result<CrossValidationReport> {
    match (chi, F::CHARACTERISTIC) {
        (Characteristic::Two, 2) => {}
        (Characteristic::NotTwo, p) if p != 2 => {}
        _ => {
            return Err(Error::InvalidParameters(format!(
                "field {} does not have characteristic {chi}",
                F::NAME
            )))
        }
    }
    let engine = Engine::with_config(q, chi, cfg);
    let mut oracle = InvariantOracle::<F>::new(q, cutoff.max(1));
    let words: Vec<CyclicWord> = closed_words(q, &WordConstraint::UpTo(cutoff));
    let mut mismatches = Vec::new();
    for w in &words {
        let zero = engine.decide(w)?.equiv_zero ^ fault;
        let dec = oracle.decomposable(w, Sigma::Trace)?;
        if zero != dec {
            mismatches.push(Mismatch { word: w.names(q), engine_zero: zero, oracle_decomposable: dec });
        }
    }
    Ok(CrossValidationReport {
        char: chi,
        field: F::NAME.to_string(),
        cutoff,
        checked: words.len(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Gf;
    use num::rational::BigRational;

    #[test]
    fn loops_agree_and_faults_are_seen() {
        let q = Quiver::from_pairs(1, &[(0, 0), (0, 0)]).unwrap();
        let r = cross_validate::<Gf<2>>(&q, Characteristic::Two, 4, EngineConfig::default(), false).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        let r = cross_validate::<BigRational>(&q, Characteristic::NotTwo, 4, EngineConfig::default(), false).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        let r = cross_validate::<BigRational>(&q, Characteristic::NotTwo, 3, EngineConfig::default(), true).unwrap();
        assert_eq!(r.mismatches.len(), r.checked);
        assert!(cross_validate::<Gf<2>>(&q, Characteristic::NotTwo, 2, EngineConfig::default(), false).is_err());
    }
}
