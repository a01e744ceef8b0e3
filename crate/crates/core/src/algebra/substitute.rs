//! Specialising some arrow matrices to constants to certify that a trace is
//! non-zero, or to relate the traces of two words.

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::matrix::{num_vars, word_product, Mat2};
use super::poly::SparsePolynomial;
use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::word::CyclicWord;

/// Value assigned to an arrow matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subst {
    /// `diag(1, -1)`
    I,
    /// `[[0, 1], [-1, 0]]`
    J,
    /// The identity.
    E,
    /// The generic matrix of the arrow.
    Generic,
}

impl Subst {
    pub fn matrix<F: Field>(self, q: &Quiver, a: usize) -> Mat2<F> {
        let n = num_vars(q);
        match self {
            Subst::I => Mat2::constant(n, [[1, 0], [0, -1]]),
            Subst::J => Mat2::constant(n, [[0, 1], [-1, 0]]),
            Subst::E => Mat2::identity(n),
            Subst::Generic => Mat2::generic(q, a),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubstitutionResult<F: Field> {
    pub polynomial: SparsePolynomial<F>,
    pub nonzero: bool,
}

/// Trace of the word with arrow `a` replaced by `assignment[a]`.
pub fn substitution_certificate<F: Field>(
    q: &Quiver,
    w: &CyclicWord,
    assignment: &[Subst],
) -> Result<SubstitutionResult<F>> {
    if assignment.len() != q.d() {
        return Err(Error::InvalidParameters(format!(
            "assignment has {} entries for {} arrows",
            assignment.len(),
            q.d()
        )));
    }
    let polynomial = word_product(w.arrows(), |a| assignment[a].matrix::<F>(q, a)).trace();
    let nonzero = !polynomial.is_zero();
    Ok(SubstitutionResult { polynomial, nonzero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    type Q = BigRational;

    #[test]
    fn constants_have_expected_traces() {
        let q = Quiver::from_pairs(1, &[(0, 0), (0, 0)]).unwrap();
        let tr = |w: Vec<usize>, s: [Subst; 2]| {
            let w = CyclicWord::new(&q, w).unwrap();
            substitution_certificate::<Q>(&q, &w, &s).unwrap().polynomial
        };
        let zero = SparsePolynomial::<Q>::zero(8);
        assert_eq!(tr(vec![0], [Subst::I, Subst::J]), zero);
        assert_eq!(tr(vec![1], [Subst::I, Subst::J]), zero);
        assert_eq!(tr(vec![0, 1], [Subst::I, Subst::J]), zero);
        let two = SparsePolynomial::constant(8, Q::from_i64(2));
        assert_eq!(tr(vec![0, 0], [Subst::I, Subst::J]), two);
        assert_eq!(tr(vec![1, 1], [Subst::I, Subst::J]), -&two);
        let r = substitution_certificate::<Q>(&q, &CyclicWord::new(&q, vec![0, 1]).unwrap(), &[Subst::Generic, Subst::E])
            .unwrap();
        assert!(r.nonzero);
        assert!(substitution_certificate::<Q>(&q, &CyclicWord::new(&q, vec![0]).unwrap(), &[Subst::E]).is_err());
    }
}
