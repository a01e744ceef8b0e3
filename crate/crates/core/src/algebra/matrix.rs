//! 2x2 matrices with polynomial entries and the trace and determinant of a
//! closed word.

use super::field::Field;
use super::poly::SparsePolynomial;
use crate::quiver::{ArrowId, Quiver};
use crate::word::CyclicWord;

/// Number of polynomial variables for a quiver: four per arrow.
pub fn num_vars(q: &Quiver) -> usize {
    4 * q.d()
}

/// Variable index of entry `(i, j)` of the generic matrix of arrow `a`.
pub fn var_index(a: ArrowId, i: usize, j: usize) -> usize {
    4 * a + 2 * i + j
}

/// Human readable variable name, `x12(a)` style, 1-based.
pub fn var_name(q: &Quiver, v: usize) -> String {
    let a = v / 4;
    let i = (v % 4) / 2;
    let j = v % 2;
    format!("x{}{}({})", i + 1, j + 1, q.arrow_name(a))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2<F: Field> {
    pub e: [[SparsePolynomial<F>; 2]; 2],
}

impl<F: Field> Mat2<F> {
    pub fn generic(q: &Quiver, a: ArrowId) -> Self {
        let n = num_vars(q);
        let v = |i, j| SparsePolynomial::var(n, var_index(a, i, j));
        Mat2 { e: [[v(0, 0), v(0, 1)], [v(1, 0), v(1, 1)]] }
    }

    pub fn constant(nvars: usize, m: [[i64; 2]; 2]) -> Self {
        let c = |x: i64| SparsePolynomial::constant(nvars, F::from_i64(x));
        Mat2 { e: [[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]] }
    }

    pub fn identity(nvars: usize) -> Self {
        Self::constant(nvars, [[1, 0], [0, 1]])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let entry = |i: usize, j: usize| &(&self.e[i][0] * &o.e[0][j]) + &(&self.e[i][1] * &o.e[1][j]);
        Mat2 { e: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]] }
    }

    pub fn trace(&self) -> SparsePolynomial<F> {
        &self.e[0][0] + &self.e[1][1]
    }

    pub fn det(&self) -> SparsePolynomial<F> {
        &(&self.e[0][0] * &self.e[1][1]) - &(&self.e[0][1] * &self.e[1][0])
    }
}

/// Product `X_{a_s} ... X_{a_1}` for the word `a_1 ... a_s`, where
/// `matrix(a)` supplies the factor for each arrow.
pub fn word_product<F: Field>(w: &[ArrowId], mut matrix: impl FnMut(ArrowId) -> Mat2<F>) -> Mat2<F> {
    let mut acc: Option<Mat2<F>> = None;
    for &a in w {
        let m = matrix(a);
        acc = Some(match acc {
            None => m,
            Some(p) => m.mul(&p),
        });
    }
    acc.expect("non-empty word")
}

/// Which of the two invariants of a closed word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sigma {
    Trace,
    Det,
}

impl Sigma {
    pub fn from_k(k: u32) -> Option<Self> {
        match k {
            1 => Some(Sigma::Trace),
            2 => Some(Sigma::Det),
            _ => None,
        }
    }

    pub fn k(self) -> u32 {
        match self {
            Sigma::Trace => 1,
            Sigma::Det => 2,
        }
    }
}

/// `tr` or `det` of the generic matrix product along `w`.
pub fn invariant_polynomial<F: Field>(q: &Quiver, w: &CyclicWord, sigma: Sigma) -> SparsePolynomial<F> {
    match sigma {
        Sigma::Trace => word_product(w.arrows(), |a| Mat2::generic(q, a)).trace(),
        Sigma::Det => {
            let mut acc = SparsePolynomial::constant(num_vars(q), F::one());
            for &a in w.arrows() {
                acc = &acc * &Mat2::<F>::generic(q, a).det();
            }
            acc
        }
    }
}

/// Sorted-key JSON dump: `[{"monomial": {"x11(a)": 2}, "coeff": "3/2"}]`.
pub fn polynomial_to_json<F: Field>(q: &Quiver, p: &SparsePolynomial<F>) -> serde_json::Value {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        let mut mono = serde_json::Map::new();
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                mono.insert(var_name(q, i), serde_json::Value::from(e));
            }
        }
        out.push(serde_json::json!({ "monomial": mono, "coeff": c.to_string() }));
    }
    serde_json::Value::Array(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Gf;
    use num::rational::BigRational;

    type Q = BigRational;

    fn loops(k: usize) -> Quiver {
        Quiver::from_pairs(1, &vec![(0, 0); k]).unwrap()
    }

    #[test]
    fn trace_is_cyclic() {
        let q = Quiver::from_pairs(2, &[(0, 1), (1, 0), (0, 0)]).unwrap();
        let w1 = CyclicWord::new(&q, vec![2, 0, 1]).unwrap();
        let w2 = w1.rotate(1);
        assert_eq!(
            invariant_polynomial::<Q>(&q, &w1, Sigma::Trace),
            invariant_polynomial::<Q>(&q, &w2, Sigma::Trace)
        );
    }

    #[test]
    fn det_of_product_is_product_of_det() {
        let q = loops(2);
        let w = CyclicWord::new(&q, vec![0, 1]).unwrap();
        let direct = word_product(w.arrows(), |a| Mat2::<Q>::generic(&q, a)).det();
        assert_eq!(direct, invariant_polynomial::<Q>(&q, &w, Sigma::Det));
    }

    #[test]
    fn cayley_hamilton_identity() {
        // tr(X^2) = tr(X)^2 - 2 det(X)
        let q = loops(1);
        let x = CyclicWord::new(&q, vec![0]).unwrap();
        let xx = CyclicWord::new(&q, vec![0, 0]).unwrap();
        let t = invariant_polynomial::<Q>(&q, &x, Sigma::Trace);
        let d = invariant_polynomial::<Q>(&q, &x, Sigma::Det);
        let lhs = invariant_polynomial::<Q>(&q, &xx, Sigma::Trace);
        let rhs = &(&t * &t) - &d.scale(&Q::from_i64(2));
        assert_eq!(lhs, rhs);
        let t2 = invariant_polynomial::<Gf<2>>(&q, &x, Sigma::Trace);
        assert_eq!(invariant_polynomial::<Gf<2>>(&q, &xx, Sigma::Trace), &t2 * &t2);
    }

    #[test]
    fn json_dump_names_variables() {
        let q = loops(1);
        let x = CyclicWord::new(&q, vec![0]).unwrap();
        let p = invariant_polynomial::<Q>(&q, &x, Sigma::Trace);
        let j = polynomial_to_json(&q, &p).to_string();
        assert!(j.contains("x11(a0)") && j.contains("x22(a0)"));
    }
}
