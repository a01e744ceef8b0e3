//! Sparse multivariate polynomials over a [`Field`].
//!
//! Monomials are dense exponent vectors over a fixed number of variables,
//! ordered by total degree and then lexicographically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial<F: Field> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> SparsePolynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), F::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Largest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Every monomial has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c.clone())).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x.clone() * c.clone());
        }
    }

    /// Evaluates with `vals[i]` substituted for variable `i`.
    pub fn evaluate(&self, vals: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t * vals[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }
}

impl<F: Field> Add for &SparsePolynomial<F> {
    type Output = SparsePolynomial<F>;
    fn add(self, o: Self) -> SparsePolynomial<F> {
        let mut out = self.clone();
        out.add_scaled(o, &F::one());
        out
    }
}

impl<F: Field> Sub for &SparsePolynomial<F> {
    type Output = SparsePolynomial<F>;
    fn sub(self, o: Self) -> SparsePolynomial<F> {
        let mut out = self.clone();
        out.add_scaled(o, &(-F::one()));
        out
    }
}

impl<F: Field> Neg for &SparsePolynomial<F> {
    type Output = SparsePolynomial<F>;
    fn neg(self) -> SparsePolynomial<F> {
        self.scale(&(-F::one()))
    }
}

impl<F: Field> Mul for &SparsePolynomial<F> {
    type Output = SparsePolynomial<F>;
    fn mul(self, o: Self) -> SparsePolynomial<F> {
        let mut out = SparsePolynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Gf;
    use num::rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn poly_from(coeffs: &[(i64, [u8; 2])]) -> SparsePolynomial<Q> {
        let mut p = SparsePolynomial::zero(2);
        for &(c, e) in coeffs {
            p.add_term(Monomial(e.to_vec()), Q::from_i64(c));
        }
        p
    }

    proptest! {
        #[test]
        fn ring_laws_hold_by_evaluation(
            a in proptest::collection::vec((-3i64..4, [0u8..3, 0u8..3]), 0..5),
            b in proptest::collection::vec((-3i64..4, [0u8..3, 0u8..3]), 0..5),
            x in -4i64..5, y in -4i64..5,
        ) {
            let (p, q) = (poly_from(&a), poly_from(&b));
            let v = [Q::from_i64(x), Q::from_i64(y)];
            prop_assert_eq!((&p * &q).evaluate(&v), p.evaluate(&v) * q.evaluate(&v));
            prop_assert_eq!((&p + &q).evaluate(&v), p.evaluate(&v) + q.evaluate(&v));
            prop_assert!((&(&p - &q) + &q) == p);
        }
    }

    #[test]
    fn frobenius_in_char_two() {
        let x = SparsePolynomial::<Gf<2>>::var(2, 0);
        let y = SparsePolynomial::<Gf<2>>::var(2, 1);
        let s = &x + &y;
        let sq = &s * &s;
        assert_eq!(sq, &(&x * &x) + &(&y * &y));
        assert!(sq.is_homogeneous());
    }

    #[test]
    fn leading_term_is_graded() {
        let p = poly_from(&[(1, [3, 0]), (2, [0, 4]), (5, [1, 1])]);
        assert_eq!(p.leading().unwrap().0, &Monomial(vec![0, 4]));
        assert_eq!(p.total_degree(), Some(4));
    }
}
