//! Membership of `tr` and `det` of a closed word in the subalgebra generated
//! by invariants of strictly smaller multidegree.
//!
//! `I(t)` is the span of all invariants of multidegree `t`: products of
//! generators `tr(w)` (mdeg `w = t`) and `det(w)` (`2 mdeg w = t`).
//! `Dec(t)` is the span of products of at least two generators. Both are
//! kept as echelon bases and memoized per multidegree.

use std::collections::HashMap;
use std::ops::ControlFlow;

use super::field::Field;
use super::matrix::{invariant_polynomial, num_vars, Sigma};
use super::poly::{Monomial, SparsePolynomial};
use crate::error::{Error, Result};
use crate::paths::{for_each_closed_word, WordConstraint};
use crate::quiver::Quiver;
use crate::word::{CyclicWord, Multidegree};

/// Degree cap used when none is given.
pub const DEFAULT_MAX_DEGREE: usize = 8;

/// Row echelon basis keyed by leading monomial.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    rows: HashMap<Monomial, SparsePolynomial<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon { rows: HashMap::new() }
    }
}

impl<F: Field> Echelon<F> {
    /// Reduces `p` until its leading monomial is not a pivot.
    pub fn reduce(&self, p: &SparsePolynomial<F>) -> SparsePolynomial<F> {
        let mut r = p.clone();
        loop {
            let Some((m, c)) = r.leading() else { return r };
            let Some(row) = self.rows.get(m) else { return r };
            let c = -(c.clone());
            r.add_scaled(row, &c);
        }
    }

    /// Adds `p` to the span; returns false if it was already there.
    pub fn insert(&mut self, p: &SparsePolynomial<F>) -> bool {
        let r = self.reduce(p);
        let Some((m, c)) = r.leading() else { return false };
        let inv = c.inverse().expect("leading coefficient is non-zero");
        let m = m.clone();
        self.rows.insert(m, r.scale(&inv));
        true
    }

    pub fn contains(&self, p: &SparsePolynomial<F>) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparsePolynomial<F>> {
        self.rows.values()
    }
}

/// Memoized graded spans of invariants for one quiver and field.
pub struct InvariantOracle<'q, F: Field> {
    q: &'q Quiver,
    max_degree: usize,
    generators: HashMap<Multidegree, Vec<SparsePolynomial<F>>>,
    spaces: HashMap<Multidegree, Echelon<F>>,
    decomposables: HashMap<Multidegree, Echelon<F>>,
}

impl<'q, F: Field> InvariantOracle<'q, F> {
    pub fn new(q: &'q Quiver, max_degree: usize) -> Self {
        InvariantOracle {
            q,
            max_degree,
            generators: HashMap::new(),
            spaces: HashMap::new(),
            decomposables: HashMap::new(),
        }
    }

    pub fn quiver(&self) -> &Quiver {
        self.q
    }

    fn check_cap(&self, t: &Multidegree) -> Result<()> {
        if t.total() > self.max_degree {
            return Err(Error::CapExceeded(format!(
                "multidegree of total degree {} exceeds the oracle cap {}",
                t.total(),
                self.max_degree
            )));
        }
        Ok(())
    }

    fn words_with(&self, m: &Multidegree) -> Vec<CyclicWord> {
        let mut out = Vec::new();
        if m.is_zero() || !m.is_balanced(self.q) {
            return out;
        }
        for_each_closed_word(self.q, &WordConstraint::Multidegree(m.clone()), |w| {
            out.push(w.clone());
            ControlFlow::Continue(())
        });
        out
    }

    /// Generators `tr(w)` and `det(w)` of multidegree exactly `t`.
    pub fn generators(&mut self, t: &Multidegree) -> &[SparsePolynomial<F>] {
        if !self.generators.contains_key(t) {
            let mut gens = Vec::new();
            for w in self.words_with(t) {
                gens.push(invariant_polynomial(self.q, &w, Sigma::Trace));
            }
            if t.0.iter().all(|&x| x % 2 == 0) {
                let half = Multidegree(t.0.iter().map(|&x| x / 2).collect());
                for w in self.words_with(&half) {
                    gens.push(invariant_polynomial(self.q, &w, Sigma::Det));
                }
            }
            self.generators.insert(t.clone(), gens);
        }
        &self.generators[t]
    }

    /// Echelon basis of the span of products of at least two generators.
    pub fn decomposable_space(&mut self, t: &Multidegree) -> Result<&Echelon<F>> {
        self.check_cap(t)?;
        if !self.decomposables.contains_key(t) {
            let mut dec = Echelon::default();
            for eta in proper_parts(t) {
                let gens = self.generators(&eta).to_vec();
                if gens.is_empty() {
                    continue;
                }
                let rest = t.checked_sub(&eta).expect("eta <= t");
                let basis: Vec<SparsePolynomial<F>> = self.space(&rest)?.basis().cloned().collect();
                for g in &gens {
                    for b in &basis {
                        dec.insert(&(g * b));
                    }
                }
            }
            self.decomposables.insert(t.clone(), dec);
        }
        Ok(&self.decomposables[t])
    }

    /// Echelon basis of all invariants of multidegree `t`.
    pub fn space(&mut self, t: &Multidegree) -> Result<&Echelon<F>> {
        self.check_cap(t)?;
        if !self.spaces.contains_key(t) {
            let mut sp = self.decomposable_space(t)?.clone();
            for g in self.generators(t).to_vec() {
                sp.insert(&g);
            }
            self.spaces.insert(t.clone(), sp);
        }
        Ok(&self.spaces[t])
    }

    /// Whether `sigma_k(w)` lies in the subalgebra generated by invariants of
    /// strictly smaller degree.
    pub fn decomposable(&mut self, w: &CyclicWord, sigma: Sigma) -> Result<bool> {
        let t = w.multidegree(self.q).scale(sigma.k());
        self.check_cap(&t)?;
        let p = invariant_polynomial::<F>(self.q, w, sigma);
        Ok(self.decomposable_space(&t)?.contains(&p))
    }

    pub fn nvars(&self) -> usize {
        num_vars(self.q)
    }
}

/// All `0 < e < t` componentwise, excluding `t` itself.
fn proper_parts(t: &Multidegree) -> Vec<Multidegree> {
    let mut out = vec![Vec::with_capacity(t.0.len())];
    for &x in &t.0 {
        let mut next = Vec::with_capacity(out.len() * (x as usize + 1));
        for p in &out {
            for v in 0..=x {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(Multidegree)
        .filter(|m| !m.is_zero() && m != t)
        .collect()
}

/// One-shot version of [`InvariantOracle::decomposable`].
pub fn decomposable_under_field<F: Field>(
    q: &Quiver,
    w: &CyclicWord,
    k: u32,
    max_degree: usize,
) -> Result<bool> {
    let sigma = Sigma::from_k(k).ok_or_else(|| Error::InvalidParameters(format!("k must be 1 or 2, got {k}")))?;
    InvariantOracle::<F>::new(q, max_degree).decomposable(w, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Gf;
    use num::rational::BigRational;

    type Q = BigRational;
    type F2 = Gf<2>;

    fn loops(k: usize) -> Quiver {
        Quiver::from_pairs(1, &vec![(0, 0); k]).unwrap()
    }

    fn two_cycle() -> Quiver {
        Quiver::new(&["u", "v"], &[("a", "u", "v"), ("b", "v", "u")]).unwrap()
    }

    #[test]
    fn square_of_a_loop() {
        let q = loops(1);
        let xx = CyclicWord::new(&q, vec![0, 0]).unwrap();
        assert!(decomposable_under_field::<F2>(&q, &xx, 1, 8).unwrap());
        // det X has the same degree as tr(X^2), so tr(X^2) is new over Q.
        assert!(!decomposable_under_field::<Q>(&q, &xx, 1, 8).unwrap());
        let xxx = CyclicWord::new(&q, vec![0, 0, 0]).unwrap();
        assert!(decomposable_under_field::<Q>(&q, &xxx, 1, 8).unwrap());
        assert!(decomposable_under_field::<F2>(&q, &xxx, 1, 8).unwrap());
    }

    #[test]
    fn determinant_of_two_cycle_is_a_generator() {
        let q = two_cycle();
        let ab = CyclicWord::parse(&q, "ab").unwrap();
        assert!(!decomposable_under_field::<Q>(&q, &ab, 2, 8).unwrap());
        assert!(!decomposable_under_field::<Q>(&q, &ab, 1, 8).unwrap());
        let abab = CyclicWord::parse(&q, "abab").unwrap();
        assert!(!decomposable_under_field::<Q>(&q, &abab, 1, 8).unwrap());
        assert!(decomposable_under_field::<F2>(&q, &abab, 1, 8).unwrap());
        let ab3 = CyclicWord::parse(&q, "ababab").unwrap();
        assert!(decomposable_under_field::<Q>(&q, &ab3, 1, 8).unwrap());
    }

    #[test]
    fn det_of_loops_factors() {
        let q = loops(2);
        let xy = CyclicWord::new(&q, vec![0, 1]).unwrap();
        assert!(decomposable_under_field::<Q>(&q, &xy, 2, 8).unwrap());
        assert!(!decomposable_under_field::<Q>(&q, &xy, 1, 8).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let q = loops(1);
        let w = CyclicWord::new(&q, vec![0; 5]).unwrap();
        let e = decomposable_under_field::<Q>(&q, &w, 1, 4).unwrap_err();
        assert!(e.is_inconclusive());
        assert!(decomposable_under_field::<Q>(&q, &w, 3, 8).is_err());
    }

    #[test]
    fn echelon_membership() {
        let n = 2;
        let x = SparsePolynomial::<Q>::var(n, 0);
        let y = SparsePolynomial::<Q>::var(n, 1);
        let mut e = Echelon::default();
        assert!(e.insert(&(&x + &y)));
        assert!(e.insert(&(&x - &y)));
        assert!(!e.insert(&x));
        assert!(e.contains(&y));
        assert_eq!(e.dim(), 2);
    }
}
