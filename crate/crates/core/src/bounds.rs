//! Degree bounds, the maximal nonzero degree of a quiver, and the maximal
//! degree of an indecomposable generator.

use std::collections::HashMap;

use num::rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::decompose::{decomposable_under_field, DEFAULT_MAX_DEGREE};
use crate::algebra::field::Gf;
use crate::equiv::{first_nonzero, Certificate, Characteristic, Engine, EngineConfig};
use crate::error::{Error, Result};
use crate::omega::in_omega2_of_support;
use crate::paths::{closed_path_exists, closed_words, max_cycle_length, primitive_cycles, WordConstraint};
use crate::quiver::Quiver;
use crate::sweep::class_members;
use crate::word::{CyclicWord, Multidegree};

fn positive(n: i64, d: i64, m: i64) -> Result<()> {
    if n < 1 || d < 1 || m < 1 {
        return Err(Error::InvalidParameters(format!("n, d, m must be positive, got ({n}, {d}, {m})")));
    }
    Ok(())
}

/// The closed-form bound, evaluated branch by branch.
pub fn m_formula(n: i64, d: i64, m: i64, chi: Characteristic) -> Result<i64> {
    positive(n, d, m)?;
    Ok(match chi {
        Characteristic::Two => {
            if d == n && n == m {
                2 * m
            } else if d < n + 2 * ((n - 1) / m) && n > m && m >= 2 {
                2 * m * (d - n) + m
            } else {
                m * (d - n - 1) + 2 * n
            }
        }
        Characteristic::NotTwo => {
            if n == m && (d == n || d == n + 1) {
                2 * n
            } else {
                3 * n
            }
        }
    })
}

/// Which branch of [`m_formula`] applies, numbered from 1.
pub fn m_formula_branch(n: i64, d: i64, m: i64, chi: Characteristic) -> Result<u8> {
    positive(n, d, m)?;
    Ok(match chi {
        Characteristic::Two if d == n && n == m => 1,
        Characteristic::Two if d < n + 2 * ((n - 1) / m) && n > m && m >= 2 => 2,
        Characteristic::Two => 3,
        Characteristic::NotTwo if n == m && (d == n || d == n + 1) => 1,
        Characteristic::NotTwo => 2,
    })
}

/// Whether some strongly connected quiver has `n` vertices, `d` arrows and
/// longest primitive cycle `m`.
pub fn q_class_nonempty(n: i64, d: i64, m: i64) -> bool {
    if n < 1 || d < 1 || m < 1 {
        return false;
    }
    if n == 1 && m == 1 {
        return true;
    }
    if !(n >= m && m >= 2) {
        return false;
    }
    let l = (n - 1) / (m - 1);
    let r = (n - 1) % (m - 1);
    d >= n + l - i64::from(r == 0)
}

/// Upper bound on the degree of a nonzero closed path in `q`.
pub fn upper_bound_for_quiver(q: &Quiver, chi: Characteristic) -> Result<i64> {
    let m = max_cycle_length(q) as i64;
    if m == 0 {
        return Err(Error::NoClosedPath);
    }
    let (n, d) = (q.n() as i64, q.d() as i64);
    Ok(match chi {
        Characteristic::Two => (m * (d - n - 1) + 2 * n).min(2 * m * (d - n) + m),
        Characteristic::NotTwo => m_formula(n, d, m, chi)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxDegree {
    /// Zero when every closed path up to the cutoff is zero.
    pub degree: usize,
    pub witness: Option<CyclicWord>,
    pub certificate: Option<Certificate>,
}

/// Largest degree `<= cutoff` of a nonzero closed path, scanning degrees
/// downward. With `shortcut`, a word whose multidegree lies in the double
/// region of its support is accepted without search (characteristic two).
pub fn max_nonzero_degree(
    q: &Quiver,
    chi: Characteristic,
    cutoff: usize,
    cfg: EngineConfig,
    shortcut: bool,
) -> Result<MaxDegree> {
    if !closed_path_exists(q, q.n().max(1)) {
        return Err(Error::NoClosedPath);
    }
    let engine = Engine::with_config(q, chi, cfg);
    for deg in (1..=cutoff).rev() {
        let words = closed_words(q, &WordConstraint::Degree(deg));
        if words.is_empty() {
            continue;
        }
        if shortcut && chi == Characteristic::Two {
            let mut cache: HashMap<Multidegree, bool> = HashMap::new();
            for w in &words {
                let m = w.multidegree(q);
                let hit = *cache.entry(m.clone()).or_insert_with(|| in_omega2_of_support(q, &m));
                if hit {
                    return Ok(MaxDegree {
                        degree: deg,
                        witness: Some(w.clone()),
                        certificate: Some(Certificate::Omega2),
                    });
                }
            }
        }
        if let Some(w) = first_nonzero(&engine, words)? {
            return Ok(MaxDegree { degree: deg, witness: Some(w), certificate: None });
        }
    }
    Ok(MaxDegree { degree: 0, witness: None, certificate: None })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub word: Vec<String>,
    pub k: u32,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DValue {
    pub d: usize,
    /// Maximal nonzero trace degree.
    pub trace_degree: usize,
    /// Indecomposable generators of top degree, trace first.
    pub witnesses: Vec<Generator>,
}

/// Maximal degree of an indecomposable generator of the invariant algebra.
/// Traces come from the engine; determinants of primitive cycles are tested
/// with the oracle up to `det_cap`.
pub fn compute_d(q: &Quiver, chi: Characteristic, cfg: EngineConfig, det_cap: usize) -> Result<DValue> {
    let bound = upper_bound_for_quiver(q, chi)?;
    let md = max_nonzero_degree(q, chi, bound.max(0) as usize, cfg, false)?;
    let mut gens: Vec<Generator> = Vec::new();
    if let Some(w) = &md.witness {
        gens.push(Generator { word: w.names(q), k: 1, degree: md.degree });
    }
    for c in primitive_cycles(q) {
        let deg = 2 * c.degree();
        if deg > det_cap {
            return Err(Error::CapExceeded(format!("determinant of degree {deg} above cap {det_cap}")));
        }
        let dec = match chi {
            Characteristic::Two => decomposable_under_field::<Gf<2>>(q, &c, 2, det_cap)?,
            Characteristic::NotTwo => decomposable_under_field::<BigRational>(q, &c, 2, det_cap)?,
        };
        if !dec {
            gens.push(Generator { word: c.names(q), k: 2, degree: deg });
        }
    }
    let d = gens.iter().map(|g| g.degree).max().unwrap_or(0);
    gens.retain(|g| g.degree == d);
    Ok(DValue { d, trace_degree: md.degree, witnesses: gens })
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub quiver: serde_json::Value,
    pub word: Vec<String>,
    pub k: u32,
    pub degree: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: i64,
    pub d: i64,
    pub m: i64,
    pub char: Characteristic,
    #[serde(rename = "M_formula")]
    pub m_formula: i64,
    pub class_nonempty: bool,
    #[serde(rename = "D_exact")]
    pub d_exact: Option<usize>,
    /// Minimum of the two characteristic two theorems; the formula otherwise.
    pub effective_bound: i64,
    pub witnesses: Vec<Witness>,
    pub quivers_examined: usize,
    pub theorem_holds: bool,
}

/// Whether `D = M` is asserted for these parameters outside characteristic two.
pub fn equality_expected(n: i64, d: i64, m: i64) -> bool {
    n == m || d >= n + 2 * ((n - 1) / m) + m
}

/// Exact `D(n, d, m)` over all labelled quivers of the class.
pub fn survey_class(n: i64, d: i64, m: i64, chi: Characteristic, cfg: EngineConfig) -> Result<BoundReport> {
    positive(n, d, m)?;
    if !q_class_nonempty(n, d, m) {
        return Err(Error::InvalidParameters(format!("the class ({n}, {d}, {m}) is empty")));
    }
    if n > 4 || d > 6 {
        return Err(Error::CapExceeded(format!("survey limited to n <= 4, d <= 6, got ({n}, {d})")));
    }
    let members: Vec<Quiver> = class_members(n as usize, d as usize, m as usize).collect();
    let results: Vec<Result<DValue>> =
        members.par_iter().map(|q| compute_d(q, chi, cfg, DEFAULT_MAX_DEGREE)).collect();
    let mut best: Option<(usize, usize)> = None;
    for (i, r) in results.iter().enumerate() {
        let dv = r.as_ref().map_err(|e| e.clone())?;
        if best.is_none_or(|(b, _)| dv.d > b) {
            best = Some((dv.d, i));
        }
    }
    let mf = m_formula(n, d, m, chi)?;
    let effective = match chi {
        Characteristic::Two => mf.min(m * (d - n - 1) + 2 * n).min(2 * m * (d - n) + m),
        Characteristic::NotTwo => mf,
    };
    let (d_exact, witnesses) = match best {
        None => (None, vec![]),
        Some((dv, i)) => {
            let q = &members[i];
            let qj: serde_json::Value = serde_json::from_str(&q.to_json()).expect("valid json");
            let w = results[i]
                .as_ref()
                .expect("checked above")
                .witnesses
                .iter()
                .map(|g| Witness { quiver: qj.clone(), word: g.word.clone(), k: g.k, degree: g.degree })
                .collect();
            (Some(dv), w)
        }
    };
    let theorem_holds = match d_exact {
        None => false,
        Some(dv) => {
            let dv = dv as i64;
            let upper = dv <= mf;
            let lower = match chi {
                Characteristic::Two => dv >= mf - m,
                Characteristic::NotTwo => !equality_expected(n, d, m) || dv == mf,
            };
            upper && lower
        }
    };
    Ok(BoundReport {
        n,
        d,
        m,
        char: chi,
        m_formula: mf,
        class_nonempty: true,
        d_exact,
        effective_bound: effective,
        witnesses,
        quivers_examined: members.len(),
        theorem_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Characteristic::{NotTwo, Two};

    #[test]
    fn formula_examples() {
        assert_eq!(m_formula(2, 2, 2, Two).unwrap(), 4);
        assert_eq!(m_formula(7, 9, 3, Two).unwrap(), 15);
        assert_eq!(m_formula(3, 6, 3, Two).unwrap(), 12);
        assert_eq!(m_formula(2, 3, 2, NotTwo).unwrap(), 4);
        assert_eq!(m_formula(1, 5, 1, NotTwo).unwrap(), 3);
        assert_eq!(m_formula(7, 10, 3, Two).unwrap(), 21);
        assert!(m_formula(0, 1, 1, Two).is_err());
    }

    #[test]
    fn class_examples() {
        assert!(q_class_nonempty(1, 3, 1));
        assert!(q_class_nonempty(3, 4, 2));
        assert!(!q_class_nonempty(3, 3, 2));
        assert!(!q_class_nonempty(2, 5, 3));
        assert!(!q_class_nonempty(2, 5, 1));
    }

    #[test]
    fn quiver_bounds() {
        let ex = Quiver::new(
            &["u", "v", "w"],
            &[
                ("a", "v", "u"),
                ("x", "u", "v"),
                ("y", "v", "w"),
                ("b", "w", "v"),
                ("c", "u", "w"),
                ("z", "w", "u"),
            ],
        )
        .unwrap();
        assert_eq!(upper_bound_for_quiver(&ex, Two).unwrap(), 12);
        let one = Quiver::from_pairs(1, &[(0, 0)]).unwrap();
        assert_eq!(upper_bound_for_quiver(&one, Two).unwrap(), 1);
        let c2 = Quiver::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(upper_bound_for_quiver(&c2, NotTwo).unwrap(), 4);
        assert!(upper_bound_for_quiver(&Quiver::from_pairs(2, &[(0, 1)]).unwrap(), Two).is_err());
    }

    #[test]
    fn small_max_degrees() {
        let one = Quiver::from_pairs(1, &[(0, 0)]).unwrap();
        let cfg = EngineConfig::default();
        assert_eq!(max_nonzero_degree(&one, Two, 4, cfg, false).unwrap().degree, 1);
        assert_eq!(max_nonzero_degree(&one, NotTwo, 4, cfg, false).unwrap().degree, 2);
        let c2 = Quiver::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(max_nonzero_degree(&c2, Two, 6, cfg, true).unwrap().degree, 2);
        assert_eq!(max_nonzero_degree(&c2, NotTwo, 6, cfg, false).unwrap().degree, 4);
    }

    #[test]
    fn d_values() {
        let cfg = EngineConfig::default();
        let one = Quiver::from_pairs(1, &[(0, 0)]).unwrap();
        assert_eq!(compute_d(&one, Two, cfg, 8).unwrap().d, 2);
        let c2 = Quiver::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        for chi in [Two, NotTwo] {
            let dv = compute_d(&c2, chi, cfg, 8).unwrap();
            assert_eq!(dv.d, 4);
            assert!(dv.witnesses.iter().any(|g| g.k == 2));
        }
        let two = Quiver::from_pairs(1, &[(0, 0), (0, 0)]).unwrap();
        assert_eq!(compute_d(&two, NotTwo, cfg, 8).unwrap().d, 2);
    }
}
