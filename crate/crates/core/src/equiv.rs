//! Decision procedure for `h ≡ 0`.
//!
//! A state is a closed word in canonical form together with a sign. Moves
//! transpose two cyclically adjacent fine factors at a vertex visited at
//! least three times; with two factors a transposition is only a rotation.
//! In characteristic other than two each move flips the sign.
//!
//! A state is recognised as zero when
//! * some rotation reads `A A B` with `A` closed and `B` non-empty;
//! * in characteristic two, the word is `A A`;
//! * otherwise, some vertex is visited at least four times;
//! * otherwise, both signs of one word are reachable.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::fine_factors;
use crate::quiver::{ArrowId, Quiver};
use crate::word::{canonical_rotation, CyclicWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Characteristic {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "not2")]
    NotTwo,
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Characteristic::Two => "2",
            Characteristic::NotTwo => "not2",
        })
    }
}

impl FromStr for Characteristic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "2" | "two" | "char2" => Ok(Characteristic::Two),
            "not2" | "nottwo" | "0" | "odd" => Ok(Characteristic::NotTwo),
            other => Err(Error::Parse(format!("unknown characteristic `{other}`"))),
        }
    }
}

/// Why a word was found to be zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    /// A closed factor repeats next to itself in front of a non-empty rest.
    Rule3,
    /// A square in characteristic two, or four visits otherwise.
    Rule4,
    /// Both signs of one word are reachable.
    Sign,
    /// Multidegree in the doubly decomposable region; only reported when
    /// the shortcut is enabled.
    Omega2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub max_states: usize,
    pub max_degree: usize,
    /// Also permute factors of proper closed subwords. Experimental.
    pub contextual: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { max_states: 1_000_000, max_degree: 40, contextual: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub equiv_zero: bool,
    pub states_explored: usize,
    pub certificate: Option<Certificate>,
    /// State at which a zero detector fired.
    pub witness: Option<CyclicWord>,
}

impl Decision {
    pub fn to_json_value(&self, q: &Quiver, word: &CyclicWord, chi: Characteristic) -> serde_json::Value {
        serde_json::json!({
            "word": word.names(q),
            "char": chi.to_string(),
            "equiv_zero": self.equiv_zero,
            "states_explored": self.states_explored,
            "certificate": self.certificate,
            "witness": self.witness.as_ref().map(|w| w.names(q)),
        })
    }
}

/// Signs with which a word is reachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignRelation {
    Plus,
    Minus,
    Both,
    Unreachable,
}

/// Every state reachable from a start word.
#[derive(Debug, Clone)]
pub struct Component {
    /// Canonical word to sign mask: bit 0 plus, bit 1 minus.
    pub states: HashMap<Vec<ArrowId>, u8>,
    /// First detector that fired, with its state, in visiting order.
    pub zero: Option<(Certificate, Vec<ArrowId>)>,
}

impl Component {
    pub fn is_zero(&self) -> bool {
        self.zero.is_some()
    }

    pub fn words(&self) -> impl Iterator<Item = CyclicWord> + '_ {
        self.states.keys().map(|w| CyclicWord::from_vec_unchecked(w.clone()))
    }
}

pub struct Engine<'q> {
    q: &'q Quiver,
    chi: Characteristic,
    cfg: EngineConfig,
}

impl<'q> Engine<'q> {
    pub fn new(q: &'q Quiver, chi: Characteristic) -> Self {
        Engine { q, chi, cfg: EngineConfig::default() }
    }

    pub fn with_config(q: &'q Quiver, chi: Characteristic, cfg: EngineConfig) -> Self {
        Engine { q, chi, cfg }
    }

    pub fn quiver(&self) -> &Quiver {
        self.q
    }

    pub fn characteristic(&self) -> Characteristic {
        self.chi
    }

    /// Zero detectors that need no search.
    pub fn detect(&self, w: &[ArrowId]) -> Option<Certificate> {
        let q = self.q;
        let n = w.len();
        if self.chi == Characteristic::NotTwo {
            let mut visits = vec![0usize; q.n()];
            for &a in w {
                visits[q.tail(a)] += 1;
                if visits[q.tail(a)] >= 4 {
                    return Some(Certificate::Rule4);
                }
            }
        }
        let mut square = false;
        for i in 0..n {
            for l in 1..=n / 2 {
                if q.tail(w[i]) != q.head(w[(i + l - 1) % n]) {
                    continue;
                }
                if (0..l).all(|k| w[(i + k) % n] == w[(i + l + k) % n]) {
                    if 2 * l < n {
                        return Some(Certificate::Rule3);
                    }
                    square = true;
                }
            }
        }
        if square && self.chi == Characteristic::Two {
            return Some(Certificate::Rule4);
        }
        None
    }

    /// Canonical neighbours of a canonical state, each with a sign flip flag.
    pub fn moves(&self, w: &[ArrowId]) -> Vec<(Vec<ArrowId>, bool)> {
        let q = self.q;
        let flips = self.chi == Characteristic::NotTwo;
        let mut out = Vec::new();
        let mut seen_vertex = vec![false; q.n()];
        for &a in w {
            let v = q.tail(a);
            if seen_vertex[v] {
                continue;
            }
            seen_vertex[v] = true;
            let f = fine_factors(q, w, v);
            let t = f.len();
            if t < 3 {
                continue;
            }
            for k in 0..t {
                let j = (k + 1) % t;
                let mut order: Vec<usize> = (0..t).collect();
                order.swap(k, j);
                let mut nw = Vec::with_capacity(w.len());
                for &i in &order {
                    nw.extend_from_slice(&f[i]);
                }
                out.push((canonical_rotation(&nw), flips));
            }
        }
        if self.cfg.contextual {
            self.contextual_moves(w, &mut out);
        }
        out
    }

    fn contextual_moves(&self, w: &[ArrowId], out: &mut Vec<(Vec<ArrowId>, bool)>) {
        let q = self.q;
        let n = w.len();
        let rot: Vec<ArrowId> = w.iter().chain(w.iter()).copied().collect();
        for i in 0..n {
            let s = q.tail(w[i]);
            for l in 2..n {
                if q.head(rot[i + l - 1]) != s {
                    continue;
                }
                let seg = &rot[i..i + l];
                let cuts: Vec<usize> = (0..l).filter(|&p| q.tail(seg[p]) == s).collect();
                let k = cuts.len();
                if k < 2 {
                    continue;
                }
                let factors: Vec<&[ArrowId]> = (0..k)
                    .map(|j| &seg[cuts[j]..if j + 1 < k { cuts[j + 1] } else { l }])
                    .collect();
                for j in 0..k - 1 {
                    let mut nw: Vec<ArrowId> = Vec::with_capacity(n);
                    for (p, fac) in factors.iter().enumerate() {
                        let src = if p == j {
                            factors[j + 1]
                        } else if p == j + 1 {
                            factors[j]
                        } else {
                            fac
                        };
                        nw.extend_from_slice(src);
                    }
                    nw.extend_from_slice(&rot[i + l..i + n]);
                    let flip = self.chi == Characteristic::NotTwo && k >= 3;
                    out.push((canonical_rotation(&nw), flip));
                }
            }
        }
    }

    fn check_degree(&self, w: &CyclicWord) -> Result<()> {
        if w.degree() > self.cfg.max_degree {
            return Err(Error::Inconclusive {
                states: 0,
                reason: format!("degree {} exceeds cap {}", w.degree(), self.cfg.max_degree),
            });
        }
        Ok(())
    }

    /// Decides `w ≡ 0`, stopping at the first detector.
    pub fn decide(&self, w: &CyclicWord) -> Result<Decision> {
        self.check_degree(w)?;
        let start = canonical_rotation(w.arrows());
        let mut visited: HashMap<Vec<ArrowId>, u8> = HashMap::new();
        let mut queue = VecDeque::new();
        visited.insert(start.clone(), 1);
        queue.push_back((start, 0u8));
        let zero = |cert, state: Vec<ArrowId>, n| Decision {
            equiv_zero: true,
            states_explored: n,
            certificate: Some(cert),
            witness: Some(CyclicWord::from_vec_unchecked(state)),
        };
        while let Some((state, sign)) = queue.pop_front() {
            if let Some(c) = self.detect(&state) {
                return Ok(zero(c, state, visited.len()));
            }
            for (nb, flip) in self.moves(&state) {
                let s = sign ^ flip as u8;
                let bit = 1u8 << s;
                match visited.get_mut(&nb) {
                    None => {
                        visited.insert(nb.clone(), bit);
                        queue.push_back((nb, s));
                    }
                    Some(mask) if *mask & bit != 0 => {}
                    Some(mask) => {
                        *mask |= bit;
                        let n = visited.len();
                        return Ok(zero(Certificate::Sign, nb, n));
                    }
                }
            }
            if visited.len() > self.cfg.max_states {
                return Err(Error::Inconclusive {
                    states: visited.len(),
                    reason: format!("state cap {} reached", self.cfg.max_states),
                });
            }
        }
        Ok(Decision { equiv_zero: false, states_explored: visited.len(), certificate: None, witness: None })
    }

    /// Explores the whole component of `w`.
    pub fn component(&self, w: &CyclicWord) -> Result<Component> {
        self.check_degree(w)?;
        let start = canonical_rotation(w.arrows());
        let mut states: HashMap<Vec<ArrowId>, u8> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut zero = None;
        states.insert(start.clone(), 1);
        queue.push_back((start, 0u8));
        while let Some((state, sign)) = queue.pop_front() {
            if zero.is_none() {
                if let Some(c) = self.detect(&state) {
                    zero = Some((c, state.clone()));
                }
            }
            for (nb, flip) in self.moves(&state) {
                let s = sign ^ flip as u8;
                let bit = 1u8 << s;
                match states.get_mut(&nb) {
                    None => {
                        states.insert(nb.clone(), bit);
                        queue.push_back((nb, s));
                    }
                    Some(mask) if *mask & bit != 0 => {}
                    Some(mask) => {
                        *mask |= bit;
                        if zero.is_none() {
                            zero = Some((Certificate::Sign, nb.clone()));
                        }
                        queue.push_back((nb, s));
                    }
                }
            }
            if states.len() > self.cfg.max_states {
                return Err(Error::Inconclusive {
                    states: states.len(),
                    reason: format!("state cap {} reached", self.cfg.max_states),
                });
            }
        }
        Ok(Component { states, zero })
    }

    /// Signs with which `w2` is reachable from `w1` taken with sign plus.
    pub fn equivalent_sign(&self, w1: &CyclicWord, w2: &CyclicWord) -> Result<SignRelation> {
        let comp = self.component(w1)?;
        let target = canonical_rotation(w2.arrows());
        Ok(match comp.states.get(&target).copied().unwrap_or(0) {
            0 => SignRelation::Unreachable,
            1 => SignRelation::Plus,
            2 => SignRelation::Minus,
            _ => SignRelation::Both,
        })
    }
}

/// Convenience wrapper with the default configuration.
pub fn equiv_zero(q: &Quiver, w: &CyclicWord, chi: Characteristic) -> Result<Decision> {
    Engine::new(q, chi).decide(w)
}

/// Scans `words` in order and returns the first that is not zero. Words in
/// an already explored component are skipped. Fails as inconclusive when
/// nothing non-zero was found but some component hit a cap.
pub fn first_nonzero<I>(engine: &Engine<'_>, words: I) -> Result<Option<CyclicWord>>
where
    I: IntoIterator<Item = CyclicWord>,
{
    let mut seen: HashMap<Vec<ArrowId>, bool> = HashMap::new();
    let mut inconclusive: Option<Error> = None;
    for w in words {
        let key = canonical_rotation(w.arrows());
        if seen.contains_key(&key) {
            continue;
        }
        if engine.detect(&key).is_some() {
            seen.insert(key, true);
            continue;
        }
        match engine.component(&w) {
            Ok(c) => {
                let z = c.is_zero();
                for s in c.states.into_keys() {
                    seen.insert(s, z);
                }
                if !z {
                    return Ok(Some(CyclicWord::from_vec_unchecked(key)));
                }
            }
            Err(e) if e.is_inconclusive() => {
                seen.insert(key, false);
                inconclusive.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    match inconclusive {
        Some(e) => Err(e),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Quiver {
        Quiver::new(
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
        .unwrap()
    }

    fn loops(k: usize) -> Quiver {
        let names: Vec<String> = (0..k).map(|i| ["x", "y", "z", "t"][i].to_string()).collect();
        let arrows: Vec<(String, String, String)> =
            names.iter().map(|n| (n.clone(), "v".to_string(), "v".to_string())).collect();
        Quiver::new(&["v".to_string()], &arrows).unwrap()
    }

    use Characteristic::{NotTwo, Two};

    #[test]
    fn example_words() {
        let q = example();
        let h1 = CyclicWord::parse(&q, "czczxyba").unwrap();
        let h2 = CyclicWord::parse(&q, "czcbyzxa").unwrap();
        for chi in [Two, NotTwo] {
            let d1 = equiv_zero(&q, &h1, chi).unwrap();
            assert!(d1.equiv_zero);
            assert_eq!(d1.certificate, Some(Certificate::Rule3));
            assert!(!equiv_zero(&q, &h2, chi).unwrap().equiv_zero);
        }
    }

    #[test]
    fn loops_small_words() {
        let q = loops(2);
        let p = |s| CyclicWord::parse(&q, s).unwrap();
        assert!(equiv_zero(&q, &p("xx"), Two).unwrap().equiv_zero);
        assert!(!equiv_zero(&q, &p("xx"), NotTwo).unwrap().equiv_zero);
        assert!(!equiv_zero(&q, &p("xy"), Two).unwrap().equiv_zero);
        assert!(equiv_zero(&q, &p("xxy"), NotTwo).unwrap().equiv_zero);
        assert!(equiv_zero(&q, &p("xyxy"), NotTwo).unwrap().equiv_zero);
        let q3 = loops(3);
        let xyz = CyclicWord::parse(&q3, "xyz").unwrap();
        let xzy = CyclicWord::parse(&q3, "xzy").unwrap();
        let e = Engine::new(&q3, NotTwo);
        assert_eq!(e.equivalent_sign(&xyz, &xzy).unwrap(), SignRelation::Minus);
        assert!(!e.decide(&xyz).unwrap().equiv_zero);
        let e2 = Engine::new(&q3, Two);
        assert_eq!(e2.equivalent_sign(&xyz, &xzy).unwrap(), SignRelation::Plus);
    }

    #[test]
    fn two_loops_commute_by_rotation() {
        let q = loops(2);
        let xy = CyclicWord::parse(&q, "xy").unwrap();
        let yx = CyclicWord::parse(&q, "yx").unwrap();
        let e = Engine::new(&q, NotTwo);
        assert_eq!(e.equivalent_sign(&xy, &yx).unwrap(), SignRelation::Plus);
    }

    #[test]
    fn caps_report_inconclusive() {
        let q = example();
        let h2 = CyclicWord::parse(&q, "czcbyzxa").unwrap();
        let cfg = EngineConfig { max_states: 1, ..EngineConfig::default() };
        let err = Engine::with_config(&q, Two, cfg).decide(&h2).unwrap_err();
        assert!(err.is_inconclusive());
        let cfg = EngineConfig { max_degree: 4, ..EngineConfig::default() };
        assert!(Engine::with_config(&q, Two, cfg).decide(&h2).unwrap_err().is_inconclusive());
    }

    #[test]
    fn characteristic_parsing() {
        assert_eq!("2".parse::<Characteristic>().unwrap(), Two);
        assert_eq!("not2".parse::<Characteristic>().unwrap(), NotTwo);
        assert!("3".parse::<Characteristic>().is_err());
    }
}
