//! Quivers and closed paths of large nonzero degree in each class.
//!
//! Families:
//! * `a` one vertex with `d` loops, `h = a1 ... ad`;
//! * `b` an `n`-cycle closed by `t = d - n + 1` parallel arrows;
//! * `c`, `d` chains of rhombi and cycles with a multidegree in the double
//!   region, searched for on a candidate shape;
//! * `e` characteristic other than two, degree `M` exactly.
//!
//! A rhombus on `m` new vertices is two `m`-cycles through a shared path of
//! `m - 2` arrows. Its left tip `L` and right tip `R` are the two vertices
//! off the shared path `A -> ... -> B`; the arrows are `e: L -> A`,
//! `g: B -> L`, `h: R -> A` and `f: B -> R`.

use std::fmt;
use std::str::FromStr;

use num::rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::decompose::{decomposable_under_field, DEFAULT_MAX_DEGREE};
use crate::algebra::matrix::{word_product, Mat2, Sigma};
use crate::algebra::substitute::{substitution_certificate, Subst};
use crate::bounds::{equality_expected, m_formula, q_class_nonempty};
use crate::equiv::{first_nonzero, Characteristic, Engine, EngineConfig, SignRelation};
use crate::error::{Error, Result};
use crate::omega::{in_omega0, in_omega2};
use crate::paths::{closed_words, max_cycle_length, WordConstraint};
use crate::quiver::{ArrowId, Quiver, VertexId};
use crate::sweep::class_members;
use crate::word::{CyclicWord, Multidegree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    LoopBouquet,
    CycleParallel,
    RhombusChain,
    RhombusCycle,
    CharNot2Family,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::LoopBouquet => 'a',
            Family::CycleParallel => 'b',
            Family::RhombusChain => 'c',
            Family::RhombusCycle => 'd',
            Family::CharNot2Family => 'e',
        }
    }

    pub fn characteristic(self) -> Characteristic {
        match self {
            Family::CharNot2Family => Characteristic::NotTwo,
            _ => Characteristic::Two,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "a" | "loop_bouquet" => Family::LoopBouquet,
            "b" | "cycle_parallel" => Family::CycleParallel,
            "c" | "rhombus_chain" => Family::RhombusChain,
            "d" | "rhombus_cycle" => Family::RhombusCycle,
            "e" | "char_not2_family" => Family::CharNot2Family,
            other => return Err(Error::Parse(format!("unknown family `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: i64,
    pub d: i64,
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessBody {
    Word(CyclicWord),
    Delta(Multidegree),
}

#[derive(Debug, Clone)]
pub struct ExtremalWitness {
    pub family: Family,
    pub params: Params,
    pub quiver: Quiver,
    pub body: WitnessBody,
    pub claimed_degree: i64,
    /// Number of rhombi and right cycle length minus one, for family `e`.
    pub rhombi: Option<(usize, usize)>,
}

impl ExtremalWitness {
    pub fn multidegree(&self) -> Multidegree {
        match &self.body {
            WitnessBody::Word(w) => w.multidegree(&self.quiver),
            WitnessBody::Delta(t) => t.clone(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let q = &self.quiver;
        let quiver: serde_json::Value = serde_json::from_str(&q.to_json()).expect("valid json");
        let (word, delta) = match &self.body {
            WitnessBody::Word(w) => (Some(w.names(q)), w.multidegree(q).to_json_value(q)),
            WitnessBody::Delta(t) => (None, t.to_json_value(q)),
        };
        serde_json::json!({
            "family": self.family,
            "parameters": self.params,
            "quiver": quiver,
            "word": word,
            "delta": delta,
            "claimed_degree": self.claimed_degree,
        })
    }
}

#[derive(Default)]
struct Builder {
    vertices: Vec<String>,
    arrows: Vec<(String, String, String)>,
}

impl Builder {
    fn vertex(&mut self, name: impl Into<String>) -> String {
        let name = name.into();
        self.vertices.push(name.clone());
        name
    }

    fn arrow(&mut self, name: impl Into<String>, t: &str, h: &str) {
        self.arrows.push((name.into(), t.to_string(), h.to_string()));
    }

    fn build(self) -> Result<Quiver> {
        Quiver::new(&self.vertices, &self.arrows)
    }

    /// Adds rhombus `k` at the left tip and returns its right tip.
    fn rhombus(&mut self, k: usize, m: usize, left: &str) -> String {
        let shared: Vec<String> = (0..m - 1).map(|i| self.vertex(format!("w{k}.{i}"))).collect();
        let right = self.vertex(format!("x{k}"));
        let (a, b) = (&shared[0], &shared[m - 2]);
        self.arrow(format!("e{k}"), left, a);
        self.arrow(format!("g{k}"), b, left);
        for i in 0..m - 2 {
            self.arrow(format!("s{k}.{i}"), &shared[i], &shared[i + 1]);
        }
        self.arrow(format!("h{k}"), &right, a);
        self.arrow(format!("f{k}"), b, &right);
        right
    }

    /// A cycle of `len` arrows from `at` through new vertices `v1 ...`,
    /// named `x1 ...`, with a loop `c{i}` at each new vertex when `loops`.
    fn right_cycle(&mut self, at: &str, len: usize, loops: bool) {
        let mut prev = at.to_string();
        for i in 1..len {
            let v = self.vertex(format!("v{i}"));
            self.arrow(format!("x{i}"), &prev, &v);
            if loops {
                self.arrow(format!("c{i}"), &v, &v);
            }
            prev = v;
        }
        self.arrow(format!("x{len}"), &prev, at);
    }

    /// A cycle of `m` arrows through `at` and `m - 1` new vertices; returns
    /// the last new vertex.
    fn cycle(&mut self, k: usize, m: usize, at: &str) -> String {
        let mut prev = at.to_string();
        for i in 0..m - 1 {
            let v = self.vertex(format!("y{k}.{i}"));
            self.arrow(format!("k{k}.{i}"), &prev, &v);
            prev = v;
        }
        self.arrow(format!("k{k}.{}", m - 1), &prev, at);
        prev
    }

    /// Two `m`-cycles sharing a path of `t - 1` arrows, the first through
    /// `at`; returns a vertex of the second off the shared path.
    fn double_cycle(&mut self, m: usize, t: usize, at: &str) -> String {
        let mut first = vec![at.to_string()];
        for i in 0..m - t - 1 {
            first.push(self.vertex(format!("p{i}")));
        }
        let shared: Vec<String> = (0..t).map(|i| self.vertex(format!("q{i}"))).collect();
        first.extend(shared.iter().cloned());
        for i in 0..m {
            self.arrow(format!("o{i}"), &first[i].clone(), &first[(i + 1) % m].clone());
        }
        let mut second = vec![shared[t - 1].clone()];
        for i in 0..m - t {
            second.push(self.vertex(format!("z{i}")));
        }
        second.push(shared[0].clone());
        for i in 0..second.len() - 1 {
            self.arrow(format!("r{i}"), &second[i].clone(), &second[i + 1].clone());
        }
        second[m - t].clone()
    }
}

fn check_positive(p: Params) -> Result<()> {
    if p.n < 1 || p.d < 1 || p.m < 1 {
        return Err(Error::InvalidParameters("n, d, m must be positive".into()));
    }
    Ok(())
}

fn lr(n: i64, m: i64) -> (i64, i64) {
    ((n - 1) / m, (n - 1) % m)
}

/// `(i, j, t)` with `1 <= t < m` and the counts of the cycle family.
pub fn solve_ijt(n: i64, d: i64, m: i64) -> Option<(i64, i64, i64)> {
    let k = d - n - 1;
    if k < 0 {
        return None;
    }
    for t in 1..m {
        for i in 0..=k / 2 {
            let j = k - 2 * i;
            if n == m * (i + j + 2) - j - t && d == m * (i + j + 2) + 2 * i - t + 1 {
                return Some((i, j, t));
            }
        }
    }
    None
}

fn bouquet(d: usize) -> Result<Quiver> {
    let mut b = Builder::default();
    b.vertex("v");
    for i in 1..=d {
        b.arrow(format!("a{i}"), "v", "v");
    }
    b.build()
}

fn cycle_with_parallels(n: usize, t: usize) -> Result<Quiver> {
    let mut b = Builder::default();
    for i in 0..n {
        b.vertex(format!("v{i}"));
    }
    for i in 1..=t {
        b.arrow(format!("a{i}"), "v0", "v1");
    }
    for i in 1..n {
        b.arrow(format!("b{i}"), &format!("v{i}"), &format!("v{}", (i + 1) % n));
    }
    b.build()
}

fn word_of(q: &Quiver, names: &[String]) -> Result<CyclicWord> {
    CyclicWord::from_names(q, names)
}

/// `a_{i1} b a_{i2} b ...` on [`cycle_with_parallels`].
fn cycle_word(q: &Quiver, n: usize, picks: &[usize]) -> Result<CyclicWord> {
    let mut names = Vec::new();
    for &i in picks {
        names.push(format!("a{i}"));
        names.extend((1..n).map(|k| format!("b{k}")));
    }
    word_of(q, &names)
}

/// Loop-decorated rhombus chain used by family `e`, rhombi numbered from
/// `first`.
pub fn decorated_chain(first: usize, l: usize, m: usize, r: usize, s: usize) -> Result<Quiver> {
    let mut b = Builder::default();
    let mut tip = b.vertex("u");
    b.arrow("a", "u", "u");
    for i in 1..=s {
        b.arrow(format!("b{i}"), "u", "u");
    }
    for k in first..first + l {
        tip = b.rhombus(k, m, &tip);
    }
    b.right_cycle(&tip, r + 1, true);
    b.build()
}

/// Multidegree with every vertex degree three on [`decorated_chain`]. When
/// the right cycle is a single loop it carries 1, and the loop `b1` at `u`
/// takes its place, with the rhombus weights turned around.
pub fn decorated_delta(q: &Quiver) -> Multidegree {
    let single = q.arrow_by_name("x2").is_none();
    let mut t = Multidegree::zero(q.d());
    for a in 0..q.d() {
        let name = q.arrow_name(a);
        t.0[a] = match (name.chars().next(), single) {
            (Some('s'), _) => 3,
            (Some('a') | Some('c'), _) => 1,
            (Some('h') | Some('f'), false) | (Some('e') | Some('g') | Some('x'), true) => 1,
            (Some('e') | Some('g') | Some('x'), false) | (Some('h') | Some('f'), true) => 2,
            _ if single && name == "b1" => 1,
            _ => 0,
        };
    }
    t
}

/// A closed word with multidegree `t`, first in enumeration order.
fn some_word(q: &Quiver, t: &Multidegree) -> Result<CyclicWord> {
    let mut found = None;
    crate::paths::for_each_closed_word(q, &WordConstraint::Multidegree(t.clone()), |w| {
        found = Some(w.clone());
        std::ops::ControlFlow::Break(())
    });
    found.ok_or_else(|| Error::Violation("no closed path realises the multidegree".into()))
}

fn chain_quiver(n: i64, d: i64, m: i64) -> Result<Quiver> {
    let (l, r) = lr(n, m);
    let t = d - n - 2 * l + 1;
    let (l, r, m) = (l as usize, r as usize, m as usize);
    let mut b = Builder::default();
    let mut tip = b.vertex("u");
    for k in 1..=l {
        tip = b.rhombus(k, m, &tip);
    }
    for i in 2..=t {
        b.arrow(format!("t{i}"), "u", "w1.0");
    }
    b.right_cycle(&tip, r + 1, false);
    b.build()
}

fn cycle_family_quiver(m: i64, i: i64, j: i64, t: i64) -> Result<Quiver> {
    let m = m as usize;
    let mut b = Builder::default();
    let mut tip = b.vertex("u");
    for k in 1..=i as usize {
        tip = b.rhombus(k, m, &tip);
    }
    tip = b.double_cycle(m, t as usize, &tip);
    for k in 1..=j as usize {
        tip = b.cycle(k, m, &tip);
    }
    b.build()
}

/// Limit on search nodes when looking for a multidegree.
pub const DELTA_SEARCH_NODES: usize = 2_000_000;

/// A full-support multidegree of total `target` in the double region of `q`.
pub fn search_delta(q: &Quiver, target: usize, max_nodes: usize) -> Result<Option<Multidegree>> {
    let d = q.d();
    if target < d {
        return Ok(None);
    }
    let mut last = vec![None; q.n()];
    for a in 0..d {
        last[q.tail(a)] = Some(a);
        last[q.head(a)] = Some(a);
    }
    let closes: Vec<Vec<VertexId>> =
        (0..d).map(|a| (0..q.n()).filter(|&v| last[v] == Some(a)).collect()).collect();
    let mut t = Multidegree::zero(d);
    let mut nodes = 0usize;

    fn rec(
        q: &Quiver,
        a: usize,
        left: usize,
        t: &mut Multidegree,
        closes: &[Vec<VertexId>],
        nodes: &mut usize,
        max_nodes: usize,
    ) -> Result<bool> {
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(Error::CapExceeded(format!("multidegree search above {max_nodes} nodes")));
        }
        let d = q.d();
        if a == d {
            return Ok(left == 0 && in_omega2(q, t));
        }
        let rest = d - a - 1;
        for k in 1..=left.saturating_sub(rest) {
            t.0[a] = k as u32;
            let balanced = closes[a].iter().all(|&v| {
                let (mut i, mut o) = (0, 0);
                for b in 0..d {
                    if q.head(b) == v {
                        i += t.0[b];
                    }
                    if q.tail(b) == v {
                        o += t.0[b];
                    }
                }
                i == o
            });
            if balanced && rec(q, a + 1, left - k, t, closes, nodes, max_nodes)? {
                return Ok(true);
            }
        }
        t.0[a] = 0;
        Ok(false)
    }

    if rec(q, 0, target, &mut t, &closes, &mut nodes, max_nodes)? {
        Ok(Some(t))
    } else {
        Ok(None)
    }
}

/// Candidate shape first, then every labelled quiver of the class at desk
/// scale.
fn delta_witness(candidate: Quiver, p: Params, target: i64) -> Result<(Quiver, Multidegree)> {
    let target = target as usize;
    if let Some(t) = search_delta(&candidate, target, DELTA_SEARCH_NODES)? {
        return Ok((candidate, t));
    }
    if p.n <= 4 && p.d <= 6 {
        for q in class_members(p.n as usize, p.d as usize, p.m as usize) {
            if let Some(t) = search_delta(&q, target, DELTA_SEARCH_NODES)? {
                return Ok((q, t));
            }
        }
    }
    Err(Error::Inconclusive {
        states: 0,
        reason: format!(
            "open interpretation: no multidegree of total {target} in the double region was found for ({}, {}, {})",
            p.n, p.d, p.m
        ),
    })
}

/// Builds the witness of `family` for the given parameters.
pub fn build_extremal(family: Family, p: Params) -> Result<ExtremalWitness> {
    check_positive(p)?;
    let Params { n, d, m } = p;
    let bad = |why: &str| Error::InvalidParameters(format!("family {family}: {why}"));
    let word = |quiver: Quiver, w: CyclicWord, claimed: i64| ExtremalWitness {
        family,
        params: p,
        quiver,
        body: WitnessBody::Word(w),
        claimed_degree: claimed,
        rhombi: None,
    };
    match family {
        Family::LoopBouquet => {
            if n != 1 || m != 1 {
                return Err(bad("requires n = m = 1"));
            }
            let q = bouquet(d as usize)?;
            let names: Vec<String> = (1..=d).map(|i| format!("a{i}")).collect();
            let w = word_of(&q, &names)?;
            Ok(word(q, w, d))
        }
        Family::CycleParallel => {
            if n != m || m < 2 || d < n {
                return Err(bad("requires n = m >= 2 and d >= n"));
            }
            let t = (d - n + 1) as usize;
            let q = cycle_with_parallels(n as usize, t)?;
            let picks: Vec<usize> = (1..=t).collect();
            let w = cycle_word(&q, n as usize, &picks)?;
            Ok(word(q, w, t as i64 * n))
        }
        Family::RhombusChain => {
            let (l, r) = lr(n, m);
            if !(n > m && m >= 2 && d >= n + 2 * l) {
                return Err(bad("requires n > m >= 2 and d >= n + 2[(n-1)/m]"));
            }
            let claimed = m * (d - n - 1) + 2 * n - (r + 1);
            let (q, t) = delta_witness(chain_quiver(n, d, m)?, p, claimed)?;
            Ok(ExtremalWitness { family, params: p, quiver: q, body: WitnessBody::Delta(t), claimed_degree: claimed, rhombi: None })
        }
        Family::RhombusCycle => {
            let (l, _) = lr(n, m);
            if !(n > m && m >= 2 && d < n + 2 * l) {
                return Err(bad("requires n > m >= 2 and d < n + 2[(n-1)/m]"));
            }
            let (i, j, t) = solve_ijt(n, d, m).ok_or_else(|| bad("no admissible (i, j, t)"))?;
            let claimed = 2 * m * (2 * i + j + 1);
            let (q, t) = delta_witness(cycle_family_quiver(m, i, j, t)?, p, claimed)?;
            Ok(ExtremalWitness { family, params: p, quiver: q, body: WitnessBody::Delta(t), claimed_degree: claimed, rhombi: None })
        }
        Family::CharNot2Family => {
            if !q_class_nonempty(n, d, m) || !equality_expected(n, d, m) {
                return Err(bad("requires d >= n + 2[(n-1)/m] + m or n = m, in a nonempty class"));
            }
            let claimed = m_formula(n, d, m, Characteristic::NotTwo)?;
            if m == 1 {
                let q = bouquet(d as usize)?;
                let names: Vec<String> = match d {
                    1 => vec!["a1".into(), "a1".into()],
                    2 => vec!["a1".into(), "a2".into()],
                    _ => vec!["a1".into(), "a2".into(), "a3".into()],
                };
                let w = word_of(&q, &names)?;
                return Ok(word(q, w, claimed));
            }
            if n == m {
                let t = (d - n + 1) as usize;
                let q = cycle_with_parallels(n as usize, t)?;
                let picks: &[usize] = if d <= n + 1 { &[1, 1] } else { &[1, 2, 3] };
                let w = cycle_word(&q, n as usize, picks)?;
                return Ok(word(q, w, claimed));
            }
            let (l, r) = lr(n, m);
            let s = d - n - 2 * l - r - 1;
            let q = decorated_chain(1, l as usize, m as usize, r as usize, s as usize)?;
            let t = decorated_delta(&q);
            if r > 0 {
                let w = some_word(&q, &t)?;
                let mut out = word(q, w, claimed);
                out.rhombi = Some((l as usize, r as usize));
                return Ok(out);
            }
            let engine = Engine::new(&q, Characteristic::NotTwo);
            let w = first_nonzero(&engine, closed_words(&q, &WordConstraint::Multidegree(t)))?
                .ok_or_else(|| Error::Violation("every closed path of the decorated chain is zero".into()))?;
            Ok(word(q, w, claimed))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub family: Family,
    pub params: Params,
    pub char: Characteristic,
    pub degree: usize,
    #[serde(rename = "M")]
    pub m_value: i64,
    pub gap: i64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), passed, detail: detail.into() }
}

/// Runs every check that applies to the witness.
pub fn verify_witness(w: &ExtremalWitness, chi: Characteristic, cfg: EngineConfig) -> Result<VerificationReport> {
    if chi != w.family.characteristic() {
        return Err(Error::InvalidParameters(format!(
            "family {} is stated for characteristic {}",
            w.family,
            w.family.characteristic()
        )));
    }
    let q = &w.quiver;
    let Params { n, d, m } = w.params;
    let mut checks = Vec::new();

    let mq = max_cycle_length(q) as i64;
    checks.push(check(
        "class",
        q.is_strongly_connected() && q.n() as i64 == n && q.d() as i64 == d && mq == m,
        format!("n = {}, d = {}, m = {mq}", q.n(), q.d()),
    ));

    let delta = w.multidegree();
    let degree = delta.total();
    let expected = expected_degree(w.family, w.params)?;
    checks.push(check(
        "degree",
        degree as i64 == expected && w.claimed_degree == expected,
        format!("degree {degree}, formula {expected}"),
    ));

    let engine = Engine::with_config(q, chi, cfg);
    match &w.body {
        WitnessBody::Word(h) => {
            let dec = engine.decide(h)?;
            checks.push(check("nonzero", !dec.equiv_zero, format!("{} states", dec.states_explored)));
        }
        WitnessBody::Delta(t) => {
            checks.push(check("omega0", in_omega0(q, t), "balanced with strongly connected support"));
            checks.push(check("omega2", in_omega2(q, t), "every double path leaves a decomposable residual"));
            let words = closed_words(q, &WordConstraint::Multidegree(t.clone()));
            let found = first_nonzero(&engine, words)?;
            let detail = found.as_ref().map(|h| h.display(q)).unwrap_or_else(|| "none".into());
            checks.push(check("nonzero", found.is_some(), detail));
        }
    }

    let mv = m_formula(n, d, m, chi)?;
    let gap = mv - degree as i64;
    match chi {
        Characteristic::Two => checks.push(check("gap", (0..=m).contains(&gap), format!("M - deg = {gap}"))),
        Characteristic::NotTwo => checks.push(check("gap", gap == 0, format!("M - deg = {gap}"))),
    }

    if let (Some((l, r)), WitnessBody::Word(h)) = (w.rhombi, &w.body) {
        checks.push(check(
            "vertex_degrees",
            (0..q.n()).all(|v| h.vertex_degree(q, v) == 3),
            "every vertex visited three times",
        ));
        checks.extend(reduction_checks(q, h, l, r, m as usize, cfg)?);
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport { family: w.family, params: w.params, char: chi, degree, m_value: mv, gap, checks, passed })
}

fn expected_degree(family: Family, p: Params) -> Result<i64> {
    let Params { n, d, m } = p;
    let (l, r) = lr(n, m);
    Ok(match family {
        Family::LoopBouquet => d,
        Family::CycleParallel => (d - n + 1) * n,
        Family::RhombusChain => m * (d - n - 1) + 2 * n - (r + 1),
        Family::RhombusCycle => {
            let _ = l;
            let (i, j, _) = solve_ijt(n, d, m).ok_or_else(|| Error::InvalidParameters("no (i, j, t)".into()))?;
            2 * m * (2 * i + j + 1)
        }
        Family::CharNot2Family => m_formula(n, d, m, Characteristic::NotTwo)?,
    })
}

/// Peels rhombi one at a time. With `a = I`, `e = J` and the other arrows of
/// the left rhombus except `f` set to the identity, the trace of `h` must be
/// plus or minus the trace of the shorter word in which `f` is the loop at
/// the new left tip, with matrix `X_f I`. The last word is checked with the
/// oracle and by the sign of moving each loop between the two halves.
fn reduction_checks(q: &Quiver, h: &CyclicWord, l: usize, r: usize, m: usize, cfg: EngineConfig) -> Result<Vec<Check>> {
    type F = BigRational;
    let mut out = Vec::new();
    let mut cur_q = q.clone();
    let mut cur_h = h.clone();
    for k in 1..=l {
        let name = |a: ArrowId| cur_q.arrow_name(a).to_string();
        let left = |nm: &str| {
            nm == "a"
                || nm.starts_with('b')
                || [format!("e{k}"), format!("g{k}"), format!("h{k}")].iter().any(|x| x == nm)
                || nm.starts_with(&format!("s{k}."))
        };
        let f = format!("f{k}");
        let assignment: Vec<Subst> = (0..cur_q.d())
            .map(|a| {
                let nm = name(a);
                if nm == "a" {
                    Subst::I
                } else if nm == format!("e{k}") {
                    Subst::J
                } else if left(&nm) {
                    Subst::E
                } else {
                    Subst::Generic
                }
            })
            .collect();
        let p = substitution_certificate::<F>(&cur_q, &cur_h, &assignment)?.polynomial;

        let next_q = decorated_chain(k + 1, l - k, m, r, 0)?;
        let names: Vec<String> = cur_h
            .arrows()
            .iter()
            .map(|&a| name(a))
            .filter(|nm| !left(nm))
            .map(|nm| if nm == f { "a".to_string() } else { nm })
            .collect();
        let next_h = CyclicWord::from_names(&next_q, &names)?;
        let fid = cur_q.arrow_by_name(&f).expect("rhombus arrow");
        let i_mat = Subst::I.matrix::<F>(&cur_q, 0);
        let p2 = word_product(next_h.arrows(), |a| {
            let nm = next_q.arrow_name(a);
            if nm == "a" {
                Mat2::generic(&cur_q, fid).mul(&i_mat)
            } else {
                Mat2::generic(&cur_q, cur_q.arrow_by_name(nm).expect("shared arrow"))
            }
        })
        .trace();
        let same = p == p2 || p == -&p2;
        out.push(check(
            &format!("reduction_{k}"),
            same && !p.is_zero(),
            format!("{} terms after substitution", p.num_terms()),
        ));
        cur_q = next_q;
        cur_h = next_h;
    }

    let engine = Engine::with_config(&cur_q, Characteristic::NotTwo, cfg);
    let nonzero = !engine.decide(&cur_h)?.equiv_zero;
    let deg = cur_h.degree();
    let oracle = if deg <= DEFAULT_MAX_DEGREE {
        Some(!decomposable_under_field::<F>(&cur_q, &cur_h, Sigma::Trace.k(), DEFAULT_MAX_DEGREE)?)
    } else {
        None
    };
    out.push(check(
        "base_word",
        nonzero && oracle != Some(false),
        format!("{} nonzero; oracle indecomposable: {oracle:?}", cur_h.display(&cur_q)),
    ));

    // x1 y1 ... x_{r+1} y_{r+1} x1 ... x_{r+1}, y_i the loop at the head of x_i.
    let loop_name = |i: usize| if i <= r { format!("c{i}") } else { "a".to_string() };
    let half = |with: &[bool]| {
        let mut v = Vec::new();
        for i in 1..=r + 1 {
            v.push(format!("x{i}"));
            if with[i - 1] {
                v.push(loop_name(i));
            }
        }
        v
    };
    let all = vec![true; r + 1];
    let none = vec![false; r + 1];
    let h0 = CyclicWord::from_names(&cur_q, &[half(&all), half(&none)].concat())?;
    let mut signs_ok = true;
    for mask in 0u32..(1 << (r + 1)) {
        let first: Vec<bool> = (0..=r).map(|i| mask >> i & 1 == 0).collect();
        let second: Vec<bool> = first.iter().map(|b| !b).collect();
        let w = CyclicWord::from_names(&cur_q, &[half(&first), half(&second)].concat())?;
        let expect = if mask.count_ones() % 2 == 0 { SignRelation::Plus } else { SignRelation::Minus };
        if engine.equivalent_sign(&h0, &w)? != expect {
            signs_ok = false;
        }
    }
    out.push(check("sign_sum", signs_ok, format!("{} arrangements of the loops", 1u32 << (r + 1))));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Characteristic::{NotTwo, Two};

    fn p(n: i64, d: i64, m: i64) -> Params {
        Params { n, d, m }
    }

    #[test]
    fn shapes_have_requested_counts() {
        for (l, m, r, s) in [(1, 2, 1, 0), (2, 3, 0, 1), (1, 4, 3, 2), (2, 2, 0, 1)] {
            let q = decorated_chain(1, l, m, r, s).unwrap();
            assert_eq!(q.n(), 1 + l * m + r);
            assert_eq!(max_cycle_length(&q), m);
            let t = decorated_delta(&q);
            assert!(t.is_balanced(&q));
            assert!((0..q.n()).all(|v| t.vertex_degree(&q, v) == 3));
        }
        let q = cycle_family_quiver(3, 1, 1, 2).unwrap();
        assert_eq!(q.n() as i64, 3 * 4 - 1 - 2);
        assert_eq!(q.d() as i64, 3 * 4 + 2 - 2 + 1);
        assert_eq!(max_cycle_length(&q), 3);
        assert!(q.is_strongly_connected());
    }

    #[test]
    fn ijt() {
        assert_eq!(solve_ijt(3, 4, 2), Some((0, 0, 1)));
        assert_eq!(solve_ijt(7, 9, 3), Some((0, 1, 1)));
        assert_eq!(solve_ijt(3, 5, 2), None);
    }

    #[test]
    fn small_words() {
        let cfg = EngineConfig::default();
        let w = build_extremal(Family::LoopBouquet, p(1, 3, 1)).unwrap();
        assert_eq!(w.claimed_degree, 3);
        assert!(verify_witness(&w, Two, cfg).unwrap().passed);
        let w = build_extremal(Family::CycleParallel, p(2, 3, 2)).unwrap();
        match &w.body {
            WitnessBody::Word(h) => assert_eq!(h.display(&w.quiver), "a1 b1 a2 b1"),
            _ => unreachable!(),
        }
        let r = verify_witness(&w, Two, cfg).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.gap, 0);
        assert!(verify_witness(&w, NotTwo, cfg).is_err());
        assert!(build_extremal(Family::LoopBouquet, p(2, 3, 2)).is_err());
    }

    #[test]
    fn family_e_small() {
        let w = build_extremal(Family::CharNot2Family, p(4, 8, 2)).unwrap();
        assert_eq!(w.claimed_degree, 12);
        let r = verify_witness(&w, NotTwo, EngineConfig::default()).unwrap();
        assert!(r.passed, "{:#?}", r.checks);
        assert_eq!(r.checks.len(), 8);
        let w = build_extremal(Family::CharNot2Family, p(3, 7, 2)).unwrap();
        assert!(verify_witness(&w, NotTwo, EngineConfig::default()).unwrap().passed);
        assert!(build_extremal(Family::CharNot2Family, p(4, 7, 2)).is_err());
    }
}
