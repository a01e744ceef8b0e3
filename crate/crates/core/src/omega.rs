//! Multidegree sets, complete chains, trees of chains, good components and
//! the cycle decomposition of a nonzero closed path.
//!
//! Vectors are handled relative to their support: a vector `t` is tested
//! against the subquiver of arrows with `t_a >= 1`. The plain `in_omega*`
//! functions additionally require full support in `q`.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::equiv::{first_nonzero, Characteristic, Engine, EngineConfig};
use crate::error::{Error, Result};
use crate::paths::{closed_words, primitive_cycles_within, WordConstraint};
use crate::quiver::{ArrowId, Quiver, VertexId};
use crate::word::{CyclicWord, Multidegree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorKind {
    Indecomposable,
    Decomposable,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportComponent {
    pub delta: Multidegree,
    pub vertices: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorClassification {
    pub kind: VectorKind,
    /// Strongly connected pieces of the support, when they cover it.
    pub components: Vec<SupportComponent>,
}

/// Vertices touched by the support of `t`.
pub fn support_vertices(q: &Quiver, t: &Multidegree) -> Vec<VertexId> {
    let mut vs: BTreeSet<VertexId> = BTreeSet::new();
    for a in t.support() {
        vs.insert(q.tail(a));
        vs.insert(q.head(a));
    }
    vs.into_iter().collect()
}

/// Splits the support of `t` into strongly connected components.
pub fn classify_multidegree(q: &Quiver, t: &Multidegree) -> Result<VectorClassification> {
    if t.0.len() != q.d() {
        return Err(Error::InvalidMultidegree("length does not match the quiver".into()));
    }
    if t.is_zero() {
        return Err(Error::InvalidMultidegree("zero vector".into()));
    }
    let support = t.support();
    let (sub, map) = q.arrow_subquiver(&support);
    let comps = sub.strongly_connected_components();
    let mut comp_of = vec![0usize; sub.n()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut deltas = vec![Multidegree::zero(q.d()); comps.len()];
    let mut has_arrow = vec![false; comps.len()];
    for (na, &oa) in map.iter().enumerate() {
        let (ct, ch) = (comp_of[sub.tail(na)], comp_of[sub.head(na)]);
        if ct != ch {
            return Ok(VectorClassification { kind: VectorKind::Neither, components: vec![] });
        }
        deltas[ct].0[oa] = t.0[oa];
        has_arrow[ct] = true;
    }
    if has_arrow.iter().any(|&h| !h) {
        return Ok(VectorClassification { kind: VectorKind::Neither, components: vec![] });
    }
    let components: Vec<SupportComponent> = comps
        .iter()
        .zip(deltas)
        .map(|(c, delta)| SupportComponent {
            delta,
            vertices: c.iter().map(|&v| q.vertex_by_name(sub.vertex_name(v)).expect("same names")).collect(),
        })
        .collect();
    let kind = if components.len() == 1 { VectorKind::Indecomposable } else { VectorKind::Decomposable };
    Ok(VectorClassification { kind, components })
}

fn is_decomposable(q: &Quiver, t: &Multidegree) -> bool {
    !t.is_zero() && matches!(classify_multidegree(q, t), Ok(c) if c.kind == VectorKind::Decomposable)
}

/// Realizable by a closed path whose arrow set is the support of `t`.
pub fn in_omega0_of_support(q: &Quiver, t: &Multidegree) -> bool {
    if t.is_zero() || !t.is_balanced(q) {
        return false;
    }
    let (sub, _) = q.arrow_subquiver(&t.support());
    sub.is_strongly_connected()
}

/// Primitive closed paths all of whose arrows have `t_a >= 2`.
pub fn double_paths(q: &Quiver, t: &Multidegree) -> Vec<CyclicWord> {
    let allowed: Vec<bool> = t.0.iter().map(|&x| x >= 2).collect();
    primitive_cycles_within(q, &allowed)
}

pub fn in_omega3_of_support(q: &Quiver, t: &Multidegree) -> bool {
    in_omega0_of_support(q, t) && double_paths(q, t).is_empty()
}

/// A double path whose residual is not decomposable, if any.
pub fn omega2_obstruction(q: &Quiver, t: &Multidegree) -> Option<CyclicWord> {
    double_paths(q, t).into_iter().find(|a| {
        let r = t.checked_sub(&a.multidegree(q).scale(2)).expect("double path fits");
        !is_decomposable(q, &r)
    })
}

pub fn in_omega2_of_support(q: &Quiver, t: &Multidegree) -> bool {
    in_omega0_of_support(q, t) && omega2_obstruction(q, t).is_none()
}

pub fn in_omega0(q: &Quiver, t: &Multidegree) -> bool {
    t.has_full_support() && in_omega0_of_support(q, t)
}

pub fn in_omega2(q: &Quiver, t: &Multidegree) -> bool {
    t.has_full_support() && in_omega2_of_support(q, t)
}

pub fn in_omega3(q: &Quiver, t: &Multidegree) -> bool {
    t.has_full_support() && in_omega3_of_support(q, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

/// Whether some closed path with multidegree `t` is nonzero, with the first
/// such word in enumeration order.
pub fn omega_equiv_of_support(
    q: &Quiver,
    t: &Multidegree,
    chi: Characteristic,
    cfg: EngineConfig,
) -> Result<(Tri, Option<CyclicWord>)> {
    if !in_omega0_of_support(q, t) {
        return Ok((Tri::No, None));
    }
    let engine = Engine::with_config(q, chi, cfg);
    let words = closed_words(q, &WordConstraint::Multidegree(t.clone()));
    match first_nonzero(&engine, words) {
        Ok(Some(w)) => Ok((Tri::Yes, Some(w))),
        Ok(None) => Ok((Tri::No, None)),
        Err(e) if e.is_inconclusive() => Ok((Tri::Unknown, None)),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaMembership {
    pub delta: Multidegree,
    pub omega0: bool,
    pub omega3: bool,
    pub omega2: bool,
    pub omega_equiv: Tri,
    /// A nonzero word with this multidegree.
    pub witness: Option<CyclicWord>,
    /// A double path whose residual is not decomposable.
    pub obstruction: Option<CyclicWord>,
}

impl OmegaMembership {
    pub fn to_json_value(&self, q: &Quiver) -> serde_json::Value {
        serde_json::json!({
            "delta": self.delta.to_json_value(q),
            "omega0": self.omega0,
            "omega3": self.omega3,
            "omega2": self.omega2,
            "omega_equiv": self.omega_equiv,
            "witness": self.witness.as_ref().map(|w| w.names(q)),
            "obstruction": self.obstruction.as_ref().map(|w| w.names(q)),
        })
    }

    /// The inclusions `omega3 ⊆ omega2 ⊆ omega_equiv ⊆ omega0`, skipping
    /// the undecided link.
    pub fn inclusions_hold(&self) -> bool {
        let eq = self.omega_equiv;
        (!self.omega3 || self.omega2)
            && (!self.omega2 || eq != Tri::No)
            && (eq != Tri::Yes || self.omega0)
    }
}

/// Membership in all four sets, with respect to `q` itself.
pub fn omega_membership(
    q: &Quiver,
    t: &Multidegree,
    chi: Characteristic,
    cfg: EngineConfig,
) -> Result<OmegaMembership> {
    if t.0.len() != q.d() {
        return Err(Error::InvalidMultidegree("length does not match the quiver".into()));
    }
    let full = t.has_full_support();
    let omega0 = full && in_omega0_of_support(q, t);
    let obstruction = if omega0 { omega2_obstruction(q, t) } else { None };
    let omega2 = omega0 && obstruction.is_none();
    let omega3 = omega0 && double_paths(q, t).is_empty();
    let (omega_equiv, witness) =
        if omega0 { omega_equiv_of_support(q, t, chi, cfg)? } else { (Tri::No, None) };
    Ok(OmegaMembership { delta: t.clone(), omega0, omega3, omega2, omega_equiv, witness, obstruction })
}

/// A complete chain for `t`: primitive double paths, the residual, and the
/// components of the residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteChain {
    pub paths: Vec<CyclicWord>,
    pub residual: Multidegree,
    pub components: Vec<SupportComponent>,
}

impl CompleteChain {
    pub fn to_json_value(&self, q: &Quiver) -> serde_json::Value {
        serde_json::json!({
            "paths": self.paths.iter().map(|p| p.names(q)).collect::<Vec<_>>(),
            "residual": self.residual.to_json_value(q),
            "components": self.components.iter().map(|c| c.delta.to_json_value(q)).collect::<Vec<_>>(),
        })
    }
}

fn vertex_set(q: &Quiver, w: &CyclicWord) -> BTreeSet<VertexId> {
    w.vertices(q).into_iter().collect()
}

/// Checks every clause of the complete chain definition.
pub fn check_complete_chain(q: &Quiver, t: &Multidegree, chain: &CompleteChain) -> Result<()> {
    let fail = |m: String| Err(Error::Violation(m));
    let doubles = double_paths(q, t);
    if chain.paths.is_empty() {
        if !doubles.is_empty() {
            return fail("empty chain although double paths exist".into());
        }
        return Ok(());
    }
    let sets: Vec<BTreeSet<VertexId>> = chain.paths.iter().map(|p| vertex_set(q, p)).collect();
    for i in 0..sets.len() {
        if !chain.paths[i].is_primitive(q) || !doubles.contains(&chain.paths[i].canonical()) {
            return fail(format!("path {i} is not a primitive double path"));
        }
        for j in i + 1..sets.len() {
            let meet = !sets[i].is_disjoint(&sets[j]);
            if meet != (j == i + 1) {
                return fail(format!("paths {i} and {j} break the chain pattern"));
            }
        }
    }
    let mut sum = Multidegree::zero(q.d());
    for p in &chain.paths {
        sum = sum.add(&p.multidegree(q).scale(2));
    }
    let Some(theta) = t.checked_sub(&sum) else { return fail("residual is negative".into()) };
    if theta.is_zero() || theta != chain.residual {
        return fail("residual is zero or inconsistent".into());
    }
    let cls = classify_multidegree(q, &theta)?;
    if cls.kind != VectorKind::Decomposable || cls.components != chain.components {
        return fail("residual is not decomposable into the stated components".into());
    }
    for c in &cls.components {
        if !in_omega2_of_support(q, &c.delta) {
            return fail("a residual component is outside its double region".into());
        }
    }
    let tlen = chain.paths.len();
    if tlen >= 2 && !end_attached(q, &chain.paths, &cls.components) {
        return fail("components are not attached to the two ends only".into());
    }
    Ok(())
}

fn end_attached(q: &Quiver, paths: &[CyclicWord], comps: &[SupportComponent]) -> bool {
    if comps.len() != 2 {
        return false;
    }
    let t = paths.len();
    let meets = |c: &SupportComponent, j: usize| {
        let vs = vertex_set(q, &paths[j]);
        c.vertices.iter().any(|v| vs.contains(v))
    };
    let ok = |first: &SupportComponent, last: &SupportComponent| {
        (0..t).all(|j| meets(first, j) == (j == 0) && meets(last, j) == (j == t - 1))
    };
    ok(&comps[0], &comps[1]) || ok(&comps[1], &comps[0])
}

/// Searches chains of increasing length, candidates in canonical order, and
/// returns the first complete one.
pub fn build_complete_chain(q: &Quiver, t: &Multidegree) -> Result<CompleteChain> {
    if !in_omega2_of_support(q, t) {
        return Err(Error::InvalidParameters("vector is not in the double region of its support".into()));
    }
    let doubles = double_paths(q, t);
    if doubles.is_empty() {
        let cls = classify_multidegree(q, t)?;
        return Ok(CompleteChain { paths: vec![], residual: t.clone(), components: cls.components });
    }
    let sets: Vec<BTreeSet<VertexId>> = doubles.iter().map(|p| vertex_set(q, p)).collect();
    let twice: Vec<Multidegree> = doubles.iter().map(|p| p.multidegree(q).scale(2)).collect();
    for len in 1..=doubles.len() {
        let mut stack = Vec::new();
        if let Some(c) = chain_search(q, t, &doubles, &sets, &twice, len, &mut stack, t.clone()) {
            return Ok(c);
        }
    }
    Err(Error::Violation("no complete chain exists for a vector in the double region".into()))
}

#[allow(clippy::too_many_arguments)]
fn chain_search(
    q: &Quiver,
    t: &Multidegree,
    doubles: &[CyclicWord],
    sets: &[BTreeSet<VertexId>],
    twice: &[Multidegree],
    len: usize,
    stack: &mut Vec<usize>,
    rest: Multidegree,
) -> Option<CompleteChain> {
    if stack.len() == len {
        let chain = CompleteChain {
            paths: stack.iter().map(|&i| doubles[i].clone()).collect(),
            residual: rest.clone(),
            components: classify_multidegree(q, &rest).ok()?.components,
        };
        return check_complete_chain(q, t, &chain).ok().map(|_| chain);
    }
    for i in 0..doubles.len() {
        if stack.contains(&i) {
            continue;
        }
        if let Some(&last) = stack.last() {
            if sets[last].is_disjoint(&sets[i]) {
                continue;
            }
            if stack[..stack.len() - 1].iter().any(|&j| !sets[j].is_disjoint(&sets[i])) {
                continue;
            }
        }
        let Some(next) = rest.checked_sub(&twice[i]) else { continue };
        if next.is_zero() {
            continue;
        }
        stack.push(i);
        let found = chain_search(q, t, doubles, sets, twice, len, stack, next);
        stack.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaTree {
    pub delta: Multidegree,
    pub chain: CompleteChain,
    pub children: Vec<DeltaTree>,
}

impl DeltaTree {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn to_json_value(&self, q: &Quiver) -> serde_json::Value {
        serde_json::json!({
            "delta": self.delta.to_json_value(q),
            "chain": self.chain.to_json_value(q),
            "children": self.children.iter().map(|c| c.to_json_value(q)).collect::<Vec<_>>(),
        })
    }

    /// Recursively checks the tree clauses.
    pub fn check(&self, q: &Quiver) -> Result<()> {
        check_complete_chain(q, &self.delta, &self.chain)?;
        if self.chain.paths.is_empty() {
            if !self.is_leaf() || !in_omega3_of_support(q, &self.delta) {
                return Err(Error::Violation("leaf mismatch".into()));
            }
            return Ok(());
        }
        let kids: Vec<&Multidegree> = self.children.iter().map(|c| &c.delta).collect();
        let comps: Vec<&Multidegree> = self.chain.components.iter().map(|c| &c.delta).collect();
        if kids != comps {
            return Err(Error::Violation("children do not match the residual components".into()));
        }
        self.children.iter().try_for_each(|c| c.check(q))
    }
}

pub fn build_delta_tree(q: &Quiver, t: &Multidegree) -> Result<DeltaTree> {
    let chain = build_complete_chain(q, t)?;
    let mut children = Vec::new();
    if !chain.paths.is_empty() {
        for c in &chain.components {
            children.push(build_delta_tree(q, &c.delta)?);
        }
    }
    Ok(DeltaTree { delta: t.clone(), chain, children })
}

/// A subpath of a closed path, by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subpath {
    pub start: usize,
    pub arrows: Vec<ArrowId>,
    pub tail: VertexId,
    pub head: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodDecomposition {
    pub null_component: Vec<VertexId>,
    pub good_components: Vec<Vec<VertexId>>,
    pub good_subpaths: Vec<Subpath>,
}

/// Cuts `h` at the vertices of the primitive path `a` and sorts the pieces
/// into good components.
pub fn good_component_decomposition(q: &Quiver, a: &CyclicWord, h: &CyclicWord) -> Result<GoodDecomposition> {
    if a.degree() < 2 || !a.is_primitive(q) {
        return Err(Error::InvalidParameters("need a primitive closed path of degree >= 2".into()));
    }
    for &x in a.arrows() {
        if h.arrow_degree(x) != 2 {
            return Err(Error::InvalidParameters(format!(
                "arrow `{}` occurs {} times, expected 2",
                q.arrow_name(x),
                h.arrow_degree(x)
            )));
        }
    }
    let on_a: Vec<VertexId> = a.vertices(q);
    let mut mark = vec![false; q.n()];
    for &v in &on_a {
        mark[v] = true;
    }
    let w = h.arrows();
    let n = w.len();
    let start = (0..n).find(|&i| mark[q.tail(w[i])]).expect("h meets a");
    let mut good = Vec::new();
    let mut cur: Vec<ArrowId> = Vec::new();
    let mut cur_start = start;
    for k in 0..n {
        let i = (start + k) % n;
        if cur.is_empty() {
            cur_start = i;
        }
        cur.push(w[i]);
        if mark[q.head(w[i])] {
            let is_a_arrow = cur.len() == 1 && a.arrows().contains(&cur[0]);
            if !is_a_arrow {
                good.push(Subpath {
                    start: cur_start,
                    tail: q.tail(cur[0]),
                    head: q.head(*cur.last().expect("non-empty")),
                    arrows: cur.clone(),
                });
            }
            cur.clear();
        }
    }
    // union-find over Ver(a)
    let mut parent: HashMap<VertexId, VertexId> = on_a.iter().map(|&v| (v, v)).collect();
    fn find(p: &mut HashMap<VertexId, VertexId>, v: VertexId) -> VertexId {
        let r = p[&v];
        if r == v {
            return v;
        }
        let root = find(p, r);
        p.insert(v, root);
        root
    }
    let mut touched = BTreeSet::new();
    for g in &good {
        touched.insert(g.tail);
        touched.insert(g.head);
        let (x, y) = (find(&mut parent, g.tail), find(&mut parent, g.head));
        if x != y {
            parent.insert(x.max(y), x.min(y));
        }
    }
    let mut groups: std::collections::BTreeMap<VertexId, Vec<VertexId>> = Default::default();
    for &v in &touched {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    let null_component: Vec<VertexId> = on_a.iter().copied().filter(|v| !touched.contains(v)).collect();
    Ok(GoodDecomposition { null_component, good_components: groups.into_values().collect(), good_subpaths: good })
}

/// A closed concatenation of distinct good subpaths that starts at `u` and
/// passes through `w`, as indices into `good_subpaths`.
pub fn good_cycle_through(dec: &GoodDecomposition, u: VertexId, w: VertexId) -> Option<Vec<usize>> {
    fn go(
        dec: &GoodDecomposition,
        u: VertexId,
        w: VertexId,
        at: VertexId,
        seen_w: bool,
        used: &mut Vec<usize>,
    ) -> bool {
        for (i, g) in dec.good_subpaths.iter().enumerate() {
            if g.tail != at || used.contains(&i) {
                continue;
            }
            used.push(i);
            let sw = seen_w || g.head == w;
            if g.head == u && sw {
                return true;
            }
            if go(dec, u, w, g.head, sw, used) {
                return true;
            }
            used.pop();
        }
        false
    }
    let mut used = Vec::new();
    go(dec, u, w, u, u == w, &mut used).then_some(used)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    pub b_paths: Vec<CyclicWord>,
    pub c_paths: Vec<CyclicWord>,
    pub x_arrows: Vec<ArrowId>,
    pub y_arrows: Vec<ArrowId>,
    pub z_arrows: Vec<ArrowId>,
    /// `d - n + 1` of the support of `h`.
    pub bound: usize,
}

impl PathDecomposition {
    pub fn r(&self) -> usize {
        self.b_paths.len()
    }

    pub fn t(&self) -> usize {
        self.c_paths.len()
    }

    pub fn to_json_value(&self, q: &Quiver) -> serde_json::Value {
        let names = |v: &[ArrowId]| v.iter().map(|&a| q.arrow_name(a).to_string()).collect::<Vec<_>>();
        serde_json::json!({
            "b_paths": self.b_paths.iter().map(|p| p.names(q)).collect::<Vec<_>>(),
            "c_paths": self.c_paths.iter().map(|p| p.names(q)).collect::<Vec<_>>(),
            "x_arrows": names(&self.x_arrows),
            "y_arrows": names(&self.y_arrows),
            "z_arrows": names(&self.z_arrows),
            "r": self.r(),
            "t": self.t(),
            "bound": self.bound,
        })
    }

    /// Re-checks every constraint against `h`.
    pub fn check(&self, q: &Quiver, h: &CyclicWord) -> Result<()> {
        let fail = |m: &str| Err(Error::Violation(m.to_string()));
        let mut sum = Multidegree::zero(q.d());
        for b in &self.b_paths {
            sum = sum.add(&b.multidegree(q));
        }
        for c in &self.c_paths {
            sum = sum.add(&c.multidegree(q).scale(2));
        }
        if sum != h.multidegree(q) {
            return fail("multidegrees do not add up");
        }
        let all: BTreeSet<&CyclicWord> = self.b_paths.iter().chain(&self.c_paths).collect();
        if all.len() != self.r() + self.t() || all.iter().any(|p| !p.is_primitive(q)) {
            return fail("paths are not distinct primitive paths");
        }
        let arrows: BTreeSet<ArrowId> =
            self.x_arrows.iter().chain(&self.y_arrows).chain(&self.z_arrows).copied().collect();
        if arrows.len() != self.r() + 2 * self.t() {
            return fail("distinguished arrows repeat");
        }
        for (j, c) in self.c_paths.iter().enumerate() {
            for x in [self.y_arrows[j], self.z_arrows[j]] {
                if !c.arrows().contains(&x) || h.arrow_degree(x) != 2 {
                    return fail("y/z arrow condition");
                }
            }
        }
        for (i, b) in self.b_paths.iter().enumerate() {
            let x = self.x_arrows[i];
            let in_c: usize = self.c_paths.iter().map(|c| c.arrow_degree(x)).sum();
            if !b.arrows().contains(&x) || h.arrow_degree(x) != 2 * in_c + 1 {
                return fail("x arrow condition");
            }
        }
        if self.r() < 1 || self.r() + self.t() > self.bound {
            return fail("count bound");
        }
        Ok(())
    }
}

/// Exhaustive search over coefficient assignments `0/1/2` to primitive
/// cycles of the support of `h`.
pub fn find_path_decomposition(q: &Quiver, h: &CyclicWord) -> Result<PathDecomposition> {
    let m = h.multidegree(q);
    let (sub, _) = q.arrow_subquiver(&m.support());
    let bound = sub.d() + 1 - sub.n();
    let allowed: Vec<bool> = m.0.iter().map(|&x| x >= 1).collect();
    let cycles = primitive_cycles_within(q, &allowed);
    let mdegs: Vec<Multidegree> = cycles.iter().map(|c| c.multidegree(q)).collect();
    let mut coef = vec![0u8; cycles.len()];
    let mut found = None;
    assign(h, &cycles, &mdegs, bound, 0, m.clone(), &mut coef, &mut found);
    found.ok_or_else(|| Error::Violation(format!("no cycle decomposition found for {}", h.display(q))))
}

#[allow(clippy::too_many_arguments)]
fn assign(
    h: &CyclicWord,
    cycles: &[CyclicWord],
    mdegs: &[Multidegree],
    bound: usize,
    i: usize,
    rest: Multidegree,
    coef: &mut Vec<u8>,
    found: &mut Option<PathDecomposition>,
) {
    if found.is_some() {
        return;
    }
    if i == cycles.len() {
        if !rest.is_zero() {
            return;
        }
        let bs: Vec<usize> = (0..cycles.len()).filter(|&k| coef[k] == 1).collect();
        let cs: Vec<usize> = (0..cycles.len()).filter(|&k| coef[k] == 2).collect();
        if bs.is_empty() || bs.len() + cs.len() > bound {
            return;
        }
        if let Some((x, y, z)) = pick_arrows(h, cycles, &bs, &cs) {
            *found = Some(PathDecomposition {
                b_paths: bs.iter().map(|&k| cycles[k].clone()).collect(),
                c_paths: cs.iter().map(|&k| cycles[k].clone()).collect(),
                x_arrows: x,
                y_arrows: y,
                z_arrows: z,
                bound,
            });
        }
        return;
    }
    for c in [1u8, 2, 0] {
        let next = if c == 0 {
            Some(rest.clone())
        } else {
            rest.checked_sub(&mdegs[i].scale(c as u32))
        };
        if let Some(next) = next {
            coef[i] = c;
            assign(h, cycles, mdegs, bound, i + 1, next, coef, found);
            coef[i] = 0;
        }
    }
}

fn pick_arrows(
    h: &CyclicWord,
    cycles: &[CyclicWord],
    bs: &[usize],
    cs: &[usize],
) -> Option<(Vec<ArrowId>, Vec<ArrowId>, Vec<ArrowId>)> {
    // slots: one per b path, two per c path
    let mut options: Vec<Vec<ArrowId>> = Vec::new();
    for &b in bs {
        let opts: Vec<ArrowId> = distinct(cycles[b].arrows())
            .into_iter()
            .filter(|&x| {
                let in_c: usize = cs.iter().map(|&c| cycles[c].arrow_degree(x)).sum();
                h.arrow_degree(x) == 2 * in_c + 1
            })
            .collect();
        options.push(opts);
    }
    for &c in cs {
        let opts: Vec<ArrowId> =
            distinct(cycles[c].arrows()).into_iter().filter(|&x| h.arrow_degree(x) == 2).collect();
        options.push(opts.clone());
        options.push(opts);
    }
    let mut chosen = Vec::new();
    if !pick(&options, &mut chosen, bs.len()) {
        return None;
    }
    let x = chosen[..bs.len()].to_vec();
    let y = (0..cs.len()).map(|j| chosen[bs.len() + 2 * j]).collect();
    let z = (0..cs.len()).map(|j| chosen[bs.len() + 2 * j + 1]).collect();
    Some((x, y, z))
}

fn distinct(v: &[ArrowId]) -> Vec<ArrowId> {
    let s: BTreeSet<ArrowId> = v.iter().copied().collect();
    s.into_iter().collect()
}

fn pick(options: &[Vec<ArrowId>], chosen: &mut Vec<ArrowId>, nb: usize) -> bool {
    let k = chosen.len();
    if k == options.len() {
        return true;
    }
    for &x in &options[k] {
        if chosen.contains(&x) {
            continue;
        }
        // y_j < z_j to avoid mirrored duplicates
        if k >= nb && (k - nb) % 2 == 1 && x <= chosen[k - 1] {
            continue;
        }
        chosen.push(x);
        if pick(options, chosen, nb) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use Characteristic::Two;

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

    fn md(q: &Quiver, s: &str) -> Multidegree {
        Multidegree::from_json(q, s).unwrap()
    }

    #[test]
    fn classification() {
        let q = example();
        let r = classify_multidegree(&q, &md(&q, r#"{"x":1,"y":1,"b":1,"a":1}"#)).unwrap();
        assert_eq!(r.kind, VectorKind::Indecomposable);
        let two = Quiver::from_pairs(2, &[(0, 0), (1, 1), (0, 1)]).unwrap();
        let r = classify_multidegree(&two, &Multidegree(vec![1, 1, 0])).unwrap();
        assert_eq!(r.kind, VectorKind::Decomposable);
        assert_eq!(r.components.len(), 2);
        let r = classify_multidegree(&two, &Multidegree(vec![1, 1, 1])).unwrap();
        assert_eq!(r.kind, VectorKind::Neither);
        assert!(classify_multidegree(&two, &Multidegree(vec![0, 0, 0])).is_err());
    }

    #[test]
    fn example_three_one_membership() {
        let q = example();
        let h2 = CyclicWord::parse(&q, "czcbyzxa").unwrap();
        let m = omega_membership(&q, &h2.multidegree(&q), Two, EngineConfig::default()).unwrap();
        assert!(m.omega0 && !m.omega2 && !m.omega3);
        assert_eq!(m.omega_equiv, Tri::Yes);
        assert!(m.inclusions_hold());
        assert_eq!(m.obstruction.unwrap().display(&q), "cz");
    }

    #[test]
    fn two_cycle_square() {
        let q = Quiver::new(&["u", "v"], &[("a", "u", "v"), ("b", "v", "u")]).unwrap();
        let t = Multidegree(vec![2, 2]);
        let m = omega_membership(&q, &t, Two, EngineConfig::default()).unwrap();
        assert!(m.omega0 && !m.omega2);
        assert_eq!(m.omega_equiv, Tri::No);
        assert!(build_complete_chain(&q, &t).is_err());
        let one = Multidegree(vec![1, 1]);
        assert!(in_omega3(&q, &one));
        let tree = build_delta_tree(&q, &one).unwrap();
        assert_eq!(tree.node_count(), 1);
        tree.check(&q).unwrap();
    }

    #[test]
    fn chain_with_two_handles() {
        // loops p at u and r at w hang off the 2-cycle u<->w
        let q = Quiver::new(
            &["u", "w"],
            &[("c", "u", "w"), ("z", "w", "u"), ("p", "u", "u"), ("r", "w", "w")],
        )
        .unwrap();
        let t = md(&q, r#"{"c":2,"z":2,"p":1,"r":1}"#);
        assert!(in_omega2(&q, &t));
        let chain = build_complete_chain(&q, &t).unwrap();
        assert_eq!(chain.paths.len(), 1);
        assert_eq!(chain.components.len(), 2);
        check_complete_chain(&q, &t, &chain).unwrap();
        let tree = build_delta_tree(&q, &t).unwrap();
        assert_eq!(tree.node_count(), 3);
        tree.check(&q).unwrap();
    }

    #[test]
    fn good_components() {
        let q = example();
        let a = CyclicWord::parse(&q, "cz").unwrap();
        let h2 = CyclicWord::parse(&q, "czcbyzxa").unwrap();
        let g = good_component_decomposition(&q, &a, &h2).unwrap();
        assert_eq!(g.good_subpaths.len(), 2);
        assert_eq!(g.good_components.len(), 2);
        assert!(g.null_component.is_empty());
        for comp in &g.good_components {
            for &u in comp {
                for &w in comp {
                    assert!(good_cycle_through(&g, u, w).is_some());
                }
            }
        }
        let czcz = CyclicWord::parse(&q, "czcz").unwrap();
        let g = good_component_decomposition(&q, &a, &czcz).unwrap();
        assert!(g.good_components.is_empty());
        assert_eq!(g.null_component.len(), 2);
        assert!(good_component_decomposition(&q, &a, &CyclicWord::parse(&q, "cz").unwrap()).is_err());
    }

    #[test]
    fn path_decompositions() {
        let q = example();
        let h2 = CyclicWord::parse(&q, "czcbyzxa").unwrap();
        let p = find_path_decomposition(&q, &h2).unwrap();
        p.check(&q, &h2).unwrap();
        assert!(p.r() >= 1 && p.r() + p.t() <= 4);
        let c2 = Quiver::new(&["u", "v"], &[("a", "u", "v"), ("b", "v", "u")]).unwrap();
        let ab = CyclicWord::parse(&c2, "ab").unwrap();
        let p = find_path_decomposition(&c2, &ab).unwrap();
        assert_eq!((p.r(), p.t()), (1, 0));
    }
}
