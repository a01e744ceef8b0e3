//! Enumeration of closed words and primitive cycles, vertex factorizations
//! and restriction of a closed path to a vertex subset.

use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Quiver, VertexId};
use crate::word::{CyclicWord, Multidegree};

/// All primitive closed paths, in canonical form, sorted.
pub fn primitive_cycles(q: &Quiver) -> Vec<CyclicWord> {
    primitive_cycles_within(q, &vec![true; q.d()])
}

/// Primitive closed paths using only arrows flagged in `allowed`.
pub fn primitive_cycles_within(q: &Quiver, allowed: &[bool]) -> Vec<CyclicWord> {
    let mut out = BTreeSet::new();
    let mut on_path = vec![false; q.n()];
    let mut path = Vec::new();
    for s in 0..q.n() {
        on_path[s] = true;
        cycle_dfs(q, allowed, s, s, &mut on_path, &mut path, &mut out);
        on_path[s] = false;
    }
    out.into_iter().collect()
}

fn cycle_dfs(
    q: &Quiver,
    allowed: &[bool],
    start: VertexId,
    at: VertexId,
    on_path: &mut [bool],
    path: &mut Vec<ArrowId>,
    out: &mut BTreeSet<CyclicWord>,
) {
    for a in q.out_arrows(at) {
        if !allowed[a] {
            continue;
        }
        let h = q.head(a);
        if h == start {
            path.push(a);
            out.insert(CyclicWord::from_vec_unchecked(path.clone()).canonical());
            path.pop();
        } else if h > start && !on_path[h] {
            on_path[h] = true;
            path.push(a);
            cycle_dfs(q, allowed, start, h, on_path, path, out);
            path.pop();
            on_path[h] = false;
        }
    }
}

/// Maximal length of a primitive closed path, 0 if there is none.
pub fn max_cycle_length(q: &Quiver) -> usize {
    primitive_cycles(q).iter().map(|c| c.degree()).max().unwrap_or(0)
}

/// Selection of closed words to enumerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordConstraint {
    /// Exactly this multidegree.
    Multidegree(Multidegree),
    /// Degree exactly `k`.
    Degree(usize),
    /// Degree between 1 and `k`.
    UpTo(usize),
}

/// Visits every closed word satisfying `c` once, in canonical form, in
/// lexicographic order of arrow indices. The callback can stop the walk.
pub fn for_each_closed_word<F>(q: &Quiver, c: &WordConstraint, mut f: F)
where
    F: FnMut(&CyclicWord) -> ControlFlow<()>,
{
    let (lo, hi, mut remaining) = match c {
        WordConstraint::Multidegree(m) => {
            if m.0.len() != q.d() || m.is_zero() {
                return;
            }
            let t = m.total();
            (t, t, Some(m.0.clone()))
        }
        WordConstraint::Degree(k) => (*k, *k, None),
        WordConstraint::UpTo(k) => (1, *k, None),
    };
    if hi == 0 {
        return;
    }
    let first_candidates: Vec<ArrowId> = match &remaining {
        Some(r) => r.iter().position(|&x| x > 0).into_iter().collect(),
        None => (0..q.d()).collect(),
    };
    for first in first_candidates {
        let target = q.tail(first);
        let dist = distances_to(q, target, first);
        let mut st = Walk { q, first, target, lo, hi, dist: &dist, word: vec![first] };
        if let Some(r) = remaining.as_mut() {
            r[first] -= 1;
        }
        let flow = st.go(remaining.as_mut(), &mut f);
        if let Some(r) = remaining.as_mut() {
            r[first] += 1;
        }
        if flow.is_break() {
            return;
        }
    }
}

/// Collects [`for_each_closed_word`] into a vector.
pub fn closed_words(q: &Quiver, c: &WordConstraint) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    for_each_closed_word(q, c, |w| {
        out.push(w.clone());
        ControlFlow::Continue(())
    });
    out
}

/// True when some closed path of degree at most `k` exists.
pub fn closed_path_exists(q: &Quiver, k: usize) -> bool {
    let mut found = false;
    for_each_closed_word(q, &WordConstraint::UpTo(k), |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

/// Shortest distance from every vertex to `target` using arrows `>= min_arrow`.
fn distances_to(q: &Quiver, target: VertexId, min_arrow: ArrowId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; q.n()];
    dist[target] = 0;
    let mut queue = std::collections::VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for a in min_arrow..q.d() {
            if q.head(a) == v && dist[q.tail(a)] == usize::MAX {
                dist[q.tail(a)] = dist[v] + 1;
                queue.push_back(q.tail(a));
            }
        }
    }
    dist
}

struct Walk<'a> {
    q: &'a Quiver,
    first: ArrowId,
    target: VertexId,
    lo: usize,
    hi: usize,
    dist: &'a [usize],
    word: Vec<ArrowId>,
}

impl Walk<'_> {
    fn go<F>(&mut self, mut remaining: Option<&mut Vec<u32>>, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&CyclicWord) -> ControlFlow<()>,
    {
        let len = self.word.len();
        let at = self.q.head(*self.word.last().expect("non-empty"));
        if at == self.target && len >= self.lo {
            let done = remaining.as_ref().is_none_or(|r| r.iter().all(|&x| x == 0));
            if done && is_least(&self.word) {
                f(&CyclicWord::from_vec_unchecked(self.word.clone()))?;
            }
        }
        if len >= self.hi {
            return ControlFlow::Continue(());
        }
        for a in self.first..self.q.d() {
            if self.q.tail(a) != at {
                continue;
            }
            let d = self.dist[self.q.head(a)];
            if d == usize::MAX || len + 1 + d > self.hi {
                continue;
            }
            if let Some(r) = remaining.as_deref_mut() {
                if r[a] == 0 {
                    continue;
                }
                r[a] -= 1;
            }
            self.word.push(a);
            let flow = self.go(remaining.as_deref_mut(), f);
            self.word.pop();
            if let Some(r) = remaining.as_deref_mut() {
                r[a] += 1;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn is_least(w: &[ArrowId]) -> bool {
    crate::word::canonical_rotation(w) == w
}

/// One way of cutting a closed word at a vertex into closed factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub vertex: VertexId,
    pub factors: Vec<Vec<ArrowId>>,
}

/// Fine factors of `w` at `v`: cut before every arrow leaving `v`, the first
/// factor starting at the first such arrow.
pub fn fine_factors(q: &Quiver, w: &[ArrowId], v: VertexId) -> Vec<Vec<ArrowId>> {
    let cuts: Vec<usize> = (0..w.len()).filter(|&i| q.tail(w[i]) == v).collect();
    let t = cuts.len();
    let mut out = Vec::with_capacity(t);
    for k in 0..t {
        let s = cuts[k];
        let e = if k + 1 < t { cuts[k + 1] } else { cuts[0] + w.len() };
        out.push((s..e).map(|i| w[i % w.len()]).collect());
    }
    out
}

/// Every factorization of `w` at `v` into at least two closed factors,
/// including coarse groupings of the fine factors. Fails if `v` is visited
/// fewer than twice.
pub fn vertex_factorizations(q: &Quiver, w: &CyclicWord, v: VertexId) -> Result<Vec<Factorization>> {
    let fine = fine_factors(q, w.arrows(), v);
    let t = fine.len();
    if t < 2 {
        return Err(Error::InvalidParameters(format!(
            "vertex `{}` is visited {t} time(s); need at least 2",
            q.vertex_name(v)
        )));
    }
    if t > 20 {
        return Err(Error::CapExceeded(format!("{t} fine factors")));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << t) {
        if mask.count_ones() < 2 {
            continue;
        }
        let chosen: Vec<usize> = (0..t).filter(|&i| mask & (1 << i) != 0).collect();
        let mut factors = Vec::with_capacity(chosen.len());
        for (k, &s) in chosen.iter().enumerate() {
            let e = if k + 1 < chosen.len() { chosen[k + 1] } else { chosen[0] + t };
            let mut f = Vec::new();
            for i in s..e {
                f.extend_from_slice(&fine[i % t]);
            }
            factors.push(f);
        }
        out.push(Factorization { vertex: v, factors });
    }
    Ok(out)
}

/// Result of restricting a closed path to a vertex subset.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub quiver: Quiver,
    pub word: CyclicWord,
    /// For each arrow of the restricted quiver, the subpath it stands for.
    pub origin: Vec<Vec<ArrowId>>,
}

/// Restricts `h` to `vs`: arrows of `h` with both ends in `vs` are kept and
/// each excursion of `h` outside `vs` between two vertices of `vs` becomes a
/// single arrow. Equal excursions give the same arrow.
pub fn restrict(q: &Quiver, h: &CyclicWord, vs: &[VertexId]) -> Result<Restriction> {
    if vs.is_empty() {
        return Err(Error::InvalidParameters("empty vertex set".into()));
    }
    let visited = h.vertices(q);
    let mut inside = vec![false; q.n()];
    for &v in vs {
        if v >= q.n() || visited.binary_search(&v).is_err() {
            return Err(Error::InvalidParameters(format!("vertex {v} is not on the path")));
        }
        inside[v] = true;
    }
    let w = h.arrows();
    let start = (0..w.len()).find(|&i| inside[q.tail(w[i])]).expect("path meets vs");
    let mut pieces: Vec<Vec<ArrowId>> = Vec::new();
    let mut cur = Vec::new();
    for k in 0..w.len() {
        let a = w[(start + k) % w.len()];
        cur.push(a);
        if inside[q.head(a)] {
            pieces.push(std::mem::take(&mut cur));
        }
    }
    let mut index: HashMap<Vec<ArrowId>, usize> = HashMap::new();
    let mut origin: Vec<Vec<ArrowId>> = Vec::new();
    let mut word = Vec::new();
    for p in pieces {
        let id = *index.entry(p.clone()).or_insert_with(|| {
            origin.push(p.clone());
            origin.len() - 1
        });
        word.push(id);
    }
    // Order new arrows by first original index sequence for determinism.
    let mut order: Vec<usize> = (0..origin.len()).collect();
    order.sort_by(|&i, &j| origin[i].cmp(&origin[j]));
    let mut rank = vec![0; origin.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let origin_sorted: Vec<Vec<ArrowId>> = order.iter().map(|&i| origin[i].clone()).collect();
    let word: Vec<ArrowId> = word.into_iter().map(|i| rank[i]).collect();

    let mut kept: Vec<VertexId> = vs.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let vnames: Vec<String> = kept.iter().map(|&v| q.vertex_name(v).to_string()).collect();
    let anames: Vec<(String, String, String)> = origin_sorted
        .iter()
        .map(|p| {
            let name = if p.len() == 1 {
                q.arrow_name(p[0]).to_string()
            } else {
                let parts: Vec<&str> = p.iter().map(|&a| q.arrow_name(a)).collect();
                format!("({})", parts.join("."))
            };
            let t = q.vertex_name(q.tail(p[0])).to_string();
            let hd = q.vertex_name(q.head(*p.last().expect("non-empty"))).to_string();
            (name, t, hd)
        })
        .collect();
    let rq = Quiver::new(&vnames, &anames)?;
    let rw = CyclicWord::new(&rq, word)?;
    Ok(Restriction { quiver: rq, word: rw, origin: origin_sorted })
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

    fn brute_words(q: &Quiver, k: usize) -> BTreeSet<CyclicWord> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<Vec<ArrowId>> = (0..q.d()).map(|a| vec![a]).collect();
        while let Some(w) = stack.pop() {
            if let Ok(c) = CyclicWord::new(q, w.clone()) {
                out.insert(c.canonical());
            }
            if w.len() < k {
                for a in 0..q.d() {
                    let mut v = w.clone();
                    v.push(a);
                    stack.push(v);
                }
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let q = example();
        let got = closed_words(&q, &WordConstraint::UpTo(5));
        let set: BTreeSet<_> = got.iter().cloned().collect();
        assert_eq!(set.len(), got.len(), "duplicates");
        assert_eq!(set, brute_words(&q, 5));
        assert!(got.windows(2).all(|p| p[0].arrows() < p[1].arrows()));
        let loops = Quiver::from_pairs(1, &[(0, 0), (0, 0)]).unwrap();
        assert_eq!(closed_words(&loops, &WordConstraint::UpTo(4)).len(), 2 + 3 + 4 + 6);
    }

    #[test]
    fn exact_multidegree_enumeration() {
        let q = example();
        let h2 = CyclicWord::parse(&q, "czcbyzxa").unwrap();
        let m = h2.multidegree(&q);
        let ws = closed_words(&q, &WordConstraint::Multidegree(m.clone()));
        assert!(ws.contains(&h2.canonical()));
        assert!(ws.iter().all(|w| w.multidegree(&q) == m));
        let all = closed_words(&q, &WordConstraint::Degree(8));
        let expect = all.iter().filter(|w| w.multidegree(&q) == m).count();
        assert_eq!(ws.len(), expect);
    }

    #[test]
    fn primitive_cycles_of_example() {
        let q = example();
        let cyc = primitive_cycles(&q);
        // xa, yb, cz, xyz, cba
        assert_eq!(cyc.len(), 5);
        assert!(cyc.iter().all(|c| c.is_primitive(&q)));
        assert_eq!(max_cycle_length(&q), 3);
        let parallel = Quiver::from_pairs(2, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(primitive_cycles(&parallel).len(), 2);
        let loops = Quiver::from_pairs(1, &[(0, 0), (0, 0)]).unwrap();
        assert_eq!(max_cycle_length(&loops), 1);
    }

    #[test]
    fn factorizations() {
        let loops = Quiver::from_pairs(1, &[(0, 0), (0, 0)]).unwrap();
        let xy = CyclicWord::new(&loops, vec![0, 1]).unwrap();
        let f = vertex_factorizations(&loops, &xy, 0).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].factors, vec![vec![0], vec![1]]);
        let q = example();
        let h = CyclicWord::parse(&q, "czcbyzxa").unwrap();
        let u = q.vertex_by_name("u").unwrap();
        assert_eq!(fine_factors(&q, h.arrows(), u).len(), 3);
        assert_eq!(vertex_factorizations(&q, &h, u).unwrap().len(), 4);
        let xa = CyclicWord::parse(&q, "xa").unwrap();
        assert!(vertex_factorizations(&q, &xa, u).is_err());
    }

    #[test]
    fn restriction_to_single_vertex() {
        let q = example();
        let h = CyclicWord::parse(&q, "czcbyzxa").unwrap();
        let u = q.vertex_by_name("u").unwrap();
        let r = restrict(&q, &h, &[u]).unwrap();
        assert_eq!(r.quiver.n(), 1);
        assert_eq!(r.quiver.d(), 3);
        assert_eq!(r.word.degree(), 3);
        let all = restrict(&q, &h, &h.vertices(&q)).unwrap();
        assert_eq!(all.word.degree(), h.degree());
        assert_eq!(all.quiver.d(), 6);
    }
}
