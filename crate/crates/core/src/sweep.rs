//! Enumeration of labelled quivers.
//!
//! A labelled quiver on `n` vertices with `d` arrows is a multiset of `d`
//! ordered vertex pairs. Arrows are unlabelled: permuting arrows gives the
//! same quiver, so each multiset is produced once, pairs in sorted order.

use crate::paths::max_cycle_length;
use crate::quiver::{Quiver, VertexId};
use crate::word::Multidegree;

/// Iterator over sorted `d`-multisets of pairs from an `n x n` grid.
pub struct PairMultisets {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl PairMultisets {
    pub fn new(n: usize, d: usize) -> Self {
        PairMultisets { n, idx: vec![0; d], done: n == 0 && d > 0 }
    }
}

impl Iterator for PairMultisets {
    type Item = Vec<(VertexId, VertexId)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let n = self.n;
        let out = self.idx.iter().map(|&k| (k / n, k % n)).collect();
        let top = n * n - 1;
        match (0..self.idx.len()).rev().find(|&i| self.idx[i] < top) {
            None => self.done = true,
            Some(i) => {
                let v = self.idx[i] + 1;
                for j in i..self.idx.len() {
                    self.idx[j] = v;
                }
            }
        }
        Some(out)
    }
}

/// Strong connectivity of the quiver given by `pairs` on `n` vertices.
pub fn pairs_strongly_connected(n: usize, pairs: &[(VertexId, VertexId)]) -> bool {
    if n == 0 || pairs.is_empty() {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &(t, h) in pairs {
                let (from, to) = if forward { (t, h) } else { (h, t) };
                if from == v && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// All strongly connected labelled quivers with `n` vertices and `d` arrows.
pub fn strongly_connected_quivers(n: usize, d: usize) -> impl Iterator<Item = Quiver> {
    PairMultisets::new(n, d)
        .filter(move |p| pairs_strongly_connected(n, p))
        .map(move |p| Quiver::from_pairs(n, &p).expect("valid pairs"))
}

/// Strongly connected quivers with `n` vertices, `d` arrows and longest
/// primitive cycle `m`.
pub fn class_members(n: usize, d: usize, m: usize) -> impl Iterator<Item = Quiver> {
    strongly_connected_quivers(n, d).filter(move |q| max_cycle_length(q) == m)
}

/// Every strongly connected labelled quiver with `n <= max_n`, `d <= max_d`.
pub fn sweep(max_n: usize, max_d: usize) -> Vec<Quiver> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for d in 1..=max_d {
            out.extend(strongly_connected_quivers(n, d));
        }
    }
    out
}

/// Balanced multidegrees with every coordinate at least one and total at
/// most `max_total`, in lexicographic order.
pub fn full_support_deltas(q: &Quiver, max_total: usize) -> Vec<Multidegree> {
    let d = q.d();
    let mut last = vec![0usize; q.n()];
    for a in 0..d {
        last[q.tail(a)] = last[q.tail(a)].max(a);
        last[q.head(a)] = last[q.head(a)].max(a);
    }
    let mut out = Vec::new();
    let mut t = Multidegree::zero(d);
    fn rec(q: &Quiver, a: usize, left: usize, last: &[usize], t: &mut Multidegree, out: &mut Vec<Multidegree>) {
        let d = q.d();
        if a == d {
            out.push(t.clone());
            return;
        }
        let rest = d - a - 1;
        for k in 1..=left.saturating_sub(rest) {
            t.0[a] = k as u32;
            let ok = (0..q.n()).filter(|&v| last[v] == a).all(|v| {
                let inc: u32 = (0..d).filter(|&b| q.head(b) == v).map(|b| t.0[b]).sum();
                let out: u32 = (0..d).filter(|&b| q.tail(b) == v).map(|b| t.0[b]).sum();
                inc == out
            });
            if ok {
                rec(q, a + 1, left - k, last, t, out);
            }
        }
        t.0[a] = 0;
    }
    if d > 0 && max_total >= d {
        rec(q, 0, max_total, &last, &mut t, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn multiset_counts() {
        for n in 1..=3 {
            for d in 0..=4 {
                assert_eq!(PairMultisets::new(n, d).count(), binom(n * n + d - 1, d));
            }
        }
    }

    #[test]
    fn small_classes() {
        assert_eq!(class_members(2, 2, 2).count(), 1);
        assert_eq!(class_members(1, 3, 1).count(), 1);
        assert_eq!(strongly_connected_quivers(2, 1).count(), 0);
        assert!(sweep(3, 4).iter().all(|q| q.is_strongly_connected()));
    }

    #[test]
    fn deltas_match_filtered_grid() {
        let q = Quiver::from_pairs(2, &[(0, 1), (1, 0), (0, 0)]).unwrap();
        let got = full_support_deltas(&q, 7);
        let mut want = Vec::new();
        for x in 1..=7u32 {
            for y in 1..=7u32 {
                for z in 1..=7u32 {
                    let t = Multidegree(vec![x, y, z]);
                    if x + y + z <= 7 && t.is_balanced(&q) {
                        want.push(t);
                    }
                }
            }
        }
        assert_eq!(got, want);
    }
}
