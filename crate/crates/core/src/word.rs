//! Closed words and multidegrees.
//!
//! A word `a1 a2 ... as` is read left to right, so the head of `a_i` is the
//! tail of `a_{i+1}`. Closed words are compared up to rotation through their
//! least rotation with respect to arrow index order.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Quiver, VertexId};

/// Start index of the lexicographically least rotation (Booth).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k: usize = 0;
    for j in 1..2 * n {
        let sj = &s[j % n];
        let mut i = f[j - k - 1];
        while i != -1 && *sj != s[(k + i as usize + 1) % n] {
            if *sj < s[(k + i as usize + 1) % n] {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && *sj != s[k % n] {
            if *sj < s[k % n] {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

/// Rotated copy of `s` starting at its least rotation.
pub fn canonical_rotation<T: Ord + Clone>(s: &[T]) -> Vec<T> {
    let k = least_rotation(s);
    let mut out = Vec::with_capacity(s.len());
    out.extend_from_slice(&s[k..]);
    out.extend_from_slice(&s[..k]);
    out
}

/// Per-arrow multiplicities, indexed by arrow.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn zero(d: usize) -> Self {
        Multidegree(vec![0; d])
    }

    pub fn of_word(q: &Quiver, w: &[ArrowId]) -> Self {
        let mut m = Multidegree::zero(q.d());
        for &a in w {
            m.0[a] += 1;
        }
        m
    }

    pub fn get(&self, a: ArrowId) -> u32 {
        self.0[a]
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Arrows with positive multiplicity.
    pub fn support(&self) -> Vec<ArrowId> {
        (0..self.0.len()).filter(|&a| self.0[a] > 0).collect()
    }

    pub fn has_full_support(&self) -> bool {
        self.0.iter().all(|&x| x > 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Multidegree(out))
    }

    pub fn add(&self, other: &Self) -> Self {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> Self {
        Multidegree(self.0.iter().map(|a| a * k).collect())
    }

    /// In-degree equals out-degree at every vertex.
    pub fn is_balanced(&self, q: &Quiver) -> bool {
        let mut flow = vec![0i64; q.n()];
        for (a, &m) in self.0.iter().enumerate() {
            flow[q.tail(a)] += m as i64;
            flow[q.head(a)] -= m as i64;
        }
        flow.iter().all(|&f| f == 0)
    }

    /// Max of in- and out-weight at `v`.
    pub fn vertex_degree(&self, q: &Quiver, v: VertexId) -> u32 {
        let (mut i, mut o) = (0, 0);
        for (a, &m) in self.0.iter().enumerate() {
            if q.tail(a) == v {
                o += m;
            }
            if q.head(a) == v {
                i += m;
            }
        }
        i.max(o)
    }

    pub fn to_json_value(&self, q: &Quiver) -> serde_json::Value {
        let map: BTreeMap<String, u32> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(a, &m)| (q.arrow_name(a).to_string(), m))
            .collect();
        serde_json::to_value(map).expect("map serializes")
    }

    pub fn from_json_value(q: &Quiver, v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidMultidegree("expected an object".into()))?;
        let mut m = Multidegree::zero(q.d());
        for (k, val) in obj {
            let a = q
                .arrow_by_name(k)
                .ok_or_else(|| Error::InvalidMultidegree(format!("unknown arrow `{k}`")))?;
            let x = val
                .as_u64()
                .filter(|&x| x <= u32::MAX as u64)
                .ok_or_else(|| Error::InvalidMultidegree(format!("bad count for `{k}`")))?;
            m.0[a] = x as u32;
        }
        Ok(m)
    }

    pub fn from_json(q: &Quiver, text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        Multidegree::from_json_value(q, &v)
    }
}

/// A closed word, stored with an explicit basepoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord(Vec<ArrowId>);

impl CyclicWord {
    /// Validates that `arrows` is a non-empty closed path.
    pub fn new(q: &Quiver, arrows: Vec<ArrowId>) -> Result<Self> {
        if arrows.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        for &a in &arrows {
            if a >= q.d() {
                return Err(Error::InvalidWord(format!("arrow index {a} out of range")));
            }
        }
        for i in 0..arrows.len() {
            let next = arrows[(i + 1) % arrows.len()];
            if q.head(arrows[i]) != q.tail(next) {
                let what = if i + 1 == arrows.len() { "not closed" } else { "not composable" };
                return Err(Error::InvalidWord(format!(
                    "{what} at `{}` -> `{}`",
                    q.arrow_name(arrows[i]),
                    q.arrow_name(next)
                )));
            }
        }
        Ok(CyclicWord(arrows))
    }

    /// Trusted constructor for internally generated closed words.
    pub(crate) fn from_vec_unchecked(arrows: Vec<ArrowId>) -> Self {
        CyclicWord(arrows)
    }

    pub fn from_names<S: AsRef<str>>(q: &Quiver, names: &[S]) -> Result<Self> {
        let mut v = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            v.push(
                q.arrow_by_name(n)
                    .ok_or_else(|| Error::InvalidWord(format!("unknown arrow `{n}`")))?,
            );
        }
        CyclicWord::new(q, v)
    }

    /// Parses whitespace separated names, or a run of one-letter names.
    pub fn parse(q: &Quiver, text: &str) -> Result<Self> {
        let t = text.trim();
        if t.contains(char::is_whitespace) || q.arrow_by_name(t).is_some() {
            let parts: Vec<&str> = t.split_whitespace().collect();
            return CyclicWord::from_names(q, &parts);
        }
        let parts: Vec<String> = t.chars().map(|c| c.to_string()).collect();
        CyclicWord::from_names(q, &parts)
    }

    pub fn from_json(q: &Quiver, text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let list = v
            .get("word")
            .and_then(|w| w.as_array())
            .ok_or_else(|| Error::InvalidWord("expected {\"word\": [...]}".into()))?;
        let mut names = Vec::new();
        for x in list {
            names.push(
                x.as_str()
                    .ok_or_else(|| Error::InvalidWord("arrow ids must be strings".into()))?
                    .to_string(),
            );
        }
        CyclicWord::from_names(q, &names)
    }

    pub fn to_json_value(&self, q: &Quiver) -> serde_json::Value {
        serde_json::json!({ "word": self.names(q) })
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self, q: &Quiver) -> Vec<String> {
        self.0.iter().map(|&a| q.arrow_name(a).to_string()).collect()
    }

    /// Concatenated arrow names, space separated when any name is long.
    pub fn display(&self, q: &Quiver) -> String {
        let names = self.names(q);
        if names.iter().all(|s| s.chars().count() == 1) {
            names.concat()
        } else {
            names.join(" ")
        }
    }

    pub fn basepoint(&self, q: &Quiver) -> VertexId {
        q.tail(self.0[0])
    }

    pub fn rotate(&self, k: usize) -> Self {
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        CyclicWord(v)
    }

    pub fn canonical(&self) -> Self {
        CyclicWord(canonical_rotation(&self.0))
    }

    pub fn is_canonical(&self) -> bool {
        least_rotation(&self.0) == 0 || canonical_rotation(&self.0) == self.0
    }

    pub fn multidegree(&self, q: &Quiver) -> Multidegree {
        Multidegree::of_word(q, &self.0)
    }

    pub fn arrow_degree(&self, b: ArrowId) -> usize {
        self.0.iter().filter(|&&a| a == b).count()
    }

    /// Number of arrows of the word leaving `v`; equals the number entering.
    pub fn vertex_degree(&self, q: &Quiver, v: VertexId) -> usize {
        self.0.iter().filter(|&&a| q.tail(a) == v).count()
    }

    /// Heads equal to `v` among all but the last arrow.
    pub fn interior_degree(&self, q: &Quiver, v: VertexId) -> usize {
        self.0[..self.0.len() - 1].iter().filter(|&&a| q.head(a) == v).count()
    }

    /// Vertices visited, sorted.
    pub fn vertices(&self, q: &Quiver) -> Vec<VertexId> {
        let mut v: Vec<VertexId> = self.0.iter().map(|&a| q.tail(a)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Positions `i` such that arrow `i` leaves `v`.
    pub fn cut_positions(&self, q: &Quiver, v: VertexId) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| q.tail(self.0[i]) == v).collect()
    }

    /// A primitive closed path visits no vertex twice.
    pub fn is_primitive(&self, q: &Quiver) -> bool {
        let mut seen = vec![false; q.n()];
        for &a in &self.0 {
            let t = q.tail(a);
            if seen[t] {
                return false;
            }
            seen[t] = true;
        }
        true
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}
