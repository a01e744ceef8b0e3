//! Finite quivers with named vertices and arrows.
//!
//! Vertices and arrows are addressed by dense indices in declaration order.
//! The arrow index order is the total order used everywhere a canonical
//! choice is needed (least rotations, enumeration order).

use std::collections::HashMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type ArrowId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub tail: VertexId,
    pub head: VertexId,
}

#[derive(Debug, Clone)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    id: String,
    tail: String,
    head: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverJson {
    vertices: Vec<String>,
    arrows: Vec<ArrowJson>,
}

impl Quiver {
    /// Builds a quiver from vertex names and `(name, tail, head)` triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        let mut vs = Vec::with_capacity(vertices.len());
        for v in vertices {
            let v = v.as_ref();
            if v.is_empty() {
                return Err(Error::InvalidQuiver("empty vertex name".into()));
            }
            if vertex_index.insert(v.to_string(), vs.len()).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex `{v}`")));
            }
            vs.push(v.to_string());
        }
        let mut arrow_index = HashMap::new();
        let mut ars = Vec::with_capacity(arrows.len());
        for (name, t, h) in arrows {
            let (name, t, h) = (name.as_ref(), t.as_ref(), h.as_ref());
            if name.is_empty() {
                return Err(Error::InvalidQuiver("empty arrow name".into()));
            }
            let tail = *vertex_index
                .get(t)
                .ok_or_else(|| Error::InvalidQuiver(format!("arrow `{name}`: unknown tail `{t}`")))?;
            let head = *vertex_index
                .get(h)
                .ok_or_else(|| Error::InvalidQuiver(format!("arrow `{name}`: unknown head `{h}`")))?;
            if arrow_index.insert(name.to_string(), ars.len()).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate arrow `{name}`")));
            }
            ars.push(Arrow { name: name.to_string(), tail, head });
        }
        Ok(Quiver { vertices: vs, arrows: ars, vertex_index, arrow_index })
    }

    /// Quiver on vertices `v0..v{n-1}` with arrows `a0..` given as index pairs.
    pub fn from_pairs(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut ars = Vec::new();
        for (k, &(t, h)) in pairs.iter().enumerate() {
            if t >= n || h >= n {
                return Err(Error::InvalidQuiver(format!("arrow {k} endpoint out of range")));
            }
            ars.push((format!("a{k}"), vs[t].clone(), vs[h].clone()));
        }
        Quiver::new(&vs, &ars)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: QuiverJson = serde_json::from_str(text)?;
        let arrows: Vec<(String, String, String)> =
            raw.arrows.into_iter().map(|a| (a.id, a.tail, a.head)).collect();
        Quiver::new(&raw.vertices, &arrows)
    }

    pub fn to_json(&self) -> String {
        let raw = QuiverJson {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    id: a.name.clone(),
                    tail: self.vertices[a.tail].clone(),
                    head: self.vertices[a.head].clone(),
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("quiver serializes")
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// Number of arrows.
    pub fn d(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn tail(&self, a: ArrowId) -> VertexId {
        self.arrows[a].tail
    }

    pub fn head(&self, a: ArrowId) -> VertexId {
        self.arrows[a].head
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrowId> {
        self.arrow_index.get(name).copied()
    }

    /// Arrows leaving `v`, in index order.
    pub fn out_arrows(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.d()).filter(move |&a| self.arrows[a].tail == v)
    }

    /// Strongly connected components, each sorted, ordered by least vertex.
    pub fn strongly_connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(self.n(), self.d());
        let nodes: Vec<_> = (0..self.n()).map(|_| g.add_node(())).collect();
        for a in &self.arrows {
            g.add_edge(nodes[a.tail], nodes[a.head], ());
        }
        let mut comps: Vec<Vec<VertexId>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<VertexId> = c.into_iter().map(|x| x.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        comps.sort();
        comps
    }

    /// True when a single closed path visits every vertex.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n() == 0 || self.d() == 0 {
            return false;
        }
        self.strongly_connected_components().len() == 1
    }

    /// The subquiver on the given arrows, with the vertices they touch.
    /// Names are kept; the returned map sends new arrow indices to old ones.
    pub fn arrow_subquiver(&self, arrows: &[ArrowId]) -> (Quiver, Vec<ArrowId>) {
        let mut keep = arrows.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut used = vec![false; self.n()];
        for &a in &keep {
            used[self.tail(a)] = true;
            used[self.head(a)] = true;
        }
        let vs: Vec<String> =
            (0..self.n()).filter(|&v| used[v]).map(|v| self.vertices[v].clone()).collect();
        let ars: Vec<(String, String, String)> = keep
            .iter()
            .map(|&a| {
                let ar = &self.arrows[a];
                (ar.name.clone(), self.vertices[ar.tail].clone(), self.vertices[ar.head].clone())
            })
            .collect();
        (Quiver::new(&vs, &ars).expect("subquiver is well formed"), keep)
    }
}
