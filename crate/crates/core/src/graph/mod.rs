//! Finite reflexive graphs, directed and undirected.
//!
//! A [`ReflexiveGraph`] stores a sorted vertex list and the non-loop part of
//! its edge relation. Loops are never stored: `related(u, u)` is always true.
//! In undirected mode an edge is stored once, with its endpoints in vertex
//! order, and the relation is symmetric.
//!
//! Graphs are cheap to clone (the data sits behind an [`Arc`]) and immutable.

mod format;
mod hom;
mod iso;
mod partition;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{same_mode, Error, Result};

pub use format::{to_dot, GraphJson};
pub use hom::{compose, count_homs, count_homs_bounded, enumerate_homs, enumerate_homs_bounded, is_hom, visit_homs, GraphHom};
pub use iso::is_isomorphic;
pub use partition::{quotient, quotient_map, set_partitions, VertexPartition};

/// Whether edges have a direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Directed,
    Undirected,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Directed => "directed",
            Mode::Undirected => "undirected",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "directed" => Ok(Mode::Directed),
            "undirected" => Ok(Mode::Undirected),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug)]
struct GraphData {
    mode: Mode,
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    // Row-major bitset of the full relation, loops included.
    words: usize,
    relation: Vec<u64>,
    fingerprint: u64,
}

/// A finite reflexive graph.
#[derive(Clone)]
pub struct ReflexiveGraph(Arc<GraphData>);

impl ReflexiveGraph {
    /// Builds a graph from labels. Loops are dropped; undirected edges may be
    /// given in either orientation.
    pub fn new<V, E, S>(mode: Mode, vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let labels: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        let lookup = |s: &str| {
            sorted
                .binary_search_by(|v| v.as_str().cmp(s))
                .map_err(|_| Error::UnknownVertex(s.to_string()))
        };
        let mut indexed = Vec::new();
        for (u, v) in edges {
            indexed.push((lookup(u.as_ref())?, lookup(v.as_ref())?));
        }
        // `sorted` may still hold duplicates; `from_indexed` reports them.
        Self::from_indexed(mode, sorted, indexed).map(|(g, _)| g)
    }

    /// Builds a graph from arbitrary-order labels and index edges. Returns the
    /// graph and, for each input label position, its canonical vertex index.
    pub(crate) fn from_indexed(
        mode: Mode,
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<(Self, Vec<usize>)> {
        let n = labels.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let mut position = vec![0; n];
        for (canonical, &original) in order.iter().enumerate() {
            position[original] = canonical;
        }
        let mut labels = labels;
        let mut vertices: Vec<String> = Vec::with_capacity(n);
        for &original in &order {
            vertices.push(std::mem::take(&mut labels[original]));
        }
        for pair in vertices.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateVertex(pair[0].clone()));
            }
        }
        let mut stored = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::ImageOutOfRange { image: u.max(v), size: n });
            }
            let (u, v) = (position[u], position[v]);
            if u == v {
                continue;
            }
            stored.push(match mode {
                Mode::Directed => (u, v),
                Mode::Undirected => (u.min(v), u.max(v)),
            });
        }
        stored.sort_unstable();
        stored.dedup();
        Ok((Self::assemble(mode, vertices, stored), position))
    }

    fn assemble(mode: Mode, vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Self {
        let n = vertices.len();
        let words = n.div_ceil(64);
        let mut relation = vec![0u64; n * words];
        let mut set = |u: usize, v: usize| relation[u * words + v / 64] |= 1 << (v % 64);
        for u in 0..n {
            set(u, u);
        }
        for &(u, v) in &edges {
            set(u, v);
            if mode == Mode::Undirected {
                set(v, u);
            }
        }
        let mut hasher = DefaultHasher::new();
        mode.hash(&mut hasher);
        vertices.hash(&mut hasher);
        edges.hash(&mut hasher);
        let fingerprint = hasher.finish();
        ReflexiveGraph(Arc::new(GraphData {
            mode,
            vertices,
            edges,
            words,
            relation,
            fingerprint,
        }))
    }

    /// The graph with no vertices.
    pub fn empty(mode: Mode) -> Self {
        Self::assemble(mode, Vec::new(), Vec::new())
    }

    pub fn mode(&self) -> Mode {
        self.0.mode
    }

    pub fn vertex_count(&self) -> usize {
        self.0.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.vertices.is_empty()
    }

    /// Vertex labels in canonical (lexicographic) order.
    pub fn vertices(&self) -> &[String] {
        &self.0.vertices
    }

    pub fn label(&self, v: usize) -> &str {
        &self.0.vertices[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.vertices.binary_search_by(|v| v.as_str().cmp(label)).ok()
    }

    /// Stored (non-loop) edges as index pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.0.edges
    }

    pub fn edge_count(&self) -> usize {
        self.0.edges.len()
    }

    /// Stored edges as label pairs.
    pub fn edge_labels(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.0.edges.iter().map(|&(u, v)| (self.label(u), self.label(v)))
    }

    /// The reflexive relation `u ⇝ v`.
    #[inline]
    pub fn related(&self, u: usize, v: usize) -> bool {
        let d = &*self.0;
        d.relation[u * d.words + v / 64] & (1 << (v % 64)) != 0
    }

    /// `related` by label; unknown labels are unrelated.
    pub fn related_labels(&self, u: &str, v: &str) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(u), Some(v)) => self.related(u, v),
            _ => false,
        }
    }

    /// Every ordered pair `(u, v)` with `u ⇝ v` and `u != v`. In undirected
    /// mode both orientations are listed.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        match self.mode() {
            Mode::Directed => self.0.edges.clone(),
            Mode::Undirected => {
                let mut arcs: Vec<_> = self.0.edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
                arcs.sort_unstable();
                arcs
            }
        }
    }

    pub fn out_degree(&self, u: usize) -> usize {
        (0..self.vertex_count()).filter(|&v| v != u && self.related(u, v)).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.vertex_count()).filter(|&u| u != v && self.related(u, v)).count()
    }

    /// Structural hash; equal graphs have equal fingerprints.
    pub(crate) fn fingerprint(&self) -> u64 {
        self.0.fingerprint
    }

    pub(crate) fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Same graph with one ordered pair toggled in the relation (both
    /// orientations in undirected mode). Toggling a loop is a no-op.
    pub fn with_toggled_edge(&self, u: usize, v: usize) -> Self {
        if u == v {
            return self.clone();
        }
        let key = match self.mode() {
            Mode::Directed => (u, v),
            Mode::Undirected => (u.min(v), u.max(v)),
        };
        let mut edges = self.0.edges.clone();
        match edges.binary_search(&key) {
            Ok(pos) => {
                edges.remove(pos);
            }
            Err(pos) => edges.insert(pos, key),
        }
        Self::assemble(self.mode(), self.0.vertices.clone(), edges)
    }

    /// The subgraph on `keep` (canonical indices) with the given subset of
    /// induced stored edges.
    pub(crate) fn restrict(&self, keep: &[usize], edges: &[(usize, usize)]) -> Result<Self> {
        let labels = keep.iter().map(|&v| self.label(v).to_string()).collect();
        let local = |v: usize| keep.iter().position(|&k| k == v);
        let mut mapped = Vec::new();
        for &(u, v) in edges {
            match (local(u), local(v)) {
                (Some(a), Some(b)) if self.related(u, v) => mapped.push((a, b)),
                _ => return Err(Error::ShapeMismatch("edge outside the induced subgraph".into())),
            }
        }
        Self::from_indexed(self.mode(), labels, mapped).map(|(g, _)| g)
    }
}

impl PartialEq for ReflexiveGraph {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || self.structurally_equal(other)
    }
}

impl ReflexiveGraph {
    #[inline(never)]
    fn structurally_equal(&self, other: &Self) -> bool {
        let (a, b) = (&*self.0, &*other.0);
        a.fingerprint == b.fingerprint && a.mode == b.mode && a.vertices == b.vertices && a.edges == b.edges
    }
}

impl Eq for ReflexiveGraph {}

impl Hash for ReflexiveGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.fingerprint);
    }
}

impl fmt::Debug for ReflexiveGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.mode() {
            Mode::Directed => "->",
            Mode::Undirected => "--",
        };
        let edges: Vec<String> = self.edge_labels().map(|(u, v)| format!("{u}{arrow}{v}")).collect();
        write!(f, "{}{{V={:?}, E=[{}]}}", self.mode(), self.vertices(), edges.join(", "))
    }
}

/// `J_n` in directed mode, `I_n` in undirected mode: vertices `"0".."n"` with
/// an edge `i ⇝ i+1`.
pub fn make_path(n: usize, mode: Mode) -> ReflexiveGraph {
    let labels = (0..=n).map(|i| i.to_string()).collect();
    let edges = (0..n).map(|i| (i, i + 1));
    ReflexiveGraph::from_indexed(mode, labels, edges)
        .expect("path labels are distinct")
        .0
}

/// Small named graphs used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedGraph {
    Empty,
    Point,
    /// Commutative square `a→b, a→c, b→d, c→d`.
    Csq,
    /// The square with its diagonal `a→d`.
    Dsq,
    /// The undirected 4-cycle `a–b–d–c–a`.
    C4,
    /// The complete undirected graph on `a, b, c, d`.
    K4r,
}

impl FromStr for NamedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "empty" => NamedGraph::Empty,
            "point" => NamedGraph::Point,
            "csq" => NamedGraph::Csq,
            "dsq" => NamedGraph::Dsq,
            "c4" => NamedGraph::C4,
            "k4r" => NamedGraph::K4r,
            other => return Err(Error::UnknownNamedGraph(other.to_string())),
        })
    }
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NamedGraph::Empty => "empty",
            NamedGraph::Point => "point",
            NamedGraph::Csq => "csq",
            NamedGraph::Dsq => "dsq",
            NamedGraph::C4 => "c4",
            NamedGraph::K4r => "k4r",
        })
    }
}

pub fn make_named(name: NamedGraph, mode: Mode) -> Result<ReflexiveGraph> {
    let abcd = ["a", "b", "c", "d"];
    let square = [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")];
    let wrong_mode = || Error::NamedGraphMode { name: name.to_string(), mode };
    match name {
        NamedGraph::Empty => Ok(ReflexiveGraph::empty(mode)),
        NamedGraph::Point => Ok(make_path(0, mode)),
        NamedGraph::Csq | NamedGraph::Dsq => {
            if mode != Mode::Directed {
                return Err(wrong_mode());
            }
            let mut edges = square.to_vec();
            if name == NamedGraph::Dsq {
                edges.push(("a", "d"));
            }
            ReflexiveGraph::new(mode, abcd, edges)
        }
        NamedGraph::C4 | NamedGraph::K4r => {
            if mode != Mode::Undirected {
                return Err(wrong_mode());
            }
            let mut edges = square.to_vec();
            if name == NamedGraph::K4r {
                edges.extend([("a", "d"), ("b", "c")]);
            }
            ReflexiveGraph::new(mode, abcd, edges)
        }
    }
}

/// The coproduct of `parts`, with vertex `x` of part `i` relabelled `"i:x"`.
/// Returns the coproduct and its injections.
pub fn coproduct(mode: Mode, parts: &[ReflexiveGraph]) -> Result<(ReflexiveGraph, Vec<GraphHom>)> {
    for part in parts {
        same_mode(mode, part.mode())?;
    }
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut offsets = Vec::with_capacity(parts.len());
    for (i, part) in parts.iter().enumerate() {
        let offset = labels.len();
        offsets.push(offset);
        labels.extend(part.vertices().iter().map(|v| format!("{i}:{v}")));
        edges.extend(part.edges().iter().map(|&(u, v)| (u + offset, v + offset)));
    }
    let (sum, position) = ReflexiveGraph::from_indexed(mode, labels, edges)?;
    let injections = parts
        .iter()
        .zip(&offsets)
        .map(|(part, &offset)| {
            let map = (0..part.vertex_count()).map(|v| position[offset + v]).collect();
            GraphHom::trusted(part.clone(), sum.clone(), map)
        })
        .collect();
    Ok((sum, injections))
}

/// `G ⊔ H`, with labels tagged `0:` and `1:`.
pub fn disjoint_union(g: &ReflexiveGraph, h: &ReflexiveGraph) -> Result<ReflexiveGraph> {
    let mode = same_mode(g.mode(), h.mode())?;
    coproduct(mode, &[g.clone(), h.clone()]).map(|(sum, _)| sum)
}

/// Every subgraph (vertex subset plus a subset of the induced stored edges).
/// Intended for very small graphs.
pub fn subgraphs(g: &ReflexiveGraph) -> Vec<ReflexiveGraph> {
    let n = g.vertex_count();
    assert!(n < 16, "subgraph enumeration is exponential");
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let keep: Vec<usize> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
        let induced: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| mask & (1 << u) != 0 && mask & (1 << v) != 0)
            .collect();
        for edge_mask in 0u64..(1 << induced.len()) {
            let chosen: Vec<_> = induced
                .iter()
                .enumerate()
                .filter(|(i, _)| edge_mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            out.push(g.restrict(&keep, &chosen).expect("induced edges stay inside"));
        }
    }
    out
}
