//! Law checking for candidate monoidal structures over a finite corpus of
//! graphs: bifunctoriality, coherence, biclosedness and cocontinuity.
//!
//! Each check expands into a list of [`Instance`]s in a fixed order, which
//! are evaluated in parallel; a law's counterexample is its first failing
//! instance in that order, so reports do not depend on scheduling and any
//! counterexample can be re-run with [`replay`].

mod laws;
mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{disjoint_union, make_named, make_path, Mode, NamedGraph, ReflexiveGraph};

pub use laws::{
    check_all, check_biclosed, check_bifunctoriality, check_cocontinuity, check_coherence, first_failure, replay,
    ColimitShape, Instance, Outcome, Side, Variable,
};
pub use oracle::{ModifiedOracle, ProductOracle, TensorOracle};

/// An ordered, single-mode list of named graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corpus {
    mode: Mode,
    entries: Vec<(String, ReflexiveGraph)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CorpusEntry {
    Named { name: String, graph: ReflexiveGraph },
    Bare(ReflexiveGraph),
}

impl Corpus {
    pub fn new<I, S>(mode: Mode, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, ReflexiveGraph)>,
        S: Into<String>,
    {
        let entries: Vec<(String, ReflexiveGraph)> = entries.into_iter().map(|(n, g)| (n.into(), g)).collect();
        if let Some((_, g)) = entries.iter().find(|(_, g)| g.mode() != mode) {
            return Err(Error::ModeMismatch { left: mode, right: g.mode() });
        }
        Ok(Corpus { mode, entries })
    }

    /// Directed: empty, J₀, J₁, J₂, CSq, DSq, J₁ ⊔ J₀. Undirected: empty,
    /// I₀, I₁, I₂, C4, K4r, I₁ ⊔ I₀.
    pub fn default_for(mode: Mode) -> Self {
        let (prefix, square, diagonal) = match mode {
            Mode::Directed => ("J", ("CSq", NamedGraph::Csq), ("DSq", NamedGraph::Dsq)),
            Mode::Undirected => ("I", ("C4", NamedGraph::C4), ("K4r", NamedGraph::K4r)),
        };
        let path = |n| make_path(n, mode);
        let named = |g| make_named(g, mode).expect("named graph exists in this mode");
        let entries = vec![
            ("empty".to_string(), ReflexiveGraph::empty(mode)),
            (format!("{prefix}0"), path(0)),
            (format!("{prefix}1"), path(1)),
            (format!("{prefix}2"), path(2)),
            (square.0.to_string(), named(square.1)),
            (diagonal.0.to_string(), named(diagonal.1)),
            (format!("{prefix}1+{prefix}0"), disjoint_union(&path(1), &path(0)).expect("same mode")),
        ];
        Corpus { mode, entries }
    }

    /// A JSON array whose items are graphs or `{"name": …, "graph": …}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let items: Vec<CorpusEntry> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let entries: Vec<(String, ReflexiveGraph)> = items
            .into_iter()
            .enumerate()
            .map(|(i, item)| match item {
                CorpusEntry::Named { name, graph } => (name, graph),
                CorpusEntry::Bare(graph) => (format!("G{i}"), graph),
            })
            .collect();
        let mode = entries.first().map(|(_, g)| g.mode()).ok_or_else(|| Error::Parse("empty corpus".into()))?;
        Corpus::new(mode, entries)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn graphs(&self) -> Vec<ReflexiveGraph> {
        self.entries.iter().map(|(_, g)| g.clone()).collect()
    }

    /// Graphs with at most `max_vertices` vertices, in corpus order.
    pub fn small(&self, max_vertices: usize) -> Vec<ReflexiveGraph> {
        self.entries.iter().filter(|(_, g)| g.vertex_count() <= max_vertices).map(|(_, g)| g.clone()).collect()
    }
}

/// Caps that keep the checks finite and deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    /// Homs taken from each corpus hom-set, and composable pairs taken per
    /// object triple, in canonical order.
    pub hom_cap: usize,
    /// Largest hom-set enumerated in full for the adjunction checks. A triple
    /// whose two sides both exceed it is skipped; one side alone exceeding
    /// it is a failure.
    pub hom_budget: usize,
    /// Objects of at most this many vertices form the sub-corpus for the
    /// pentagon, the fixed factors of naturality squares and the varying
    /// object of closure naturality.
    pub small_vertices: usize,
    /// Objects of at most this many vertices supply the homs placed in the
    /// other factor of the interchange law.
    pub tiny_vertices: usize,
    /// Homs per hom-set used in closure naturality squares.
    pub naturality_cap: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { hom_cap: 50, hom_budget: 10_000, small_vertices: 3, tiny_vertices: 2, naturality_cap: 4 }
    }
}

/// A failing instance with the two sides that disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub instance: Instance,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub checked: usize,
    pub skipped: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoherenceReport {
    pub check: String,
    pub oracle: String,
    pub mode: Mode,
    pub laws: Vec<LawReport>,
}

impl CoherenceReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }

    pub fn law(&self, name: &str) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawReport> {
        self.laws.iter().filter(|l| !l.passed)
    }
}
