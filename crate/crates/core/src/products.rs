//! The box product `□` and the categorical product `⊠`, their action on
//! homs, their internal homs, and the currying bijections.
//!
//! Both products have vertex set `G(V) × H(V)`, with the pair `(g, h)`
//! labelled `"(g,h)"`. They differ only in which pairs are related:
//!
//! * box: `g = g′ ∧ h ⇝ h′`, or `g ⇝ g′ ∧ h = h′`;
//! * categorical: either box clause, or `g ⇝ g′ ∧ h ⇝ h′`.
//!
//! On reflexive graphs the categorical relation collapses to the single
//! clause `g ⇝ g′ ∧ h ⇝ h′`; [`categorical_two_clause`] builds that form so
//! the two can be compared.

use rustc_hash::FxHashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{same_mode, Error, Result};
use crate::graph::{enumerate_homs, make_path, GraphHom, ReflexiveGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Box,
    Categorical,
}

impl ProductKind {
    pub const ALL: [ProductKind; 2] = [ProductKind::Box, ProductKind::Categorical];

    pub fn symbol(self) -> &'static str {
        match self {
            ProductKind::Box => "□",
            ProductKind::Categorical => "⊠",
        }
    }
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductKind::Box => "box",
            ProductKind::Categorical => "categorical",
        })
    }
}

impl FromStr for ProductKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(ProductKind::Box),
            "cat" | "categorical" => Ok(ProductKind::Categorical),
            other => Err(Error::Parse(format!("unknown product kind `{other}`"))),
        }
    }
}

/// Whether `(g1, h1) ⇝ (g2, h2)` in the product, using the clauses verbatim.
pub fn product_related(
    kind: ProductKind,
    g: &ReflexiveGraph,
    h: &ReflexiveGraph,
    (g1, h1): (usize, usize),
    (g2, h2): (usize, usize),
) -> bool {
    let first = g1 == g2 && h.related(h1, h2);
    let second = g.related(g1, g2) && h1 == h2;
    match kind {
        ProductKind::Box => first || second,
        ProductKind::Categorical => first || second || (g.related(g1, g2) && h.related(h1, h2)),
    }
}

fn pair_label(g: &str, h: &str) -> String {
    format!("({g},{h})")
}

/// A product graph together with its vertex pairing.
#[derive(Clone, Debug)]
pub struct Tensor {
    kind: ProductKind,
    graph: ReflexiveGraph,
    left: ReflexiveGraph,
    right: ReflexiveGraph,
    // vertex of (i, j) at i * |right| + j
    index: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

impl Tensor {
    pub fn new(kind: ProductKind, left: &ReflexiveGraph, right: &ReflexiveGraph) -> Result<Self> {
        Self::build(kind, left, right, |a, b| product_related(kind, left, right, a, b))
    }

    fn build(
        kind: ProductKind,
        left: &ReflexiveGraph,
        right: &ReflexiveGraph,
        related: impl Fn((usize, usize), (usize, usize)) -> bool,
    ) -> Result<Self> {
        let mode = same_mode(left.mode(), right.mode())?;
        let (n, m) = (left.vertex_count(), right.vertex_count());
        let mut labels = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                labels.push(pair_label(left.label(i), right.label(j)));
            }
        }
        // Every clause needs each coordinate equal or related.
        let neighbours = |g: &ReflexiveGraph, v: usize| -> Vec<usize> {
            (0..g.vertex_count()).filter(|&w| g.related(v, w)).collect()
        };
        let left_nb: Vec<Vec<usize>> = (0..n).map(|i| neighbours(left, i)).collect();
        let right_nb: Vec<Vec<usize>> = (0..m).map(|j| neighbours(right, j)).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..m {
                for &i2 in &left_nb[i] {
                    for &j2 in &right_nb[j] {
                        if (i, j) != (i2, j2) && related((i, j), (i2, j2)) {
                            if kind == ProductKind::Categorical {
                                debug_assert!(left.related(i, i2) && right.related(j, j2));
                            }
                            edges.push((i * m + j, i2 * m + j2));
                        }
                    }
                }
            }
        }
        let (graph, index) = ReflexiveGraph::from_indexed(mode, labels, edges)?;
        let mut pairs = vec![(0, 0); n * m];
        for (flat, &v) in index.iter().enumerate() {
            pairs[v] = (flat / m.max(1), flat % m.max(1));
        }
        Ok(Tensor { kind, graph, left: left.clone(), right: right.clone(), index, pairs })
    }

    pub fn kind(&self) -> ProductKind {
        self.kind
    }

    pub fn graph(&self) -> &ReflexiveGraph {
        &self.graph
    }

    pub fn left(&self) -> &ReflexiveGraph {
        &self.left
    }

    pub fn right(&self) -> &ReflexiveGraph {
        &self.right
    }

    /// The product vertex `(i, j)`.
    #[inline]
    pub fn vertex(&self, i: usize, j: usize) -> usize {
        self.index[i * self.right.vertex_count() + j]
    }

    /// The coordinates of product vertex `v`.
    #[inline]
    pub fn pair(&self, v: usize) -> (usize, usize) {
        self.pairs[v]
    }
}

pub fn tensor(kind: ProductKind, g: &ReflexiveGraph, h: &ReflexiveGraph) -> Result<ReflexiveGraph> {
    Tensor::new(kind, g, h).map(|t| t.graph)
}

/// The categorical product built from `g ⇝ g′ ∧ h ⇝ h′` alone.
pub fn categorical_two_clause(g: &ReflexiveGraph, h: &ReflexiveGraph) -> Result<ReflexiveGraph> {
    let t = Tensor::build(ProductKind::Categorical, g, h, |(g1, h1), (g2, h2)| {
        g.related(g1, g2) && h.related(h1, h2)
    })?;
    Ok(t.graph)
}

/// `(u, v) ↦ (f(u), g(v))` between precomputed tensors.
pub fn tensor_hom_between(dom: &Tensor, cod: &Tensor, f: &GraphHom, g: &GraphHom) -> Result<GraphHom> {
    if f.dom() != dom.left() || g.dom() != dom.right() || f.cod() != cod.left() || g.cod() != cod.right() {
        return Err(Error::ShapeMismatch("tensor factors do not match the homs".into()));
    }
    let map = (0..dom.graph.vertex_count())
        .map(|v| {
            let (i, j) = dom.pair(v);
            cod.vertex(f.apply(i), g.apply(j))
        })
        .collect();
    GraphHom::new(dom.graph.clone(), cod.graph.clone(), map)
}

pub fn tensor_hom(kind: ProductKind, f: &GraphHom, g: &GraphHom) -> Result<GraphHom> {
    same_mode(f.dom().mode(), g.dom().mode())?;
    let dom = Tensor::new(kind, f.dom(), g.dom())?;
    let cod = Tensor::new(kind, f.cod(), g.cod())?;
    tensor_hom_between(&dom, &cod, f, g)
}

/// The internal hom `[B, C]`: vertices are the homs `B → C`, labelled by
/// their image vector `"[c0,c1,…]"` in `B`'s vertex order.
#[derive(Clone, Debug)]
pub struct Exponential {
    kind: ProductKind,
    graph: ReflexiveGraph,
    source: ReflexiveGraph,
    target: ReflexiveGraph,
    // indexed by vertex of `graph`
    homs: Vec<Vec<usize>>,
    lookup: FxHashMap<Vec<usize>, usize>,
}

impl Exponential {
    pub fn new(kind: ProductKind, source: &ReflexiveGraph, target: &ReflexiveGraph) -> Result<Self> {
        let mode = same_mode(source.mode(), target.mode())?;
        let homs: Vec<Vec<usize>> = enumerate_homs(source, target)?.into_iter().map(|h| h.map().to_vec()).collect();
        let labels = homs
            .iter()
            .map(|map| {
                let images: Vec<&str> = map.iter().map(|&v| target.label(v)).collect();
                format!("[{}]", images.join(","))
            })
            .collect();
        let related_pairs: Vec<(usize, usize)> = match kind {
            ProductKind::Box => (0..source.vertex_count()).map(|b| (b, b)).collect(),
            ProductKind::Categorical => {
                let n = source.vertex_count();
                (0..n).flat_map(|b| (0..n).map(move |b2| (b, b2))).filter(|&(b, b2)| source.related(b, b2)).collect()
            }
        };
        let mut edges = Vec::new();
        for (x, f) in homs.iter().enumerate() {
            for (y, g) in homs.iter().enumerate() {
                if x != y && related_pairs.iter().all(|&(b, b2)| target.related(f[b], g[b2])) {
                    edges.push((x, y));
                }
            }
        }
        let (graph, position) = ReflexiveGraph::from_indexed(mode, labels, edges)?;
        let mut ordered = vec![Vec::new(); homs.len()];
        for (x, map) in homs.into_iter().enumerate() {
            ordered[position[x]] = map;
        }
        let lookup = ordered.iter().enumerate().map(|(v, map)| (map.clone(), v)).collect();
        Ok(Exponential { kind, graph, source: source.clone(), target: target.clone(), homs: ordered, lookup })
    }

    pub fn kind(&self) -> ProductKind {
        self.kind
    }

    pub fn graph(&self) -> &ReflexiveGraph {
        &self.graph
    }

    pub fn source(&self) -> &ReflexiveGraph {
        &self.source
    }

    pub fn target(&self) -> &ReflexiveGraph {
        &self.target
    }

    /// The hom `B → C` that vertex `v` stands for.
    pub fn hom_at(&self, v: usize) -> GraphHom {
        GraphHom::trusted(self.source.clone(), self.target.clone(), self.homs[v].clone())
    }

    pub fn vertex_of(&self, hom: &GraphHom) -> Option<usize> {
        if hom.dom() != &self.source || hom.cod() != &self.target {
            return None;
        }
        self.lookup.get(hom.map()).copied()
    }

    /// `φ: A ⊗ B → C` to `A → [B, C]`, `a ↦ (b ↦ φ(a, b))`.
    pub fn curry(&self, tensor: &Tensor, phi: &GraphHom) -> Result<GraphHom> {
        self.check_tensor(tensor)?;
        if phi.dom() != tensor.graph() || phi.cod() != &self.target {
            return Err(Error::ShapeMismatch("φ must map A ⊗ B into C".into()));
        }
        let m = self.source.vertex_count();
        let map = (0..tensor.left().vertex_count())
            .map(|a| {
                let image: Vec<usize> = (0..m).map(|b| phi.apply(tensor.vertex(a, b))).collect();
                self.lookup.get(&image).copied().ok_or_else(|| Error::ShapeMismatch("slice is not a hom".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        GraphHom::new(tensor.left().clone(), self.graph.clone(), map)
    }

    /// `ψ: A → [B, C]` to `A ⊗ B → C`, `(a, b) ↦ ψ(a)(b)`.
    pub fn uncurry(&self, tensor: &Tensor, psi: &GraphHom) -> Result<GraphHom> {
        self.check_tensor(tensor)?;
        if psi.dom() != tensor.left() || psi.cod() != &self.graph {
            return Err(Error::ShapeMismatch("ψ must map A into [B, C]".into()));
        }
        let map = (0..tensor.graph().vertex_count())
            .map(|v| {
                let (a, b) = tensor.pair(v);
                self.homs[psi.apply(a)][b]
            })
            .collect();
        GraphHom::new(tensor.graph().clone(), self.target.clone(), map)
    }

    /// Post-composition `[B, c]: [B, C] → [B, C′]`.
    pub fn post_compose(&self, other: &Exponential, c: &GraphHom) -> Result<GraphHom> {
        if other.source != self.source || c.dom() != &self.target || c.cod() != &other.target {
            return Err(Error::ShapeMismatch("post-composition shapes".into()));
        }
        let map = self
            .homs
            .iter()
            .map(|f| {
                let image: Vec<usize> = f.iter().map(|&v| c.apply(v)).collect();
                other.lookup[&image]
            })
            .collect();
        GraphHom::new(self.graph.clone(), other.graph.clone(), map)
    }

    fn check_tensor(&self, tensor: &Tensor) -> Result<()> {
        if tensor.kind != self.kind || tensor.right() != &self.source {
            return Err(Error::ShapeMismatch("tensor does not match the internal hom".into()));
        }
        Ok(())
    }
}

pub fn internal_hom(kind: ProductKind, b: &ReflexiveGraph, c: &ReflexiveGraph) -> Result<ReflexiveGraph> {
    Exponential::new(kind, b, c).map(|e| e.graph)
}

/// Curries `φ: A ⊗ B → C` into `A → [B, C]`.
pub fn curry(kind: ProductKind, a: &ReflexiveGraph, b: &ReflexiveGraph, phi: &GraphHom) -> Result<GraphHom> {
    let t = Tensor::new(kind, a, b)?;
    let e = Exponential::new(kind, b, phi.cod())?;
    e.curry(&t, phi)
}

/// Uncurries `ψ: A → [B, C]` into `A ⊗ B → C`. `C` is passed explicitly since
/// the internal hom's labels do not determine it.
pub fn uncurry(
    kind: ProductKind,
    a: &ReflexiveGraph,
    b: &ReflexiveGraph,
    c: &ReflexiveGraph,
    psi: &GraphHom,
) -> Result<GraphHom> {
    let t = Tensor::new(kind, a, b)?;
    let e = Exponential::new(kind, b, c)?;
    e.uncurry(&t, psi)
}

/// `α: (A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)`, `((a, b), c) ↦ (a, (b, c))`.
pub fn canonical_associator(
    kind: ProductKind,
    a: &ReflexiveGraph,
    b: &ReflexiveGraph,
    c: &ReflexiveGraph,
) -> Result<GraphHom> {
    let ab = Tensor::new(kind, a, b)?;
    let bc = Tensor::new(kind, b, c)?;
    let dom = Tensor::new(kind, ab.graph(), c)?;
    let cod = Tensor::new(kind, a, bc.graph())?;
    Ok(associator_between(&ab, &bc, &dom, &cod))
}

pub(crate) fn associator_between(ab: &Tensor, bc: &Tensor, dom: &Tensor, cod: &Tensor) -> GraphHom {
    let map = (0..dom.graph().vertex_count())
        .map(|v| {
            let (x, k) = dom.pair(v);
            let (i, j) = ab.pair(x);
            cod.vertex(i, bc.vertex(j, k))
        })
        .collect();
    GraphHom::trusted(dom.graph().clone(), cod.graph().clone(), map)
}

/// `(λ_A: I ⊗ A → A, ϱ_A: A ⊗ I → A)` with `I` the one-vertex graph.
pub fn canonical_unitors(kind: ProductKind, a: &ReflexiveGraph) -> Result<(GraphHom, GraphHom)> {
    let unit = make_path(0, a.mode());
    let left = Tensor::new(kind, &unit, a)?;
    let right = Tensor::new(kind, a, &unit)?;
    Ok((left_unitor_on(&left), right_unitor_on(&right)))
}

pub(crate) fn left_unitor_on(t: &Tensor) -> GraphHom {
    let map = (0..t.graph().vertex_count()).map(|v| t.pair(v).1).collect();
    GraphHom::trusted(t.graph().clone(), t.right().clone(), map)
}

pub(crate) fn right_unitor_on(t: &Tensor) -> GraphHom {
    let map = (0..t.graph().vertex_count()).map(|v| t.pair(v).0).collect();
    GraphHom::trusted(t.graph().clone(), t.left().clone(), map)
}

/// The symmetry `A ⊗ B → B ⊗ A`.
pub fn swap(kind: ProductKind, a: &ReflexiveGraph, b: &ReflexiveGraph) -> Result<GraphHom> {
    let ab = Tensor::new(kind, a, b)?;
    let ba = Tensor::new(kind, b, a)?;
    Ok(swap_between(&ab, &ba))
}

pub(crate) fn swap_between(ab: &Tensor, ba: &Tensor) -> GraphHom {
    let map = (0..ab.graph().vertex_count())
        .map(|v| {
            let (i, j) = ab.pair(v);
            ba.vertex(j, i)
        })
        .collect();
    GraphHom::trusted(ab.graph().clone(), ba.graph().clone(), map)
}
