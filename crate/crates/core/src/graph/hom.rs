use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::ReflexiveGraph;
use crate::error::{same_mode, Error, Result};

/// A vertex map that preserves the edge relation. Always valid once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GraphHom {
    dom: ReflexiveGraph,
    cod: ReflexiveGraph,
    map: Vec<usize>,
}

impl GraphHom {
    pub fn new(dom: ReflexiveGraph, cod: ReflexiveGraph, map: Vec<usize>) -> Result<Self> {
        same_mode(dom.mode(), cod.mode())?;
        if !is_hom(&dom, &cod, &map)? {
            let (u, v) = dom
                .edges()
                .iter()
                .copied()
                .find(|&(u, v)| !cod.related(map[u], map[v]))
                .expect("a failing edge exists");
            return Err(Error::NotAHom {
                from: dom.label(u).to_string(),
                to: dom.label(v).to_string(),
            });
        }
        Ok(GraphHom { dom, cod, map })
    }

    /// Skips validation; for maps that are homs by construction.
    pub(crate) fn trusted(dom: ReflexiveGraph, cod: ReflexiveGraph, map: Vec<usize>) -> Self {
        debug_assert!(is_hom(&dom, &cod, &map).unwrap_or(false));
        GraphHom { dom, cod, map }
    }

    /// Builds a hom from a label-to-label assignment.
    pub fn from_labels<'a>(
        dom: ReflexiveGraph,
        cod: ReflexiveGraph,
        assignment: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut map = vec![None; dom.vertex_count()];
        for (from, to) in assignment {
            let u = dom.index_of(from).ok_or_else(|| Error::UnknownVertex(from.to_string()))?;
            let v = cod.index_of(to).ok_or_else(|| Error::UnknownVertex(to.to_string()))?;
            map[u] = Some(v);
        }
        let defined = map.iter().filter(|m| m.is_some()).count();
        if defined != map.len() {
            return Err(Error::NotTotal { expected: map.len(), actual: defined });
        }
        Self::new(dom, cod, map.into_iter().flatten().collect())
    }

    pub fn identity(g: &ReflexiveGraph) -> Self {
        GraphHom { dom: g.clone(), cod: g.clone(), map: (0..g.vertex_count()).collect() }
    }

    /// The constant map onto vertex `target`.
    pub fn constant(dom: &ReflexiveGraph, cod: &ReflexiveGraph, target: usize) -> Result<Self> {
        same_mode(dom.mode(), cod.mode())?;
        if target >= cod.vertex_count() {
            return Err(Error::ImageOutOfRange { image: target, size: cod.vertex_count() });
        }
        Ok(GraphHom { dom: dom.clone(), cod: cod.clone(), map: vec![target; dom.vertex_count()] })
    }

    pub fn dom(&self) -> &ReflexiveGraph {
        &self.dom
    }

    pub fn cod(&self) -> &ReflexiveGraph {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn apply_label(&self, v: &str) -> Option<&str> {
        self.dom.index_of(v).map(|i| self.cod.label(self.map[i]))
    }

    /// Same map, retyped between different graphs on the same vertex sets.
    pub fn retype(&self, dom: ReflexiveGraph, cod: ReflexiveGraph) -> Result<Self> {
        if dom.vertex_count() != self.dom.vertex_count() || cod.vertex_count() != self.cod.vertex_count() {
            return Err(Error::ShapeMismatch("retype changes vertex counts".into()));
        }
        Self::new(dom, cod, self.map.clone())
    }

    /// This map followed by `next`.
    pub fn then(&self, next: &GraphHom) -> Result<GraphHom> {
        compose(self, next)
    }

    /// Bijective on vertices with a hom inverse.
    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_some()
    }

    pub fn inverse(&self) -> Option<GraphHom> {
        let n = self.dom.vertex_count();
        if n != self.cod.vertex_count() {
            return None;
        }
        let mut inverse = vec![usize::MAX; n];
        for (u, &v) in self.map.iter().enumerate() {
            if inverse[v] != usize::MAX {
                return None;
            }
            inverse[v] = u;
        }
        GraphHom::new(self.cod.clone(), self.dom.clone(), inverse).ok()
    }

    pub fn label_map(&self) -> BTreeMap<String, String> {
        self.map
            .iter()
            .enumerate()
            .map(|(u, &v)| (self.dom.label(u).to_string(), self.cod.label(v).to_string()))
            .collect()
    }
}

impl fmt::Debug for GraphHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.label_map().into_iter().map(|(k, v)| format!("{k}↦{v}")).collect();
        write!(f, "GraphHom[{}]", pairs.join(", "))
    }
}

impl Serialize for GraphHom {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("GraphHom", 3)?;
        s.serialize_field("dom", &self.dom)?;
        s.serialize_field("cod", &self.cod)?;
        s.serialize_field("map", &self.label_map())?;
        s.end()
    }
}

/// `compose(f, g)` is `g ∘ f`: first `f`, then `g`.
pub fn compose(f: &GraphHom, g: &GraphHom) -> Result<GraphHom> {
    if f.cod != g.dom {
        return Err(Error::NotComposable);
    }
    let map = f.map.iter().map(|&v| g.map[v]).collect();
    Ok(GraphHom { dom: f.dom.clone(), cod: g.cod.clone(), map })
}

/// True iff `map` (indexed by `g`'s vertices) sends every edge of `g` to an
/// edge or equality of `h`.
pub fn is_hom(g: &ReflexiveGraph, h: &ReflexiveGraph, map: &[usize]) -> Result<bool> {
    if map.len() != g.vertex_count() {
        return Err(Error::NotTotal { expected: g.vertex_count(), actual: map.len() });
    }
    if let Some(&image) = map.iter().find(|&&v| v >= h.vertex_count()) {
        return Err(Error::ImageOutOfRange { image, size: h.vertex_count() });
    }
    Ok(g.edges().iter().all(|&(u, v)| h.related(map[u], map[v])))
}

/// Calls `visit` on every hom `g → h` in lexicographic order of the image
/// vector, stopping early on `ControlFlow::Break`.
pub fn visit_homs<F>(g: &ReflexiveGraph, h: &ReflexiveGraph, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    same_mode(g.mode(), h.mode())?;
    let n = g.vertex_count();
    let m = h.vertex_count();
    if n == 0 {
        let _ = visit(&[]);
        return Ok(());
    }
    if m == 0 {
        return Ok(());
    }
    // For vertex i: earlier vertices j with j ⇝ i, and with i ⇝ j.
    let incoming: Vec<Vec<usize>> = (0..n).map(|i| (0..i).filter(|&j| g.related(j, i)).collect()).collect();
    let outgoing: Vec<Vec<usize>> = (0..n).map(|i| (0..i).filter(|&j| g.related(i, j)).collect()).collect();
    let mut map = vec![0usize; n];
    let mut next = vec![0usize; n];
    let mut depth = 0usize;
    loop {
        let mut placed = false;
        while next[depth] < m {
            let c = next[depth];
            next[depth] += 1;
            let ok = incoming[depth].iter().all(|&j| h.related(map[j], c))
                && outgoing[depth].iter().all(|&j| h.related(c, map[j]));
            if ok {
                map[depth] = c;
                placed = true;
                break;
            }
        }
        if placed {
            if depth + 1 == n {
                if visit(&map).is_break() {
                    return Ok(());
                }
            } else {
                depth += 1;
                next[depth] = 0;
            }
        } else if depth == 0 {
            return Ok(());
        } else {
            depth -= 1;
        }
    }
}

/// All homs `g → h`, in lexicographic order of the image vector.
pub fn enumerate_homs(g: &ReflexiveGraph, h: &ReflexiveGraph) -> Result<Vec<GraphHom>> {
    let mut out = Vec::new();
    visit_homs(g, h, |map| {
        out.push(GraphHom { dom: g.clone(), cod: h.clone(), map: map.to_vec() });
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Like [`enumerate_homs`], but gives up with `None` once more than `limit`
/// homs exist.
pub fn enumerate_homs_bounded(g: &ReflexiveGraph, h: &ReflexiveGraph, limit: usize) -> Result<Option<Vec<GraphHom>>> {
    let mut out = Vec::new();
    let mut overflow = false;
    visit_homs(g, h, |map| {
        if out.len() == limit {
            overflow = true;
            return ControlFlow::Break(());
        }
        out.push(GraphHom { dom: g.clone(), cod: h.clone(), map: map.to_vec() });
        ControlFlow::Continue(())
    })?;
    Ok(if overflow { None } else { Some(out) })
}

/// The number of homs, or `None` once it exceeds `limit`.
pub fn count_homs_bounded(g: &ReflexiveGraph, h: &ReflexiveGraph, limit: usize) -> Result<Option<usize>> {
    let mut count = 0;
    visit_homs(g, h, |_| {
        count += 1;
        if count > limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok((count <= limit).then_some(count))
}

pub fn count_homs(g: &ReflexiveGraph, h: &ReflexiveGraph) -> Result<usize> {
    let mut count = 0;
    visit_homs(g, h, |_| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}
