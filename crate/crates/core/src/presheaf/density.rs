//! Representable graphs and the canonical decomposition of a graph as a
//! colimit of them.

use super::{colimit, reflect, Colimit, Diagram, Generator, IndexCategory, MorphismId, Object, Presheaf};
use crate::error::{Error, Result};
use crate::graph::{GraphHom, Mode, ReflexiveGraph};

/// The hom functor `Hom(w, −)` as a covariant functor on the index category,
/// i.e. a presheaf on its opposite read as an object of the same shape.
/// Elements are morphism names in applicative notation.
pub fn hom_functor(w: Object, mode: Mode) -> Presheaf {
    let cat = IndexCategory::get(mode);
    let homs: [Vec<MorphismId>; 3] = std::array::from_fn(|o| cat.hom(w, Object::ALL[o]));
    let sets = std::array::from_fn(|o| homs[o].iter().map(|&m| cat.morphism(m).name()).collect());
    let maps: Vec<(Generator, Vec<usize>)> = cat
        .generators()
        .iter()
        .map(|&g| {
            let next = cat.generator(g);
            let target = &homs[g.target().index()];
            let map = homs[g.source().index()]
                .iter()
                .map(|&h| {
                    let composite = cat.compose(h, next).expect("composable");
                    target.iter().position(|&t| t == composite).expect("closed hom set")
                })
                .collect();
            (g, map)
        })
        .collect();
    Presheaf::new(mode, sets, maps).expect("hom functor is well formed")
}

/// The graph represented by an object: a point for `V`, two points for `V²`,
/// an edge for `E`. Vertices are named by the morphisms `w → V`.
pub fn representable(w: Object, mode: Mode) -> ReflexiveGraph {
    reflect(&hom_functor(w, mode)).expect("hom functors satisfy the relations")
}

/// The graph hom `representable(b) → representable(a)` induced by `m: a → b`,
/// acting on vertices by precomposition.
pub fn corepresentable_hom(m: MorphismId, mode: Mode) -> GraphHom {
    let cat = IndexCategory::get(mode);
    let morphism = cat.morphism(m);
    let (dom, cod) = (representable(morphism.target, mode), representable(morphism.source, mode));
    let cod_homs = cat.hom(morphism.source, Object::V);
    let map = cat
        .hom(morphism.target, Object::V)
        .iter()
        .map(|&h| {
            let composite = cat.compose(m, h).expect("composable");
            let name = cat.morphism(cod_homs[cod_homs.iter().position(|&c| c == composite).unwrap()]).name();
            cod.index_of(&name).expect("vertex named by a morphism")
        })
        .collect();
    GraphHom::new(dom, cod, map).expect("precomposition is a graph hom")
}

/// The images of the generators under the corepresentable functor.
#[derive(Clone, Debug)]
pub struct Cograph {
    pub point: ReflexiveGraph,
    pub pair: ReflexiveGraph,
    pub edge: ReflexiveGraph,
    /// `p, q: point → pair`
    pub p: GraphHom,
    pub q: GraphHom,
    /// `Δ: pair → point`
    pub diagonal: GraphHom,
    pub sigma: GraphHom,
    /// `e: pair → edge`
    pub e: GraphHom,
    /// `ℓ: edge → point`
    pub ell: GraphHom,
    /// `s: edge → edge`, undirected mode only
    pub s: Option<GraphHom>,
}

pub fn cograph(mode: Mode) -> Cograph {
    let cat = IndexCategory::get(mode);
    let hom = |g: Generator| corepresentable_hom(cat.generator(g), mode);
    Cograph {
        point: representable(Object::V, mode),
        pair: representable(Object::V2, mode),
        edge: representable(Object::E, mode),
        p: hom(Generator::P),
        q: hom(Generator::Q),
        diagonal: hom(Generator::Delta),
        sigma: hom(Generator::Sigma),
        e: hom(Generator::E),
        ell: hom(Generator::Ell),
        s: (mode == Mode::Undirected).then(|| hom(Generator::S)),
    }
}

/// One copy of the point per vertex and of the edge per arc (per orientation
/// when undirected), glued along the endpoint inclusions.
pub fn density_diagram(g: &ReflexiveGraph) -> Diagram {
    let mode = g.mode();
    let cat = IndexCategory::get(mode);
    let pe = cat.find(Object::E, &[Generator::E, Generator::P]).expect("pe exists");
    let qe = cat.find(Object::E, &[Generator::E, Generator::Q]).expect("qe exists");
    let (source, target) = (corepresentable_hom(pe, mode), corepresentable_hom(qe, mode));
    let point = representable(Object::V, mode);
    let edge = representable(Object::E, mode);
    let mut d = Diagram::new(mode);
    for _ in 0..g.vertex_count() {
        d.add_object(point.clone()).expect("same mode");
    }
    for (u, v) in g.arcs() {
        let i = d.add_object(edge.clone()).expect("same mode");
        d.add_arrow(u, i, source.clone()).expect("well typed");
        d.add_arrow(v, i, target.clone()).expect("well typed");
    }
    d
}

#[derive(Clone, Debug)]
pub struct DensityRecolimit {
    pub diagram: Diagram,
    pub colimit: Colimit,
    /// The comparison `colim → g`, an isomorphism.
    pub witness: GraphHom,
}

/// Rebuilds `g` as the colimit of its density diagram and returns the
/// comparison isomorphism.
pub fn density_recolimit(g: &ReflexiveGraph) -> Result<DensityRecolimit> {
    let diagram = density_diagram(g);
    let colimit = colimit(&diagram)?;
    let mut map = vec![usize::MAX; colimit.apex.vertex_count()];
    for v in 0..g.vertex_count() {
        map[colimit.cocone[v].apply(0)] = v;
    }
    if map.contains(&usize::MAX) {
        return Err(Error::InvalidPresheaf("colimit has a vertex outside every point copy".into()));
    }
    let witness = GraphHom::new(colimit.apex.clone(), g.clone(), map)?;
    if !witness.is_isomorphism() {
        return Err(Error::InvalidPresheaf("comparison map is not an isomorphism".into()));
    }
    Ok(DensityRecolimit { diagram, colimit, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_homs, is_isomorphic, make_named, make_path, NamedGraph};

    #[test]
    fn representables() {
        let j0 = make_path(0, Mode::Directed);
        assert!(is_isomorphic(&representable(Object::V, Mode::Directed), &j0).unwrap().is_some());
        let pair = representable(Object::V2, Mode::Directed);
        assert_eq!((pair.vertex_count(), pair.edge_count()), (2, 0));
        assert_eq!(pair.vertices(), ["p", "q"]);
        let edge = representable(Object::E, Mode::Directed);
        assert_eq!(edge.vertices(), ["pe", "qe"]);
        assert!(edge.related_labels("pe", "qe") && !edge.related_labels("qe", "pe"));
        let i1 = representable(Object::E, Mode::Undirected);
        assert!(is_isomorphic(&i1, &make_path(1, Mode::Undirected)).unwrap().is_some());
    }

    #[test]
    fn cograph_maps() {
        let c = cograph(Mode::Directed);
        assert_eq!(c.p.apply_label("id"), Some("p"));
        assert_eq!(c.q.apply_label("id"), Some("q"));
        assert_eq!(c.e.apply_label("p"), Some("pe"));
        assert_eq!(c.ell.apply_label("qe"), Some("id"));
        assert!(c.s.is_none());
        let u = cograph(Mode::Undirected);
        let s = u.s.unwrap();
        assert_eq!(s.apply_label("pe"), Some("qe"));
        assert!(s.is_isomorphism());
    }

    #[test]
    fn recolimit_recovers_graphs() {
        for g in [
            make_named(NamedGraph::Csq, Mode::Directed).unwrap(),
            make_named(NamedGraph::Dsq, Mode::Directed).unwrap(),
            make_named(NamedGraph::C4, Mode::Undirected).unwrap(),
            make_path(2, Mode::Undirected),
            ReflexiveGraph::empty(Mode::Directed),
        ] {
            let r = density_recolimit(&g).unwrap();
            assert!(r.witness.is_isomorphism());
            assert_eq!(r.diagram.objects().len(), g.vertex_count() + g.arcs().len());
        }
    }

    #[test]
    fn yoneda_for_edge() {
        // homs out of the edge representable are the edge elements
        let g = make_named(NamedGraph::Csq, Mode::Directed).unwrap();
        let edge = representable(Object::E, Mode::Directed);
        assert_eq!(count_homs(&edge, &g).unwrap(), g.vertex_count() + g.edge_count());
    }
}
