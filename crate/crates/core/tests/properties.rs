use proptest::prelude::*;

use monocat::graph::{
    count_homs, disjoint_union, is_isomorphic, quotient, GraphHom, Mode, ReflexiveGraph, VertexPartition,
};
use monocat::presheaf::{colimit, density_recolimit, embed, reflect, Diagram};
use monocat::products::{internal_hom, swap, tensor, ProductKind};

/// A reflexive graph on `1..=max` vertices with an arbitrary edge set.
fn graph(mode: Mode, max: usize) -> impl Strategy<Value = ReflexiveGraph> {
    (1..=max).prop_flat_map(move |n| {
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| if mode == Mode::Undirected { u < v } else { u != v })
            .collect();
        proptest::collection::vec(any::<bool>(), slots.len()).prop_map(move |bits| {
            let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let edges: Vec<(String, String)> = slots
                .iter()
                .zip(&bits)
                .filter(|(_, &b)| b)
                .map(|(&(u, v), _)| (labels[u].clone(), labels[v].clone()))
                .collect();
            ReflexiveGraph::new(mode, labels.clone(), edges).unwrap()
        })
    })
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Directed), Just(Mode::Undirected)]
}

fn kind() -> impl Strategy<Value = ProductKind> {
    prop_oneof![Just(ProductKind::Box), Just(ProductKind::Categorical)]
}

fn pair(max: usize) -> impl Strategy<Value = (ReflexiveGraph, ReflexiveGraph)> {
    mode().prop_flat_map(move |m| (graph(m, max), graph(m, max)))
}

fn triple(max: usize) -> impl Strategy<Value = (ReflexiveGraph, ReflexiveGraph, ReflexiveGraph)> {
    mode().prop_flat_map(move |m| (graph(m, max), graph(m, max), graph(m, max)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swap_is_an_isomorphism((a, b) in pair(3), k in kind()) {
        let s = swap(k, &a, &b).unwrap();
        prop_assert!(s.is_isomorphism());
        prop_assert_eq!(s.dom(), &tensor(k, &a, &b).unwrap());
        let back = swap(k, &b, &a).unwrap();
        prop_assert_eq!(s.then(&back).unwrap(), GraphHom::identity(s.dom()));
    }

    #[test]
    fn currying_preserves_hom_counts((a, b, c) in triple(2), k in kind()) {
        let lhs = count_homs(&tensor(k, &a, &b).unwrap(), &c).unwrap();
        let rhs = count_homs(&a, &internal_hom(k, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_with_point_is_identity(g in mode().prop_flat_map(|m| graph(m, 4)), k in kind()) {
        let point = ReflexiveGraph::new(g.mode(), ["*"], Vec::<(&str, &str)>::new()).unwrap();
        prop_assert!(is_isomorphic(&tensor(k, &g, &point).unwrap(), &g).unwrap().is_some());
    }

    #[test]
    fn discrete_quotient_is_isomorphic(g in mode().prop_flat_map(|m| graph(m, 4))) {
        let q = quotient(&g, &VertexPartition::discrete(&g)).unwrap();
        prop_assert!(is_isomorphic(&q, &g).unwrap().is_some());
    }

    #[test]
    fn reflect_inverts_embed(g in mode().prop_flat_map(|m| graph(m, 4))) {
        let x = embed(&g);
        prop_assert!(x.is_valid());
        prop_assert!(x.is_graph_presheaf());
        prop_assert_eq!(reflect(&x).unwrap(), g);
    }

    #[test]
    fn density_recovers_graph(g in mode().prop_flat_map(|m| graph(m, 4))) {
        prop_assert!(density_recolimit(&g).unwrap().witness.is_isomorphism());
    }

    #[test]
    fn arrowless_colimit_is_disjoint_union((a, b) in pair(3)) {
        let d = Diagram::with(a.mode(), vec![a.clone(), b.clone()], Vec::new()).unwrap();
        let c = colimit(&d).unwrap();
        prop_assert!(is_isomorphic(&c.apex, &disjoint_union(&a, &b).unwrap()).unwrap().is_some());
    }

    #[test]
    fn json_round_trip(g in mode().prop_flat_map(|m| graph(m, 4))) {
        prop_assert_eq!(ReflexiveGraph::from_json(&g.to_json()).unwrap(), g);
    }
}
