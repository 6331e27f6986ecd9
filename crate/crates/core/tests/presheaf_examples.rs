use monocat::graph::{is_isomorphic, make_named, make_path, GraphHom, Mode, NamedGraph, ReflexiveGraph};
use monocat::presheaf::{colimit, embed, reflect, reflector_adjunction_check, Diagram, Generator, Presheaf};

/// Directed presheaf on vertices `x, y` with the forced loops plus one edge
/// element per listed pair.
fn on_two_vertices(edges: &[(usize, usize)]) -> Presheaf {
    let v = vec!["x".to_string(), "y".to_string()];
    let v2: Vec<String> = ["xx", "xy", "yx", "yy"].map(String::from).to_vec();
    let mut e = vec!["lx".to_string(), "ly".to_string()];
    let mut e_map = vec![0, 3];
    for (k, &(u, w)) in edges.iter().enumerate() {
        e.push(format!("a{k}"));
        e_map.push(u * 2 + w);
    }
    let maps = [
        (Generator::Delta, vec![0, 3]),
        (Generator::P, vec![0, 0, 1, 1]),
        (Generator::Q, vec![0, 1, 0, 1]),
        (Generator::Sigma, vec![0, 2, 1, 3]),
        (Generator::E, e_map),
        (Generator::Ell, vec![0, 1]),
    ];
    Presheaf::new(Mode::Directed, [v, v2, e], maps).unwrap()
}

#[test]
fn parallel_edges_collapse_to_one() {
    let x = on_two_vertices(&[(0, 1), (0, 1)]);
    assert!(x.is_valid());
    assert!(!x.is_graph_presheaf());
    let expected = ReflexiveGraph::new(Mode::Directed, ["x", "y"], [("x", "y")]).unwrap();
    assert_eq!(reflect(&x).unwrap(), expected);
    let check = reflector_adjunction_check(&x, &make_path(1, Mode::Directed)).unwrap();
    assert!(check.bijective);
    assert_eq!(check.graph_homs, 3);
}

#[test]
fn opposite_edges_give_two_cycle() {
    let x = on_two_vertices(&[(0, 1), (1, 0)]);
    assert!(x.is_graph_presheaf());
    let expected = ReflexiveGraph::new(Mode::Directed, ["x", "y"], [("x", "y"), ("y", "x")]).unwrap();
    assert_eq!(reflect(&x).unwrap(), expected);
}

#[test]
fn graph_presheaf_conditions() {
    for mode in [Mode::Directed, Mode::Undirected] {
        let square = make_named(if mode == Mode::Directed { NamedGraph::Csq } else { NamedGraph::C4 }, mode).unwrap();
        assert!(embed(&square).is_graph_presheaf());
    }
    // a single pair element over two vertices cannot biject onto V × V
    let sets = [vec!["x".to_string()], vec!["xx".to_string(), "xx'".to_string()], vec!["l".to_string()]];
    let maps = [
        (Generator::Delta, vec![0]),
        (Generator::P, vec![0, 0]),
        (Generator::Q, vec![0, 0]),
        (Generator::Sigma, vec![0, 1]),
        (Generator::E, vec![0]),
        (Generator::Ell, vec![0]),
    ];
    let x = Presheaf::new(Mode::Directed, sets, maps).unwrap();
    assert!(x.is_valid(), "{:?}", x.validate());
    assert!(!x.is_graph_presheaf());
}

#[test]
fn adjunction_on_small_presheaves() {
    let j1 = make_path(1, Mode::Directed);
    let check = reflector_adjunction_check(&embed(&j1), &j1).unwrap();
    assert!(check.bijective);
    assert_eq!((check.graph_homs, check.presheaf_morphisms), (3, 3));
    let empty = embed(&ReflexiveGraph::empty(Mode::Directed));
    for g in [j1, make_named(NamedGraph::Dsq, Mode::Directed).unwrap()] {
        let check = reflector_adjunction_check(&empty, &g).unwrap();
        assert!(check.bijective);
        assert_eq!(check.graph_homs, 1);
    }
}

#[test]
fn regluing_along_the_cocone_is_idempotent() {
    let j1 = make_path(1, Mode::Directed);
    let point = make_path(0, Mode::Directed);
    let ends: Vec<_> = (0..2).map(|v| GraphHom::constant(&point, &j1, v).unwrap()).collect();
    // glue two copies of J1 head to tail
    let d = Diagram::with(
        Mode::Directed,
        vec![j1.clone(), j1.clone(), point],
        vec![(2, 0, ends[1].clone()), (2, 1, ends[0].clone())],
    )
    .unwrap();
    let c = colimit(&d).unwrap();
    assert_eq!(c.apex.vertex_count(), 3);
    let mut again = d.clone();
    let apex = again.add_object(c.apex.clone()).unwrap();
    for (i, leg) in c.cocone.iter().enumerate() {
        again.add_arrow(i, apex, leg.clone()).unwrap();
    }
    let c2 = colimit(&again).unwrap();
    assert!(is_isomorphic(&c.apex, &c2.apex).unwrap().is_some());
}
