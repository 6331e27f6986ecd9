//! Colimits of finite diagrams. Presheaf colimits are computed sortwise
//! (union–find on the disjoint union of carriers); graph colimits embed,
//! take the presheaf colimit, then reflect.

use super::{embed, embed_hom, reflect_with_unit, Generator, Object, Presheaf, PresheafMorphism};
use crate::error::{same_mode, Error, Result};
use crate::graph::{GraphHom, Mode, ReflexiveGraph};

/// A finite diagram of graphs: objects and arrows `(source, target, hom)`.
#[derive(Clone, Debug)]
pub struct Diagram {
    mode: Mode,
    objects: Vec<ReflexiveGraph>,
    arrows: Vec<(usize, usize, GraphHom)>,
}

impl Diagram {
    pub fn new(mode: Mode) -> Self {
        Diagram { mode, objects: Vec::new(), arrows: Vec::new() }
    }

    pub fn with(
        mode: Mode,
        objects: Vec<ReflexiveGraph>,
        arrows: Vec<(usize, usize, GraphHom)>,
    ) -> Result<Self> {
        let mut d = Diagram::new(mode);
        for g in objects {
            d.add_object(g)?;
        }
        for (s, t, f) in arrows {
            d.add_arrow(s, t, f)?;
        }
        Ok(d)
    }

    pub fn add_object(&mut self, g: ReflexiveGraph) -> Result<usize> {
        same_mode(self.mode, g.mode())?;
        self.objects.push(g);
        Ok(self.objects.len() - 1)
    }

    pub fn add_arrow(&mut self, source: usize, target: usize, f: GraphHom) -> Result<()> {
        let (Some(s), Some(t)) = (self.objects.get(source), self.objects.get(target)) else {
            return Err(Error::IllTypedDiagram(format!("arrow {source} → {target} names a missing object")));
        };
        if f.dom() != s || f.cod() != t {
            return Err(Error::IllTypedDiagram(format!("arrow {source} → {target} has the wrong domain or codomain")));
        }
        self.arrows.push((source, target, f));
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn objects(&self) -> &[ReflexiveGraph] {
        &self.objects
    }

    pub fn arrows(&self) -> &[(usize, usize, GraphHom)] {
        &self.arrows
    }
}

#[derive(Clone, Debug)]
pub struct PresheafColimit {
    pub apex: Presheaf,
    pub cocone: Vec<PresheafMorphism>,
}

#[derive(Clone, Debug)]
pub struct Colimit {
    pub apex: ReflexiveGraph,
    pub cocone: Vec<GraphHom>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // The smaller index stays the root, so a class is named by its first member.
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

/// The colimit of a diagram of presheaves. Elements of the apex are labelled
/// `"i:x"` after the first member `x` of object `i` in their class.
pub fn colimit_presheaves(
    mode: Mode,
    objects: &[Presheaf],
    arrows: &[(usize, usize, PresheafMorphism)],
) -> Result<PresheafColimit> {
    for x in objects {
        same_mode(mode, x.mode())?;
    }
    for (s, t, m) in arrows {
        let (Some(x), Some(y)) = (objects.get(*s), objects.get(*t)) else {
            return Err(Error::IllTypedDiagram(format!("arrow {s} → {t} names a missing object")));
        };
        if !m.is_natural(x, y) {
            return Err(Error::IllTypedDiagram(format!("arrow {s} → {t} is not natural")));
        }
    }

    let mut sets: [Vec<String>; 3] = Default::default();
    // class[o][i][x]: index of the apex element containing element x of object i
    let mut class: [Vec<Vec<usize>>; 3] = Default::default();
    let mut members: [Vec<(usize, usize)>; 3] = Default::default();
    for o in Object::ALL {
        let offsets: Vec<usize> = objects
            .iter()
            .scan(0, |acc, x| {
                let start = *acc;
                *acc += x.size(o);
                Some(start)
            })
            .collect();
        let total = objects.iter().map(|x| x.size(o)).sum();
        let mut uf = UnionFind::new(total);
        for (s, t, m) in arrows {
            for (x, &y) in m.component(o).iter().enumerate() {
                uf.union(offsets[*s] + x, offsets[*t] + y);
            }
        }
        let mut root_class = vec![usize::MAX; total];
        let cls = &mut class[o.index()];
        for (i, x) in objects.iter().enumerate() {
            let mut row = Vec::with_capacity(x.size(o));
            for e in 0..x.size(o) {
                let r = uf.find(offsets[i] + e);
                if root_class[r] == usize::MAX {
                    root_class[r] = sets[o.index()].len();
                    sets[o.index()].push(format!("{i}:{}", x.set(o)[e]));
                    members[o.index()].push((i, e));
                }
                row.push(root_class[r]);
            }
            cls.push(row);
        }
    }

    let maps = Generator::generators(mode).iter().map(|&g| {
        let (a, b) = (g.source().index(), g.target().index());
        let map = members[a].iter().map(|&(i, e)| class[b][i][objects[i].act(g, e)]).collect();
        (g, map)
    });
    let apex = Presheaf::new(mode, sets, maps.collect::<Vec<_>>())?;
    let cocone = (0..objects.len())
        .map(|i| PresheafMorphism { components: std::array::from_fn(|o| class[o][i].clone()) })
        .collect();
    Ok(PresheafColimit { apex, cocone })
}

/// The colimit of a diagram of graphs.
pub fn colimit(d: &Diagram) -> Result<Colimit> {
    let objects: Vec<Presheaf> = d.objects.iter().map(embed).collect();
    let arrows: Vec<(usize, usize, PresheafMorphism)> =
        d.arrows.iter().map(|(s, t, f)| (*s, *t, embed_hom(f))).collect();
    let pc = colimit_presheaves(d.mode, &objects, &arrows)?;
    let (apex, unit) = reflect_with_unit(&pc.apex)?;
    let to_vertex = unit.component(Object::V);
    let cocone = d
        .objects
        .iter()
        .zip(&pc.cocone)
        .map(|(g, leg)| {
            let map = leg.component(Object::V).iter().map(|&c| to_vertex[c]).collect();
            GraphHom::new(g.clone(), apex.clone(), map)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Colimit { apex, cocone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_isomorphic, make_path};

    fn directed(n: usize) -> ReflexiveGraph {
        make_path(n, Mode::Directed)
    }

    #[test]
    fn coequalizer_of_endpoints_is_point() {
        let (j0, j1) = (directed(0), directed(1));
        let d = Diagram::with(
            Mode::Directed,
            vec![j0.clone(), j1.clone()],
            vec![
                (0, 1, GraphHom::constant(&j0, &j1, 0).unwrap()),
                (0, 1, GraphHom::constant(&j0, &j1, 1).unwrap()),
            ],
        )
        .unwrap();
        let c = colimit(&d).unwrap();
        assert!(is_isomorphic(&c.apex, &j0).unwrap().is_some());
    }

    #[test]
    fn pushout_glues_paths() {
        let (j0, j1) = (directed(0), directed(1));
        let d = Diagram::with(
            Mode::Directed,
            vec![j0.clone(), j1.clone(), j1.clone()],
            vec![
                (0, 1, GraphHom::constant(&j0, &j1, 1).unwrap()),
                (0, 2, GraphHom::constant(&j0, &j1, 0).unwrap()),
            ],
        )
        .unwrap();
        let c = colimit(&d).unwrap();
        assert!(is_isomorphic(&c.apex, &directed(2)).unwrap().is_some());
        assert_eq!(c.cocone[1].apply(1), c.cocone[2].apply(0));
    }

    #[test]
    fn empty_diagram_gives_empty_graph() {
        let c = colimit(&Diagram::new(Mode::Undirected)).unwrap();
        assert!(c.apex.is_empty());
    }

    #[test]
    fn ill_typed_arrows() {
        let (j0, j1) = (directed(0), directed(1));
        let mut d = Diagram::new(Mode::Directed);
        d.add_object(j0.clone()).unwrap();
        d.add_object(j1.clone()).unwrap();
        let f = GraphHom::constant(&j0, &j1, 0).unwrap();
        assert!(matches!(d.add_arrow(1, 0, f.clone()), Err(Error::IllTypedDiagram(_))));
        assert!(matches!(d.add_arrow(0, 5, f), Err(Error::IllTypedDiagram(_))));
        assert!(d.add_object(make_path(0, Mode::Undirected)).is_err());
    }
}
