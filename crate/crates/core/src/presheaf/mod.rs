//! Set-valued presheaves on the index categories, the embedding of graphs
//! into them and the reflection back.

mod colimit;
mod density;
mod index;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{same_mode, Error, Result};
use crate::graph::{enumerate_homs, GraphHom, Mode, ReflexiveGraph};

pub use colimit::{colimit, colimit_presheaves, Colimit, Diagram, PresheafColimit};
pub use density::{
    cograph, corepresentable_hom, density_diagram, density_recolimit, hom_functor, representable, Cograph,
    DensityRecolimit,
};
pub use index::{word_name, Generator, IndexCategory, Morphism, MorphismId, Object, Relation, Word};

/// A functor from the index category to finite sets, given by one carrier
/// per object and one function per generator.
#[derive(Clone, PartialEq, Eq)]
pub struct Presheaf {
    mode: Mode,
    sets: [Vec<String>; 3],
    maps: [Option<Vec<usize>>; 7],
}

/// A relation of the index category that the presheaf breaks, with the first
/// element where the two sides differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub relation: &'static str,
    pub object: Object,
    pub element: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at {} ∈ {}: {} vs {}",
            self.relation, self.element, self.object, self.lhs, self.rhs
        )
    }
}

impl Presheaf {
    pub fn new<M>(mode: Mode, sets: [Vec<String>; 3], maps: M) -> Result<Self>
    where
        M: IntoIterator<Item = (Generator, Vec<usize>)>,
    {
        for (o, set) in Object::ALL.iter().zip(&sets) {
            let mut sorted: Vec<&String> = set.iter().collect();
            sorted.sort();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidPresheaf(format!("`{}` appears twice in {o}", w[0])));
            }
        }
        let mut slots: [Option<Vec<usize>>; 7] = Default::default();
        for (g, map) in maps {
            if !Generator::generators(mode).contains(&g) {
                return Err(Error::InvalidPresheaf(format!("generator {} is not part of {mode} mode", g.key())));
            }
            let (src, tgt) = (sets[g.source().index()].len(), sets[g.target().index()].len());
            if map.len() != src {
                return Err(Error::NotTotal { expected: src, actual: map.len() });
            }
            if let Some(&bad) = map.iter().find(|&&y| y >= tgt) {
                return Err(Error::ImageOutOfRange { image: bad, size: tgt });
            }
            slots[g.index()] = Some(map);
        }
        if let Some(g) = Generator::generators(mode).iter().find(|g| slots[g.index()].is_none()) {
            return Err(Error::InvalidPresheaf(format!("missing map for {}", g.key())));
        }
        Ok(Presheaf { mode, sets, maps: slots })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn category(&self) -> &'static IndexCategory {
        IndexCategory::get(self.mode)
    }

    pub fn set(&self, o: Object) -> &[String] {
        &self.sets[o.index()]
    }

    pub fn size(&self, o: Object) -> usize {
        self.sets[o.index()].len()
    }

    /// `(|V|, |V²|, |E|)`.
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.size(Object::V), self.size(Object::V2), self.size(Object::E))
    }

    pub fn index_of(&self, o: Object, label: &str) -> Option<usize> {
        self.sets[o.index()].iter().position(|l| l == label)
    }

    /// The function of generator `g`. Panics when `g` is outside the mode.
    pub fn map(&self, g: Generator) -> &[usize] {
        self.maps[g.index()].as_deref().expect("generator belongs to this mode")
    }

    pub fn act(&self, g: Generator, x: usize) -> usize {
        self.map(g)[x]
    }

    /// Applies a diagrammatic word to an element.
    pub fn act_word(&self, word: &[Generator], x: usize) -> usize {
        word.iter().fold(x, |x, &g| self.act(g, x))
    }

    pub fn act_morphism(&self, m: MorphismId, x: usize) -> usize {
        self.act_word(&self.category().morphism(m).word, x)
    }

    /// One violation per broken relation.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for rel in self.category().relations() {
            let target = rel.lhs.last().map_or(rel.source, |g| g.target());
            for x in 0..self.size(rel.source) {
                let (l, r) = (self.act_word(&rel.lhs, x), self.act_word(&rel.rhs, x));
                if l != r {
                    out.push(Violation {
                        relation: rel.name,
                        object: rel.source,
                        element: self.set(rel.source)[x].clone(),
                        lhs: self.set(target)[l].clone(),
                        rhs: self.set(target)[r].clone(),
                    });
                    break;
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Why the presheaf is not (isomorphic to) the image of a graph, if it
    /// is not: `(p, q)` must be a bijection `V² → V × V` and `e` injective.
    pub fn graph_defect(&self) -> Option<String> {
        if let Some(v) = self.validate().first() {
            return Some(v.to_string());
        }
        let n = self.size(Object::V);
        if self.size(Object::V2) != n * n {
            return Some(format!("|V²| = {} but |V|² = {}", self.size(Object::V2), n * n));
        }
        let mut seen = vec![false; n * n];
        for z in 0..self.size(Object::V2) {
            let k = self.act(Generator::P, z) * n + self.act(Generator::Q, z);
            if std::mem::replace(&mut seen[k], true) {
                return Some(format!("(p, q) is not injective at {}", self.set(Object::V2)[z]));
            }
        }
        let mut hit = vec![false; self.size(Object::V2)];
        for x in 0..self.size(Object::E) {
            let z = self.act(Generator::E, x);
            if std::mem::replace(&mut hit[z], true) {
                return Some(format!("e is not injective at {}", self.set(Object::E)[x]));
            }
        }
        None
    }

    pub fn is_graph_presheaf(&self) -> bool {
        self.graph_defect().is_none()
    }

    /// Endpoints `(pe(x), qe(x))` of an edge element.
    pub fn endpoints(&self, x: usize) -> (usize, usize) {
        let z = self.act(Generator::E, x);
        (self.act(Generator::P, z), self.act(Generator::Q, z))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presheaf serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", PresheafJson::from(self).display())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafJson {
    pub mode: Mode,
    #[serde(rename = "V")]
    pub v: Vec<String>,
    #[serde(rename = "V2")]
    pub v2: Vec<String>,
    #[serde(rename = "E")]
    pub e: Vec<String>,
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl PresheafJson {
    fn display(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }
}

impl From<&Presheaf> for PresheafJson {
    fn from(x: &Presheaf) -> Self {
        let mut maps = BTreeMap::new();
        for &g in Generator::generators(x.mode) {
            let (src, tgt) = (x.set(g.source()), x.set(g.target()));
            let m = x.map(g).iter().enumerate().map(|(i, &y)| (src[i].clone(), tgt[y].clone())).collect();
            maps.insert(g.key().to_string(), m);
        }
        PresheafJson {
            mode: x.mode,
            v: x.set(Object::V).to_vec(),
            v2: x.set(Object::V2).to_vec(),
            e: x.set(Object::E).to_vec(),
            maps,
        }
    }
}

impl TryFrom<PresheafJson> for Presheaf {
    type Error = Error;

    fn try_from(json: PresheafJson) -> Result<Self> {
        let sets = [json.v, json.v2, json.e];
        let lookup: Vec<HashMap<&str, usize>> =
            sets.iter().map(|s| s.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()).collect();
        let mut maps = Vec::new();
        for (key, table) in &json.maps {
            let g = Generator::from_key(key).ok_or_else(|| Error::Parse(format!("unknown generator `{key}`")))?;
            let (src, tgt) = (g.source().index(), g.target().index());
            let mut map = vec![usize::MAX; sets[src].len()];
            for (from, to) in table {
                let i = *lookup[src]
                    .get(from.as_str())
                    .ok_or_else(|| Error::UnknownVertex(format!("{from} (in {} of {key})", g.source())))?;
                let j = *lookup[tgt]
                    .get(to.as_str())
                    .ok_or_else(|| Error::UnknownVertex(format!("{to} (in {} of {key})", g.target())))?;
                map[i] = j;
            }
            if let Some(i) = map.iter().position(|&y| y == usize::MAX) {
                return Err(Error::InvalidPresheaf(format!("{key} is undefined at `{}`", sets[src][i])));
            }
            maps.push((g, map));
        }
        Presheaf::new(json.mode, sets.clone(), maps)
    }
}

impl Serialize for Presheaf {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PresheafJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Presheaf {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = PresheafJson::deserialize(deserializer)?;
        Presheaf::try_from(json).map_err(serde::de::Error::custom)
    }
}

/// A natural transformation, one component per object. Source and target
/// are kept by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PresheafMorphism {
    pub components: [Vec<usize>; 3],
}

impl PresheafMorphism {
    pub fn component(&self, o: Object) -> &[usize] {
        &self.components[o.index()]
    }

    /// `self` then `next`.
    pub fn then(&self, next: &PresheafMorphism) -> PresheafMorphism {
        let components = std::array::from_fn(|o| self.components[o].iter().map(|&x| next.components[o][x]).collect());
        PresheafMorphism { components }
    }

    pub fn is_natural(&self, x: &Presheaf, y: &Presheaf) -> bool {
        if x.mode != y.mode {
            return false;
        }
        let typed = Object::ALL.iter().all(|&o| {
            self.component(o).len() == x.size(o) && self.component(o).iter().all(|&t| t < y.size(o))
        });
        typed
            && Generator::generators(x.mode).iter().all(|&g| {
                let (a, b) = (self.component(g.source()), self.component(g.target()));
                (0..x.size(g.source())).all(|i| b[x.act(g, i)] == y.act(g, a[i]))
            })
    }
}

/// Every relation of the index category that `x` breaks, with a witness.
pub fn validate_presheaf(x: &Presheaf) -> Vec<Violation> {
    x.validate()
}

/// The reflection `X ↦ R X`: vertices are `X(V)`, and `u ⇝ v` when some edge
/// element has endpoints `(u, v)`.
pub fn reflect(x: &Presheaf) -> Result<ReflexiveGraph> {
    reflect_with_unit(x).map(|(g, _)| g)
}

/// The reflection together with its unit `X → embed(R X)`.
pub fn reflect_with_unit(x: &Presheaf) -> Result<(ReflexiveGraph, PresheafMorphism)> {
    if let Some(v) = x.validate().into_iter().next() {
        return Err(Error::InvalidPresheaf(v.to_string()));
    }
    let edges: Vec<(usize, usize)> = (0..x.size(Object::E)).map(|e| x.endpoints(e)).collect();
    let (g, position) = ReflexiveGraph::from_indexed(x.mode, x.set(Object::V).to_vec(), edges.iter().copied())?;
    let n = g.vertex_count();
    let arcs = ArcIndex::new(&g);
    let v = position.clone();
    let v2 = (0..x.size(Object::V2))
        .map(|z| position[x.act(Generator::P, z)] * n + position[x.act(Generator::Q, z)])
        .collect();
    let e = edges.iter().map(|&(a, b)| arcs.get(position[a], position[b])).collect();
    Ok((g, PresheafMorphism { components: [v, v2, e] }))
}

/// Positions of the arcs of `g`, loops included, in lexicographic order.
/// These index the edge carrier of `embed(g)`.
struct ArcIndex {
    arcs: Vec<(usize, usize)>,
}

impl ArcIndex {
    fn new(g: &ReflexiveGraph) -> Self {
        let n = g.vertex_count();
        let arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| g.related(u, v)).collect();
        ArcIndex { arcs }
    }

    fn get(&self, u: usize, v: usize) -> usize {
        self.arcs.binary_search(&(u, v)).expect("arc of the embedded graph")
    }
}

/// The presheaf of a graph: `V` its vertices, `V²` ordered pairs, `E` the
/// related pairs with loops (both orientations when undirected).
pub fn embed(g: &ReflexiveGraph) -> Presheaf {
    let n = g.vertex_count();
    let label = |v: usize| g.label(v);
    let arcs = ArcIndex::new(g);
    let v: Vec<String> = g.vertices().to_vec();
    let v2: Vec<String> = (0..n * n).map(|k| format!("({},{})", label(k / n), label(k % n))).collect();
    let e: Vec<String> = arcs.arcs.iter().map(|&(a, b)| format!("{}->{}", label(a), label(b))).collect();
    let mut maps = vec![
        (Generator::Delta, (0..n).map(|u| u * n + u).collect()),
        (Generator::P, (0..n * n).map(|k| k / n).collect()),
        (Generator::Q, (0..n * n).map(|k| k % n).collect()),
        (Generator::Sigma, (0..n * n).map(|k| (k % n) * n + k / n).collect()),
        (Generator::E, arcs.arcs.iter().map(|&(a, b)| a * n + b).collect()),
        (Generator::Ell, (0..n).map(|u| arcs.get(u, u)).collect()),
    ];
    if g.mode() == Mode::Undirected {
        maps.push((Generator::S, arcs.arcs.iter().map(|&(a, b)| arcs.get(b, a)).collect()));
    }
    Presheaf::new(g.mode(), [v, v2, e], maps).expect("embedding is well formed")
}

/// The natural transformation `embed(f)`.
pub fn embed_hom(f: &GraphHom) -> PresheafMorphism {
    let (n, m) = (f.dom().vertex_count(), f.cod().vertex_count());
    let (src, tgt) = (ArcIndex::new(f.dom()), ArcIndex::new(f.cod()));
    let v = f.map().to_vec();
    let v2 = (0..n * n).map(|k| f.apply(k / n) * m + f.apply(k % n)).collect();
    let e = src.arcs.iter().map(|&(a, b)| tgt.get(f.apply(a), f.apply(b))).collect();
    PresheafMorphism { components: [v, v2, e] }
}

/// All natural transformations `x → y`, in lexicographic order of the
/// concatenated components.
pub fn enumerate_morphisms(x: &Presheaf, y: &Presheaf) -> Result<Vec<PresheafMorphism>> {
    same_mode(x.mode, y.mode)?;
    // Elements in carrier order V, V², E; each naturality square is checked
    // once both of its elements are assigned.
    let offsets = [0, x.size(Object::V), x.size(Object::V) + x.size(Object::V2)];
    let total = offsets[2] + x.size(Object::E);
    let sort_of = |k: usize| if k < offsets[1] { 0 } else if k < offsets[2] { 1 } else { 2 };
    let mut checks: Vec<Vec<(Generator, usize, bool)>> = vec![Vec::new(); total];
    for &g in Generator::generators(x.mode) {
        let (a, b) = (g.source().index(), g.target().index());
        for i in 0..x.size(g.source()) {
            let (ki, kj) = (offsets[a] + i, offsets[b] + x.act(g, i));
            // `true`: the element is the source of the square
            if ki >= kj {
                checks[ki].push((g, kj, true));
            } else {
                checks[kj].push((g, ki, false));
            }
        }
    }
    let mut out = Vec::new();
    let mut assign = vec![usize::MAX; total];
    let mut k = 0;
    let mut next_candidate = vec![0usize; total];
    loop {
        if k == total {
            let components = std::array::from_fn(|o| {
                let end = if o == 2 { total } else { offsets[o + 1] };
                assign[offsets[o]..end].to_vec()
            });
            out.push(PresheafMorphism { components });
            if total == 0 {
                break;
            }
            k -= 1;
            continue;
        }
        let size = y.size(Object::ALL[sort_of(k)]);
        let mut found = false;
        while next_candidate[k] < size {
            let c = next_candidate[k];
            next_candidate[k] += 1;
            let ok = checks[k].iter().all(|&(g, other, is_source)| {
                if other == k {
                    y.act(g, c) == c
                } else if is_source {
                    assign[other] == y.act(g, c)
                } else {
                    c == y.act(g, assign[other])
                }
            });
            if ok {
                assign[k] = c;
                found = true;
                break;
            }
        }
        if found {
            k += 1;
        } else {
            next_candidate[k] = 0;
            assign[k] = usize::MAX;
            if k == 0 {
                break;
            }
            k -= 1;
        }
    }
    Ok(out)
}

/// Outcome of comparing `Hom(R X, G)` with `Hom(X, embed G)` through the
/// unit of the reflection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionCheck {
    pub graph_homs: usize,
    pub presheaf_morphisms: usize,
    pub bijective: bool,
}

pub fn reflector_adjunction_check(x: &Presheaf, g: &ReflexiveGraph) -> Result<AdjunctionCheck> {
    same_mode(x.mode, g.mode())?;
    let (rx, unit) = reflect_with_unit(x)?;
    let homs = enumerate_homs(&rx, g)?;
    let direct = enumerate_morphisms(x, &embed(g))?;
    let mut images: Vec<PresheafMorphism> = homs.iter().map(|f| unit.then(&embed_hom(f))).collect();
    let all_natural = images.iter().all(|m| m.is_natural(x, &embed(g)));
    images.sort_by(|a, b| a.components.cmp(&b.components));
    let before = images.len();
    images.dedup();
    let mut direct_sorted = direct.clone();
    direct_sorted.sort_by(|a, b| a.components.cmp(&b.components));
    Ok(AdjunctionCheck {
        graph_homs: homs.len(),
        presheaf_morphisms: direct.len(),
        bijective: all_natural && images.len() == before && images == direct_sorted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, make_path, NamedGraph};

    #[test]
    fn embedding_sizes() {
        let j1 = embed(&make_path(1, Mode::Directed));
        assert_eq!(j1.sizes(), (2, 4, 3));
        assert!(j1.is_graph_presheaf());
        let i1 = embed(&make_path(1, Mode::Undirected));
        assert_eq!(i1.sizes(), (2, 4, 4));
        assert!(i1.is_graph_presheaf());
    }

    #[test]
    fn reflect_inverts_embed() {
        for g in [
            make_named(NamedGraph::Csq, Mode::Directed).unwrap(),
            make_named(NamedGraph::K4r, Mode::Undirected).unwrap(),
            make_path(3, Mode::Undirected),
            ReflexiveGraph::empty(Mode::Directed),
        ] {
            assert_eq!(reflect(&embed(&g)).unwrap(), g);
        }
    }

    #[test]
    fn json_round_trip() {
        let x = embed(&make_path(1, Mode::Undirected));
        let back = Presheaf::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
        assert!(Presheaf::from_json(r#"{"mode":"directed","V":[],"V2":[],"E":[],"maps":{"zz":{}}}"#).is_err());
    }

    fn broken_sigma() -> Presheaf {
        let x = embed(&make_path(1, Mode::Directed));
        let mut json = PresheafJson::from(&x);
        let sigma = json.maps.get_mut("sigma").unwrap();
        sigma.insert("(0,1)".into(), "(0,1)".into());
        sigma.insert("(1,0)".into(), "(1,0)".into());
        Presheaf::try_from(json).unwrap()
    }

    #[test]
    fn validation_names_broken_relations() {
        let x = broken_sigma();
        let names: Vec<&str> = x.validate().iter().map(|v| v.relation).collect();
        assert_eq!(names, ["pσ = q", "qσ = p"]);
        assert!(matches!(reflect(&x), Err(Error::InvalidPresheaf(_))));
        assert!(!x.is_graph_presheaf());
    }

    #[test]
    fn non_graph_presheaf_reflects() {
        // two parallel edge elements over the same pair
        let sets = [
            vec!["u".to_string()],
            vec!["(u,u)".to_string()],
            vec!["loop".to_string(), "extra".to_string()],
        ];
        let maps = [
            (Generator::Delta, vec![0]),
            (Generator::P, vec![0]),
            (Generator::Q, vec![0]),
            (Generator::Sigma, vec![0]),
            (Generator::E, vec![0, 0]),
            (Generator::Ell, vec![0]),
        ];
        let x = Presheaf::new(Mode::Directed, sets, maps).unwrap();
        assert!(x.is_valid());
        assert!(x.graph_defect().unwrap().contains("e is not injective"));
        assert_eq!(reflect(&x).unwrap(), ReflexiveGraph::new(Mode::Directed, ["u"], [("u", "u")]).unwrap());
    }

    #[test]
    fn embedded_homs_match_graph_homs() {
        let j1 = make_path(1, Mode::Directed);
        let j2 = make_path(2, Mode::Directed);
        let (x, y) = (embed(&j1), embed(&j2));
        let morphisms = enumerate_morphisms(&x, &y).unwrap();
        assert_eq!(morphisms.len(), 5);
        for f in enumerate_homs(&j1, &j2).unwrap() {
            let m = embed_hom(&f);
            assert!(m.is_natural(&x, &y));
            assert!(morphisms.contains(&m));
        }
    }

    #[test]
    fn adjunction_on_non_graph_presheaf() {
        let x = broken_sigma();
        assert!(reflector_adjunction_check(&x, &make_path(1, Mode::Directed)).is_err());
        let sets = [
            vec!["u".to_string(), "v".to_string()],
            (0..4).map(|k| format!("z{k}")).collect(),
            vec!["lu".into(), "lv".into(), "a".into(), "b".into()],
        ];
        let maps = [
            (Generator::Delta, vec![0, 3]),
            (Generator::P, vec![0, 0, 1, 1]),
            (Generator::Q, vec![0, 1, 0, 1]),
            (Generator::Sigma, vec![0, 2, 1, 3]),
            (Generator::E, vec![0, 3, 1, 1]),
            (Generator::Ell, vec![0, 1]),
        ];
        let x = Presheaf::new(Mode::Directed, sets, maps).unwrap();
        for target in [make_path(1, Mode::Directed), make_named(NamedGraph::Dsq, Mode::Directed).unwrap()] {
            let check = reflector_adjunction_check(&x, &target).unwrap();
            assert!(check.bijective, "{check:?}");
            assert_eq!(check.graph_homs, check.presheaf_morphisms);
        }
    }

    #[test]
    fn morphisms_out_of_empty() {
        let empty = embed(&ReflexiveGraph::empty(Mode::Directed));
        let j1 = embed(&make_path(1, Mode::Directed));
        assert_eq!(enumerate_morphisms(&empty, &j1).unwrap().len(), 1);
        assert_eq!(enumerate_morphisms(&j1, &empty).unwrap().len(), 0);
    }
}
