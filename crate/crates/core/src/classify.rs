//! Exhaustive classification of the possible tensor squares `edge ⊗ edge`.
//!
//! A square candidate is a reflexive graph on a quotient of `{a, b, c, d}`
//! (the images of the four corners `(0,0), (0,1), (1,0), (1,1)`). It
//! survives when
//!
//! * (C1) the four edge pickers `a⇝b`, `c⇝d`, `a⇝c`, `b⇝d` are homs from the
//!   edge graph,
//! * (C2) the retractions `ℓ_h` (`{a,b} ↦ 0`, `{c,d} ↦ 1`) and `ℓ_v`
//!   (`{a,c} ↦ 0`, `{b,d} ↦ 1`) are well defined on blocks and are homs onto
//!   the edge graph,
//! * (C3, undirected) the involutions `s_h` (`a↔b`, `c↔d`) and `s_v`
//!   (`a↔c`, `b↔d`) descend to automorphisms.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{
    is_hom, is_isomorphic, make_named, make_path, set_partitions, subgraphs, GraphHom, Mode, NamedGraph,
    ReflexiveGraph, VertexPartition,
};
use crate::products::{tensor, ProductKind};
use crate::verify::{check_all, CoherenceReport, Corpus, ProductOracle, VerifyConfig};

const CORNERS: [&str; 4] = ["a", "b", "c", "d"];
const PICKERS: [(usize, usize); 4] = [(0, 1), (2, 3), (0, 2), (1, 3)];
const ELL_H: [usize; 4] = [0, 0, 1, 1];
const ELL_V: [usize; 4] = [0, 1, 0, 1];
const S_H: [usize; 4] = [1, 0, 3, 2];
const S_V: [usize; 4] = [2, 3, 0, 1];

fn corners(mode: Mode) -> ReflexiveGraph {
    ReflexiveGraph::new(mode, CORNERS, std::iter::empty::<(&str, &str)>()).expect("four distinct corners")
}

fn edge_graph(mode: Mode) -> ReflexiveGraph {
    make_path(1, mode)
}

/// The forced unit with the argument that rules out the alternative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitCertificate {
    /// Subgraphs of the terminal graph, i.e. the candidates.
    pub candidates: Vec<ReflexiveGraph>,
    pub lines: Vec<String>,
}

pub fn determine_unit(mode: Mode) -> (ReflexiveGraph, UnitCertificate) {
    let terminal = make_path(0, mode);
    let candidates = subgraphs(&terminal);
    let witness = edge_graph(mode);
    let empty = candidates.iter().find(|g| g.is_empty()).cloned().expect("empty subgraph");
    let point = candidates.iter().find(|g| !g.is_empty()).cloned().expect("the terminal itself");
    let lines = vec![
        format!(
            "the unit is a subgraph of the terminal graph; there are {} of them: the empty graph and the point",
            candidates.len()
        ),
        format!(
            "a unit-preserving tensor preserves the initial object, so unit = empty would give edge ≅ edge ⊗ empty ≅ empty; but the edge has {} vertices and the empty graph {}",
            witness.vertex_count(),
            empty.vertex_count()
        ),
        "hence the unit is the point".to_string(),
    ];
    (point, UnitCertificate { candidates, lines })
}

/// Which constraints to apply and where to search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SquareOptions {
    pub non_discrete_only: bool,
    pub retractions: bool,
    pub involutions: bool,
}

impl Default for SquareOptions {
    fn default() -> Self {
        SquareOptions { non_discrete_only: false, retractions: true, involutions: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledSquare {
    /// Block id of `a, b, c, d`.
    pub partition: Vec<usize>,
    pub graph: ReflexiveGraph,
}

/// Why a whole partition is excluded by the retraction fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCertificate {
    pub partition: Vec<usize>,
    pub block: String,
    pub retraction: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionStats {
    pub partition: Vec<usize>,
    pub blocks: usize,
    pub candidates: usize,
    pub survivors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub partitions: usize,
    pub candidates: usize,
    pub survivors: usize,
    pub per_partition: Vec<PartitionStats>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareSearch {
    pub mode: Mode,
    pub options: SquareOptions,
    /// Labeled survivors, sorted by edge count then canonical JSON.
    pub survivors: Vec<LabeledSquare>,
    /// One representative per isomorphism class, in survivor order.
    pub iso_classes: Vec<ReflexiveGraph>,
    pub fiber_certificates: Vec<FiberCertificate>,
    pub stats: SearchStats,
}

/// Image of corner `x` under `f` if `f` is constant on blocks.
fn descend(p: &VertexPartition, f: &[usize]) -> Option<Vec<usize>> {
    p.blocks()
        .iter()
        .map(|block| {
            let v = f[block[0]];
            block.iter().all(|&x| f[x] == v).then_some(v)
        })
        .collect()
}

/// `f` on corners induces a map on blocks if it sends each block into one.
fn descend_endo(p: &VertexPartition, f: &[usize]) -> Option<Vec<usize>> {
    let blocks: Vec<usize> = f.iter().map(|&x| p.block_of(x)).collect();
    descend(p, &blocks)
}

fn fiber_obstruction(p: &VertexPartition) -> Option<(usize, &'static str)> {
    (0..p.blocks().len()).find_map(|b| {
        let block = &p.blocks()[b];
        if block.iter().any(|&x| ELL_H[x] != ELL_H[block[0]]) {
            Some((b, "ℓ_h"))
        } else if block.iter().any(|&x| ELL_V[x] != ELL_V[block[0]]) {
            Some((b, "ℓ_v"))
        } else {
            None
        }
    })
}

/// The candidate on the blocks of `p` with the given edges between distinct
/// blocks, its vertices in canonical order, and the block→vertex positions.
fn candidate(mode: Mode, p: &VertexPartition, edges: &[(usize, usize)]) -> (ReflexiveGraph, Vec<usize>) {
    let labels: Vec<String> = (0..p.blocks().len()).map(|b| p.block_label(b)).collect();
    let named: Vec<(&str, &str)> = edges.iter().map(|&(u, v)| (labels[u].as_str(), labels[v].as_str())).collect();
    let q = ReflexiveGraph::new(mode, labels.iter().map(String::as_str), named).expect("blocks have distinct labels");
    let position = labels.iter().map(|l| q.index_of(l).expect("block vertex")).collect();
    (q, position)
}

fn survives(mode: Mode, q: &ReflexiveGraph, p: &VertexPartition, pos: &[usize], opts: SquareOptions) -> bool {
    let corner = |x: usize| pos[p.block_of(x)];
    let edge = edge_graph(mode);
    // C1
    let pickers = PICKERS.iter().all(|&(x, y)| is_hom(&edge, q, &[corner(x), corner(y)]).unwrap_or(false));
    if !pickers {
        return false;
    }
    // C2
    if opts.retractions {
        for ell in [ELL_H, ELL_V] {
            let Some(on_blocks) = descend(p, &ell) else { return false };
            let mut map = vec![0; q.vertex_count()];
            for (b, &image) in on_blocks.iter().enumerate() {
                map[pos[b]] = image;
            }
            if !is_hom(q, &edge, &map).unwrap_or(false) {
                return false;
            }
        }
    }
    // C3
    if opts.involutions && mode == Mode::Undirected {
        for s in [S_H, S_V] {
            let Some(on_blocks) = descend_endo(p, &s) else { return false };
            let mut map = vec![0; q.vertex_count()];
            for (b, &image) in on_blocks.iter().enumerate() {
                map[pos[b]] = pos[image];
            }
            match GraphHom::new(q.clone(), q.clone(), map) {
                Ok(h) if h.is_isomorphism() => {}
                _ => return false,
            }
        }
    }
    true
}

pub fn enumerate_squares(mode: Mode, opts: SquareOptions) -> Result<SquareSearch> {
    let base = corners(mode);
    let partitions: Vec<VertexPartition> = set_partitions(4)
        .into_iter()
        .map(|rgs| VertexPartition::from_assignment(&base, &rgs))
        .filter(|p| !(opts.non_discrete_only && p.is_discrete()))
        .collect();

    let mut per_partition = Vec::new();
    let mut survivors = Vec::new();
    let mut fiber_certificates = Vec::new();
    for p in &partitions {
        let k = p.blocks().len();
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|u| (0..k).map(move |v| (u, v)))
            .filter(|&(u, v)| match mode {
                Mode::Directed => u != v,
                Mode::Undirected => u < v,
            })
            .collect();
        let count = 1usize << slots.len();
        let assignment: Vec<usize> = (0..4).map(|x| p.block_of(x)).collect();
        if opts.retractions {
            if let Some((b, retraction)) = fiber_obstruction(p) {
                fiber_certificates.push(FiberCertificate {
                    partition: assignment.clone(),
                    block: p.block_label(b),
                    retraction: retraction.to_string(),
                });
            }
        }
        let found: Vec<LabeledSquare> = (0..count)
            .into_par_iter()
            .filter_map(|mask| {
                let edges: Vec<(usize, usize)> =
                    slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
                let (q, pos) = candidate(mode, p, &edges);
                survives(mode, &q, p, &pos, opts).then(|| LabeledSquare { partition: assignment.clone(), graph: q })
            })
            .collect();
        per_partition.push(PartitionStats { partition: assignment, blocks: k, candidates: count, survivors: found.len() });
        survivors.extend(found);
    }
    survivors.sort_by_cached_key(|s| (s.graph.edge_count(), s.graph.to_json(), s.partition.clone()));

    let mut iso_classes: Vec<ReflexiveGraph> = Vec::new();
    for s in &survivors {
        let mut known = false;
        for c in &iso_classes {
            if is_isomorphic(c, &s.graph)?.is_some() {
                known = true;
                break;
            }
        }
        if !known {
            iso_classes.push(s.graph.clone());
        }
    }
    let stats = SearchStats {
        partitions: partitions.len(),
        candidates: per_partition.iter().map(|s| s.candidates).sum(),
        survivors: survivors.len(),
        per_partition,
    };
    Ok(SquareSearch { mode, options: opts, survivors, iso_classes, fiber_certificates, stats })
}

/// The fate of one possible edge beyond the four forced ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeVerdict {
    pub edge: (String, String),
    /// Retractions that send the edge onto the missing edge `1 ⇝ 0`.
    pub killed_by: Vec<String>,
    pub images: Vec<(String, (usize, usize))>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReverseEdgeReport {
    pub mode: Mode,
    /// Undirected graphs have no reverse edges to rule out.
    pub vacuous: bool,
    pub killed: Vec<EdgeVerdict>,
    pub free: Vec<(String, String)>,
}

pub fn check_no_reverse_edges(mode: Mode) -> ReverseEdgeReport {
    if mode == Mode::Undirected {
        return ReverseEdgeReport { mode, vacuous: true, killed: Vec::new(), free: Vec::new() };
    }
    let edge = edge_graph(mode);
    let order = [(1, 0), (3, 2), (2, 0), (3, 1), (3, 0), (1, 2), (2, 1), (0, 3)];
    let mut killed = Vec::new();
    let mut free = Vec::new();
    for (x, y) in order {
        let mut with: Vec<(&str, &str)> = PICKERS.iter().map(|&(u, v)| (CORNERS[u], CORNERS[v])).collect();
        with.push((CORNERS[x], CORNERS[y]));
        let q = ReflexiveGraph::new(mode, CORNERS, with).expect("corner graph");
        let mut verdict = EdgeVerdict { edge: (CORNERS[x].into(), CORNERS[y].into()), killed_by: Vec::new(), images: Vec::new() };
        for (name, ell) in [("ℓ_h", ELL_H), ("ℓ_v", ELL_V)] {
            let map: Vec<usize> = (0..4).map(|v| ell[CORNERS.iter().position(|c| *c == q.label(v)).unwrap()]).collect();
            verdict.images.push((name.to_string(), (ell[x], ell[y])));
            if !is_hom(&q, &edge, &map).expect("same mode") {
                verdict.killed_by.push(name.to_string());
            }
        }
        if verdict.killed_by.is_empty() {
            free.push(verdict.edge);
        } else {
            killed.push(verdict);
        }
    }
    ReverseEdgeReport { mode, vacuous: false, killed, free }
}

fn square_name(g: &ReflexiveGraph) -> Result<String> {
    let names: &[(&str, NamedGraph)] = match g.mode() {
        Mode::Directed => &[("CSq", NamedGraph::Csq), ("DSq", NamedGraph::Dsq)],
        Mode::Undirected => &[("C4", NamedGraph::C4), ("K4r", NamedGraph::K4r)],
    };
    for (name, named) in names {
        if is_isomorphic(g, &make_named(*named, g.mode())?)?.is_some() {
            return Ok(name.to_string());
        }
    }
    Ok("unnamed".to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareMatch {
    pub name: String,
    pub square: ReflexiveGraph,
    pub kind: Option<ProductKind>,
    pub verified: bool,
    pub reports: Vec<CoherenceReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub mode: Mode,
    pub unit: ReflexiveGraph,
    pub unit_certificate: UnitCertificate,
    pub squares: Vec<SquareMatch>,
    pub labeled_survivors: Vec<LabeledSquare>,
    pub stats: SearchStats,
    pub reverse_edges: ReverseEdgeReport,
    /// Exactly two squares, each realized by a distinct verified product.
    pub matches_theorem: bool,
}

pub fn classify(mode: Mode, corpus: &Corpus, cfg: &VerifyConfig) -> Result<ClassificationReport> {
    crate::error::same_mode(mode, corpus.mode())?;
    let (unit, unit_certificate) = determine_unit(mode);
    let search = enumerate_squares(mode, SquareOptions::default())?;
    let edge = edge_graph(mode);
    let mut squares = Vec::new();
    for square in &search.iso_classes {
        let mut kind = None;
        for k in ProductKind::ALL {
            if is_isomorphic(square, &tensor(k, &edge, &edge)?)?.is_some() {
                kind = Some(k);
                break;
            }
        }
        let reports = match kind {
            Some(k) => check_all(&ProductOracle::new(k, mode), corpus, cfg)?,
            None => Vec::new(),
        };
        let verified = kind.is_some() && reports.iter().all(CoherenceReport::passed);
        squares.push(SquareMatch { name: square_name(square)?, square: square.clone(), kind, verified, reports });
    }
    let distinct_kinds = squares.len() == 2 && squares[0].kind != squares[1].kind;
    let matches_theorem =
        unit.vertex_count() == 1 && distinct_kinds && squares.iter().all(|s| s.verified);
    Ok(ClassificationReport {
        mode,
        unit,
        unit_certificate,
        squares,
        labeled_survivors: search.survivors,
        stats: search.stats,
        reverse_edges: check_no_reverse_edges(mode),
        matches_theorem,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_is_point() {
        for mode in [Mode::Directed, Mode::Undirected] {
            let (unit, cert) = determine_unit(mode);
            assert_eq!(unit, make_path(0, mode));
            assert_eq!(cert.candidates.len(), 2);
        }
    }

    #[test]
    fn search_space_sizes() {
        let d = enumerate_squares(Mode::Directed, SquareOptions::default()).unwrap();
        assert_eq!((d.stats.partitions, d.stats.candidates), (15, 4509));
        let u = enumerate_squares(Mode::Undirected, SquareOptions::default()).unwrap();
        assert_eq!((u.stats.partitions, u.stats.candidates), (15, 127));
    }

    #[test]
    fn two_directed_survivors() {
        let d = enumerate_squares(Mode::Directed, SquareOptions::default()).unwrap();
        assert_eq!(d.survivors.len(), 2);
        let names: Vec<String> = d.iso_classes.iter().map(|g| square_name(g).unwrap()).collect();
        assert_eq!(names, ["CSq", "DSq"]);
    }

    #[test]
    fn retractions_force_four_vertices() {
        let opts = SquareOptions { non_discrete_only: true, ..SquareOptions::default() };
        let d = enumerate_squares(Mode::Directed, opts).unwrap();
        assert!(d.survivors.is_empty());
        assert_eq!(d.fiber_certificates.len(), 14);
    }

    #[test]
    fn reverse_edges() {
        let r = check_no_reverse_edges(Mode::Directed);
        assert_eq!(r.killed.len(), 7);
        assert_eq!(r.free, [("a".to_string(), "d".to_string())]);
        assert!(check_no_reverse_edges(Mode::Undirected).vacuous);
    }

    #[test]
    fn two_undirected_survivors() {
        let u = enumerate_squares(Mode::Undirected, SquareOptions::default()).unwrap();
        let names: Vec<String> = u.iso_classes.iter().map(|g| square_name(g).unwrap()).collect();
        assert_eq!(names, ["C4", "K4r"]);
    }

    #[test]
    fn dropping_retractions_enlarges_survivors() {
        for mode in [Mode::Directed, Mode::Undirected] {
            let with = enumerate_squares(mode, SquareOptions::default()).unwrap();
            let without = enumerate_squares(mode, SquareOptions { retractions: false, ..SquareOptions::default() }).unwrap();
            assert!(without.survivors.len() > with.survivors.len());
            assert!(with.survivors.iter().all(|s| without.survivors.contains(s)));
        }
    }
}
