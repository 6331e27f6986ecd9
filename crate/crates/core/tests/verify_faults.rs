use std::time::Instant;

use monocat::graph::{make_path, GraphHom, Mode, ReflexiveGraph};
use monocat::products::ProductKind;
use monocat::verify::{
    check_bifunctoriality, check_biclosed, first_failure, replay, Corpus, ModifiedOracle, ProductOracle,
    TensorOracle, VerifyConfig,
};
use monocat::Result;

fn flips(mode: Mode) -> Vec<(usize, usize)> {
    let n = 4;
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && (mode == Mode::Directed || u < v) {
                out.push((u, v));
            }
        }
    }
    out
}

#[test]
fn every_single_edge_flip_is_caught() {
    let cfg = VerifyConfig::default();
    for mode in [Mode::Directed, Mode::Undirected] {
        let corpus = Corpus::default_for(mode);
        let edge = make_path(1, mode);
        for kind in ProductKind::ALL {
            let expected = match mode {
                Mode::Directed => 12,
                Mode::Undirected => 6,
            };
            assert_eq!(flips(mode).len(), expected);
            for (u, v) in flips(mode) {
                let start = Instant::now();
                let oracle =
                    ModifiedOracle::flip_edge(ProductOracle::new(kind, mode), edge.clone(), edge.clone(), u, v).unwrap();
                let report = first_failure(&oracle, &corpus, &cfg).unwrap();
                let report = report.unwrap_or_else(|| panic!("{} passed every law", oracle.name()));
                let law = report.failures().next().unwrap();
                let cx = law.counterexample.as_ref().unwrap();
                assert!(replay(&oracle, &cx.instance, &cfg).is_fail(), "counterexample must replay");
                eprintln!("{}: {} / {} ({:?})", oracle.name(), report.check, law.law, start.elapsed());
            }
        }
    }
}

/// The box product with `f ⊗ g` computed as `f ⊗ f` whenever the shapes
/// allow, otherwise correct.
struct BrokenHoms(ProductOracle);

impl TensorOracle for BrokenHoms {
    fn name(&self) -> String {
        "broken".into()
    }
    fn mode(&self) -> Mode {
        self.0.mode()
    }
    fn unit(&self) -> ReflexiveGraph {
        self.0.unit()
    }
    fn tensor_ob(&self, a: &ReflexiveGraph, b: &ReflexiveGraph) -> Result<ReflexiveGraph> {
        self.0.tensor_ob(a, b)
    }
    fn tensor_hom(&self, f: &GraphHom, g: &GraphHom) -> Result<GraphHom> {
        if f.dom() == g.dom() && f.cod() == g.cod() {
            self.0.tensor_hom(f, f)
        } else {
            self.0.tensor_hom(f, g)
        }
    }
    fn associator(&self, a: &ReflexiveGraph, b: &ReflexiveGraph, c: &ReflexiveGraph) -> Result<GraphHom> {
        self.0.associator(a, b, c)
    }
    fn left_unitor(&self, a: &ReflexiveGraph) -> Result<GraphHom> {
        self.0.left_unitor(a)
    }
    fn right_unitor(&self, a: &ReflexiveGraph) -> Result<GraphHom> {
        self.0.right_unitor(a)
    }
}

#[test]
fn broken_hom_action_fails_interchange() {
    let cfg = VerifyConfig::default();
    let oracle = BrokenHoms(ProductOracle::new(ProductKind::Box, Mode::Directed));
    let corpus = Corpus::default_for(Mode::Directed);
    let report = check_bifunctoriality(&oracle, &corpus, &cfg).unwrap();
    assert!(report.law("identity").unwrap().passed);
    let interchange = report.law("interchange").unwrap();
    assert!(!interchange.passed);
    let cx = interchange.counterexample.as_ref().unwrap();
    assert_ne!(cx.lhs, cx.rhs);
    assert!(replay(&oracle, &cx.instance, &cfg).is_fail());
}

#[test]
fn missing_closure_is_reported() {
    let oracle = BrokenHoms(ProductOracle::new(ProductKind::Box, Mode::Directed));
    let corpus = Corpus::default_for(Mode::Directed);
    let report = check_biclosed(&oracle, &corpus, &VerifyConfig::default()).unwrap();
    let cx = report.law("right-closure").unwrap().counterexample.as_ref().unwrap();
    assert!(cx.lhs.contains("supplies no closure data"));
}

#[test]
fn mode_mismatch_is_an_error() {
    let oracle = ProductOracle::new(ProductKind::Box, Mode::Directed);
    let corpus = Corpus::default_for(Mode::Undirected);
    assert!(check_bifunctoriality(&oracle, &corpus, &VerifyConfig::default()).is_err());
}

#[test]
fn reports_are_reproducible() {
    let cfg = VerifyConfig::default();
    let corpus = Corpus::new(Mode::Directed, [("J1", make_path(1, Mode::Directed))]).unwrap();
    let edge = make_path(1, Mode::Directed);
    let run = || {
        let oracle =
            ModifiedOracle::flip_edge(ProductOracle::new(ProductKind::Box, Mode::Directed), edge.clone(), edge.clone(), 0, 3)
                .unwrap();
        serde_json::to_string(&monocat::verify::check_all(&oracle, &corpus, &cfg).unwrap()).unwrap()
    };
    assert_eq!(run(), run());
}
