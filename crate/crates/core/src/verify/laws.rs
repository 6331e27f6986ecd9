use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use super::{CoherenceReport, Corpus, Counterexample, LawReport, TensorOracle, VerifyConfig};
use crate::error::{same_mode, Result};
use crate::graph::{count_homs_bounded, coproduct, enumerate_homs_bounded, make_path, visit_homs, GraphHom, Mode, ReflexiveGraph};
use crate::presheaf::{colimit, Diagram};

/// Which closure: `Right` is `− ⊗ B ⊣ [B, −]`, `Left` is `A ⊗ − ⊣ {A, −}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

/// The tensor factor a colimit is placed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColimitShape {
    /// The two endpoint inclusions `point ⇉ edge`.
    Coequalizer,
    /// Two edges glued end to start.
    Pushout,
}

/// One replayable check of one law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    /// `id_A ⊗ id_B = id_{A⊗B}`
    Identity { a: ReflexiveGraph, b: ReflexiveGraph },
    /// `(f1;f2) ⊗ (g1;g2) = (f1 ⊗ g1);(f2 ⊗ g2)`
    Interchange { f1: GraphHom, f2: GraphHom, g1: GraphHom, g2: GraphHom },
    AssociatorIso { a: ReflexiveGraph, b: ReflexiveGraph, c: ReflexiveGraph },
    UnitorIso { left: bool, a: ReflexiveGraph },
    /// `f` sits in factor `slot`; `others` fill the remaining two in order.
    AssociatorNaturality { slot: usize, f: GraphHom, others: Vec<ReflexiveGraph> },
    UnitorNaturality { left: bool, f: GraphHom },
    Pentagon { a: ReflexiveGraph, b: ReflexiveGraph, c: ReflexiveGraph, d: ReflexiveGraph },
    Triangle { a: ReflexiveGraph, b: ReflexiveGraph },
    /// Curry and uncurry are inverse bijections on the full hom-sets.
    Closure { side: Side, a: ReflexiveGraph, b: ReflexiveGraph, c: ReflexiveGraph },
    /// Naturality of currying in factor `vary` (0, 1 or 2 for `A`, `B`, `C`)
    /// against homs between `other` and that factor.
    ClosureNaturality {
        side: Side,
        vary: usize,
        a: ReflexiveGraph,
        b: ReflexiveGraph,
        c: ReflexiveGraph,
        other: ReflexiveGraph,
    },
    InitialObject { variable: Variable, a: ReflexiveGraph },
    Coproduct { variable: Variable, a: ReflexiveGraph, g: ReflexiveGraph, h: ReflexiveGraph },
    Colimit { variable: Variable, shape: ColimitShape, a: ReflexiveGraph },
}

impl Instance {
    pub fn law(&self) -> &'static str {
        match self {
            Instance::Identity { .. } => "identity",
            Instance::Interchange { .. } => "interchange",
            Instance::AssociatorIso { .. } => "associator-iso",
            Instance::UnitorIso { .. } => "unitor-iso",
            Instance::AssociatorNaturality { .. } => "associator-naturality",
            Instance::UnitorNaturality { .. } => "unitor-naturality",
            Instance::Pentagon { .. } => "pentagon",
            Instance::Triangle { .. } => "triangle",
            Instance::Closure { side: Side::Right, .. } => "right-closure",
            Instance::Closure { side: Side::Left, .. } => "left-closure",
            Instance::ClosureNaturality { side: Side::Right, .. } => "right-closure-naturality",
            Instance::ClosureNaturality { side: Side::Left, .. } => "left-closure-naturality",
            Instance::InitialObject { .. } => "initial-object",
            Instance::Coproduct { .. } => "coproduct",
            Instance::Colimit { shape: ColimitShape::Coequalizer, .. } => "coequalizer",
            Instance::Colimit { shape: ColimitShape::Pushout, .. } => "pushout",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// Outside the configured budget on both sides.
    Skip,
    Fail { lhs: String, rhs: String },
}

impl Outcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail { .. })
    }
}

fn describe(h: &Result<GraphHom>) -> String {
    match h {
        Ok(h) => format!(
            "{}v/{}e → {}v/{}e {:?}",
            h.dom().vertex_count(),
            h.dom().edge_count(),
            h.cod().vertex_count(),
            h.cod().edge_count(),
            h
        ),
        Err(e) => format!("error: {e}"),
    }
}

fn fail(lhs: impl Into<String>, rhs: impl Into<String>) -> Outcome {
    Outcome::Fail { lhs: lhs.into(), rhs: rhs.into() }
}

fn compare(lhs: Result<GraphHom>, rhs: Result<GraphHom>) -> Outcome {
    match (&lhs, &rhs) {
        (Ok(l), Ok(r)) if l == r => Outcome::Pass,
        _ => fail(describe(&lhs), describe(&rhs)),
    }
}

fn id(g: &ReflexiveGraph) -> GraphHom {
    GraphHom::identity(g)
}

/// The first `cap` homs `g → h` in canonical order.
fn first_homs(g: &ReflexiveGraph, h: &ReflexiveGraph, cap: usize) -> Result<Vec<GraphHom>> {
    let mut out = Vec::new();
    if cap == 0 {
        return Ok(out);
    }
    visit_homs(g, h, |map| {
        out.push(GraphHom::new(g.clone(), h.clone(), map.to_vec()).expect("enumerated maps are homs"));
        if out.len() == cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

fn iso_outcome(h: Result<GraphHom>, dom: Result<ReflexiveGraph>, cod: Result<ReflexiveGraph>, expected: &str) -> Outcome {
    match (&h, dom, cod) {
        (Ok(m), Ok(dom), Ok(cod)) if m.dom() == &dom && m.cod() == &cod && m.is_isomorphism() => Outcome::Pass,
        _ => fail(describe(&h), expected),
    }
}

fn shape_diagram(shape: ColimitShape, mode: Mode) -> Diagram {
    let (p0, p1) = (make_path(0, mode), make_path(1, mode));
    let at = |v| GraphHom::constant(&p0, &p1, v).expect("point into edge");
    let (objects, arrows) = match shape {
        ColimitShape::Coequalizer => (vec![p0.clone(), p1.clone()], vec![(0, 1, at(0)), (0, 1, at(1))]),
        ColimitShape::Pushout => (vec![p0.clone(), p1.clone(), p1.clone()], vec![(0, 1, at(1)), (0, 2, at(0))]),
    };
    Diagram::with(mode, objects, arrows).expect("fixed diagram is well typed")
}

/// Re-runs one instance.
pub fn replay(oracle: &dyn TensorOracle, instance: &Instance, cfg: &VerifyConfig) -> Outcome {
    evaluate(oracle, instance, cfg)
}

fn evaluate(o: &dyn TensorOracle, inst: &Instance, cfg: &VerifyConfig) -> Outcome {
    match inst {
        Instance::Identity { a, b } => {
            compare(o.tensor_hom(&id(a), &id(b)), o.tensor_ob(a, b).map(|t| id(&t)))
        }
        Instance::Interchange { f1, f2, g1, g2 } => interchange(o, (f1, f2, &f1.then(f2)), (g1, g2, &g1.then(g2))),
        Instance::AssociatorIso { a, b, c } => iso_outcome(
            o.associator(a, b, c),
            o.tensor_ob(a, b).and_then(|ab| o.tensor_ob(&ab, c)),
            o.tensor_ob(b, c).and_then(|bc| o.tensor_ob(a, &bc)),
            "isomorphism (A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)",
        ),
        Instance::UnitorIso { left, a } => {
            let unit = o.unit();
            if *left {
                iso_outcome(o.left_unitor(a), o.tensor_ob(&unit, a), Ok(a.clone()), "isomorphism I ⊗ A → A")
            } else {
                iso_outcome(o.right_unitor(a), o.tensor_ob(a, &unit), Ok(a.clone()), "isomorphism A ⊗ I → A")
            }
        }
        Instance::AssociatorNaturality { slot, f, others } => {
            let mut homs = Vec::with_capacity(3);
            let mut rest = others.iter();
            for i in 0..3 {
                if i == *slot {
                    homs.push(f.clone());
                } else {
                    homs.push(id(rest.next().expect("two fixed factors")));
                }
            }
            let (fa, fb, fc) = (&homs[0], &homs[1], &homs[2]);
            let lhs = (|| o.tensor_hom(&o.tensor_hom(fa, fb)?, fc)?.then(&o.associator(fa.cod(), fb.cod(), fc.cod())?))();
            let rhs = (|| o.associator(fa.dom(), fb.dom(), fc.dom())?.then(&o.tensor_hom(fa, &o.tensor_hom(fb, fc)?)?))();
            compare(lhs, rhs)
        }
        Instance::UnitorNaturality { left, f } => {
            let unit = id(&o.unit());
            let (lhs, rhs) = if *left {
                (
                    (|| o.tensor_hom(&unit, f)?.then(&o.left_unitor(f.cod())?))(),
                    (|| o.left_unitor(f.dom())?.then(f))(),
                )
            } else {
                (
                    (|| o.tensor_hom(f, &unit)?.then(&o.right_unitor(f.cod())?))(),
                    (|| o.right_unitor(f.dom())?.then(f))(),
                )
            };
            compare(lhs, rhs)
        }
        Instance::Pentagon { a, b, c, d } => {
            let lhs = (|| {
                let (ab, cd) = (o.tensor_ob(a, b)?, o.tensor_ob(c, d)?);
                o.associator(&ab, c, d)?.then(&o.associator(a, b, &cd)?)
            })();
            let rhs = (|| {
                let bc = o.tensor_ob(b, c)?;
                o.tensor_hom(&o.associator(a, b, c)?, &id(d))?
                    .then(&o.associator(a, &bc, d)?)?
                    .then(&o.tensor_hom(&id(a), &o.associator(b, c, d)?)?)
            })();
            compare(lhs, rhs)
        }
        Instance::Triangle { a, b } => {
            let unit = o.unit();
            let lhs = (|| o.associator(a, &unit, b)?.then(&o.tensor_hom(&id(a), &o.left_unitor(b)?)?))();
            let rhs = (|| o.tensor_hom(&o.right_unitor(a)?, &id(b)))();
            compare(lhs, rhs)
        }
        Instance::Closure { side, a, b, c } => closure(o, *side, a, b, c, cfg).unwrap_or_else(|e| fail(format!("error: {e}"), "")),
        Instance::ClosureNaturality { side, vary, a, b, c, other } => {
            closure_naturality(o, *side, *vary, a, b, c, other, cfg).unwrap_or_else(|e| fail(format!("error: {e}"), ""))
        }
        Instance::InitialObject { variable, a } => {
            let empty = ReflexiveGraph::empty(a.mode());
            let t = match variable {
                Variable::First => o.tensor_ob(&empty, a),
                Variable::Second => o.tensor_ob(a, &empty),
            };
            match t {
                Ok(t) if t.is_empty() => Outcome::Pass,
                Ok(t) => fail(format!("{} vertices", t.vertex_count()), "0 vertices"),
                Err(e) => fail(format!("error: {e}"), "0 vertices"),
            }
        }
        Instance::Coproduct { variable, a, g, h } => {
            coproduct_comparison(o, *variable, a, g, h).unwrap_or_else(|e| fail(format!("error: {e}"), "isomorphism"))
        }
        Instance::Colimit { variable, shape, a } => {
            colimit_comparison(o, *variable, *shape, a).unwrap_or_else(|e| fail(format!("error: {e}"), "isomorphism"))
        }
    }
}

fn closure(
    o: &dyn TensorOracle,
    side: Side,
    a: &ReflexiveGraph,
    b: &ReflexiveGraph,
    c: &ReflexiveGraph,
    cfg: &VerifyConfig,
) -> Result<Outcome> {
    let t = o.tensor_ob(a, b)?;
    let (curried_dom, exp) = match side {
        Side::Right => (a, o.internal_hom(b, c)?),
        Side::Left => (b, o.left_internal_hom(a, c)?),
    };
    // Counting suffices on the curried side: currying lands in it and has
    // uncurrying as a left inverse, so equal counts make both bijections.
    let flat = count_homs_bounded(&t, c, cfg.hom_budget)?;
    let curried = count_homs_bounded(curried_dom, &exp, cfg.hom_budget)?;
    match (flat, curried) {
        (None, None) => return Ok(Outcome::Skip),
        (Some(f), None) => return Ok(fail(format!("|Hom(A ⊗ B, C)| = {f}"), "over budget")),
        (None, Some(c)) => return Ok(fail("over budget", format!("|Hom(curried)| = {c}"))),
        (Some(f), Some(c)) if f != c => {
            return Ok(fail(format!("|Hom(A ⊗ B, C)| = {f}"), format!("|Hom(curried)| = {c}")))
        }
        _ => {}
    }
    let flat = enumerate_homs_bounded(&t, c, cfg.hom_budget)?.expect("counted within budget");
    let cur = |phi: &GraphHom| match side {
        Side::Right => o.curry(a, b, phi),
        Side::Left => o.curry_left(a, b, phi),
    };
    let unc = |psi: &GraphHom| match side {
        Side::Right => o.uncurry(a, b, c, psi),
        Side::Left => o.uncurry_left(a, b, c, psi),
    };
    for phi in &flat {
        let psi = cur(phi);
        match &psi {
            Ok(p) if p.dom() == curried_dom && p.cod() == &exp => {}
            _ => return Ok(fail(describe(&psi), format!("curried form of {phi:?}"))),
        }
        let back = psi.and_then(|p| unc(&p));
        if back.as_ref() != Ok(phi) {
            return Ok(fail(describe(&back), describe(&Ok(phi.clone()))));
        }
    }
    Ok(Outcome::Pass)
}

#[allow(clippy::too_many_arguments)]
fn closure_naturality(
    o: &dyn TensorOracle,
    side: Side,
    vary: usize,
    a: &ReflexiveGraph,
    b: &ReflexiveGraph,
    c: &ReflexiveGraph,
    other: &ReflexiveGraph,
    cfg: &VerifyConfig,
) -> Result<Outcome> {
    let cap = cfg.naturality_cap;
    let phis = first_homs(&o.tensor_ob(a, b)?, c, cap)?;
    let cur = |x: &ReflexiveGraph, y: &ReflexiveGraph, phi: &GraphHom| match side {
        Side::Right => o.curry(x, y, phi),
        Side::Left => o.curry_left(x, y, phi),
    };
    // Everything independent of φ is built once.
    enum Varying {
        Target(Vec<(GraphHom, Result<GraphHom>)>),
        Source(ReflexiveGraph, Vec<(GraphHom, Result<GraphHom>)>),
    }
    let varying = match (side, vary) {
        (_, 2) => Varying::Target(
            first_homs(c, other, cap)?
                .into_iter()
                .map(|k| {
                    let post = match side {
                        Side::Right => o.internal_hom_map(b, &k),
                        Side::Left => o.left_internal_hom_map(a, &k),
                    };
                    (k, post)
                })
                .collect(),
        ),
        (Side::Right, 0) => Varying::Source(
            other.clone(),
            first_homs(other, a, cap)?.into_iter().map(|h| (h.clone(), o.tensor_hom(&h, &id(b)))).collect(),
        ),
        (Side::Left, 1) => Varying::Source(
            other.clone(),
            first_homs(other, b, cap)?.into_iter().map(|h| (h.clone(), o.tensor_hom(&id(a), &h))).collect(),
        ),
        _ => return Ok(fail(format!("factor {vary} is not a variable of this closure"), "")),
    };
    for phi in &phis {
        let curried = cur(a, b, phi);
        let checks: Vec<(Result<GraphHom>, Result<GraphHom>)> = match &varying {
            Varying::Target(ks) => ks
                .iter()
                .map(|(k, post)| {
                    let lhs = phi.then(k).and_then(|pk| cur(a, b, &pk));
                    let rhs = (|| curried.clone()?.then(post.as_ref().map_err(Clone::clone)?))();
                    (lhs, rhs)
                })
                .collect(),
            Varying::Source(x, hs) => hs
                .iter()
                .map(|(h, lifted)| {
                    let lhs = (|| {
                        let pre = lifted.as_ref().map_err(Clone::clone)?.then(phi)?;
                        match side {
                            Side::Right => cur(x, b, &pre),
                            Side::Left => cur(a, x, &pre),
                        }
                    })();
                    let rhs = (|| h.then(&curried.clone()?))();
                    (lhs, rhs)
                })
                .collect(),
        };
        for (lhs, rhs) in checks {
            let outcome = compare(lhs, rhs);
            if outcome.is_fail() {
                return Ok(outcome);
            }
        }
    }
    Ok(Outcome::Pass)
}

/// Compares `source` with `target` through a vertex map assembled leg by
/// leg; each vertex of `source` is hit by some leg.
fn assemble(
    source: &ReflexiveGraph,
    target: &ReflexiveGraph,
    legs: impl IntoIterator<Item = (GraphHom, GraphHom)>,
) -> Result<Outcome> {
    let mut map = vec![usize::MAX; source.vertex_count()];
    for (into_source, into_target) in legs {
        if into_source.dom() != into_target.dom() {
            return Ok(fail(describe(&Ok(into_target)), "leg with the matching domain"));
        }
        for x in 0..into_source.dom().vertex_count() {
            let (s, t) = (into_source.apply(x), into_target.apply(x));
            if map[s] != usize::MAX && map[s] != t {
                return Ok(fail(format!("comparison is not well defined at {}", source.label(s)), "a function"));
            }
            map[s] = t;
        }
    }
    if map.contains(&usize::MAX) {
        return Ok(fail("comparison is not total", "a function"));
    }
    let comparison = GraphHom::new(source.clone(), target.clone(), map);
    Ok(match &comparison {
        Ok(m) if m.is_isomorphism() => Outcome::Pass,
        _ => fail(describe(&comparison), "isomorphism"),
    })
}

fn tensor_with(o: &dyn TensorOracle, variable: Variable, a: &ReflexiveGraph, x: &ReflexiveGraph) -> Result<ReflexiveGraph> {
    match variable {
        Variable::First => o.tensor_ob(x, a),
        Variable::Second => o.tensor_ob(a, x),
    }
}

fn tensor_hom_with(o: &dyn TensorOracle, variable: Variable, a: &ReflexiveGraph, f: &GraphHom) -> Result<GraphHom> {
    match variable {
        Variable::First => o.tensor_hom(f, &id(a)),
        Variable::Second => o.tensor_hom(&id(a), f),
    }
}

fn coproduct_comparison(
    o: &dyn TensorOracle,
    variable: Variable,
    a: &ReflexiveGraph,
    g: &ReflexiveGraph,
    h: &ReflexiveGraph,
) -> Result<Outcome> {
    let mode = a.mode();
    let (sum, injections) = coproduct(mode, &[g.clone(), h.clone()])?;
    let target = tensor_with(o, variable, a, &sum)?;
    let parts = [tensor_with(o, variable, a, g)?, tensor_with(o, variable, a, h)?];
    let (source, source_injections) = coproduct(mode, &parts)?;
    let legs = injections
        .iter()
        .zip(source_injections)
        .map(|(inj, src)| Ok((src, tensor_hom_with(o, variable, a, inj)?)))
        .collect::<Result<Vec<_>>>()?;
    assemble(&source, &target, legs)
}

fn colimit_comparison(o: &dyn TensorOracle, variable: Variable, shape: ColimitShape, a: &ReflexiveGraph) -> Result<Outcome> {
    let mode = a.mode();
    let d = shape_diagram(shape, mode);
    let base = colimit(&d)?;
    let target = tensor_with(o, variable, a, &base.apex)?;
    let objects = d.objects().iter().map(|x| tensor_with(o, variable, a, x)).collect::<Result<Vec<_>>>()?;
    let arrows = d
        .arrows()
        .iter()
        .map(|(s, t, f)| Ok((*s, *t, tensor_hom_with(o, variable, a, f)?)))
        .collect::<Result<Vec<_>>>()?;
    let tensored = colimit(&Diagram::with(mode, objects, arrows)?)?;
    let legs = tensored
        .cocone
        .iter()
        .zip(&base.cocone)
        .map(|(src, leg)| Ok((src.clone(), tensor_hom_with(o, variable, a, leg)?)))
        .collect::<Result<Vec<_>>>()?;
    assemble(&tensored.apex, &target, legs)
}

/// A composable pair with its composite, `f` then `f′`.
type Composable<'a> = (&'a GraphHom, &'a GraphHom, &'a Result<GraphHom>);

fn interchange(o: &dyn TensorOracle, f: Composable<'_>, g: Composable<'_>) -> Outcome {
    let lhs = (|| o.tensor_hom(f.2.as_ref().map_err(Clone::clone)?, g.2.as_ref().map_err(Clone::clone)?))();
    let rhs = (|| o.tensor_hom(f.0, g.0)?.then(&o.tensor_hom(f.1, g.1)?))();
    compare(lhs, rhs)
}

type Evaluator<'a> = Box<dyn Fn(&dyn TensorOracle, usize) -> Outcome + Sync + 'a>;

/// A law's instances, generated on demand by index. `eval`, when present,
/// must agree with evaluating `make(i)`; it exists to skip building the
/// instance on hot paths.
struct LawSpace<'a> {
    law: &'static str,
    len: usize,
    make: Box<dyn Fn(usize) -> Instance + Sync + 'a>,
    eval: Option<Evaluator<'a>>,
}

impl<'a> LawSpace<'a> {
    fn new(law: &'static str, len: usize, make: impl Fn(usize) -> Instance + Sync + 'a) -> Self {
        LawSpace { law, len, make: Box::new(make), eval: None }
    }

    fn with_evaluator(mut self, eval: impl Fn(&dyn TensorOracle, usize) -> Outcome + Sync + 'a) -> Self {
        self.eval = Some(Box::new(eval));
        self
    }

    fn from_vec(law: &'static str, instances: Vec<Instance>) -> Self {
        LawSpace::new(law, instances.len(), move |i| instances[i].clone())
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    first_failure: Option<(usize, String, String)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.first_failure = match (self.first_failure, other.first_failure) {
            (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
            (x, y) => x.or(y),
        };
        self
    }
}

fn run(o: &dyn TensorOracle, space: &LawSpace<'_>, cfg: &VerifyConfig) -> LawReport {
    let tally = (0..space.len)
        .into_par_iter()
        .fold(Tally::default, |mut t, i| {
            let outcome = match &space.eval {
                Some(eval) => eval(o, i),
                None => {
                    let instance = (space.make)(i);
                    debug_assert_eq!(instance.law(), space.law);
                    evaluate(o, &instance, cfg)
                }
            };
            match outcome {
                Outcome::Pass => t.checked += 1,
                Outcome::Skip => t.skipped += 1,
                Outcome::Fail { lhs, rhs } => {
                    t.checked += 1;
                    if t.first_failure.as_ref().is_none_or(|f| i < f.0) {
                        t.first_failure = Some((i, lhs, rhs));
                    }
                }
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    let counterexample =
        tally.first_failure.map(|(i, lhs, rhs)| Counterexample { instance: (space.make)(i), lhs, rhs });
    LawReport {
        law: space.law.to_string(),
        checked: tally.checked,
        skipped: tally.skipped,
        passed: counterexample.is_none(),
        counterexample,
    }
}

fn report(o: &dyn TensorOracle, check: &str, spaces: Vec<LawSpace<'_>>, cfg: &VerifyConfig) -> CoherenceReport {
    CoherenceReport {
        check: check.to_string(),
        oracle: o.name(),
        mode: o.mode(),
        laws: spaces.iter().map(|s| run(o, s, cfg)).collect(),
    }
}

/// `table[i][j]`: the first `cap` homs `objects[i] → objects[j]`.
fn hom_table(objects: &[ReflexiveGraph], cap: usize) -> Result<Vec<Vec<Vec<GraphHom>>>> {
    objects.iter().map(|x| objects.iter().map(|y| first_homs(x, y, cap)).collect()).collect()
}

/// Per object triple, the first `cap` composable pairs in canonical order.
fn composable_pairs(objects: &[ReflexiveGraph], cap: usize) -> Result<Vec<(GraphHom, GraphHom)>> {
    let table = hom_table(objects, cap)?;
    let n = objects.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let pairs = table[x][y].iter().flat_map(|f| table[y][z].iter().map(move |g| (f.clone(), g.clone())));
                out.extend(pairs.take(cap));
            }
        }
    }
    Ok(out)
}

fn check_mode(o: &dyn TensorOracle, corpus: &Corpus) -> Result<()> {
    same_mode(o.mode(), corpus.mode()).map(|_| ())
}

fn tuples<const K: usize>(objects: &[ReflexiveGraph]) -> Vec<[ReflexiveGraph; K]> {
    let n = objects.len();
    let total = n.pow(K as u32);
    (0..total)
        .map(|mut k| {
            let mut idx = [0usize; K];
            for slot in (0..K).rev() {
                idx[slot] = k % n;
                k /= n;
            }
            std::array::from_fn(|s| objects[idx[s]].clone())
        })
        .collect()
}

pub fn check_bifunctoriality(o: &dyn TensorOracle, corpus: &Corpus, cfg: &VerifyConfig) -> Result<CoherenceReport> {
    check_mode(o, corpus)?;
    let all = corpus.graphs();
    let tiny = corpus.small(cfg.tiny_vertices);
    let identity = tuples::<2>(&all).into_iter().map(|[a, b]| Instance::Identity { a, b }).collect();
    let full_pairs = composable_pairs(&all, cfg.hom_cap)?;
    let tiny_pairs = composable_pairs(&tiny, cfg.hom_cap)?;
    let (nf, nt) = (full_pairs.len(), tiny_pairs.len());
    let composite = |pairs: &[(GraphHom, GraphHom)]| pairs.iter().map(|(f, g)| f.then(g)).collect::<Vec<_>>();
    let (full_comp, tiny_comp) = (composite(&full_pairs), composite(&tiny_pairs));
    // Index i splits into the half and the positions of the two pairs.
    let locate = move |i: usize| {
        let (half, k) = (i / (nf * nt), i % (nf * nt));
        if half == 0 {
            (false, k / nt, k % nt)
        } else {
            (true, k % nf, k / nf)
        }
    };
    let make = {
        let (full_pairs, tiny_pairs) = (full_pairs.clone(), tiny_pairs.clone());
        move |i| {
            let (swapped, f, t) = locate(i);
            let (first, second) =
                if swapped { (&tiny_pairs[t], &full_pairs[f]) } else { (&full_pairs[f], &tiny_pairs[t]) };
            Instance::Interchange { f1: first.0.clone(), f2: first.1.clone(), g1: second.0.clone(), g2: second.1.clone() }
        }
    };
    let interchange = LawSpace::new("interchange", 2 * nf * nt, make).with_evaluator(move |o, i| {
        let (swapped, f, t) = locate(i);
        let full = (&full_pairs[f].0, &full_pairs[f].1, &full_comp[f]);
        let tiny = (&tiny_pairs[t].0, &tiny_pairs[t].1, &tiny_comp[t]);
        if swapped {
            interchange(o, tiny, full)
        } else {
            interchange(o, full, tiny)
        }
    });
    Ok(report(o, "bifunctoriality", vec![LawSpace::from_vec("identity", identity), interchange], cfg))
}

pub fn check_coherence(o: &dyn TensorOracle, corpus: &Corpus, cfg: &VerifyConfig) -> Result<CoherenceReport> {
    check_mode(o, corpus)?;
    let all = corpus.graphs();
    let small = corpus.small(cfg.small_vertices);
    let table = hom_table(&all, cfg.hom_cap)?;
    let homs: Vec<GraphHom> = table.iter().flatten().flatten().cloned().collect();

    let assoc_iso = tuples::<3>(&all).into_iter().map(|[a, b, c]| Instance::AssociatorIso { a, b, c }).collect();
    let unitor_iso = all
        .iter()
        .flat_map(|a| [true, false].map(|left| Instance::UnitorIso { left, a: a.clone() }))
        .collect();
    let fixed = tuples::<2>(&small);
    let mut assoc_nat = Vec::new();
    for slot in 0..3 {
        for f in &homs {
            for others in &fixed {
                assoc_nat.push(Instance::AssociatorNaturality { slot, f: f.clone(), others: others.to_vec() });
            }
        }
    }
    let unitor_nat = homs
        .iter()
        .flat_map(|f| [true, false].map(|left| Instance::UnitorNaturality { left, f: f.clone() }))
        .collect();
    let pentagon = tuples::<4>(&small).into_iter().map(|[a, b, c, d]| Instance::Pentagon { a, b, c, d }).collect();
    let triangle = tuples::<2>(&all).into_iter().map(|[a, b]| Instance::Triangle { a, b }).collect();
    Ok(report(
        o,
        "coherence",
        vec![
            LawSpace::from_vec("associator-iso", assoc_iso),
            LawSpace::from_vec("unitor-iso", unitor_iso),
            LawSpace::from_vec("associator-naturality", assoc_nat),
            LawSpace::from_vec("unitor-naturality", unitor_nat),
            LawSpace::from_vec("pentagon", pentagon),
            LawSpace::from_vec("triangle", triangle),
        ],
        cfg,
    ))
}

pub fn check_biclosed(o: &dyn TensorOracle, corpus: &Corpus, cfg: &VerifyConfig) -> Result<CoherenceReport> {
    check_mode(o, corpus)?;
    let all = corpus.graphs();
    let small = corpus.small(cfg.small_vertices);
    let triples = tuples::<3>(&all);
    let mut spaces = Vec::new();
    for (side, law, nat_law, varying) in [
        (Side::Right, "right-closure", "right-closure-naturality", 0),
        (Side::Left, "left-closure", "left-closure-naturality", 1),
    ] {
        let closure = triples
            .iter()
            .map(|[a, b, c]| Instance::Closure { side, a: a.clone(), b: b.clone(), c: c.clone() })
            .collect();
        let mut naturality = Vec::new();
        for [a, b, c] in &triples {
            for vary in [varying, 2] {
                for other in &small {
                    naturality.push(Instance::ClosureNaturality {
                        side,
                        vary,
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                        other: other.clone(),
                    });
                }
            }
        }
        spaces.push(LawSpace::from_vec(law, closure));
        spaces.push(LawSpace::from_vec(nat_law, naturality));
    }
    Ok(report(o, "biclosed", spaces, cfg))
}

pub fn check_cocontinuity(o: &dyn TensorOracle, corpus: &Corpus, cfg: &VerifyConfig) -> Result<CoherenceReport> {
    check_mode(o, corpus)?;
    let all = corpus.graphs();
    let variables = [Variable::First, Variable::Second];
    let initial = variables
        .iter()
        .flat_map(|&variable| all.iter().map(move |a| Instance::InitialObject { variable, a: a.clone() }))
        .collect();
    let mut coproducts = Vec::new();
    for &variable in &variables {
        for [a, g, h] in tuples::<3>(&all) {
            coproducts.push(Instance::Coproduct { variable, a, g, h });
        }
    }
    let colimits = |shape| {
        variables
            .iter()
            .flat_map(|&variable| all.iter().map(move |a| Instance::Colimit { variable, shape, a: a.clone() }))
            .collect()
    };
    Ok(report(
        o,
        "cocontinuity",
        vec![
            LawSpace::from_vec("initial-object", initial),
            LawSpace::from_vec("coproduct", coproducts),
            LawSpace::from_vec("coequalizer", colimits(ColimitShape::Coequalizer)),
            LawSpace::from_vec("pushout", colimits(ColimitShape::Pushout)),
        ],
        cfg,
    ))
}

/// All four checks, in the order bifunctoriality, coherence, biclosed,
/// cocontinuity.
pub fn check_all(o: &dyn TensorOracle, corpus: &Corpus, cfg: &VerifyConfig) -> Result<Vec<CoherenceReport>> {
    Ok(vec![
        check_bifunctoriality(o, corpus, cfg)?,
        check_coherence(o, corpus, cfg)?,
        check_biclosed(o, corpus, cfg)?,
        check_cocontinuity(o, corpus, cfg)?,
    ])
}

/// Runs the checks cheapest first and stops at the first failing report.
pub fn first_failure(o: &dyn TensorOracle, corpus: &Corpus, cfg: &VerifyConfig) -> Result<Option<CoherenceReport>> {
    type Check = fn(&dyn TensorOracle, &Corpus, &VerifyConfig) -> Result<CoherenceReport>;
    let order: [Check; 4] = [check_cocontinuity, check_coherence, check_bifunctoriality, check_biclosed];
    for check in order {
        let r = check(o, corpus, cfg)?;
        if !r.passed() {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedGraph};
    use crate::products::ProductKind;
    use crate::verify::{ModifiedOracle, ProductOracle};

    fn j(n: usize) -> ReflexiveGraph {
        make_path(n, Mode::Directed)
    }

    #[test]
    fn tuples_are_lexicographic() {
        let objs = [j(0), j(1)];
        let t = tuples::<2>(&objs);
        assert_eq!(t.len(), 4);
        assert_eq!(t[1], [j(0), j(1)]);
        assert_eq!(t[2], [j(1), j(0)]);
    }

    #[test]
    fn closure_counts_on_edges() {
        let cfg = VerifyConfig::default();
        for kind in ProductKind::ALL {
            let o = ProductOracle::new(kind, Mode::Directed);
            for side in [Side::Right, Side::Left] {
                let inst = Instance::Closure { side, a: j(1), b: j(1), c: j(2) };
                assert_eq!(replay(&o, &inst, &cfg), Outcome::Pass);
            }
        }
    }

    #[test]
    fn trivial_pentagon() {
        let o = ProductOracle::new(ProductKind::Box, Mode::Directed);
        let inst = Instance::Pentagon { a: j(0), b: j(0), c: j(0), d: j(0) };
        assert_eq!(replay(&o, &inst, &VerifyConfig::default()), Outcome::Pass);
    }

    #[test]
    fn box_comparisons() {
        let o = ProductOracle::new(ProductKind::Box, Mode::Directed);
        let cfg = VerifyConfig::default();
        let inst = Instance::Coproduct { variable: Variable::Second, a: j(1), g: j(0), h: j(1) };
        assert_eq!(replay(&o, &inst, &cfg), Outcome::Pass);
        let o = ProductOracle::new(ProductKind::Categorical, Mode::Directed);
        let inst = Instance::Colimit { variable: Variable::Second, shape: ColimitShape::Coequalizer, a: j(2) };
        assert_eq!(replay(&o, &inst, &cfg), Outcome::Pass);
    }

    #[test]
    fn flipped_square_fails_pushout() {
        let inner = ProductOracle::new(ProductKind::Box, Mode::Directed);
        let square = inner.tensor_ob(&j(1), &j(1)).unwrap();
        let (u, v) = (square.index_of("(0,0)").unwrap(), square.index_of("(1,1)").unwrap());
        let o = ModifiedOracle::flip_edge(inner, j(1), j(1), u, v).unwrap();
        assert!(o.replacement().related(u, v));
        let inst = Instance::Colimit { variable: Variable::Second, shape: ColimitShape::Pushout, a: j(1) };
        assert!(replay(&o, &inst, &VerifyConfig::default()).is_fail());
        let csq = make_named(NamedGraph::Csq, Mode::Directed).unwrap();
        assert!(crate::graph::is_isomorphic(&square, &csq).unwrap().is_some());
    }
}
