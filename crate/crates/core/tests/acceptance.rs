//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use monocat::classify::{check_no_reverse_edges, classify, enumerate_squares, SquareOptions};
use monocat::graph::{count_homs, is_isomorphic, make_path, Mode, ReflexiveGraph};
use monocat::presheaf::{
    density_recolimit, embed, reflect, reflector_adjunction_check, validate_presheaf, Generator, IndexCategory,
    Presheaf,
};
use monocat::products::{categorical_two_clause, internal_hom, tensor, ProductKind};
use monocat::verify::{check_all, first_failure, Corpus, ModifiedOracle, ProductOracle, TensorOracle, VerifyConfig};

type Outcome = Result<String, String>;

const MODES: [Mode; 2] = [Mode::Directed, Mode::Undirected];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: monocat::Error) -> String {
    e.to_string()
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn classification(mode: Mode, names: [&str; 2]) -> Outcome {
    let start = Instant::now();
    let report = classify(mode, &Corpus::default_for(mode), &VerifyConfig::default()).map_err(err)?;
    let t = within(Duration::from_secs(5), start)?;
    let found: Vec<&str> = report.squares.iter().map(|s| s.name.as_str()).collect();
    ensure(found == names, || format!("squares {found:?}"))?;
    ensure(report.unit == make_path(0, mode), || format!("unit {}", report.unit.to_json()))?;
    ensure(report.squares.iter().all(|s| s.verified), || "a square failed verification".into())?;
    ensure(report.matches_theorem, || "report does not match".into())?;
    Ok(format!("squares {found:?}, unit = point, {} candidates, {t:.2?}", report.stats.candidates))
}

fn four_vertices() -> Outcome {
    for mode in MODES {
        let opts = SquareOptions { non_discrete_only: true, ..SquareOptions::default() };
        let s = enumerate_squares(mode, opts).map_err(err)?;
        ensure(s.stats.partitions == 14, || format!("{} partitions", s.stats.partitions))?;
        ensure(s.survivors.is_empty(), || format!("{mode}: {} survivors", s.survivors.len()))?;
        ensure(s.fiber_certificates.len() == 14, || format!("{mode}: {} certificates", s.fiber_certificates.len()))?;
    }
    Ok("14 non-discrete partitions, 0 survivors, 14 fiber certificates per mode".into())
}

fn reverse_edges() -> Outcome {
    let r = check_no_reverse_edges(Mode::Directed);
    let mut killed: Vec<String> = r.killed.iter().map(|v| format!("{}->{}", v.edge.0, v.edge.1)).collect();
    killed.sort();
    let mut expected = ["b->a", "d->c", "c->a", "d->b", "d->a", "b->c", "c->b"].map(String::from).to_vec();
    expected.sort();
    ensure(killed == expected, || format!("killed {killed:?}"))?;
    ensure(r.free == [("a".to_string(), "d".to_string())], || format!("free {:?}", r.free))?;
    ensure(check_no_reverse_edges(Mode::Undirected).vacuous, || "undirected not vacuous".into())?;
    Ok("7 edges killed, a->d free".into())
}

fn adjunction_counts() -> Outcome {
    let start = Instant::now();
    let (j1, j2) = (make_path(1, Mode::Directed), make_path(2, Mode::Directed));
    let mut parts = Vec::new();
    for (kind, expected) in [(ProductKind::Box, 12), (ProductKind::Categorical, 11)] {
        let lhs = count_homs(&tensor(kind, &j1, &j1).map_err(err)?, &j2).map_err(err)?;
        let rhs = count_homs(&j1, &internal_hom(kind, &j1, &j2).map_err(err)?).map_err(err)?;
        ensure(lhs == expected && rhs == expected, || format!("{kind}: {lhs} / {rhs}"))?;
        parts.push(format!("{kind} {lhs}={rhs}"));
    }
    let t = within(Duration::from_secs(1), start)?;
    Ok(format!("{}, {t:.2?}", parts.join(", ")))
}

fn coherence_suite() -> Outcome {
    let start = Instant::now();
    let cfg = VerifyConfig::default();
    let mut checked = 0;
    for mode in MODES {
        let corpus = Corpus::default_for(mode);
        for kind in ProductKind::ALL {
            let oracle = ProductOracle::new(kind, mode);
            for r in check_all(&oracle, &corpus, &cfg).map_err(err)? {
                if let Some(l) = r.failures().next() {
                    return Err(format!("{} {} {}", oracle.name(), r.check, l.law));
                }
                checked += r.laws.iter().map(|l| l.checked).sum::<usize>();
            }
        }
    }
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!("all laws hold, {checked} instances, {t:.2?}"))
}

fn sensitivity() -> Outcome {
    let start = Instant::now();
    let cfg = VerifyConfig::default();
    let mut caught = 0;
    for mode in MODES {
        let corpus = Corpus::default_for(mode);
        let edge = make_path(1, mode);
        for kind in ProductKind::ALL {
            for u in 0..4 {
                for v in 0..4 {
                    if u == v || (mode == Mode::Undirected && u > v) {
                        continue;
                    }
                    let o = ModifiedOracle::flip_edge(ProductOracle::new(kind, mode), edge.clone(), edge.clone(), u, v)
                        .map_err(err)?;
                    let failure = first_failure(&o, &corpus, &cfg).map_err(err)?;
                    ensure(failure.is_some(), || format!("{} passed", o.name()))?;
                    caught += 1;
                }
            }
        }
    }
    let t = within(Duration::from_secs(60), start)?;
    ensure(caught == 2 * 12 + 2 * 6, || format!("{caught} flips"))?;
    Ok(format!("{caught} of {caught} flips caught, {t:.2?}"))
}

/// Reflexive multigraph presheaf on `0..n`: loops plus one edge element per
/// listed pair (with its reversal when undirected).
fn multigraph(mode: Mode, n: usize, edges: &[(usize, usize)]) -> Presheaf {
    let v: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let v2: Vec<String> = (0..n * n).map(|i| format!("({},{})", i / n, i % n)).collect();
    let mut ends: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    let mut partner: Vec<usize> = (0..n).collect();
    for &(a, b) in edges {
        let i = ends.len();
        ends.push((a, b));
        if mode == Mode::Undirected {
            ends.push((b, a));
            partner.extend([i + 1, i]);
        } else {
            partner.push(i);
        }
    }
    let e: Vec<String> = (0..ends.len()).map(|i| format!("x{i}")).collect();
    let mut maps = vec![
        (Generator::Delta, (0..n).map(|i| i * n + i).collect()),
        (Generator::P, (0..n * n).map(|i| i / n).collect()),
        (Generator::Q, (0..n * n).map(|i| i % n).collect()),
        (Generator::Sigma, (0..n * n).map(|i| (i % n) * n + i / n).collect()),
        (Generator::E, ends.iter().map(|&(a, b)| a * n + b).collect()),
        (Generator::Ell, (0..n).collect()),
    ];
    if mode == Mode::Undirected {
        maps.push((Generator::S, partner));
    }
    Presheaf::new(mode, [v, v2, e], maps).expect("well-formed presheaf")
}

fn presheaf_layer() -> Outcome {
    for mode in MODES {
        for (name, g) in Corpus::default_for(mode).names().zip(Corpus::default_for(mode).graphs()) {
            let x = embed(&g);
            ensure(validate_presheaf(&x).is_empty(), || format!("embed({name}) invalid"))?;
            ensure(reflect(&x).map_err(err)? == g, || format!("reflect(embed({name})) differs"))?;
        }
    }
    let d = Mode::Directed;
    let u = Mode::Undirected;
    let pairs: Vec<(Presheaf, ReflexiveGraph)> = vec![
        (multigraph(d, 2, &[(0, 1), (0, 1)]), make_path(1, d)),
        (multigraph(d, 2, &[(0, 1), (0, 1)]), make_path(2, d)),
        (multigraph(d, 2, &[(0, 1), (1, 0), (0, 1)]), make_path(1, d)),
        (multigraph(d, 3, &[(0, 1), (0, 1), (1, 2)]), make_path(2, d)),
        (multigraph(d, 2, &[]), make_path(1, d)),
        (embed(&make_path(2, d)), make_path(1, d)),
        (multigraph(u, 2, &[(0, 1), (0, 1)]), make_path(1, u)),
        (multigraph(u, 3, &[(0, 1), (1, 2), (1, 2)]), make_path(2, u)),
        (multigraph(u, 3, &[(0, 1), (1, 2), (2, 0)]), make_path(1, u)),
        (embed(&make_path(1, u)), make_path(2, u)),
    ];
    let mut parallel = 0;
    for (i, (x, g)) in pairs.iter().enumerate() {
        ensure(validate_presheaf(x).is_empty(), || format!("pair {i}: invalid presheaf"))?;
        parallel += usize::from(!x.is_graph_presheaf());
        let c = reflector_adjunction_check(x, g).map_err(err)?;
        ensure(c.bijective && c.graph_homs == c.presheaf_morphisms, || format!("pair {i}: {c:?}"))?;
    }
    let table = IndexCategory::get(d).hom_counts();
    ensure(table == [[1, 1, 1], [2, 4, 2], [2, 4, 3]], || format!("hom table {table:?}"))?;
    let table_u = IndexCategory::get(u).hom_counts();
    ensure(table_u == [[1, 1, 1], [2, 4, 2], [2, 4, 4]], || format!("undirected hom table {table_u:?}"))?;
    Ok(format!("embed valid, reflect∘embed = id, {} adjunction pairs ({parallel} parallel-edge), hom table {table:?}", pairs.len()))
}

fn density() -> Outcome {
    let mut n = 0;
    for mode in MODES {
        for g in Corpus::default_for(mode).graphs() {
            let d = density_recolimit(&g).map_err(err)?;
            let iso = is_isomorphic(&d.colimit.apex, &g).map_err(err)?;
            ensure(iso.is_some() && d.witness.is_isomorphism(), || format!("{}", g.to_json()))?;
            n += 1;
        }
    }
    Ok(format!("{n} corpus graphs recovered"))
}

fn reflexive_collapse() -> Outcome {
    let mut n = 0;
    for mode in MODES {
        let graphs = Corpus::default_for(mode).graphs();
        for g in &graphs {
            for h in &graphs {
                let three = tensor(ProductKind::Categorical, g, h).map_err(err)?;
                let two = categorical_two_clause(g, h).map_err(err)?;
                ensure(three == two, || format!("{} ⊠ {}", g.to_json(), h.to_json()))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} pairs agree"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("directed classification", || classification(Mode::Directed, ["CSq", "DSq"])),
        ("undirected classification", || classification(Mode::Undirected, ["C4", "K4r"])),
        ("four distinct vertices", four_vertices),
        ("reverse-edge analysis", reverse_edges),
        ("adjunction counts", adjunction_counts),
        ("coherence suite", coherence_suite),
        ("sensitivity", sensitivity),
        ("presheaf layer", presheaf_layer),
        ("density", density),
        ("reflexive collapse", reflexive_collapse),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
