use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use monocat::classify::{classify, ClassificationReport};
use monocat::graph::{count_homs, enumerate_homs, to_dot, GraphHom, Mode, ReflexiveGraph};
use monocat::presheaf::{density_recolimit, reflect, validate_presheaf, Presheaf};
use monocat::products::{internal_hom, tensor, ProductKind};
use monocat::verify::{check_all, CoherenceReport, Corpus, ProductOracle, VerifyConfig};

const OPTIONAL_LOOPS: &str = "mode `optional-loops` is not supported: for graphs where loops are optional, \
the expected picture (three biclosed structures including the strong product, with two candidate units) \
is an open conjecture and is not mechanized here";

#[derive(Parser)]
#[command(name = "monocat", version, about = "Monoidal structures on reflexive graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tensor product of two graphs.
    Product {
        #[arg(long, value_parser = parse_kind)]
        kind: ProductKind,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Internal hom graph whose vertices are the homs B → C.
    Hom {
        #[arg(long, value_parser = parse_kind)]
        kind: ProductKind,
        b: PathBuf,
        c: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// All homs G → H, or their number.
    Homs {
        g: PathBuf,
        h: PathBuf,
        #[arg(long)]
        count: bool,
    },
    /// Reflection of a presheaf into graphs.
    Reflect {
        presheaf: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Density diagram of a graph and the check that its colimit recovers it.
    Decompose { graph: PathBuf },
    /// Run every law check for a built-in product.
    Verify {
        #[arg(long, value_parser = parse_kind)]
        kind: ProductKind,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Classify the possible tensor squares and verify the survivors.
    Classify {
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// DOT rendering of a graph.
    ExportDot { graph: PathBuf },
}

fn parse_kind(s: &str) -> Result<ProductKind, String> {
    s.parse().map_err(|e: monocat::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    if s == "optional-loops" {
        return Err(OPTIONAL_LOOPS.to_string());
    }
    s.parse().map_err(|e: monocat::Error| e.to_string())
}

/// A failed run: exit code and diagnostic.
struct Failure(u8, String);

impl From<monocat::Error> for Failure {
    fn from(e: monocat::Error) -> Self {
        Failure(2, e.to_string())
    }
}

/// Standard output and whether the run found a violation.
struct Output {
    text: String,
    violation: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, violation: false }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure(2, format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<ReflexiveGraph, Failure> {
    ReflexiveGraph::from_json(&read_input(path)?).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn read_corpus(path: Option<&Path>, mode: Mode) -> Result<Corpus, Failure> {
    let Some(path) = path else { return Ok(Corpus::default_for(mode)) };
    let corpus = Corpus::from_json(&read_input(path)?).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
    if corpus.mode() != mode {
        return Err(Failure(2, format!("{}: corpus is {}, expected {mode}", path.display(), corpus.mode())));
    }
    Ok(corpus)
}

fn emit_graph(g: &ReflexiveGraph, dot: bool) -> String {
    if dot {
        to_dot(g)
    } else {
        g.to_json() + "\n"
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    oracle: String,
    mode: Mode,
    passed: bool,
    reports: &'a [CoherenceReport],
}

fn summarize_reports(out: &mut String, reports: &[CoherenceReport]) {
    for r in reports {
        for l in &r.laws {
            let status = if l.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{:<18} {:<26} {status}  checked {} skipped {}", r.check, l.law, l.checked, l.skipped);
            if let Some(c) = &l.counterexample {
                let instance = serde_json::to_string(&c.instance).expect("instance serializes");
                let _ = writeln!(out, "  instance {instance}\n  lhs {}\n  rhs {}", c.lhs, c.rhs);
            }
        }
    }
}

#[derive(Serialize)]
struct DiagramObject {
    shape: &'static str,
    graph: ReflexiveGraph,
}

#[derive(Serialize)]
struct DiagramArrow {
    source: usize,
    target: usize,
    map: std::collections::BTreeMap<String, String>,
}

#[derive(Serialize)]
struct DecomposeJson {
    graph: ReflexiveGraph,
    objects: Vec<DiagramObject>,
    arrows: Vec<DiagramArrow>,
    colimit: ReflexiveGraph,
    witness: GraphHom,
    isomorphic: bool,
}

fn summarize_classification(r: &ClassificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode {}", r.mode);
    let _ = writeln!(out, "unit {}", r.unit.to_json());
    for line in &r.unit_certificate.lines {
        let _ = writeln!(out, "  {line}");
    }
    let _ = writeln!(
        out,
        "searched {} partitions, {} candidates, {} labeled survivors",
        r.stats.partitions, r.stats.candidates, r.stats.survivors
    );
    for s in &r.squares {
        let kind = s.kind.map_or("none".to_string(), |k| k.to_string());
        let status = if s.verified { "verified" } else { "NOT verified" };
        let _ = writeln!(out, "square {} = {kind} ({status}) {}", s.name, s.square.to_json());
    }
    if r.reverse_edges.vacuous {
        let _ = writeln!(out, "reverse edges: none possible");
    } else {
        for v in &r.reverse_edges.killed {
            let _ = writeln!(out, "edge {}->{} killed by {}", v.edge.0, v.edge.1, v.killed_by.join(", "));
        }
        for (u, v) in &r.reverse_edges.free {
            let _ = writeln!(out, "edge {u}->{v} free");
        }
    }
    let _ = writeln!(out, "{}", if r.matches_theorem { "classification: exactly two structures" } else { "classification: MISMATCH" });
    out
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Product { kind, a, b, dot } => {
            let t = tensor(kind, &read_graph(&a)?, &read_graph(&b)?)?;
            Ok(Output::ok(emit_graph(&t, dot)))
        }
        Command::Hom { kind, b, c, dot } => {
            let e = internal_hom(kind, &read_graph(&b)?, &read_graph(&c)?)?;
            Ok(Output::ok(emit_graph(&e, dot)))
        }
        Command::Homs { g, h, count } => {
            let (g, h) = (read_graph(&g)?, read_graph(&h)?);
            if count {
                return Ok(Output::ok(format!("{}\n", count_homs(&g, &h)?)));
            }
            let maps: Vec<_> = enumerate_homs(&g, &h)?.iter().map(GraphHom::label_map).collect();
            Ok(Output::ok(serde_json::to_string(&maps).expect("maps serialize") + "\n"))
        }
        Command::Reflect { presheaf, dot } => {
            let x = Presheaf::from_json(&read_input(&presheaf)?)
                .map_err(|e| Failure(2, format!("{}: {e}", presheaf.display())))?;
            let violations = validate_presheaf(&x);
            if !violations.is_empty() {
                let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
                return Err(Failure(1, format!("not a presheaf:\n{}", lines.join("\n"))));
            }
            Ok(Output::ok(emit_graph(&reflect(&x)?, dot)))
        }
        Command::Decompose { graph } => {
            let g = read_graph(&graph)?;
            let d = density_recolimit(&g)?;
            let objects = d
                .diagram
                .objects()
                .iter()
                .map(|o| DiagramObject { shape: if o.vertex_count() == 1 { "point" } else { "edge" }, graph: o.clone() })
                .collect();
            let arrows = d
                .diagram
                .arrows()
                .iter()
                .map(|(s, t, f)| DiagramArrow { source: *s, target: *t, map: f.label_map() })
                .collect();
            let json = DecomposeJson {
                graph: g,
                objects,
                arrows,
                colimit: d.colimit.apex.clone(),
                isomorphic: d.witness.is_isomorphism(),
                witness: d.witness,
            };
            Ok(Output { violation: !json.isomorphic, text: pretty(&json) })
        }
        Command::Verify { kind, mode, corpus, json } => {
            let corpus = read_corpus(corpus.as_deref(), mode)?;
            let oracle = ProductOracle::new(kind, mode);
            let reports = check_all(&oracle, &corpus, &VerifyConfig::default())?;
            let passed = reports.iter().all(CoherenceReport::passed);
            let text = if json {
                pretty(&VerifyJson { oracle: kind.to_string(), mode, passed, reports: &reports })
            } else {
                let mut out = format!("oracle {kind}, mode {mode}, {} corpus graphs\n", corpus.len());
                summarize_reports(&mut out, &reports);
                out.push_str(if passed { "all laws hold\n" } else { "some laws FAIL\n" });
                out
            };
            Ok(Output { text, violation: !passed })
        }
        Command::Classify { mode, corpus, json } => {
            let corpus = read_corpus(corpus.as_deref(), mode)?;
            let report = classify(mode, &corpus, &VerifyConfig::default())?;
            let text = if json { pretty(&report) } else { summarize_classification(&report) };
            Ok(Output { text, violation: !report.matches_theorem })
        }
        Command::ExportDot { graph } => Ok(Output::ok(to_dot(&read_graph(&graph)?))),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("MONOCAT_THREADS") else { return Ok(()) };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure(2, format!("MONOCAT_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure(2, format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli.command));
    match result {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(u8::from(out.violation))
        }
        Err(Failure(code, message)) => {
            eprintln!("monocat: {message}");
            ExitCode::from(code)
        }
    }
}
