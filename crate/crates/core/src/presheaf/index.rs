//! The finite index categories whose limit-preserving set-valued functors are
//! directed (resp. undirected) reflexive graphs.
//!
//! Each category is presented by generators and relations. At first use the
//! relations are completed into a confluent rewriting system (Knuth–Bendix
//! over shortlex order); morphisms are the normal forms, found by closing the
//! identities under post-composition with generators. The result is frozen
//! in a `OnceLock`.
//!
//! Words are stored in diagrammatic order: `[Δ, p]` means "Δ, then p", which
//! is written `pΔ` in applicative notation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Mode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Object {
    V,
    V2,
    E,
}

impl Object {
    pub const ALL: [Object; 3] = [Object::V, Object::V2, Object::E];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Object::V => "V",
            Object::V2 => "V²",
            Object::E => "E",
        })
    }
}

impl FromStr for Object {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V" => Ok(Object::V),
            "V2" | "V²" => Ok(Object::V2),
            "E" => Ok(Object::E),
            other => Err(Error::Parse(format!("unknown object `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Delta,
    P,
    Q,
    Sigma,
    E,
    Ell,
    S,
}

impl Generator {
    pub const ALL: [Generator; 7] = [
        Generator::Delta,
        Generator::P,
        Generator::Q,
        Generator::Sigma,
        Generator::E,
        Generator::Ell,
        Generator::S,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn source(self) -> Object {
        match self {
            Generator::Delta | Generator::Ell => Object::V,
            Generator::P | Generator::Q | Generator::Sigma => Object::V2,
            Generator::E | Generator::S => Object::E,
        }
    }

    pub fn target(self) -> Object {
        match self {
            Generator::P | Generator::Q => Object::V,
            Generator::Delta | Generator::Sigma | Generator::E => Object::V2,
            Generator::Ell | Generator::S => Object::E,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Generator::Delta => "Δ",
            Generator::P => "p",
            Generator::Q => "q",
            Generator::Sigma => "σ",
            Generator::E => "e",
            Generator::Ell => "ℓ",
            Generator::S => "s",
        }
    }

    /// Key used in the presheaf JSON format.
    pub fn key(self) -> &'static str {
        match self {
            Generator::Delta => "delta",
            Generator::P => "p",
            Generator::Q => "q",
            Generator::Sigma => "sigma",
            Generator::E => "e",
            Generator::Ell => "ell",
            Generator::S => "s",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.key() == key)
    }

    pub fn generators(mode: Mode) -> &'static [Generator] {
        match mode {
            Mode::Directed => &Self::ALL[..6],
            Mode::Undirected => &Self::ALL,
        }
    }
}

pub type Word = Vec<Generator>;

/// Renders a diagrammatic word in applicative notation (`[e, p, ℓ]` → `ℓpe`).
pub fn word_name(word: &[Generator]) -> String {
    if word.is_empty() {
        return "id".to_string();
    }
    word.iter().rev().map(|g| g.symbol()).collect()
}

/// A defining equation `lhs = rhs` between words out of `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: &'static str,
    pub source: Object,
    pub lhs: Word,
    pub rhs: Word,
}

fn relations(mode: Mode) -> Vec<Relation> {
    use Generator::*;
    let rel = |name, source, lhs: &[Generator], rhs: &[Generator]| Relation {
        name,
        source,
        lhs: lhs.to_vec(),
        rhs: rhs.to_vec(),
    };
    let mut out = vec![
        rel("pΔ = id", Object::V, &[Delta, P], &[]),
        rel("qΔ = id", Object::V, &[Delta, Q], &[]),
        rel("Δ = eℓ", Object::V, &[Delta], &[Ell, E]),
        rel("pσ = q", Object::V2, &[Sigma, P], &[Q]),
        rel("qσ = p", Object::V2, &[Sigma, Q], &[P]),
        rel("σΔ = Δ", Object::V, &[Delta, Sigma], &[Delta]),
        rel("σ² = id", Object::V2, &[Sigma, Sigma], &[]),
    ];
    if mode == Mode::Undirected {
        out.extend([
            rel("es = σe", Object::E, &[S, E], &[E, Sigma]),
            rel("sℓ = ℓ", Object::V, &[Ell, S], &[Ell]),
            rel("s² = id", Object::E, &[S, S], &[]),
        ]);
    }
    out
}

fn shortlex(a: &[Generator], b: &[Generator]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn find(haystack: &[Generator], needle: &[Generator]) -> Option<usize> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return None;
    }
    (0..=haystack.len() - needle.len()).find(|&i| &haystack[i..i + needle.len()] == needle)
}

fn reduce(rules: &[(Word, Word)], word: &[Generator]) -> Word {
    let mut word = word.to_vec();
    'outer: loop {
        for (lhs, rhs) in rules {
            if let Some(i) = find(&word, lhs) {
                word.splice(i..i + lhs.len(), rhs.iter().copied());
                continue 'outer;
            }
        }
        return word;
    }
}

fn orient(a: Word, b: Word) -> Option<(Word, Word)> {
    match shortlex(&a, &b) {
        Ordering::Greater => Some((a, b)),
        Ordering::Less => Some((b, a)),
        Ordering::Equal => None,
    }
}

fn critical_pairs(l1: &[Generator], r1: &[Generator], l2: &[Generator], r2: &[Generator]) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    // suffix of l1 overlaps prefix of l2
    for k in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - k..] == l2[..k] {
            let left = [r1, &l2[k..]].concat();
            let right = [&l1[..l1.len() - k], r2].concat();
            out.push((left, right));
        }
    }
    // l2 strictly inside l1
    if l2.len() < l1.len() {
        for i in 0..=l1.len() - l2.len() {
            if l1[i..i + l2.len()] == *l2 {
                let right = [&l1[..i], r2, &l1[i + l2.len()..]].concat();
                out.push((r1.to_vec(), right));
            }
        }
    }
    out
}

fn complete(relations: &[Relation]) -> Vec<(Word, Word)> {
    let mut rules: Vec<(Word, Word)> = Vec::new();
    for rel in relations {
        let (a, b) = (reduce(&rules, &rel.lhs), reduce(&rules, &rel.rhs));
        if let Some(rule) = orient(a, b) {
            rules.push(rule);
        }
    }
    for _ in 0..64 {
        let mut added = false;
        let snapshot = rules.clone();
        for (l1, r1) in &snapshot {
            for (l2, r2) in &snapshot {
                for (a, b) in critical_pairs(l1, r1, l2, r2) {
                    let (a, b) = (reduce(&rules, &a), reduce(&rules, &b));
                    if let Some(rule) = orient(a, b) {
                        rules.push(rule);
                        added = true;
                    }
                }
            }
        }
        if !added {
            return interreduce(rules);
        }
    }
    panic!("rewriting system failed to complete");
}

fn interreduce(mut rules: Vec<(Word, Word)>) -> Vec<(Word, Word)> {
    rules.sort_by(|a, b| shortlex(&a.0, &b.0).then_with(|| shortlex(&a.1, &b.1)));
    let mut kept: Vec<(Word, Word)> = Vec::new();
    for (lhs, rhs) in rules {
        if kept.iter().any(|(l, _)| find(&lhs, l).is_some()) {
            continue;
        }
        kept.push((lhs, rhs));
    }
    let snapshot = kept.clone();
    for (_, rhs) in &mut kept {
        *rhs = reduce(&snapshot, rhs);
    }
    kept
}

pub type MorphismId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: Object,
    pub target: Object,
    /// Normal form, diagrammatic order.
    pub word: Word,
}

impl Morphism {
    pub fn name(&self) -> String {
        word_name(&self.word)
    }
}

/// A finite category presented by generators and relations, with its full
/// composition table.
#[derive(Debug)]
pub struct IndexCategory {
    mode: Mode,
    relations: Vec<Relation>,
    rules: Vec<(Word, Word)>,
    morphisms: Vec<Morphism>,
    // compose[f][g] = f then g
    compose: Vec<Vec<Option<MorphismId>>>,
    rounds: usize,
}

impl IndexCategory {
    /// The shared instance for `mode`, built on first use.
    pub fn get(mode: Mode) -> &'static IndexCategory {
        static DIRECTED: OnceLock<IndexCategory> = OnceLock::new();
        static UNDIRECTED: OnceLock<IndexCategory> = OnceLock::new();
        match mode {
            Mode::Directed => DIRECTED.get_or_init(|| IndexCategory::build(mode)),
            Mode::Undirected => UNDIRECTED.get_or_init(|| IndexCategory::build(mode)),
        }
    }

    fn build(mode: Mode) -> Self {
        let relations = relations(mode);
        let rules = complete(&relations);
        let gens = Generator::generators(mode);

        let mut morphisms: Vec<Morphism> =
            Object::ALL.iter().map(|&o| Morphism { source: o, target: o, word: Vec::new() }).collect();
        let mut frontier: Vec<MorphismId> = (0..morphisms.len()).collect();
        let mut rounds = 0;
        while !frontier.is_empty() {
            rounds += 1;
            let mut next = Vec::new();
            for &id in &frontier {
                let m = morphisms[id].clone();
                for &g in gens.iter().filter(|g| g.source() == m.target) {
                    let mut word = m.word.clone();
                    word.push(g);
                    let word = reduce(&rules, &word);
                    let known = morphisms.iter().any(|k| k.source == m.source && k.word == word);
                    if !known {
                        morphisms.push(Morphism { source: m.source, target: g.target(), word });
                        next.push(morphisms.len() - 1);
                    }
                }
            }
            frontier = next;
        }
        morphisms.sort_by(|a, b| {
            (a.source, a.target).cmp(&(b.source, b.target)).then_with(|| shortlex(&a.word, &b.word))
        });

        let n = morphisms.len();
        let mut compose = vec![vec![None; n]; n];
        for (f, mf) in morphisms.iter().enumerate() {
            for (g, mg) in morphisms.iter().enumerate() {
                if mf.target != mg.source {
                    continue;
                }
                let word = reduce(&rules, &[mf.word.as_slice(), mg.word.as_slice()].concat());
                let id = morphisms
                    .iter()
                    .position(|k| k.source == mf.source && k.word == word)
                    .expect("normal forms are closed under composition");
                compose[f][g] = Some(id);
            }
        }
        IndexCategory { mode, relations, rules, morphisms, compose, rounds }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// The completed rewriting rules `lhs → rhs`.
    pub fn rules(&self) -> &[(Word, Word)] {
        &self.rules
    }

    pub fn generators(&self) -> &'static [Generator] {
        Generator::generators(self.mode)
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, id: MorphismId) -> &Morphism {
        &self.morphisms[id]
    }

    /// Rounds of closure under generators until nothing new appeared.
    pub fn closure_rounds(&self) -> usize {
        self.rounds
    }

    pub fn normalize(&self, word: &[Generator]) -> Word {
        reduce(&self.rules, word)
    }

    /// The morphism a well-typed word out of `source` denotes.
    pub fn find(&self, source: Object, word: &[Generator]) -> Option<MorphismId> {
        let mut at = source;
        for g in word {
            if g.source() != at || !self.generators().contains(g) {
                return None;
            }
            at = g.target();
        }
        let word = self.normalize(word);
        self.morphisms.iter().position(|m| m.source == source && m.word == word)
    }

    pub fn identity(&self, o: Object) -> MorphismId {
        self.find(o, &[]).expect("identities exist")
    }

    pub fn generator(&self, g: Generator) -> MorphismId {
        self.find(g.source(), &[g]).expect("generator belongs to this category")
    }

    /// `f` then `g`, when composable.
    pub fn compose(&self, f: MorphismId, g: MorphismId) -> Option<MorphismId> {
        self.compose[f][g]
    }

    pub fn hom(&self, a: Object, b: Object) -> Vec<MorphismId> {
        (0..self.morphisms.len()).filter(|&i| self.morphisms[i].source == a && self.morphisms[i].target == b).collect()
    }

    /// `counts[a][b] = |Hom(a, b)|`, objects in the order `V, V², E`.
    pub fn hom_counts(&self) -> [[usize; 3]; 3] {
        let mut counts = [[0; 3]; 3];
        for m in &self.morphisms {
            counts[m.source.index()][m.target.index()] += 1;
        }
        counts
    }
}
