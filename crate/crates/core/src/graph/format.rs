//! Canonical JSON and DOT renderings of graphs.
//!
//! JSON: `{"mode":"directed","vertices":["a","b"],"edges":[["a","b"]]}` with
//! vertices sorted, edges sorted, loops omitted and undirected endpoints in
//! vertex order. Equal graphs serialize to identical bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Mode, ReflexiveGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub mode: Mode,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
}

impl From<&ReflexiveGraph> for GraphJson {
    fn from(g: &ReflexiveGraph) -> Self {
        GraphJson {
            mode: g.mode(),
            vertices: g.vertices().to_vec(),
            edges: g.edge_labels().map(|(u, v)| [u.to_string(), v.to_string()]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for ReflexiveGraph {
    type Error = Error;

    fn try_from(json: GraphJson) -> Result<Self> {
        ReflexiveGraph::new(json.mode, json.vertices, json.edges.iter().map(|[u, v]| (u.as_str(), v.as_str())))
    }
}

impl Serialize for ReflexiveGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ReflexiveGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = GraphJson::deserialize(deserializer)?;
        ReflexiveGraph::try_from(json).map_err(serde::de::Error::custom)
    }
}

impl ReflexiveGraph {
    /// Canonical compact JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// DOT export; `digraph` for directed graphs, `graph` otherwise. Loops are
/// left out, as in the JSON form.
pub fn to_dot(g: &ReflexiveGraph) -> String {
    let (keyword, arrow) = match g.mode() {
        Mode::Directed => ("digraph", "->"),
        Mode::Undirected => ("graph", "--"),
    };
    let mut out = format!("{keyword} {{\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for (u, v) in g.edge_labels() {
        let _ = writeln!(out, "  {} {arrow} {};", quote(u), quote(v));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, make_path, NamedGraph};

    #[test]
    fn canonical_json() {
        let j1 = make_path(1, Mode::Directed);
        assert_eq!(j1.to_json(), r#"{"mode":"directed","vertices":["0","1"],"edges":[["0","1"]]}"#);
        let i1 = ReflexiveGraph::from_json(r#"{"mode":"undirected","vertices":["1","0"],"edges":[["1","0"],["0","0"]]}"#)
            .unwrap();
        assert_eq!(i1.to_json(), r#"{"mode":"undirected","vertices":["0","1"],"edges":[["0","1"]]}"#);
    }

    #[test]
    fn json_errors() {
        assert!(ReflexiveGraph::from_json(r#"{"mode":"sideways","vertices":[]}"#).is_err());
        assert!(ReflexiveGraph::from_json(r#"{"mode":"directed","vertices":["a"],"edges":[["a","b"]]}"#).is_err());
        assert!(ReflexiveGraph::from_json("not json").is_err());
    }

    #[test]
    fn dot_output() {
        let csq = make_named(NamedGraph::Csq, Mode::Directed).unwrap();
        let dot = to_dot(&csq);
        assert!(dot.starts_with("digraph {\n"));
        assert!(dot.contains("  \"a\" -> \"b\";\n"));
        let c4 = make_named(NamedGraph::C4, Mode::Undirected).unwrap();
        assert!(to_dot(&c4).contains("\"a\" -- \"c\";"));
        assert_eq!(quote("x\"y"), "\"x\\\"y\"");
    }
}
