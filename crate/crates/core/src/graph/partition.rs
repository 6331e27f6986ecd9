use super::{GraphHom, ReflexiveGraph};
use crate::error::{Error, Result};

/// A partition of a graph's vertex set into nonempty disjoint blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    base: ReflexiveGraph,
    // Each block sorted; blocks ordered by their smallest vertex.
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl VertexPartition {
    pub fn new<B, S>(base: &ReflexiveGraph, blocks: B) -> Result<Self>
    where
        B: IntoIterator,
        B::Item: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let n = base.vertex_count();
        let mut assignment = vec![usize::MAX; n];
        for (b, block) in blocks.into_iter().enumerate() {
            let mut empty = true;
            for label in block {
                let label = label.as_ref();
                let v = base
                    .index_of(label)
                    .ok_or_else(|| Error::InvalidPartition(format!("`{label}` is not a vertex")))?;
                if assignment[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("`{label}` appears in two blocks")));
                }
                assignment[v] = b;
                empty = false;
            }
            if empty {
                return Err(Error::InvalidPartition("empty block".into()));
            }
        }
        if let Some(v) = assignment.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("`{}` is not covered", base.label(v))));
        }
        Ok(Self::from_assignment(base, &assignment))
    }

    /// Partition from a block id per vertex. Ids need not be contiguous.
    pub fn from_assignment(base: &ReflexiveGraph, assignment: &[usize]) -> Self {
        assert_eq!(assignment.len(), base.vertex_count(), "assignment must cover every vertex");
        let mut renumber: Vec<(usize, usize)> = Vec::new();
        let mut block_of = Vec::with_capacity(assignment.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (v, &id) in assignment.iter().enumerate() {
            let b = match renumber.iter().find(|(old, _)| *old == id) {
                Some(&(_, b)) => b,
                None => {
                    renumber.push((id, blocks.len()));
                    blocks.push(Vec::new());
                    blocks.len() - 1
                }
            };
            blocks[b].push(v);
            block_of.push(b);
        }
        VertexPartition { base: base.clone(), blocks, block_of }
    }

    pub fn discrete(base: &ReflexiveGraph) -> Self {
        let ids: Vec<usize> = (0..base.vertex_count()).collect();
        Self::from_assignment(base, &ids)
    }

    pub fn base(&self) -> &ReflexiveGraph {
        &self.base
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.base.vertex_count()
    }

    /// Singletons keep their vertex label; larger blocks read `{u,v,…}`.
    pub fn block_label(&self, b: usize) -> String {
        let block = &self.blocks[b];
        if block.len() == 1 {
            self.base.label(block[0]).to_string()
        } else {
            let names: Vec<&str> = block.iter().map(|&v| self.base.label(v)).collect();
            format!("{{{}}}", names.join(","))
        }
    }
}

fn check_base(g: &ReflexiveGraph, p: &VertexPartition) -> Result<()> {
    if p.base != *g {
        return Err(Error::InvalidPartition("partition belongs to a different graph".into()));
    }
    Ok(())
}

/// `G/P`: blocks related when some members are. Intra-block edges become
/// loops and are not stored.
pub fn quotient(g: &ReflexiveGraph, p: &VertexPartition) -> Result<ReflexiveGraph> {
    quotient_map(g, p).map(|q| q.cod().clone())
}

/// The projection `G → G/P`.
pub fn quotient_map(g: &ReflexiveGraph, p: &VertexPartition) -> Result<GraphHom> {
    check_base(g, p)?;
    let labels = (0..p.blocks.len()).map(|b| p.block_label(b)).collect();
    let edges = g.edges().iter().map(|&(u, v)| (p.block_of[u], p.block_of[v]));
    let (q, position) = ReflexiveGraph::from_indexed(g.mode(), labels, edges)?;
    let map = p.block_of.iter().map(|&b| position[b]).collect();
    Ok(GraphHom::trusted(g.clone(), q, map))
}

/// All set partitions of `{0..n}` as restricted growth strings, in
/// lexicographic order.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for b in 0..=limit {
            prefix.push(b);
            grow(prefix, max.max(b), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::with_capacity(n), 0, n, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_isomorphic, make_named, make_path, Mode, NamedGraph};

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 15, 52]);
        assert_eq!(set_partitions(4)[0], [0, 0, 0, 0]);
        assert_eq!(set_partitions(4)[14], [0, 1, 2, 3]);
    }

    #[test]
    fn collapse_edge_to_point() {
        let j1 = make_path(1, Mode::Directed);
        let p = VertexPartition::new(&j1, [["0", "1"]]).unwrap();
        let q = quotient(&j1, &p).unwrap();
        assert!(is_isomorphic(&q, &make_path(0, Mode::Directed)).unwrap().is_some());
        assert_eq!(q.edge_count(), 0);
    }

    #[test]
    fn discrete_quotient_is_identity() {
        let csq = make_named(NamedGraph::Csq, Mode::Directed).unwrap();
        let q = quotient(&csq, &VertexPartition::discrete(&csq)).unwrap();
        assert_eq!(q, csq);
    }

    #[test]
    fn merge_opposite_corners() {
        let csq = make_named(NamedGraph::Csq, Mode::Directed).unwrap();
        let p = VertexPartition::new(&csq, vec![vec!["a", "d"], vec!["b"], vec!["c"]]).unwrap();
        let q = quotient(&csq, &p).unwrap();
        let mut edges: Vec<(&str, &str)> = q.edge_labels().collect();
        edges.sort();
        assert_eq!(edges, [("b", "{a,d}"), ("c", "{a,d}"), ("{a,d}", "b"), ("{a,d}", "c")]);
    }

    #[test]
    fn invalid_partitions() {
        let j1 = make_path(1, Mode::Directed);
        assert!(VertexPartition::new(&j1, [vec!["0"]]).is_err());
        assert!(VertexPartition::new(&j1, [vec!["0", "1"], vec!["1"]]).is_err());
        assert!(VertexPartition::new(&j1, [vec!["0", "1", "7"]]).is_err());
        let other = make_path(2, Mode::Directed);
        assert!(quotient(&other, &VertexPartition::discrete(&j1)).is_err());
    }
}
