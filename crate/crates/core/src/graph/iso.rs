use super::{GraphHom, ReflexiveGraph};
use crate::error::{same_mode, Result};

/// Finds an isomorphism `g → h`, or `None`. The witness is the first one in
/// lexicographic order of the image vector.
///
/// Backtracking with degree pruning; meant for graphs of a few dozen vertices.
pub fn is_isomorphic(g: &ReflexiveGraph, h: &ReflexiveGraph) -> Result<Option<GraphHom>> {
    same_mode(g.mode(), h.mode())?;
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let degrees = |x: &ReflexiveGraph| -> Vec<(usize, usize)> {
        (0..x.vertex_count()).map(|v| (x.out_degree(v), x.in_degree(v))).collect()
    };
    let (dg, dh) = (degrees(g), degrees(h));
    let mut sorted_g = dg.clone();
    let mut sorted_h = dh.clone();
    sorted_g.sort_unstable();
    sorted_h.sort_unstable();
    if sorted_g != sorted_h {
        return Ok(None);
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(g, h, &dg, &dh, 0, &mut map, &mut used) {
        Ok(Some(GraphHom::trusted(g.clone(), h.clone(), map)))
    } else {
        Ok(None)
    }
}

fn extend(
    g: &ReflexiveGraph,
    h: &ReflexiveGraph,
    dg: &[(usize, usize)],
    dh: &[(usize, usize)],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = map.len();
    if depth == n {
        return true;
    }
    for c in 0..n {
        if used[c] || dg[depth] != dh[c] {
            continue;
        }
        let consistent = (0..depth).all(|j| {
            g.related(j, depth) == h.related(map[j], c) && g.related(depth, j) == h.related(c, map[j])
        });
        if !consistent {
            continue;
        }
        map[depth] = c;
        used[c] = true;
        if extend(g, h, dg, dh, depth + 1, map, used) {
            return true;
        }
        used[c] = false;
    }
    map[depth] = usize::MAX;
    false
}
