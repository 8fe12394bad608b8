use std::collections::VecDeque;

use super::{DisjointSets, EdgeSet, VertexId, WeightedMultigraph};
use crate::error::{Error, Result};

/// Maximum number of edge-disjoint `s`-`t` paths in the undirected multigraph
/// on `n` vertices given by `edges`, stopping early once `cap` is reached.
///
/// Every undirected edge becomes a pair of unit arcs that are each other's
/// residual reverse.
pub fn edge_connectivity(
    n: usize,
    edges: &[(VertexId, VertexId)],
    s: VertexId,
    t: VertexId,
    cap: Option<usize>,
) -> usize {
    if s == t {
        return usize::MAX;
    }
    let mut head = vec![usize::MAX; n];
    let mut next = vec![usize::MAX; 2 * edges.len()];
    let mut to = vec![0usize; 2 * edges.len()];
    let mut residual = vec![1u8; 2 * edges.len()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a == b {
            residual[2 * i] = 0;
            residual[2 * i + 1] = 0;
        }
        to[2 * i] = b;
        next[2 * i] = head[a];
        head[a] = 2 * i;
        to[2 * i + 1] = a;
        next[2 * i + 1] = head[b];
        head[b] = 2 * i + 1;
    }
    let limit = cap.unwrap_or(usize::MAX);
    let mut flow = 0;
    let mut via = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    while flow < limit {
        via.iter_mut().for_each(|x| *x = usize::MAX);
        queue.clear();
        queue.push_back(s);
        let mut seen = vec![false; n];
        seen[s] = true;
        'bfs: while let Some(x) = queue.pop_front() {
            let mut a = head[x];
            while a != usize::MAX {
                let y = to[a];
                if residual[a] > 0 && !seen[y] {
                    seen[y] = true;
                    via[y] = a;
                    if y == t {
                        break 'bfs;
                    }
                    queue.push_back(y);
                }
                a = next[a];
            }
        }
        if !seen[t] {
            break;
        }
        let mut y = t;
        while y != s {
            let a = via[y];
            residual[a] -= 1;
            residual[a ^ 1] += 1;
            y = to[a ^ 1];
        }
        flow += 1;
    }
    flow
}

fn view_pairs(g: &WeightedMultigraph, view: &EdgeSet) -> Vec<(VertexId, VertexId)> {
    view.iter().map(|e| g.endpoints(e)).collect()
}

/// Maximum number of pairwise edge-disjoint `u`-`v` paths in `view`
/// (parallel edges count separately).
pub fn pair_edge_connectivity(
    g: &WeightedMultigraph,
    view: &EdgeSet,
    u: VertexId,
    v: VertexId,
) -> Result<usize> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::InvalidParameter(
            "pair edge connectivity needs two distinct vertices".into(),
        ));
    }
    Ok(edge_connectivity(g.n(), &view_pairs(g, view), u, v, None))
}

/// Equivalence classes of "at least `c` edge-disjoint paths" among the
/// vertices of `view`'s parent graph. Classes are sorted, each listed in
/// ascending vertex order.
pub fn connectivity_classes(g: &WeightedMultigraph, view: &EdgeSet, c: usize) -> Vec<Vec<VertexId>> {
    classes_of_pairs(g.n(), &view_pairs(g, view), c)
}

/// [`connectivity_classes`] over a bare edge list.
pub fn classes_of_pairs(n: usize, edges: &[(VertexId, VertexId)], c: usize) -> Vec<Vec<VertexId>> {
    assert!(c >= 1, "connectivity level must be positive");
    let mut ds = DisjointSets::new(n);
    for &(a, b) in edges {
        ds.union(a, b);
    }
    let component = ds.canonical_labels();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<VertexId>> = Vec::new();
    for r in 0..n {
        if class_of[r] != usize::MAX {
            continue;
        }
        let idx = classes.len();
        class_of[r] = idx;
        let mut members = vec![r];
        for x in r + 1..n {
            if class_of[x] != usize::MAX || component[x] != component[r] {
                continue;
            }
            if c == 1 || edge_connectivity(n, edges, r, x, Some(c)) >= c {
                class_of[x] = idx;
                members.push(x);
            }
        }
        classes.push(members);
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> WeightedMultigraph {
        WeightedMultigraph::with_int_weights(
            4,
            &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)],
        )
        .unwrap()
    }

    #[test]
    fn k4_pairs_are_three_connected() {
        let g = k4();
        let all = g.all_edges();
        for u in 0..4 {
            for v in u + 1..4 {
                assert_eq!(pair_edge_connectivity(&g, &all, u, v).unwrap(), 3);
            }
        }
        assert_eq!(connectivity_classes(&g, &all, 3), vec![vec![0, 1, 2, 3]]);
        assert_eq!(connectivity_classes(&g, &all, 4).len(), 4);
    }

    #[test]
    fn parallel_edges_count_separately() {
        let g = WeightedMultigraph::with_int_weights(2, &[(0, 1, 1), (0, 1, 2)]).unwrap();
        assert_eq!(pair_edge_connectivity(&g, &g.all_edges(), 0, 1).unwrap(), 2);
    }

    #[test]
    fn path_has_only_singleton_classes_at_level_two() {
        let g = WeightedMultigraph::with_int_weights(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let all = g.all_edges();
        assert_eq!(connectivity_classes(&g, &all, 1), vec![vec![0, 1, 2, 3]]);
        assert_eq!(
            connectivity_classes(&g, &all, 2),
            vec![vec![0], vec![1], vec![2], vec![3]]
        );
    }

    #[test]
    fn rejects_equal_endpoints_and_bad_vertices() {
        let g = k4();
        let all = g.all_edges();
        assert!(pair_edge_connectivity(&g, &all, 1, 1).is_err());
        assert!(pair_edge_connectivity(&g, &all, 0, 9).is_err());
    }

    #[test]
    fn cap_stops_early() {
        let g = k4();
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(edge_connectivity(4, &pairs, 0, 1, Some(2)), 2);
    }
}
