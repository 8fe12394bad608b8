//! Edge-disjoint forests by matroid partition (augmenting paths over the
//! union of graphic matroids).

use std::collections::VecDeque;

/// Edges of the forest `owner == forest` on the path from `a` to `b`, or
/// `None` when `a` and `b` lie in different trees of that forest.
fn forest_path(
    n: usize,
    edges: &[(usize, usize)],
    owner: &[Option<usize>],
    forest: usize,
    a: usize,
    b: usize,
) -> Option<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(x, y)) in edges.iter().enumerate() {
        if owner[i] == Some(forest) {
            adj[x].push((y, i));
            adj[y].push((x, i));
        }
    }
    let mut via = vec![None; n];
    let mut seen = vec![false; n];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for &(y, e) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                via[y] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    if !seen[b] {
        return None;
    }
    let mut path = Vec::new();
    let mut at = b;
    while let Some((prev, e)) = via[at] {
        path.push(e);
        at = prev;
    }
    Some(path)
}

/// Splits a maximum number of edges of the multigraph into `k` forests.
/// Returns the forest index of every edge (`None` for unused edges). Loops
/// are never used.
///
/// Each unplaced edge is inserted by a shortest augmenting sequence of
/// swaps: placing `x` into forest `i` closes a cycle, any edge `y` on that
/// cycle may be displaced, and `y` must then find room elsewhere.
pub fn partition_into_forests(n: usize, edges: &[(usize, usize)], k: usize) -> Vec<Option<usize>> {
    let mut owner: Vec<Option<usize>> = vec![None; edges.len()];
    if k == 0 {
        return owner;
    }
    for start in 0..edges.len() {
        if edges[start].0 == edges[start].1 {
            continue;
        }
        let mut label: Vec<Option<(usize, usize)>> = vec![None; edges.len()];
        let mut visited = vec![false; edges.len()];
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        'search: while let Some(x) = queue.pop_front() {
            let (a, b) = edges[x];
            for forest in 0..k {
                if owner[x] == Some(forest) {
                    continue;
                }
                match forest_path(n, edges, &owner, forest, a, b) {
                    None => {
                        let (mut cur, mut into) = (x, forest);
                        loop {
                            owner[cur] = Some(into);
                            match label[cur] {
                                None => break,
                                Some((prev, from)) => {
                                    cur = prev;
                                    into = from;
                                }
                            }
                        }
                        break 'search;
                    }
                    Some(cycle) => {
                        for y in cycle {
                            if !visited[y] {
                                visited[y] = true;
                                // `x` may enter `forest` by displacing `y`.
                                label[y] = Some((x, forest));
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
    }
    owner
}

/// `k` edge-disjoint spanning trees of a connected multigraph on `n`
/// vertices, if they exist.
pub fn spanning_trees(n: usize, edges: &[(usize, usize)], k: usize) -> Option<Vec<Vec<usize>>> {
    let owner = partition_into_forests(n, edges, k);
    let mut trees = vec![Vec::new(); k];
    for (e, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            trees[*i].push(e);
        }
    }
    trees
        .iter()
        .all(|t| t.len() + 1 == n.max(1))
        .then_some(trees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DisjointSets;

    fn is_forest(n: usize, edges: &[(usize, usize)], ids: &[usize]) -> bool {
        let mut ds = DisjointSets::new(n);
        ids.iter().all(|&e| ds.union(edges[e].0, edges[e].1))
    }

    #[test]
    fn k4_has_two_disjoint_spanning_trees() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let trees = spanning_trees(4, &edges, 2).unwrap();
        for t in &trees {
            assert!(is_forest(4, &edges, t));
            assert_eq!(t.len(), 3);
        }
        assert!(spanning_trees(4, &edges, 3).is_none());
    }

    #[test]
    fn doubled_k4_has_three_trees() {
        let base = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let edges: Vec<_> = base.iter().flat_map(|&e| [e, e]).collect();
        let trees = spanning_trees(4, &edges, 3).unwrap();
        let mut used: Vec<usize> = trees.concat();
        used.sort_unstable();
        used.dedup();
        assert_eq!(used.len(), 9);
    }

    #[test]
    fn partition_needs_swaps() {
        // The first edges greedily fill forest 0 badly; augmenting must swap.
        let edges = [(0, 1), (1, 2), (0, 2), (0, 1), (1, 2)];
        let owner = partition_into_forests(3, &edges, 2);
        assert!(owner.iter().filter(|o| o.is_some()).count() == 4);
        for f in 0..2 {
            let ids: Vec<_> = (0..edges.len()).filter(|&e| owner[e] == Some(f)).collect();
            assert!(is_forest(3, &edges, &ids));
        }
    }

    #[test]
    fn loops_are_ignored() {
        let owner = partition_into_forests(2, &[(0, 0), (0, 1)], 1);
        assert_eq!(owner, vec![None, Some(0)]);
    }
}
