//! Splitting off non-terminal vertices of an Eulerian multigraph.
//!
//! Replacing the pair `as`, `sb` by a single edge `ab` never raises any
//! connectivity. In an Eulerian graph some pair at `s` can always be split
//! without lowering `λ(x, y)` for `x, y != s`, so repeating this removes
//! every non-terminal vertex while the terminal classes keep their
//! connectivity. Each new edge remembers the original edges it stands for.

use crate::graph::{edge_connectivity, EdgeId, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkEdge {
    pub a: VertexId,
    pub b: VertexId,
    /// Original edges whose walk from `a` to `b` this edge replaces.
    pub lineage: Vec<EdgeId>,
}

/// Every non-singleton class keeps pairwise connectivity `need`.
pub fn classes_hold(n: usize, edges: &[WorkEdge], classes: &[Vec<VertexId>], need: usize) -> bool {
    let pairs: Vec<_> = edges.iter().map(|e| (e.a, e.b)).collect();
    classes.iter().filter(|c| c.len() > 1).all(|class| {
        class[1..]
            .iter()
            .all(|&x| edge_connectivity(n, &pairs, class[0], x, Some(need)) >= need)
    })
}

fn split_pair(edges: &[WorkEdge], s: VertexId, i: usize, j: usize) -> Vec<WorkEdge> {
    let far = |e: &WorkEdge| if e.a == s { e.b } else { e.a };
    let (a, b) = (far(&edges[i]), far(&edges[j]));
    let mut out: Vec<WorkEdge> = edges
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, e)| e.clone())
        .collect();
    if a != b {
        // Walk a -> s -> b: edge i is traversed from a, edge j towards b.
        let mut lineage = edges[i].lineage.clone();
        lineage.extend_from_slice(&edges[j].lineage);
        out.push(WorkEdge { a, b, lineage });
    }
    out
}

/// Splits off every edge at each vertex of `steiner`, keeping pairwise
/// connectivity `need` inside every class. Returns `None` if no admissible
/// pair is found at some step, which cannot happen for Eulerian input whose
/// classes already meet `need`.
pub fn split_off(
    n: usize,
    mut edges: Vec<WorkEdge>,
    steiner: &[VertexId],
    classes: &[Vec<VertexId>],
    need: usize,
) -> Option<Vec<WorkEdge>> {
    for &s in steiner {
        loop {
            let incident: Vec<usize> = (0..edges.len())
                .filter(|&k| edges[k].a == s || edges[k].b == s)
                .collect();
            if incident.is_empty() {
                break;
            }
            let mut done = false;
            'pairs: for (x, &i) in incident.iter().enumerate() {
                for &j in &incident[x + 1..] {
                    let candidate = split_pair(&edges, s, i, j);
                    if classes_hold(n, &candidate, classes, need) {
                        edges = candidate;
                        done = true;
                        break 'pairs;
                    }
                }
            }
            if !done {
                return None;
            }
        }
    }
    Some(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn work(pairs: &[(usize, usize)]) -> Vec<WorkEdge> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| WorkEdge {
                a,
                b,
                lineage: vec![i],
            })
            .collect()
    }

    #[test]
    fn star_center_splits_into_a_triangle() {
        // Doubled star K_{1,3}: centre 0 is the only non-terminal.
        let edges = work(&[(0, 1), (0, 1), (0, 2), (0, 2), (0, 3), (0, 3)]);
        let classes = vec![vec![0], vec![1, 2, 3]];
        let out = split_off(4, edges, &[0], &classes, 2).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|e| e.a != 0 && e.b != 0 && e.lineage.len() == 2));
        assert!(classes_hold(4, &out, &classes, 2));
    }

    #[test]
    fn parallel_return_pairs_become_loops_and_vanish() {
        let edges = work(&[(0, 1), (0, 1)]);
        let out = split_off(2, edges, &[1], &[vec![0], vec![1]], 2).unwrap();
        assert!(out.is_empty());
    }
}
