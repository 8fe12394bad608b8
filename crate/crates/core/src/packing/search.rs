//! Direct searches for `c` edge-disjoint edge sets that each connect every
//! terminal class, used when the spanning-tree route does not apply.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{edge_connectivity, DisjointSets, VertexId};

/// Index sets into `edges`, one per forest.
pub type Assignment = Vec<Vec<usize>>;

fn connects(n: usize, edges: &[(VertexId, VertexId)], set: &[usize], classes: &[Vec<VertexId>]) -> bool {
    let mut ds = DisjointSets::new(n);
    for &e in set {
        ds.union(edges[e].0, edges[e].1);
    }
    classes
        .iter()
        .all(|c| c[1..].iter().all(|&x| ds.same(c[0], x)))
}

/// Every class still has `need` edge-disjoint paths among the free edges.
fn residual_ok(
    n: usize,
    edges: &[(VertexId, VertexId)],
    free: &[bool],
    classes: &[Vec<VertexId>],
    need: usize,
) -> bool {
    if need == 0 {
        return true;
    }
    let pairs: Vec<_> = (0..edges.len()).filter(|&e| free[e]).map(|e| edges[e]).collect();
    classes.iter().all(|c| {
        c[1..]
            .iter()
            .all(|&x| edge_connectivity(n, &pairs, c[0], x, Some(need)) >= need)
    })
}

/// Grows one Steiner forest over the free edges: each class is connected by
/// repeatedly attaching its nearest unreached member under random edge
/// costs, then redundant edges are pruned in random order.
fn random_steiner(
    n: usize,
    edges: &[(VertexId, VertexId)],
    free: &[bool],
    classes: &[Vec<VertexId>],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<usize>> {
    let cost: Vec<u32> = (0..edges.len()).map(|_| rng.gen_range(1..=16)).collect();
    let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        if free[e] {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
    }
    let mut chosen = vec![false; edges.len()];
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.shuffle(rng);
    for ci in order {
        let class = &classes[ci];
        loop {
            // Component of class[0] in the chosen edges, as Dijkstra sources.
            let mut ds = DisjointSets::new(n);
            for e in (0..edges.len()).filter(|&e| chosen[e]) {
                ds.union(edges[e].0, edges[e].1);
            }
            if class[1..].iter().all(|&x| ds.same(class[0], x)) {
                break;
            }
            let root = ds.find(class[0]);
            let mut best = vec![u64::MAX; n];
            let mut via: Vec<Option<(VertexId, usize)>> = vec![None; n];
            let mut heap = BinaryHeap::new();
            for (x, b) in best.iter_mut().enumerate() {
                if ds.find(x) == root {
                    *b = 0;
                    heap.push(Reverse((0u64, x)));
                }
            }
            let mut target = None;
            while let Some(Reverse((d, x))) = heap.pop() {
                if d > best[x] {
                    continue;
                }
                if ds.find(x) != root && class.contains(&x) {
                    target = Some(x);
                    break;
                }
                for &(y, e) in &adj[x] {
                    let nd = d + if chosen[e] { 0 } else { cost[e] as u64 };
                    if nd < best[y] {
                        best[y] = nd;
                        via[y] = Some((x, e));
                        heap.push(Reverse((nd, y)));
                    }
                }
            }
            let mut at = target?;
            while let Some((prev, e)) = via[at] {
                chosen[e] = true;
                at = prev;
            }
        }
    }
    let mut set: Vec<usize> = (0..edges.len()).filter(|&e| chosen[e]).collect();
    set.shuffle(rng);
    let mut i = 0;
    while i < set.len() {
        let mut trial = set.clone();
        trial.remove(i);
        if connects(n, edges, &trial, classes) {
            set = trial;
        } else {
            i += 1;
        }
    }
    set.sort_unstable();
    Some(set)
}

/// Randomized sequential construction with restarts.
pub fn randomized(
    n: usize,
    edges: &[(VertexId, VertexId)],
    classes: &[Vec<VertexId>],
    c: usize,
    attempts: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Assignment> {
    'attempt: for _ in 0..attempts {
        let mut free = vec![true; edges.len()];
        let mut out = Vec::with_capacity(c);
        for i in 0..c {
            let Some(set) = random_steiner(n, edges, &free, classes, rng) else {
                continue 'attempt;
            };
            for &e in &set {
                free[e] = false;
            }
            if !residual_ok(n, edges, &free, classes, c - i - 1) {
                continue 'attempt;
            }
            out.push(set);
        }
        return Some(out);
    }
    None
}

/// Depth-first search over inclusion-minimal connecting sets, forest by
/// forest. Only meant for a handful of edges.
pub fn exhaustive(
    n: usize,
    edges: &[(VertexId, VertexId)],
    classes: &[Vec<VertexId>],
    c: usize,
    node_limit: u64,
) -> Option<Assignment> {
    let m = edges.len();
    if m >= 31 {
        return None;
    }
    let mut minimal = Vec::new();
    for mask in 0u32..(1u32 << m) {
        let set: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        if connects(n, edges, &set, classes)
            && (0..set.len()).all(|i| {
                let mut trial = set.clone();
                trial.remove(i);
                !connects(n, edges, &trial, classes)
            })
        {
            minimal.push(mask);
        }
    }
    let mut nodes = 0u64;
    let mut picked = Vec::new();
    fn go(
        used: u32,
        left: usize,
        minimal: &[u32],
        picked: &mut Vec<u32>,
        nodes: &mut u64,
        limit: u64,
    ) -> bool {
        if left == 0 {
            return true;
        }
        *nodes += 1;
        if *nodes > limit {
            return false;
        }
        // Symmetry: forests are chosen in nondecreasing mask order.
        let floor = picked.last().copied().unwrap_or(0);
        for &mask in minimal {
            if mask < floor || mask & used != 0 {
                continue;
            }
            picked.push(mask);
            if go(used | mask, left - 1, minimal, picked, nodes, limit) {
                return true;
            }
            picked.pop();
        }
        false
    }
    go(0, c, &minimal, &mut picked, &mut nodes, node_limit).then(|| {
        picked
            .into_iter()
            .map(|mask| (0..m).filter(|&e| mask >> e & 1 == 1).collect())
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn doubled_triangle_packs_two_forests() {
        let edges = [(0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2)];
        let classes = vec![vec![0, 1, 2]];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = randomized(3, &edges, &classes, 2, 50, &mut rng).unwrap();
        let b = exhaustive(3, &edges, &classes, 2, 10_000).unwrap();
        for sets in [a, b] {
            assert_eq!(sets.len(), 2);
            for s in &sets {
                assert!(connects(3, &edges, s, &classes));
            }
            assert!(sets[0].iter().all(|e| !sets[1].contains(e)));
        }
        assert!(exhaustive(3, &edges, &classes, 4, 10_000).is_none());
    }
}
