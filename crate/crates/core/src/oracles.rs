//! Exhaustive ground-truth checkers.
//!
//! Everything here enumerates fault sets, edge subsets or cycles explicitly
//! and is meant for desk-scale instances; the fast paths elsewhere in the
//! crate are tested against these.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    distances_from, dist, CycleWitness, DisjointSets, EdgeId, EdgeSet, Length, Stretch, VertexId,
    WeightedGirth, WeightedMultigraph,
};

/// Limits for the exponential enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Cap on `sum_{i <= f} C(m, i)` fault sets per check.
    pub max_fault_sets: u64,
    /// Largest `m` for which all `2^m` edge subsets may be enumerated.
    pub max_subset_edges: u32,
    /// Largest cyclomatic number `m - n + components` for cycle enumeration.
    pub max_cycle_rank: u32,
    /// Node cap for branch-and-bound and fault-set branching searches.
    pub max_search_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_fault_sets: 200_000,
            max_subset_edges: 16,
            max_cycle_rank: 16,
            max_search_nodes: 5_000_000,
        }
    }
}

/// `C(n, k)`, saturating.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Number of fault sets of size at most `f` drawn from `m` edges.
pub fn fault_set_count(m: usize, f: usize) -> u128 {
    (0..=f.min(m)).map(|i| binomial(m as u64, i as u64)).sum()
}

/// Visits every subset of `0..m` with at most `f` elements: by increasing
/// size, and in colexicographic order within a size.
pub fn for_each_fault_set(
    m: usize,
    f: usize,
    budget: &Budget,
    mut visit: impl FnMut(&[EdgeId]) -> ControlFlow<()>,
) -> Result<()> {
    let needed = fault_set_count(m, f);
    if needed > budget.max_fault_sets as u128 {
        return Err(Error::BudgetExceeded {
            what: "fault-set enumeration",
            needed,
            limit: budget.max_fault_sets as u128,
        });
    }
    for size in 0..=f.min(m) {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            if visit(&comb).is_break() {
                return Ok(());
            }
            // Colex successor: bump the lowest position that can move.
            let mut i = 0;
            while i < size {
                let ceiling = if i + 1 < size { comb[i + 1] } else { m };
                if comb[i] + 1 < ceiling {
                    break;
                }
                i += 1;
            }
            if i == size {
                break;
            }
            comb[i] += 1;
            for (j, slot) in comb.iter_mut().enumerate().take(i) {
                *slot = j;
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// `dist_{H\F}(u, v) > k * dist_{G\F}(u, v)`.
    Stretch {
        fault_edge_ids: Vec<EdgeId>,
        u: VertexId,
        v: VertexId,
        #[serde(rename = "dist_H")]
        dist_h: Length,
        #[serde(rename = "dist_G")]
        dist_g: Length,
    },
    /// `u` and `v` are connected in `G\F` but not in the candidate minus `F`.
    Disconnection {
        fault_edge_ids: Vec<EdgeId>,
        u: VertexId,
        v: VertexId,
    },
    Cycle(CycleWitness),
    /// A violated structural condition (packings, blocking sets).
    Condition(ConditionWitness),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionWitness {
    pub condition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forest: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<EdgeId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<VertexId>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<CycleWitness>,
}

impl ConditionWitness {
    pub fn new(condition: &str) -> Self {
        ConditionWitness {
            condition: condition.into(),
            ..Default::default()
        }
    }

    pub fn forest(mut self, i: usize) -> Self {
        self.forest = Some(i);
        self
    }

    pub fn edge(mut self, e: EdgeId) -> Self {
        self.edge = Some(e);
        self
    }

    pub fn class(mut self, class: Vec<VertexId>) -> Self {
        self.class = Some(class);
        self
    }

    pub fn cycle(mut self, cycle: Option<CycleWitness>) -> Self {
        self.cycle = cycle;
        self
    }

    pub fn into_report(self) -> VerificationReport {
        VerificationReport::fail(Witness::Condition(self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl VerificationReport {
    pub fn pass() -> Self {
        VerificationReport {
            verdict: Verdict::Pass,
            witness: None,
        }
    }

    pub fn fail(witness: Witness) -> Self {
        VerificationReport {
            verdict: Verdict::Fail,
            witness: Some(witness),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn fault_mask(m: usize, faults: &[EdgeId]) -> EdgeSet {
    EdgeSet::from_ids(m, faults.iter().copied())
}

/// Checks `dist_{H\F}(u,v) <= k * dist_{G\F}(u,v)` for every pair and every
/// `F` of at most `f` edges of `G`, returning the first violation in fault
/// enumeration order, then by `(u, v)`.
pub fn is_ft_spanner(
    g: &WeightedMultigraph,
    h: &EdgeSet,
    k: Stretch,
    f: usize,
    budget: &Budget,
) -> Result<VerificationReport> {
    let n = g.n();
    let mut report = VerificationReport::pass();
    for_each_fault_set(g.m(), f, budget, |faults| {
        let faulty = fault_mask(g.m(), faults);
        for u in 0..n {
            let in_g = distances_from(g, |e| !faulty.contains(e), u);
            let in_h = distances_from(g, |e| h.contains(e) && !faulty.contains(e), u);
            for v in u + 1..n {
                let violated = match (in_h[v], in_g[v]) {
                    (_, None) => false,
                    (None, Some(_)) => true,
                    (Some(dh), Some(dg)) => k.exceeded_by(dh, dg),
                };
                if violated {
                    let as_length = |d: Option<i128>| match d {
                        Some(d) => Length::Finite(g.from_units(d)),
                        None => Length::Infinite,
                    };
                    report = VerificationReport::fail(Witness::Stretch {
                        fault_edge_ids: faults.to_vec(),
                        u,
                        v,
                        dist_h: as_length(in_h[v]),
                        dist_g: as_length(in_g[v]),
                    });
                    return ControlFlow::Break(());
                }
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(report)
}

/// Edges `e` for which `G \ {e}` is not an `f`-EFT `k`-spanner of `G`.
///
/// Adding edges never hurts a spanner, so every `f`-EFT `k`-spanner of `G`
/// contains all of them.
pub fn forced_edges(g: &WeightedMultigraph, k: Stretch, f: usize, budget: &Budget) -> Result<Vec<EdgeId>> {
    let all = g.all_edges();
    let mut forced = Vec::new();
    for e in 0..g.m() {
        if !is_ft_spanner(g, &all.without(e), k, f, budget)?.passed() {
            forced.push(e);
        }
    }
    Ok(forced)
}

/// Re-derives a stretch witness with fresh point-to-point distance queries.
pub fn replay_stretch_witness(
    g: &WeightedMultigraph,
    h: &EdgeSet,
    k: Stretch,
    witness: &Witness,
) -> bool {
    let Witness::Stretch {
        fault_edge_ids,
        u,
        v,
        ..
    } = witness
    else {
        return false;
    };
    let faulty = fault_mask(g.m(), fault_edge_ids);
    let rest = faulty.complement();
    let (Ok(dg), Ok(dh)) = (
        dist(g, &rest, *u, *v),
        dist(g, &h.intersection(&rest), *u, *v),
    ) else {
        return false;
    };
    match (dh, dg) {
        (_, Length::Infinite) => false,
        (Length::Infinite, Length::Finite(_)) => true,
        (Length::Finite(a), Length::Finite(b)) => a > k.value() * b,
    }
}

fn component_labels(g: &WeightedMultigraph, keep: impl Fn(EdgeId) -> bool) -> Vec<usize> {
    let mut ds = DisjointSets::new(g.n());
    for e in g.edges() {
        if keep(e.id) {
            ds.union(e.u, e.v);
        }
    }
    ds.canonical_labels()
}

/// Checks that `Q\F` and `G\F` have identical components for every `F` of
/// at most `f` edges of `G`.
pub fn is_preserver_bruteforce(
    g: &WeightedMultigraph,
    q: &EdgeSet,
    f: usize,
    budget: &Budget,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::pass();
    for_each_fault_set(g.m(), f, budget, |faults| {
        let faulty = fault_mask(g.m(), faults);
        let in_g = component_labels(g, |e| !faulty.contains(e));
        let in_q = component_labels(g, |e| q.contains(e) && !faulty.contains(e));
        if in_g != in_q {
            // Some vertex is cut off in Q\F from a G\F neighbour's component.
            let (u, v) = (0..g.n())
                .flat_map(|u| (u + 1..g.n()).map(move |v| (u, v)))
                .find(|&(u, v)| in_g[u] == in_g[v] && in_q[u] != in_q[v])
                .expect("partitions differ, and Q is a subgraph of G");
            report = VerificationReport::fail(Witness::Disconnection {
                fault_edge_ids: faults.to_vec(),
                u,
                v,
            });
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    Ok(report)
}

/// Orders the edges of a simple cycle as a closed walk.
pub(crate) fn walk_order(g: &WeightedMultigraph, cycle: &EdgeSet) -> Vec<EdgeId> {
    let mut remaining: Vec<EdgeId> = cycle.to_vec();
    let mut walk = vec![remaining.remove(0)];
    let (_, mut at) = g.endpoints(walk[0]);
    while !remaining.is_empty() {
        let pos = remaining
            .iter()
            .position(|&e| {
                let (a, b) = g.endpoints(e);
                a == at || b == at
            })
            .expect("edge set is a simple cycle");
        let e = remaining.remove(pos);
        at = g.edge(e).other(at);
        walk.push(e);
    }
    walk
}

fn is_simple_cycle(g: &WeightedMultigraph, set: &EdgeSet, degree: &mut [u32]) -> bool {
    if set.len() < 2 {
        return false;
    }
    degree.iter_mut().for_each(|d| *d = 0);
    let mut ds = DisjointSets::new(g.n());
    let mut touched = 0usize;
    for e in set.iter() {
        let (a, b) = g.endpoints(e);
        for x in [a, b] {
            degree[x] += 1;
            if degree[x] == 1 {
                touched += 1;
            }
            if degree[x] > 2 {
                return false;
            }
        }
        ds.union(a, b);
    }
    // Every touched vertex has degree 2; one component means one cycle.
    let edges = set.len();
    if edges != touched {
        return false;
    }
    let first = g.endpoints(set.iter().next().unwrap()).0;
    set.iter().all(|e| ds.same(g.endpoints(e).0, first))
}

/// Enumerates every simple cycle of `view` (parallel pairs included) as an
/// element of the cycle space.
pub fn for_each_simple_cycle(
    g: &WeightedMultigraph,
    view: &EdgeSet,
    budget: &Budget,
    mut visit: impl FnMut(&EdgeSet) -> ControlFlow<()>,
) -> Result<()> {
    let m = g.m();
    let mut ds = DisjointSets::new(g.n());
    let mut tree_adj: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); g.n()];
    let mut chords = Vec::new();
    for e in view.iter() {
        let (a, b) = g.endpoints(e);
        if ds.union(a, b) {
            tree_adj[a].push((b, e));
            tree_adj[b].push((a, e));
        } else {
            chords.push(e);
        }
    }
    let rank = chords.len();
    if rank as u32 > budget.max_cycle_rank {
        return Err(Error::BudgetExceeded {
            what: "cycle-space enumeration",
            needed: rank as u128,
            limit: budget.max_cycle_rank as u128,
        });
    }
    // Rooted spanning forest for fundamental-cycle paths.
    let n = g.n();
    let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &(y, e) in &tree_adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, e));
                    depth[y] = depth[x] + 1;
                    stack.push(y);
                }
            }
        }
    }
    let fundamental: Vec<EdgeSet> = chords
        .iter()
        .map(|&c| {
            let mut set = EdgeSet::from_ids(m, [c]);
            let (mut a, mut b) = g.endpoints(c);
            while a != b {
                if depth[a] < depth[b] {
                    std::mem::swap(&mut a, &mut b);
                }
                let (p, e) = parent[a].expect("non-root has a parent");
                set.insert(e);
                a = p;
            }
            set
        })
        .collect();

    let mut current = EdgeSet::new(m);
    let mut degree = vec![0u32; n];
    // Gray code walk over the nonzero combinations.
    for step in 1u64..(1u64 << rank) {
        let flip = step.trailing_zeros() as usize;
        for e in fundamental[flip].iter() {
            if current.contains(e) {
                current.remove(e);
            } else {
                current.insert(e);
            }
        }
        if is_simple_cycle(g, &current, &mut degree) && visit(&current).is_break() {
            break;
        }
    }
    Ok(())
}

/// Minimum normalized weight over explicitly enumerated cycles.
pub fn weighted_girth_bruteforce(
    g: &WeightedMultigraph,
    view: &EdgeSet,
    budget: &Budget,
) -> Result<WeightedGirth> {
    let mut best: Option<(crate::graph::Rational, EdgeSet)> = None;
    for_each_simple_cycle(g, view, budget, |cycle| {
        let total = g.units_of(cycle);
        let max = cycle.iter().map(|e| g.units(e)).max().unwrap();
        let value = crate::graph::Rational::new(total, max);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, cycle.clone()));
        }
        ControlFlow::Continue(())
    })?;
    Ok(match best {
        Some((value, cycle)) => WeightedGirth {
            value: Length::Finite(value),
            witness: Some(CycleWitness::new(g, walk_order(g, &cycle))),
        },
        None => WeightedGirth {
            value: Length::Infinite,
            witness: None,
        },
    })
}

/// Minimum-weight `f`-EFT connectivity preserver by trying every edge subset;
/// ties go to the lexicographically smallest id set.
pub fn min_preserver_bruteforce(g: &WeightedMultigraph, f: usize, budget: &Budget) -> Result<EdgeSet> {
    let m = g.m();
    if m as u32 > budget.max_subset_edges || m >= 64 {
        return Err(Error::BudgetExceeded {
            what: "edge-subset enumeration",
            needed: m as u128,
            limit: budget.max_subset_edges as u128,
        });
    }
    let mut best: Option<(i128, EdgeSet)> = None;
    for mask in 0u64..(1u64 << m) {
        let units: i128 = (0..m).filter(|&e| mask >> e & 1 == 1).map(|e| g.units(e)).sum();
        if best.as_ref().is_some_and(|(w, _)| units > *w) {
            continue;
        }
        let candidate = EdgeSet::from_ids(m, (0..m).filter(|&e| mask >> e & 1 == 1));
        if let Some((w, set)) = &best {
            if units == *w && candidate.lex_cmp(set).is_ge() {
                continue;
            }
        }
        if is_preserver_bruteforce(g, &candidate, f, budget)?.passed() {
            best = Some((units, candidate));
        }
    }
    Ok(best.expect("the whole edge set is always a preserver").1)
}
