//! The fault-tolerant greedy spanner, seeded with a connectivity preserver.
//!
//! Starting from a preserver `Q` at the competition level, the remaining
//! edges are scanned by `(weight, id)`; an edge `(u, v)` is added exactly
//! when some `F ⊆ E(H)` with `|F| <= f` pushes `dist_{H\F}(u, v)` above
//! `k * w(u, v)`. The witness `F_e` of every added edge is kept: the pairs
//! `(e, e')`, `e' ∈ F_e`, form an `f`-capped blocking set that hits every
//! light cycle whose heaviest edge lies outside `Q`.

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    format_rational, parse_rational, shortest_path, CycleWitness, EdgeId, EdgeSet, Rational, Stretch,
    VertexId, WeightedMultigraph,
};
use crate::oracles::{for_each_simple_cycle, walk_order, Budget, ConditionWitness, VerificationReport};
use crate::preserver::{preserver_or_fallback, PreserverMode};

/// Connectivity level of the seeding preserver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Competition {
    /// Level `2f`.
    TwoF,
    /// Level `⌊(2 + η) f⌋`, `η > 0`.
    TwoPlusEta(Rational),
}

impl Competition {
    pub fn eta(eta: Rational) -> Result<Self> {
        if eta <= Rational::zero() {
            return Err(Error::InvalidParameter(format!(
                "eta must be positive, got {}",
                format_rational(&eta)
            )));
        }
        Ok(Competition::TwoPlusEta(eta))
    }

    pub fn level(&self, f: usize) -> usize {
        match self {
            Competition::TwoF => 2 * f,
            Competition::TwoPlusEta(eta) => ((Rational::from_integer(2) + eta) * Rational::from_integer(f as i128))
                .floor()
                .to_integer()
                .to_usize()
                .expect("level fits in usize"),
        }
    }
}

impl fmt::Display for Competition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Competition::TwoF => f.write_str("2f"),
            Competition::TwoPlusEta(eta) => write!(f, "(2+{})f", format_rational(eta)),
        }
    }
}

impl FromStr for Competition {
    type Err = Error;

    /// `2f`, or `2+eta` given as `2+<rational>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "2f" {
            return Ok(Competition::TwoF);
        }
        s.strip_prefix("2+")
            .and_then(parse_rational)
            .ok_or_else(|| Error::InvalidParameter(format!("competition must be `2f` or `2+<eta>`, got `{s}`")))
            .and_then(Competition::eta)
    }
}

/// Ordered pairs `(e, e')`: `e'` was faulted in the witness that admitted `e`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BlockingSet {
    pub f: usize,
    pub pairs: Vec<(EdgeId, EdgeId)>,
}

impl BlockingSet {
    pub fn new(f: usize) -> Self {
        BlockingSet { f, pairs: Vec::new() }
    }

    /// Partners `e'` with `(e, e')` in the set.
    pub fn partners(&self, e: EdgeId) -> impl Iterator<Item = EdgeId> + '_ {
        self.pairs.iter().filter(move |p| p.0 == e).map(|p| p.1)
    }

    pub fn partner_set(&self, m: usize, e: EdgeId) -> EdgeSet {
        EdgeSet::from_ids(m, self.partners(e))
    }

    pub fn is_capped(&self) -> bool {
        let mut firsts: Vec<EdgeId> = self.pairs.iter().map(|p| p.0).collect();
        firsts.sort_unstable();
        firsts.chunk_by(|a, b| a == b).all(|run| run.len() <= self.f)
    }
}

/// `k * w` expressed in the graph's length units.
fn threshold(g: &WeightedMultigraph, k: Stretch, w: Rational) -> Rational {
    k.value() * w * Rational::from_integer(g.scale())
}

/// Colex order on equal-size sorted sets: compare the largest elements first.
fn colex_less(a: &[EdgeId], b: &[EdgeId]) -> bool {
    a.iter().rev().lt(b.iter().rev())
}

/// The colex-smallest minimum-cardinality `F ⊆ E(H)`, `|F| <= f`, with
/// `dist_{H\F}(u, v) > k * w_uv`, or `None`.
///
/// Any such `F` meets every `u`-`v` path of length at most `k * w_uv`, so it
/// is found by repeatedly taking a shortest short path and branching on
/// which of its edges to fault. Every minimum witness is reached this way.
#[allow(clippy::too_many_arguments)]
pub fn find_blocking_fault_set(
    g: &WeightedMultigraph,
    h: &EdgeSet,
    u: VertexId,
    v: VertexId,
    k: Stretch,
    f: usize,
    w_uv: Rational,
    budget: &Budget,
) -> Result<Option<Vec<EdgeId>>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let limit = threshold(g, k, w_uv);
    let cutoff = limit.floor().to_integer();
    let short_path = |faults: &[EdgeId]| -> Option<Vec<EdgeId>> {
        shortest_path(g, |e| h.contains(e) && !faults.contains(&e), u, v, Some(cutoff))
            .map(|(_, path)| path)
    };
    let mut nodes = 0u64;
    for size in 0..=f {
        let mut found: Option<Vec<EdgeId>> = None;
        let mut seen: HashSet<Vec<EdgeId>> = HashSet::new();
        let mut stack = vec![Vec::new()];
        while let Some(faults) = stack.pop() {
            nodes += 1;
            if nodes > budget.max_search_nodes {
                return Err(Error::BudgetExceeded {
                    what: "blocking fault-set search",
                    needed: nodes as u128,
                    limit: budget.max_search_nodes as u128,
                });
            }
            match short_path(&faults) {
                None => {
                    if found.as_ref().is_none_or(|best| colex_less(&faults, best)) {
                        found = Some(faults);
                    }
                }
                Some(path) if faults.len() < size => {
                    for e in path {
                        let mut next = faults.clone();
                        let at = next.partition_point(|&x| x < e);
                        next.insert(at, e);
                        if seen.insert(next.clone()) {
                            stack.push(next);
                        }
                    }
                }
                Some(_) => {}
            }
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyOutcome {
    pub spanner: EdgeSet,
    pub preserver: EdgeSet,
    pub blocking: BlockingSet,
    /// `(e, F_e)` for every edge added outside the preserver, in scan order.
    pub witnesses: Vec<(EdgeId, Vec<EdgeId>)>,
    pub level: usize,
    pub preserver_mode: PreserverMode,
    pub preserver_fell_back: bool,
}

/// Spanner, blocking set and per-edge fault witnesses of a greedy scan.
pub type GreedyScan = (EdgeSet, BlockingSet, Vec<(EdgeId, Vec<EdgeId>)>);

/// Greedy scan seeded with a given preserver `Q`.
pub fn greedy_from_preserver(
    g: &WeightedMultigraph,
    q: &EdgeSet,
    k: Stretch,
    f: usize,
    budget: &Budget,
) -> Result<GreedyScan> {
    let mut h = q.clone();
    let mut blocking = BlockingSet::new(f);
    let mut witnesses = Vec::new();
    for e in g.ids_by_weight() {
        if q.contains(e) {
            continue;
        }
        let (u, v) = g.endpoints(e);
        if let Some(faults) = find_blocking_fault_set(g, &h, u, v, k, f, g.weight(e), budget)? {
            h.insert(e);
            blocking.pairs.extend(faults.iter().map(|&x| (e, x)));
            witnesses.push((e, faults));
        }
    }
    Ok((h, blocking, witnesses))
}

/// The full greedy: preserver at the competition level, then the scan.
pub fn build_greedy(
    g: &WeightedMultigraph,
    k: Stretch,
    f: usize,
    competition: Competition,
    mode: PreserverMode,
    budget: &Budget,
) -> Result<GreedyOutcome> {
    let level = competition.level(f);
    let q = preserver_or_fallback(g, level, mode, budget)?;
    let (spanner, blocking, witnesses) = greedy_from_preserver(g, &q.edges, k, f, budget)?;
    Ok(GreedyOutcome {
        spanner,
        preserver: q.edges,
        blocking,
        witnesses,
        level,
        preserver_mode: q.mode,
        preserver_fell_back: q.fell_back,
    })
}

/// The non-faulty greedy spanner: add `(u, v)` iff `dist_H(u, v) > k * w`.
pub fn classical_greedy(g: &WeightedMultigraph, k: Stretch) -> EdgeSet {
    let mut h = g.no_edges();
    for e in g.ids_by_weight() {
        let (u, v) = g.endpoints(e);
        let cutoff = threshold(g, k, g.weight(e)).floor().to_integer();
        if shortest_path(g, |x| h.contains(x), u, v, Some(cutoff)).is_none() {
            h.insert(e);
        }
    }
    h
}

/// Checks the blocking-set guarantee on `H`: `B` is `f`-capped, no first
/// element lies in `Q`, and every cycle of `H` with normalized weight at
/// most `k + 1` that has a maximum-weight edge outside `Q` contains both
/// edges of some pair.
pub fn check_blocking_set(
    g: &WeightedMultigraph,
    b: &BlockingSet,
    h: &EdgeSet,
    q: &EdgeSet,
    k: Stretch,
    budget: &Budget,
) -> Result<VerificationReport> {
    if !b.is_capped() {
        let e = b
            .pairs
            .iter()
            .map(|p| p.0)
            .find(|&e| b.partners(e).count() > b.f)
            .expect("some first element exceeds the cap");
        return Ok(ConditionWitness::new("cap").edge(e).into_report());
    }
    if let Some(&(e, _)) = b.pairs.iter().find(|p| q.contains(p.0)) {
        return Ok(ConditionWitness::new("first-in-preserver").edge(e).into_report());
    }
    let bound = k.value() + Rational::from_integer(1);
    let mut report = VerificationReport::pass();
    for_each_simple_cycle(g, h, budget, |cycle| {
        let max = cycle.iter().map(|e| g.units(e)).max().unwrap();
        let normalized = Rational::new(g.units_of(cycle), max);
        let exposed = cycle.iter().any(|e| g.units(e) == max && !q.contains(e));
        let blocked = b.pairs.iter().any(|&(x, y)| cycle.contains(x) && cycle.contains(y));
        if normalized <= bound && exposed && !blocked {
            let walk = walk_order(g, cycle);
            report = ConditionWitness::new("unblocked-cycle")
                .cycle(Some(CycleWitness::new(g, walk)))
                .into_report();
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{mst, weighted_girth, Length};
    use crate::oracles::{for_each_fault_set, is_ft_spanner};
    use proptest::prelude::*;

    fn triangle(w: i64) -> WeightedMultigraph {
        WeightedMultigraph::with_int_weights(3, &[(0, 1, 1), (0, 2, 1), (1, 2, w)]).unwrap()
    }

    fn k(x: i128) -> Stretch {
        Stretch::integer(x).unwrap()
    }

    /// Raw enumeration: first witness by size, colex within size.
    fn brute_witness(
        g: &WeightedMultigraph,
        h: &EdgeSet,
        u: usize,
        v: usize,
        k: Stretch,
        f: usize,
        w: Rational,
    ) -> Option<Vec<EdgeId>> {
        let ids = h.to_vec();
        let limit = threshold(g, k, w);
        let mut out = None;
        for_each_fault_set(ids.len(), f, &Budget::default(), |idx| {
            let faults: Vec<EdgeId> = idx.iter().map(|&i| ids[i]).collect();
            let d = crate::graph::shortest_units(g, |e| h.contains(e) && !faults.contains(&e), u, v, None);
            if d.is_none_or(|d| Rational::from_integer(d) > limit) {
                out = Some(faults);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })
        .unwrap();
        out
    }

    #[test]
    fn competition_levels_and_parsing() {
        assert_eq!(Competition::TwoF.level(3), 6);
        let eta = "2+1/2".parse::<Competition>().unwrap();
        assert_eq!(eta, Competition::TwoPlusEta(Rational::new(1, 2)));
        assert_eq!(eta.level(3), 7);
        assert_eq!(eta.level(1), 2);
        assert!("2+0".parse::<Competition>().is_err());
        assert!("3f".parse::<Competition>().is_err());
        assert_eq!("2f".parse::<Competition>().unwrap().to_string(), "2f");
    }

    #[test]
    fn triangle_fault_witness() {
        let g = triangle(10);
        let h = EdgeSet::from_ids(3, [0, 1]);
        let w = g.weight(2);
        let budget = Budget::default();
        assert_eq!(
            find_blocking_fault_set(&g, &h, 1, 2, k(3), 1, w, &budget).unwrap(),
            Some(vec![0])
        );
        // Without faults the two-hop path is short enough.
        assert_eq!(find_blocking_fault_set(&g, &h, 1, 2, k(3), 0, w, &budget).unwrap(), None);
        // f = 0 on an empty view: the empty fault set already works.
        assert_eq!(
            find_blocking_fault_set(&g, &g.no_edges(), 1, 2, k(3), 0, w, &budget).unwrap(),
            Some(vec![])
        );
    }

    #[test]
    fn disjoint_short_paths_resist_f_faults() {
        // Three parallel unit edges between 0 and 1: two faults leave one.
        let g = WeightedMultigraph::with_int_weights(2, &[(0, 1, 1), (0, 1, 1), (0, 1, 1), (0, 1, 1)]).unwrap();
        let h = EdgeSet::from_ids(4, [0, 1, 2]);
        let budget = Budget::default();
        assert_eq!(
            find_blocking_fault_set(&g, &h, 0, 1, k(1), 2, g.weight(3), &budget).unwrap(),
            None
        );
        assert_eq!(
            find_blocking_fault_set(&g, &h, 0, 1, k(1), 3, g.weight(3), &budget).unwrap(),
            Some(vec![0, 1, 2])
        );
    }

    #[test]
    fn triangle_greedy_keeps_everything() {
        let g = triangle(10);
        for kk in [1, 3, 5, 100] {
            let out = build_greedy(&g, k(kk), 1, Competition::TwoF, PreserverMode::Exact, &Budget::default())
                .unwrap();
            assert_eq!(out.spanner, g.all_edges());
            assert_eq!(out.preserver, g.all_edges());
            assert!(out.blocking.pairs.is_empty());
        }
    }

    #[test]
    fn non_faulty_run_is_the_classical_greedy() {
        let g = WeightedMultigraph::with_int_weights(
            5,
            &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1), (0, 2, 3), (1, 3, 2), (0, 3, 5)],
        )
        .unwrap();
        let out = build_greedy(&g, k(3), 0, Competition::TwoF, PreserverMode::Exact, &Budget::default()).unwrap();
        assert_eq!(out.preserver, mst(&g));
        assert_eq!(out.spanner, classical_greedy(&g, k(3)));
        assert!(out.blocking.pairs.is_empty());
        assert!(weighted_girth(&g, &out.spanner).value > Length::Finite(Rational::from_integer(4)));
    }

    #[test]
    fn empty_blocking_set_fails_on_a_light_cycle() {
        // A unit 4-cycle seeded with a path preserver: the greedy must add the
        // closing edge with a witness, and dropping B exposes the cycle.
        let g = WeightedMultigraph::with_int_weights(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
        let q = EdgeSet::from_ids(4, [0, 1, 2]);
        let budget = Budget::default();
        let (h, b, _) = greedy_from_preserver(&g, &q, k(3), 1, &budget).unwrap();
        assert_eq!(h, g.all_edges());
        assert_eq!(b.pairs.len(), 1);
        assert!(check_blocking_set(&g, &b, &h, &q, k(3), &budget).unwrap().passed());
        let report = check_blocking_set(&g, &BlockingSet::new(1), &h, &q, k(3), &budget).unwrap();
        assert!(!report.passed());
        let uncapped = BlockingSet {
            f: 0,
            pairs: b.pairs.clone(),
        };
        assert!(!check_blocking_set(&g, &uncapped, &h, &q, k(3), &budget).unwrap().passed());
    }

    fn small_graph() -> impl Strategy<Value = WeightedMultigraph> {
        (2usize..=6).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, 1i64..=6), n..=10).prop_map(move |raw| {
                let edges: Vec<_> = raw.into_iter().filter(|(u, v, _)| u != v).collect();
                WeightedMultigraph::with_int_weights(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn path_branching_matches_enumeration(
            g in small_graph(),
            mask in any::<u16>(),
            f in 0usize..=2,
            kk in 1i128..=4,
            w in 1i128..=8,
        ) {
            prop_assume!(g.m() > 0);
            let h = EdgeSet::from_ids(g.m(), (0..g.m()).filter(|&e| mask >> e & 1 == 1));
            let (u, v) = g.endpoints(0);
            let w = Rational::from_integer(w);
            let fast = find_blocking_fault_set(&g, &h, u, v, k(kk), f, w, &Budget::default()).unwrap();
            prop_assert_eq!(fast, brute_witness(&g, &h, u, v, k(kk), f, w));
        }

        #[test]
        fn greedy_output_is_feasible_and_certified(g in small_graph(), f in 0usize..=2, kk in 1i128..=3) {
            let budget = Budget::default();
            let out = build_greedy(&g, k(kk), f, Competition::TwoF, PreserverMode::Exact, &budget).unwrap();
            prop_assert!(is_ft_spanner(&g, &out.spanner, k(kk), f, &budget).unwrap().passed());
            prop_assert!(out.preserver.is_subset(&out.spanner));
            prop_assert!(check_blocking_set(&g, &out.blocking, &out.spanner, &out.preserver, k(kk), &budget)
                .unwrap()
                .passed());
            // Rejected edges stay rejected against the final spanner.
            for e in (0..g.m()).filter(|&e| !out.spanner.contains(e)) {
                let (u, v) = g.endpoints(e);
                let again = find_blocking_fault_set(&g, &out.spanner, u, v, k(kk), f, g.weight(e), &budget).unwrap();
                prop_assert_eq!(again, None);
            }
            if f == 0 {
                prop_assert_eq!(&out.spanner, &classical_greedy(&g, k(kk)));
            }
        }
    }
}
