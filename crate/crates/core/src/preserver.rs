//! Edge-fault-tolerant connectivity preservers and competitive lightness.
//!
//! `Q ⊆ G` is an `f`-EFT connectivity preserver when `Q \ F` and `G \ F`
//! have the same components for every `|F| <= f`. Locally: every edge of
//! `G` outside `Q` must have endpoints joined by `f + 1` edge-disjoint paths
//! in `Q`. A smaller cut in `Q` plus that edge's absence is a violating fault
//! set; conversely, if all outside edges are well connected, any `G \ F`
//! path can be rerouted through `Q \ F` edge by edge.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    edge_connectivity, is_connected, mst, EdgeId, EdgeSet, Rational, VertexId, WeightedMultigraph,
};
use crate::oracles::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreserverMode {
    Exact,
    Heuristic,
}

impl fmt::Display for PreserverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreserverMode::Exact => "exact",
            PreserverMode::Heuristic => "heuristic",
        })
    }
}

impl FromStr for PreserverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(PreserverMode::Exact),
            "heuristic" => Ok(PreserverMode::Heuristic),
            other => Err(Error::InvalidParameter(format!(
                "preserver mode must be `exact` or `heuristic`, got `{other}`"
            ))),
        }
    }
}

fn pairs_of(g: &WeightedMultigraph, set: &EdgeSet) -> Vec<(VertexId, VertexId)> {
    set.iter().map(|e| g.endpoints(e)).collect()
}

fn well_connected(g: &WeightedMultigraph, pairs: &[(VertexId, VertexId)], e: EdgeId, need: usize) -> bool {
    let (u, v) = g.endpoints(e);
    edge_connectivity(g.n(), pairs, u, v, Some(need)) >= need
}

/// Local test: every edge of `G \ Q` has `λ_Q(u, v) >= f + 1`.
pub fn is_preserver_fast(g: &WeightedMultigraph, q: &EdgeSet, f: usize) -> bool {
    let pairs = pairs_of(g, q);
    (0..g.m())
        .filter(|&e| !q.contains(e))
        .all(|e| well_connected(g, &pairs, e, f + 1))
}

/// Reverse-delete: scan heaviest first and drop an edge whenever the rest
/// stays a preserver. Feasibility is upward closed, so a single pass already
/// leaves an inclusion-minimal set.
pub fn heuristic_preserver(g: &WeightedMultigraph, f: usize) -> EdgeSet {
    let mut keep = g.all_edges();
    for e in g.ids_by_weight().into_iter().rev() {
        let candidate = keep.without(e);
        if is_preserver_fast(g, &candidate, f) {
            keep = candidate;
        }
    }
    keep
}

struct Search<'a> {
    g: &'a WeightedMultigraph,
    need: usize,
    best_units: i128,
    best: EdgeSet,
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    /// `undecided` is in branching order (heaviest first).
    fn explore(&mut self, undecided: &[EdgeId], included: &EdgeSet, excluded: &EdgeSet) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::BudgetExceeded {
                what: "preserver branch-and-bound",
                needed: self.nodes as u128,
                limit: self.limit as u128,
            });
        }
        let g = self.g;
        let available = excluded.complement();
        let pairs = pairs_of(g, &available);
        // Excluded edges can only lose connectivity further down.
        if !excluded.iter().all(|e| well_connected(g, &pairs, e, self.need)) {
            return Ok(());
        }
        // An undecided edge whose absence already starves its own endpoints
        // belongs to every feasible completion.
        let mut chosen = included.clone();
        let mut free = Vec::new();
        for &e in undecided {
            let without: Vec<_> = available
                .iter()
                .filter(|&x| x != e)
                .map(|x| g.endpoints(x))
                .collect();
            if well_connected(g, &without, e, self.need) {
                free.push(e);
            } else {
                chosen.insert(e);
            }
        }
        let bound = g.units_of(&chosen);
        if bound > self.best_units {
            return Ok(());
        }
        if bound == self.best_units {
            // Weights are positive, so only the bare forced completion can tie.
            if chosen.lex_cmp(&self.best).is_lt() && is_preserver_fast(g, &chosen, self.need - 1) {
                self.best = chosen;
            }
            return Ok(());
        }
        let Some((&next, rest)) = free.split_first() else {
            // `chosen` is everything still available, and the excluded-edge
            // check above proved it feasible.
            self.best_units = bound;
            self.best = chosen;
            return Ok(());
        };
        self.explore(rest, &chosen, &excluded.with(next))?;
        self.explore(rest, &chosen.with(next), excluded)
    }
}

/// Exact minimum-weight `f`-EFT connectivity preserver by branch and bound;
/// among optimal sets the lexicographically smallest id set wins.
pub fn min_weight_preserver(g: &WeightedMultigraph, f: usize, budget: &Budget) -> Result<EdgeSet> {
    let seed = heuristic_preserver(g, f);
    let mut order = g.ids_by_weight();
    order.reverse();
    let mut search = Search {
        g,
        need: f + 1,
        best_units: g.units_of(&seed),
        best: seed,
        nodes: 0,
        limit: budget.max_search_nodes,
    };
    search.explore(&order, &g.no_edges(), &g.no_edges())?;
    Ok(search.best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preserver {
    pub edges: EdgeSet,
    pub mode: PreserverMode,
    /// Set when exact mode was requested but ran out of budget.
    pub fell_back: bool,
}

/// Preserver in the requested mode, propagating budget errors.
pub fn preserver(g: &WeightedMultigraph, f: usize, mode: PreserverMode, budget: &Budget) -> Result<Preserver> {
    let edges = match mode {
        PreserverMode::Exact => min_weight_preserver(g, f, budget)?,
        PreserverMode::Heuristic => heuristic_preserver(g, f),
    };
    Ok(Preserver {
        edges,
        mode,
        fell_back: false,
    })
}

/// Like [`preserver`], but an exact run that exceeds its budget falls back to
/// the heuristic and says so.
pub fn preserver_or_fallback(
    g: &WeightedMultigraph,
    f: usize,
    mode: PreserverMode,
    budget: &Budget,
) -> Result<Preserver> {
    match preserver(g, f, mode, budget) {
        Err(err) if err.is_budget() => Ok(Preserver {
            edges: heuristic_preserver(g, f),
            mode: PreserverMode::Heuristic,
            fell_back: true,
        }),
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompetitiveLightness {
    pub f: usize,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub value: Rational,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub preserver_weight: Rational,
    pub mode: PreserverMode,
}

/// `ℓ_f(H | G) = w(H) / min_Q w(Q)` over `f`-EFT preservers `Q`, with the
/// denominator from the requested mode.
pub fn competitive_lightness(
    g: &WeightedMultigraph,
    h: &EdgeSet,
    f: usize,
    mode: PreserverMode,
    budget: &Budget,
) -> Result<CompetitiveLightness> {
    if !is_connected(g, &g.all_edges()) {
        return Err(Error::Disconnected);
    }
    let q = preserver(g, f, mode, budget)?.edges;
    let denominator = g.units_of(&q);
    if denominator == 0 {
        return Err(Error::InvalidParameter(
            "competitive lightness is undefined for a graph without edges".into(),
        ));
    }
    Ok(CompetitiveLightness {
        f,
        value: Rational::new(g.units_of(h), denominator),
        preserver_weight: g.weight_of(&q),
        mode,
    })
}

/// `w(mst(G))`, the `f = 0` preserver weight.
pub fn mst_weight(g: &WeightedMultigraph) -> Rational {
    g.weight_of(&mst(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{is_preserver_bruteforce, min_preserver_bruteforce};
    use proptest::prelude::*;

    fn triangle(w: i64) -> WeightedMultigraph {
        WeightedMultigraph::with_int_weights(3, &[(0, 1, 1), (0, 2, 1), (1, 2, w)]).unwrap()
    }

    fn cycle4() -> WeightedMultigraph {
        WeightedMultigraph::with_int_weights(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap()
    }

    #[test]
    fn fast_test_on_the_triangle() {
        let g = triangle(10);
        assert!(is_preserver_fast(&g, &g.all_edges(), 5));
        assert!(is_preserver_fast(&g, &mst(&g), 0));
        assert!(!is_preserver_fast(&g, &mst(&g), 1));
    }

    #[test]
    fn exact_preserver_examples() {
        let budget = Budget::default();
        let g = triangle(10);
        assert_eq!(min_weight_preserver(&g, 0, &budget).unwrap(), mst(&g));
        assert_eq!(min_weight_preserver(&g, 1, &budget).unwrap(), g.all_edges());
        let g = cycle4();
        let q = min_weight_preserver(&g, 1, &budget).unwrap();
        assert_eq!(g.weight_of(&q), Rational::from_integer(4));
        assert_eq!(heuristic_preserver(&g, 1), g.all_edges());
    }

    #[test]
    fn heuristic_is_a_spanning_tree_at_level_zero() {
        let g = WeightedMultigraph::with_int_weights(
            4,
            &[(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 0, 4), (0, 2, 5)],
        )
        .unwrap();
        assert_eq!(heuristic_preserver(&g, 0), mst(&g));
    }

    #[test]
    fn competitive_lightness_examples() {
        let budget = Budget::default();
        let g = triangle(10);
        let one = Rational::from_integer(1);
        assert_eq!(
            competitive_lightness(&g, &mst(&g), 0, PreserverMode::Exact, &budget).unwrap().value,
            one
        );
        let l = competitive_lightness(&g, &g.all_edges(), 1, PreserverMode::Exact, &budget).unwrap();
        assert_eq!(l.value, one);
        assert_eq!(l.preserver_weight, Rational::from_integer(12));
    }

    #[test]
    fn budget_exhaustion_falls_back() {
        let g = cycle4();
        let tiny = Budget {
            max_search_nodes: 0,
            ..Budget::default()
        };
        assert!(min_weight_preserver(&g, 1, &tiny).unwrap_err().is_budget());
        let p = preserver_or_fallback(&g, 1, PreserverMode::Exact, &tiny).unwrap();
        assert!(p.fell_back);
        assert_eq!(p.mode, PreserverMode::Heuristic);
    }

    #[test]
    fn mode_round_trips_through_text() {
        for mode in [PreserverMode::Exact, PreserverMode::Heuristic] {
            assert_eq!(mode.to_string().parse::<PreserverMode>().unwrap(), mode);
        }
        assert!("lp".parse::<PreserverMode>().is_err());
    }

    fn small_graph() -> impl Strategy<Value = WeightedMultigraph> {
        (2usize..=6).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, 1i64..=4), 1..=9).prop_map(move |raw| {
                let edges: Vec<_> = raw.into_iter().filter(|(u, v, _)| u != v).collect();
                WeightedMultigraph::with_int_weights(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn fast_test_agrees_with_brute_force(g in small_graph(), mask in any::<u16>(), f in 0usize..=3) {
            let q = EdgeSet::from_ids(g.m(), (0..g.m()).filter(|&e| mask >> e & 1 == 1));
            let brute = is_preserver_bruteforce(&g, &q, f, &Budget::default()).unwrap().passed();
            prop_assert_eq!(is_preserver_fast(&g, &q, f), brute);
        }

        #[test]
        fn exact_matches_enumeration_and_heuristic_is_feasible(g in small_graph(), f in 0usize..=2) {
            let budget = Budget::default();
            let exact = min_weight_preserver(&g, f, &budget).unwrap();
            let brute = min_preserver_bruteforce(&g, f, &budget).unwrap();
            prop_assert_eq!(&exact, &brute);
            let heuristic = heuristic_preserver(&g, f);
            prop_assert!(is_preserver_fast(&g, &heuristic, f));
            prop_assert!(g.units_of(&heuristic) >= g.units_of(&exact));
            for e in heuristic.iter() {
                prop_assert!(!is_preserver_fast(&g, &heuristic.without(e), f));
            }
        }
    }
}
