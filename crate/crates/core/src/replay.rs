//! Replay of the lightness analysis of the greedy spanner.
//!
//! Every edge of `E(H) \ Q` is assigned to host forests of a packing of `Q`
//! that avoid its blocking partners; `H[T]` is `T` plus the edges hosted by
//! `T`. Each host graph is then thinned by a random chain
//!
//! * `H1`: `T` plus each other edge of `H[T]` kept with probability `p`;
//! * `H2`: for every pair `(e, e')` of the blocking set with both edges in
//!   `H1`, drop `e`;
//! * `H3`: drop the edges of `T` outside the minimum spanning forest of `H2`.
//!
//! Whatever the coins, `H3` has weighted girth above `k + 1`, which makes
//! the chain a strong structural test of the greedy, its blocking set and
//! the packing together.

use std::fmt;
use std::str::FromStr;

use num_integer::Roots;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    min_spanning_forest, weighted_girth, EdgeId, EdgeSet, Length, Rational, Stretch, WeightedMultigraph,
};
use crate::greedy::{BlockingSet, GreedyOutcome};
use crate::oracles::{VerificationReport, Witness};
use crate::packing::{eligible_hosts, pack_forests, ForestPacking};
use crate::polytime::coin;

/// How non-preserver edges are assigned to host forests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HostMode {
    /// The lowest-index eligible forest hosts the edge.
    Single,
    /// Every eligible forest hosts the edge.
    AllEligible,
    /// Q-light edges go to every eligible forest, Q-heavy edges to a single
    /// one; the two kinds form separate host graphs.
    QLightHeavy,
}

impl fmt::Display for HostMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HostMode::Single => "single",
            HostMode::AllEligible => "all-eligible",
            HostMode::QLightHeavy => "q-light-heavy",
        })
    }
}

impl FromStr for HostMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(HostMode::Single),
            "all-eligible" => Ok(HostMode::AllEligible),
            "q-light-heavy" => Ok(HostMode::QLightHeavy),
            _ => Err(Error::InvalidParameter(format!(
                "host mode must be single, all-eligible or q-light-heavy, got `{s}`"
            ))),
        }
    }
}

/// Which hosted edges a host graph carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HostGroup {
    All,
    Light,
    Heavy,
}

impl fmt::Display for HostGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HostGroup::All => "all",
            HostGroup::Light => "light",
            HostGroup::Heavy => "heavy",
        })
    }
}

/// One `H[T]`: a packing forest plus the edges it hosts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HostGraph {
    pub forest_index: usize,
    pub group: HostGroup,
    pub tree: EdgeSet,
    pub hosted: Vec<EdgeId>,
    /// `T` together with the hosted edges.
    pub edges: EdgeSet,
    /// Sampling probability the chain uses for this group.
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub p: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HostAssignment {
    pub mode: HostMode,
    pub f: usize,
    /// Per non-preserver edge of `H`, its host forests (ascending edge id).
    pub hosts: Vec<(EdgeId, Vec<usize>)>,
    /// Q-heavy edges (only in mode `q-light-heavy`).
    pub heavy: Vec<EdgeId>,
    /// An edge is Q-heavy when it has at least this many partners in `Q`:
    /// `⌊f − √f⌋`.
    pub heavy_threshold: usize,
    /// Host count guaranteed to Q-light edges: `⌈√f⌉ + 1`.
    pub light_host_floor: usize,
    pub graphs: Vec<HostGraph>,
}

/// `⌈√x⌉`.
pub fn ceil_sqrt(x: usize) -> usize {
    let r = x.sqrt();
    if r * r < x {
        r + 1
    } else {
        r
    }
}

/// Chain probability for ordinary and Q-light host graphs: `1/f` (`1` when
/// `f = 0`).
pub fn chain_probability(f: usize) -> Rational {
    Rational::new(1, f.max(1) as i128)
}

/// Chain probability for Q-heavy host graphs: `1/max(⌈√f⌉, 2)`.
pub fn heavy_chain_probability(f: usize) -> Rational {
    Rational::new(1, ceil_sqrt(f).max(2) as i128)
}

/// Assigns every edge of `E(H) \ Q` to host forests of `packing`, avoiding
/// forests that contain one of its blocking partners, and builds the host
/// graphs. An edge without an eligible host is a hard error.
pub fn build_host_graphs(
    g: &WeightedMultigraph,
    h: &EdgeSet,
    q: &EdgeSet,
    b: &BlockingSet,
    packing: &ForestPacking,
    mode: HostMode,
) -> Result<HostAssignment> {
    let f = b.f;
    let heavy_threshold = f - ceil_sqrt(f);
    let light_host_floor = ceil_sqrt(f) + 1;
    let forests = packing.forests.len();
    let mut hosted: Vec<[Vec<EdgeId>; 2]> = vec![[Vec::new(), Vec::new()]; forests];
    let mut hosts = Vec::new();
    let mut heavy = Vec::new();
    for e in h.difference(q).iter() {
        let (u, v) = g.endpoints(e);
        let partners = b.partner_set(g.m(), e);
        let eligible = eligible_hosts(packing, u, v, &partners)?;
        if eligible.is_empty() {
            return Err(Error::NoEligibleHost { edge: e });
        }
        let is_heavy = mode == HostMode::QLightHeavy && partners.intersection(q).len() >= heavy_threshold;
        let chosen = match mode {
            HostMode::Single => vec![eligible[0]],
            HostMode::AllEligible => eligible,
            HostMode::QLightHeavy if is_heavy => vec![eligible[0]],
            HostMode::QLightHeavy => eligible,
        };
        if is_heavy {
            heavy.push(e);
        }
        for &t in &chosen {
            hosted[t][usize::from(is_heavy)].push(e);
        }
        hosts.push((e, chosen));
    }

    let groups: &[HostGroup] = match mode {
        HostMode::QLightHeavy => &[HostGroup::Light, HostGroup::Heavy],
        _ => &[HostGroup::All],
    };
    let mut graphs = Vec::new();
    for (t, lists) in hosted.into_iter().enumerate() {
        let tree = packing.forest_set(g, t);
        for &group in groups {
            let (list, p) = match group {
                HostGroup::Heavy => (&lists[1], heavy_chain_probability(f)),
                _ => (&lists[0], chain_probability(f)),
            };
            let mut edges = tree.clone();
            list.iter().for_each(|&e| edges.insert(e));
            graphs.push(HostGraph {
                forest_index: t,
                group,
                tree: tree.clone(),
                hosted: list.clone(),
                edges,
                p,
            });
        }
    }
    Ok(HostAssignment {
        mode,
        f,
        hosts,
        heavy,
        heavy_threshold,
        light_host_floor,
        graphs,
    })
}

/// The three stages of one chain draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub h1: EdgeSet,
    pub h2: EdgeSet,
    pub h3: EdgeSet,
}

/// Draws `H1 ⊇ H2 ⊇ H3` from `HT ⊇ T`. Coins are drawn for the edges of
/// `HT \ T` in ascending id order.
pub fn subsample_chain(
    g: &WeightedMultigraph,
    ht: &EdgeSet,
    t: &EdgeSet,
    b: &BlockingSet,
    p: Rational,
    rng: &mut ChaCha8Rng,
) -> Chain {
    let mut h1 = t.clone();
    for e in ht.difference(t).iter() {
        if coin(rng, p) {
            h1.insert(e);
        }
    }
    let mut h2 = h1.clone();
    for &(e, e2) in &b.pairs {
        if h1.contains(e) && h1.contains(e2) {
            h2.remove(e);
        }
    }
    let kept = min_spanning_forest(g, &h2);
    let h3 = h2.difference(&t.difference(&kept));
    Chain { h1, h2, h3 }
}

/// Passes iff `H3` has weighted girth above `k + 1`; a failure carries the
/// lightest cycle.
pub fn check_chain_girth(g: &WeightedMultigraph, h3: &EdgeSet, k: Stretch) -> VerificationReport {
    let girth = weighted_girth(g, h3);
    let bound = k.value() + Rational::one();
    match girth.value {
        Length::Finite(value) if value <= bound => {
            VerificationReport::fail(Witness::Cycle(girth.witness.expect("finite girth has a cycle")))
        }
        _ => VerificationReport::pass(),
    }
}

/// The random stream of trial `trial` for host graph `graph`.
pub fn chain_rng(seed: u64, graph: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((graph as u64) << 32) ^ trial as u64);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStats {
    pub trials: usize,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub p: Rational,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub weight_ht: Rational,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub weight_t: Rational,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub mean_h1: Rational,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub mean_h2: Rational,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub mean_h3: Rational,
    /// `w(HT)/f − w(T)` (with `f` read as 1 when zero).
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub reference: Rational,
    /// Per edge of `HT \ T`, the number of trials in which it reached `H2`.
    pub survivals: Vec<(EdgeId, usize)>,
    /// Trials whose `H3` failed the girth check.
    pub girth_failures: usize,
}

/// Runs `trials` independent chains on one host graph and aggregates the
/// stage weights; trial `i` uses `chain_rng(seed, graph, i)`.
#[allow(clippy::too_many_arguments)]
pub fn measure_chain_weight(
    g: &WeightedMultigraph,
    ht: &EdgeSet,
    t: &EdgeSet,
    b: &BlockingSet,
    p: Rational,
    k: Stretch,
    trials: usize,
    seed: u64,
    graph: usize,
) -> Result<ChainStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let outside: Vec<EdgeId> = ht.difference(t).to_vec();
    let mut survivals = vec![0usize; outside.len()];
    let (mut s1, mut s2, mut s3) = (0i128, 0i128, 0i128);
    let mut girth_failures = 0;
    for trial in 0..trials {
        let chain = subsample_chain(g, ht, t, b, p, &mut chain_rng(seed, graph, trial));
        s1 += g.units_of(&chain.h1);
        s2 += g.units_of(&chain.h2);
        s3 += g.units_of(&chain.h3);
        for (count, &e) in survivals.iter_mut().zip(&outside) {
            *count += usize::from(chain.h2.contains(e));
        }
        if !check_chain_girth(g, &chain.h3, k).passed() {
            girth_failures += 1;
        }
    }
    let mean = |s: i128| g.from_units(s) / Rational::from_integer(trials as i128);
    let weight_ht = g.weight_of(ht);
    let weight_t = g.weight_of(t);
    Ok(ChainStats {
        trials,
        p,
        reference: weight_ht / Rational::from_integer(b.f.max(1) as i128) - weight_t,
        weight_ht,
        weight_t,
        mean_h1: mean(s1),
        mean_h2: mean(s2),
        mean_h3: mean(s3),
        survivals: outside.into_iter().zip(survivals).collect(),
        girth_failures,
    })
}

/// Exact probability that `e ∈ HT \ T` reaches `H2`.
///
/// Only `e`'s coin and the presence of its distinct partners matter, so the
/// probability is summed over the joint states of those partners: partners
/// in `T` are always present, partners outside `HT` never, the rest follow
/// their own coin.
pub fn exact_survival(ht: &EdgeSet, t: &EdgeSet, b: &BlockingSet, e: EdgeId, p: Rational) -> Result<Rational> {
    let mut partners: Vec<EdgeId> = b.partners(e).collect();
    partners.sort_unstable();
    partners.dedup();
    if partners.iter().any(|&x| t.contains(x)) {
        return Ok(Rational::zero());
    }
    let random: Vec<EdgeId> = partners.into_iter().filter(|&x| ht.contains(x)).collect();
    if random.len() > 20 {
        return Err(Error::BudgetExceeded {
            what: "partner states",
            needed: 1u128 << random.len(),
            limit: 1 << 20,
        });
    }
    let mut none_present = Rational::zero();
    for state in 0u32..(1 << random.len()) {
        let weight = (0..random.len()).fold(Rational::one(), |acc, i| {
            acc * if state >> i & 1 == 1 { p } else { Rational::one() - p }
        });
        let survives = state == 0;
        if survives {
            none_present += weight;
        }
    }
    Ok(p * none_present)
}

/// One CSV row of the replay report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayRow {
    pub forest_index: usize,
    pub group: HostGroup,
    pub hosted: usize,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub weight_t: Rational,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub weight_ht: Rational,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub mean_h3: Rational,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub reference: Rational,
    /// Passed on every trial.
    pub girth_check: bool,
    pub stats: ChainStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub mode: HostMode,
    pub f: usize,
    pub packing_level: usize,
    pub heavy_threshold: usize,
    pub light_host_floor: usize,
    pub heavy_edges: Vec<EdgeId>,
    pub rows: Vec<ReplayRow>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.girth_check)
    }
}

/// Packs the greedy's preserver one level above its competition level,
/// assigns hosts and measures the chain on every host graph.
pub fn replay_analysis(
    g: &WeightedMultigraph,
    outcome: &GreedyOutcome,
    k: Stretch,
    mode: HostMode,
    trials: usize,
    seed: u64,
) -> Result<ReplayReport> {
    let packing = pack_forests(g, &outcome.preserver, outcome.level + 1)?;
    let assignment = build_host_graphs(
        g,
        &outcome.spanner,
        &outcome.preserver,
        &outcome.blocking,
        &packing,
        mode,
    )?;
    let mut rows = Vec::new();
    for (i, hg) in assignment.graphs.iter().enumerate() {
        let stats = measure_chain_weight(g, &hg.edges, &hg.tree, &outcome.blocking, hg.p, k, trials, seed, i)?;
        rows.push(ReplayRow {
            forest_index: hg.forest_index,
            group: hg.group,
            hosted: hg.hosted.len(),
            weight_t: stats.weight_t,
            weight_ht: stats.weight_ht,
            mean_h3: stats.mean_h3,
            reference: stats.reference,
            girth_check: stats.girth_failures == 0,
            stats,
        });
    }
    Ok(ReplayReport {
        mode,
        f: assignment.f,
        packing_level: packing.level,
        heavy_threshold: assignment.heavy_threshold,
        light_host_floor: assignment.light_host_floor,
        heavy_edges: assignment.heavy,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greedy::{build_greedy, Competition};
    use crate::preserver::PreserverMode;
    use crate::oracles::Budget;
    use proptest::prelude::*;

    fn k(x: i128) -> Stretch {
        Stretch::integer(x).unwrap()
    }

    fn graph(n: usize, edges: &[(usize, usize, i64)]) -> WeightedMultigraph {
        WeightedMultigraph::with_int_weights(n, edges).unwrap()
    }

    /// Two hubs joined by three unit paths and a long 2-path, plus heavy
    /// chords: small enough to search, rich enough for non-empty `B`.
    fn sample_instance() -> WeightedMultigraph {
        graph(
            7,
            &[
                (0, 1, 1),
                (1, 2, 1),
                (2, 3, 1),
                (3, 0, 1),
                (0, 4, 1),
                (4, 2, 1),
                (1, 5, 1),
                (5, 3, 1),
                (0, 6, 1),
                (6, 2, 1),
                (0, 2, 3),
                (1, 3, 3),
                (4, 5, 2),
                (5, 6, 2),
            ],
        )
    }

    #[test]
    fn ceil_sqrt_and_probabilities() {
        let got: Vec<usize> = (0..10).map(ceil_sqrt).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 2, 3, 3, 3, 3, 3]);
        assert_eq!(chain_probability(0), Rational::one());
        assert_eq!(chain_probability(3), Rational::new(1, 3));
        assert_eq!(heavy_chain_probability(1), Rational::new(1, 2));
        assert_eq!(heavy_chain_probability(9), Rational::new(1, 3));
    }

    #[test]
    fn mode_round_trips() {
        for mode in [HostMode::Single, HostMode::AllEligible, HostMode::QLightHeavy] {
            assert_eq!(mode.to_string().parse::<HostMode>().unwrap(), mode);
        }
        assert!("both".parse::<HostMode>().is_err());
    }

    #[test]
    fn f_zero_single_forest_hosts_everything() {
        let g = sample_instance();
        let out = build_greedy(&g, k(1), 0, Competition::TwoF, PreserverMode::Exact, &Budget::default()).unwrap();
        let packing = pack_forests(&g, &out.preserver, 1).unwrap();
        let a = build_host_graphs(&g, &out.spanner, &out.preserver, &out.blocking, &packing, HostMode::Single).unwrap();
        assert_eq!(a.graphs.len(), 1);
        assert_eq!(a.graphs[0].edges, out.spanner);
        let report = replay_analysis(&g, &out, k(1), HostMode::Single, 5, 1).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn hosts_avoid_partners_and_meet_counts() {
        let g = sample_instance();
        for f in 1..=2 {
            let out =
                build_greedy(&g, k(3), f, Competition::TwoF, PreserverMode::Exact, &Budget::default()).unwrap();
            let packing = pack_forests(&g, &out.preserver, out.level + 1).unwrap();
            for mode in [HostMode::Single, HostMode::AllEligible, HostMode::QLightHeavy] {
                let a = build_host_graphs(&g, &out.spanner, &out.preserver, &out.blocking, &packing, mode).unwrap();
                assert_eq!(a.hosts.len(), out.spanner.difference(&out.preserver).len());
                for (e, hosts) in &a.hosts {
                    assert!(!hosts.is_empty());
                    for &t in hosts {
                        let tree = packing.forest_set(&g, t);
                        assert!(out.blocking.partners(*e).all(|x| !tree.contains(x)));
                    }
                    if mode == HostMode::QLightHeavy && !a.heavy.contains(e) {
                        assert!(hosts.len() >= a.light_host_floor);
                    }
                }
            }
        }
    }

    #[test]
    fn p_zero_keeps_only_the_tree() {
        let g = sample_instance();
        let t = EdgeSet::from_ids(g.m(), [0, 1, 2, 3]);
        let ht = g.all_edges();
        let chain = subsample_chain(&g, &ht, &t, &BlockingSet::new(1), Rational::zero(), &mut chain_rng(3, 0, 0));
        assert_eq!(chain.h1, t);
        assert_eq!(chain.h3, min_spanning_forest(&g, &t));
        let stats = measure_chain_weight(&g, &ht, &t, &BlockingSet::new(1), Rational::zero(), k(1), 4, 3, 0).unwrap();
        assert!(stats.mean_h3 <= stats.weight_t);
    }

    #[test]
    fn p_one_with_empty_blocking_set_keeps_everything() {
        let g = sample_instance();
        let t = EdgeSet::from_ids(g.m(), [0, 1, 2]);
        let ht = g.all_edges();
        let b = BlockingSet::new(2);
        let chain = subsample_chain(&g, &ht, &t, &b, Rational::one(), &mut chain_rng(3, 0, 0));
        assert_eq!(chain.h2, ht);
        let stats = measure_chain_weight(&g, &ht, &t, &b, Rational::one(), k(1), 3, 9, 0).unwrap();
        assert_eq!(stats.mean_h2, g.weight_of(&ht));
        assert!(measure_chain_weight(&g, &ht, &t, &b, Rational::one(), k(1), 0, 9, 0).is_err());
    }

    #[test]
    fn skipping_the_blocking_deletion_breaks_the_girth() {
        // T = {0-1}; e' = 1-2 and e = 0-2 close a cycle of normalized weight 2.
        let g = graph(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 2)]);
        let t = EdgeSet::from_ids(3, [0]);
        let ht = g.all_edges();
        let b = BlockingSet {
            f: 1,
            pairs: vec![(2, 1)],
        };
        let chain = subsample_chain(&g, &ht, &t, &b, Rational::one(), &mut chain_rng(0, 0, 0));
        assert!(check_chain_girth(&g, &chain.h3, k(1)).passed());
        let corrupt = chain.h1.difference(&t.difference(&min_spanning_forest(&g, &chain.h1)));
        let report = check_chain_girth(&g, &corrupt, k(1));
        assert!(!report.passed());
        assert!(matches!(report.witness, Some(Witness::Cycle(_))));
    }

    #[test]
    fn exact_survival_matches_the_closed_form() {
        let ht = EdgeSet::full(6);
        let t = EdgeSet::from_ids(6, [0]);
        let b = BlockingSet {
            f: 3,
            pairs: vec![(5, 1), (5, 2), (5, 2), (4, 0)],
        };
        let p = Rational::new(1, 3);
        let q = Rational::one() - p;
        assert_eq!(exact_survival(&ht, &t, &b, 5, p).unwrap(), p * q * q);
        assert_eq!(exact_survival(&ht, &t, &b, 4, p).unwrap(), Rational::zero());
        assert_eq!(exact_survival(&ht, &t, &b, 3, p).unwrap(), p);
    }

    #[test]
    fn survival_frequencies_track_exact_probabilities() {
        let g = graph(
            4,
            &[(0, 1, 2), (1, 2, 2), (0, 3, 2), (2, 1, 4), (3, 1, 4), (2, 0, 4), (0, 1, 1), (3, 2, 3)],
        );
        let out = build_greedy(&g, k(1), 1, Competition::TwoF, PreserverMode::Exact, &Budget::default()).unwrap();
        assert!(!out.blocking.pairs.is_empty());
        let trials = 400;
        // With f = 1 every edge is Q-heavy and sampled with probability 1/2.
        let report = replay_analysis(&g, &out, k(1), HostMode::QLightHeavy, trials, 11).unwrap();
        assert!(report.passed());
        let packing = pack_forests(&g, &out.preserver, out.level + 1).unwrap();
        let a = build_host_graphs(&g, &out.spanner, &out.preserver, &out.blocking, &packing, HostMode::QLightHeavy)
            .unwrap();
        let mut checked = 0;
        for (row, hg) in report.rows.iter().zip(&a.graphs) {
            for &(e, count) in &row.stats.survivals {
                let exact = exact_survival(&hg.edges, &hg.tree, &out.blocking, e, hg.p).unwrap();
                let p = crate::graph::rational_to_f64(&exact);
                let freq = count as f64 / trials as f64;
                let sd = (p * (1.0 - p) / trials as f64).sqrt();
                assert!((freq - p).abs() <= 4.0 * sd + 1e-9, "edge {e}: {freq} vs {p}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let g = sample_instance();
        let out = build_greedy(&g, k(3), 1, Competition::TwoF, PreserverMode::Exact, &Budget::default()).unwrap();
        let a = replay_analysis(&g, &out, k(3), HostMode::QLightHeavy, 20, 5).unwrap();
        let b = replay_analysis(&g, &out, k(3), HostMode::QLightHeavy, 20, 5).unwrap();
        assert_eq!(a, b);
    }

    fn arb_graph() -> impl Strategy<Value = WeightedMultigraph> {
        (4usize..8).prop_flat_map(|n| {
            let tree = proptest::collection::vec((0usize..1000, 1i64..6), n - 1);
            let extra = proptest::collection::vec((0..n, 0..n, 1i64..9), 0..7);
            (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
                let mut edges: Vec<(usize, usize, i64)> =
                    tree.iter().enumerate().map(|(i, &(r, w))| (r % (i + 1), i + 1, w)).collect();
                edges.extend(extra.into_iter().filter(|(a, b, _)| a != b));
                graph(n, &edges)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn chain_girth_holds_for_every_seed(g in arb_graph(), f in 0usize..3, kk in 1i128..4, seed in any::<u64>()) {
            let out = build_greedy(&g, k(kk), f, Competition::TwoF, PreserverMode::Exact, &Budget::default()).unwrap();
            for mode in [HostMode::Single, HostMode::QLightHeavy] {
                let report = replay_analysis(&g, &out, k(kk), mode, 10, seed).unwrap();
                prop_assert!(report.passed());
                for row in &report.rows {
                    prop_assert!(row.stats.mean_h3 <= row.stats.mean_h2);
                    prop_assert!(row.stats.mean_h2 <= row.stats.mean_h1);
                    prop_assert!(row.stats.mean_h1 <= row.weight_ht);
                }
            }
        }
    }
}
