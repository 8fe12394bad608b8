//! Sampling-based spanner construction in polynomial time.
//!
//! Instead of searching for fault sets, each candidate edge `(u, v)` is
//! tested against the forests of a packing of `Q`: for a forest `T`, random
//! subgraphs keep `T` and each already-added non-`Q` edge with probability
//! `p`, and the fraction in which `dist(u, v) > k * w(u, v)` estimates the
//! chance that the edge is needed. A real violating fault set avoiding `T`
//! survives the sampling with probability at least `(1 - p)^f`.

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    format_rational, shortest_units, EdgeId, EdgeSet, Rational, Stretch, VertexId, WeightedMultigraph,
};
use crate::oracles::Budget;
use crate::packing::{pack_forests, ForestPacking};
use crate::preserver::{preserver_or_fallback, PreserverMode};

/// Words reserved for each sample inside a substream.
const SAMPLE_STRIDE: u128 = 1 << 20;

/// A reproducible random substream for one `(edge, forest)` pair. Sample
/// `i` always reads the same words regardless of evaluation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Substream {
    pub seed: u64,
    pub edge: EdgeId,
    pub tree: usize,
}

impl Substream {
    pub fn sample_rng(&self, sample: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((self.edge as u64) << 24) ^ self.tree as u64);
        rng.set_word_pos(sample as u128 * SAMPLE_STRIDE);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurvivalEstimate {
    pub tree_index: usize,
    pub u: VertexId,
    pub v: VertexId,
    pub samples: usize,
    pub hits: usize,
    pub p_hat: f64,
}

impl SurvivalEstimate {
    /// `hits / samples >= threshold`, exactly.
    pub fn reaches(&self, threshold: Rational) -> bool {
        Rational::new(self.hits as i128, self.samples as i128) >= threshold
    }
}

/// `max(1, ceil(c * ln n))`.
pub fn sample_count(n: usize, c_const: f64) -> usize {
    let raw = (c_const * (n.max(1) as f64).ln()).ceil();
    raw.to_usize().unwrap_or(usize::MAX).max(1)
}

/// `1 / max(f, 2)`: `1/f` would keep every edge when `f = 1`.
pub fn sampling_probability(f: usize) -> Rational {
    Rational::new(1, f.max(2) as i128)
}

/// A Bernoulli(`p`) draw for an exact rational `p`.
pub(crate) fn coin<R: Rng>(rng: &mut R, p: Rational) -> bool {
    if p >= Rational::one() {
        return true;
    }
    if p <= Rational::zero() {
        return false;
    }
    rng.gen_ratio(*p.numer() as u32, *p.denom() as u32)
}

/// Fraction of sampled subgraphs `T ∪ (each E_cur edge with prob. p)` in
/// which `dist(u, v) > k * w_uv`.
///
/// When `T` alone already has a short path no sample can miss it, and when
/// even `T ∪ E_cur` has none every sample hits; both cases return the
/// value sampling would produce without drawing.
#[allow(clippy::too_many_arguments)]
pub fn estimate_survival(
    g: &WeightedMultigraph,
    t: &EdgeSet,
    e_cur: &EdgeSet,
    u: VertexId,
    v: VertexId,
    k: Stretch,
    w_uv: Rational,
    p_sample: Rational,
    samples: usize,
    stream: Substream,
) -> SurvivalEstimate {
    let limit = k.value() * w_uv * Rational::from_integer(g.scale());
    let cutoff = limit.floor().to_integer();
    let short = |keep: &dyn Fn(EdgeId) -> bool| shortest_units(g, keep, u, v, Some(cutoff)).is_some();
    let estimate = |hits| SurvivalEstimate {
        tree_index: stream.tree,
        u,
        v,
        samples,
        hits,
        p_hat: hits as f64 / samples as f64,
    };
    if short(&|e| t.contains(e)) {
        return estimate(0);
    }
    if !short(&|e| t.contains(e) || e_cur.contains(e)) {
        return estimate(samples);
    }
    let pool: Vec<EdgeId> = e_cur.iter().filter(|&e| !t.contains(e)).collect();
    let mut kept = t.clone();
    let mut hits = 0;
    for i in 0..samples {
        let mut rng = stream.sample_rng(i);
        kept.clone_from(t);
        for &e in &pool {
            if coin(&mut rng, p_sample) {
                kept.insert(e);
            }
        }
        if !short(&|e| kept.contains(e)) {
            hits += 1;
        }
    }
    estimate(hits)
}

/// Exact `Pr[dist(u, v) > k * w_uv]` over the same sampling, by summing over
/// every subset of `E_cur \ T`.
#[allow(clippy::too_many_arguments)]
pub fn exact_survival_probability(
    g: &WeightedMultigraph,
    t: &EdgeSet,
    e_cur: &EdgeSet,
    u: VertexId,
    v: VertexId,
    k: Stretch,
    w_uv: Rational,
    p_sample: Rational,
    budget: &Budget,
) -> Result<Rational> {
    let pool: Vec<EdgeId> = e_cur.iter().filter(|&e| !t.contains(e)).collect();
    if pool.len() as u32 > budget.max_subset_edges.min(24) {
        return Err(Error::BudgetExceeded {
            what: "sample-outcome enumeration",
            needed: pool.len() as u128,
            limit: budget.max_subset_edges.min(24) as u128,
        });
    }
    let limit = k.value() * w_uv * Rational::from_integer(g.scale());
    let cutoff = limit.floor().to_integer();
    let q = Rational::one() - p_sample;
    let mut total = Rational::zero();
    for mask in 0u32..(1u32 << pool.len()) {
        let kept = |e: EdgeId| {
            t.contains(e) || pool.iter().position(|&x| x == e).is_some_and(|i| mask >> i & 1 == 1)
        };
        if shortest_units(g, kept, u, v, Some(cutoff)).is_none() {
            let ones = mask.count_ones() as i32;
            total += p_sample.pow(ones) * q.pow(pool.len() as i32 - ones);
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyConfig {
    pub k: Stretch,
    pub f: usize,
    pub c_const: f64,
    pub threshold: Rational,
    pub preserver_mode: PreserverMode,
    pub seed: u64,
}

impl PolyConfig {
    pub fn new(k: Stretch, f: usize, seed: u64) -> Self {
        PolyConfig {
            k,
            f,
            c_const: 384.0,
            threshold: Rational::new(1, 8),
            preserver_mode: PreserverMode::Exact,
            seed,
        }
    }
}

/// The forests that admitted an edge and their estimates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HostLogEntry {
    pub edge_id: EdgeId,
    pub trees: Vec<usize>,
    pub p_hats: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyOutcome {
    pub spanner: EdgeSet,
    pub preserver: EdgeSet,
    pub preserver_mode: PreserverMode,
    pub preserver_fell_back: bool,
    pub packing: ForestPacking,
    pub host_log: Vec<HostLogEntry>,
    /// Preserver connectivity level; the packing is one level higher.
    pub level: usize,
    pub samples: usize,
    #[serde(serialize_with = "crate::graph::ser_rational")]
    pub p_sample: Rational,
    /// Forest votes needed to add an edge.
    pub votes_needed: usize,
    /// Number of `(edge, forest)` estimates computed.
    pub estimates: usize,
}

fn run(
    g: &WeightedMultigraph,
    config: &PolyConfig,
    level: usize,
    votes_needed: usize,
    stop_at_first: bool,
    budget: &Budget,
) -> Result<PolyOutcome> {
    if config.f == 0 {
        return Err(Error::InvalidParameter(
            "the sampling construction needs f >= 1; use the greedy for f = 0".into(),
        ));
    }
    let q = preserver_or_fallback(g, level, config.preserver_mode, budget)?;
    let packing = pack_forests(g, &q.edges, level + 1)?;
    let p_sample = sampling_probability(config.f);
    let samples = sample_count(g.n(), config.c_const);
    let mut added = g.no_edges();
    let mut host_log = Vec::new();
    let mut estimates = 0;
    for e in g.ids_by_weight() {
        if q.edges.contains(e) {
            continue;
        }
        let (u, v) = g.endpoints(e);
        let class = packing
            .class_of(u)
            .filter(|&c| packing.classes[c].contains(&v))
            .ok_or(Error::NotInCommonClass { u, v, level: level + 1 })?;
        let mut entry = HostLogEntry {
            edge_id: e,
            trees: Vec::new(),
            p_hats: Vec::new(),
        };
        for &tree in &packing.coverage[class] {
            let t = packing.forest_set(g, tree);
            let stream = Substream {
                seed: config.seed,
                edge: e,
                tree,
            };
            let est = estimate_survival(g, &t, &added, u, v, config.k, g.weight(e), p_sample, samples, stream);
            estimates += 1;
            if est.reaches(config.threshold) {
                entry.trees.push(tree);
                entry.p_hats.push(est.p_hat);
                if stop_at_first {
                    break;
                }
            }
        }
        if entry.trees.len() >= votes_needed {
            added.insert(e);
            host_log.push(entry);
        }
    }
    Ok(PolyOutcome {
        spanner: q.edges.union(&added),
        preserver: q.edges,
        preserver_mode: q.mode,
        preserver_fell_back: q.fell_back,
        packing,
        host_log,
        level,
        samples,
        p_sample,
        votes_needed,
        estimates,
    })
}

/// Preserver at level `2f`, packing at `2f + 1`; an edge is added by the
/// first forest whose estimate reaches the threshold, which becomes its host.
pub fn build_poly(g: &WeightedMultigraph, config: &PolyConfig, budget: &Budget) -> Result<PolyOutcome> {
    run(g, config, 2 * config.f, 1, true, budget)
}

/// Preserver at level `⌊(2 + η) f⌋`, packing one level higher; an edge needs
/// `⌊η f⌋ + 1` forest votes and is hosted by all of them.
pub fn build_poly_eta(
    g: &WeightedMultigraph,
    config: &PolyConfig,
    eta: Rational,
    budget: &Budget,
) -> Result<PolyOutcome> {
    if eta <= Rational::zero() {
        return Err(Error::InvalidParameter(format!(
            "eta must be positive, got {}",
            format_rational(&eta)
        )));
    }
    let f = Rational::from_integer(config.f as i128);
    let level = ((Rational::from_integer(2) + eta) * f).floor().to_integer() as usize;
    let votes = (eta * f).floor().to_integer() as usize + 1;
    run(g, config, level, votes, false, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::is_ft_spanner;

    fn triangle(w: i64) -> WeightedMultigraph {
        WeightedMultigraph::with_int_weights(3, &[(0, 1, 1), (0, 2, 1), (1, 2, w)]).unwrap()
    }

    fn k3() -> Stretch {
        Stretch::integer(3).unwrap()
    }

    fn stream() -> Substream {
        Substream {
            seed: 7,
            edge: 0,
            tree: 0,
        }
    }

    #[test]
    fn sample_counts_and_probabilities() {
        assert_eq!(sample_count(3, 384.0), 422);
        assert_eq!(sample_count(1, 384.0), 1);
        assert_eq!(sampling_probability(1), Rational::new(1, 2));
        assert_eq!(sampling_probability(4), Rational::new(1, 4));
    }

    #[test]
    fn substreams_are_order_independent() {
        let s = stream();
        let a: Vec<u32> = (0..3).map(|i| s.sample_rng(i).gen()).collect();
        let b: Vec<u32> = (0..3).rev().map(|i| s.sample_rng(i).gen()).collect();
        assert_eq!(a, b.into_iter().rev().collect::<Vec<_>>());
        assert_ne!(a[0], a[1]);
        let other = Substream { tree: 1, ..s };
        assert_ne!(other.sample_rng(0).gen::<u32>(), a[0]);
    }

    #[test]
    fn empty_pool_is_deterministic() {
        // 4-cycle 0-1-2-3 with chord candidate (0, 2) of weight 1.
        let g = WeightedMultigraph::with_int_weights(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (0, 2, 1)])
            .unwrap();
        let t = EdgeSet::from_ids(5, [0, 1, 2]);
        let none = g.no_edges();
        let w = g.weight(4);
        let tight = Stretch::integer(1).unwrap();
        let est = estimate_survival(&g, &t, &none, 0, 2, tight, w, Rational::new(1, 2), 50, stream());
        assert_eq!((est.hits, est.p_hat), (50, 1.0));
        let est = estimate_survival(&g, &t, &none, 0, 2, Stretch::integer(2).unwrap(), w, Rational::new(1, 2), 50, stream());
        assert_eq!((est.hits, est.p_hat), (0, 0.0));
    }

    #[test]
    fn full_probability_keeps_everything() {
        let g = WeightedMultigraph::with_int_weights(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 5)]).unwrap();
        let t = g.no_edges();
        let e_cur = EdgeSet::from_ids(3, [0, 1]);
        let est = estimate_survival(&g, &t, &e_cur, 0, 2, k3(), Rational::from_integer(1), Rational::one(), 40, stream());
        assert_eq!(est.hits, 0);
        let exact = exact_survival_probability(&g, &t, &e_cur, 0, 2, k3(), Rational::one(), Rational::new(1, 2), &Budget::default())
            .unwrap();
        // Both path edges must survive for the short path: miss prob 1/4.
        assert_eq!(exact, Rational::new(3, 4));
        let est = estimate_survival(&g, &t, &e_cur, 0, 2, k3(), Rational::one(), Rational::new(1, 2), 4000, stream());
        assert!((est.p_hat - 0.75).abs() < 0.05);
    }

    #[test]
    fn triangle_poly_keeps_every_edge() {
        let g = triangle(10);
        let budget = Budget::default();
        let out = build_poly(&g, &PolyConfig::new(k3(), 1, 7), &budget).unwrap();
        assert_eq!(out.spanner, g.all_edges());
        let again = build_poly(&g, &PolyConfig::new(k3(), 1, 7), &budget).unwrap();
        assert_eq!(out, again);
        let out = build_poly_eta(&g, &PolyConfig::new(k3(), 1, 7), Rational::one(), &budget).unwrap();
        assert_eq!(out.spanner, g.all_edges());
        assert_eq!(out.votes_needed, 2);
        assert!(build_poly(&g, &PolyConfig::new(k3(), 0, 7), &budget).is_err());
    }

    #[test]
    fn unreachable_vote_threshold_adds_nothing() {
        // A 5-cycle with a heavy chord; the level-3 preserver of f = 1 is the cycle.
        let g = WeightedMultigraph::with_int_weights(
            5,
            &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1), (0, 2, 9), (1, 3, 9)],
        )
        .unwrap();
        let budget = Budget::default();
        let config = PolyConfig::new(Stretch::integer(1).unwrap(), 1, 3);
        let out = build_poly_eta(&g, &config, Rational::from_integer(100), &budget).unwrap();
        assert!(out.host_log.is_empty());
        assert_eq!(out.spanner, out.preserver);
    }

    #[test]
    fn poly_output_on_a_chorded_cycle_is_a_spanner() {
        let g = WeightedMultigraph::with_int_weights(
            6,
            &[
                (0, 1, 1),
                (1, 2, 1),
                (2, 3, 1),
                (3, 4, 1),
                (4, 5, 1),
                (5, 0, 1),
                (0, 3, 2),
                (1, 4, 2),
                (2, 5, 2),
                (0, 2, 1),
            ],
        )
        .unwrap();
        let budget = Budget::default();
        for seed in 0..5 {
            let config = PolyConfig::new(k3(), 1, seed);
            let out = build_poly(&g, &config, &budget).unwrap();
            assert!(is_ft_spanner(&g, &out.spanner, k3(), 1, &budget).unwrap().passed());
            for entry in &out.host_log {
                assert_eq!(entry.trees.len(), 1);
            }
        }
    }
}
