//! Deterministic instance families: the lower-bound constructions and
//! seeded random corpora.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{format_rational, is_connected, Rational, Stretch, VertexId, WeightedMultigraph};
use crate::replay::ceil_sqrt;

/// Attempts before `gen_random` gives up on reaching a connected sample.
pub const RANDOM_RETRIES: usize = 1000;

fn positive(what: &str, w: Rational) -> Result<Rational> {
    if w <= Rational::zero() {
        return Err(Error::InvalidParameter(format!(
            "{what} must be positive, got {}",
            format_rational(&w)
        )));
    }
    Ok(w)
}

/// Vertices `0 = u`, `1 = v`, `2 = w`; `w(u,v) = w(u,w) = 1`, `w(v,w) = W`.
pub fn gen_triangle(big_w: Rational) -> Result<WeightedMultigraph> {
    let big_w = positive("W", big_w)?;
    let one = Rational::one();
    WeightedMultigraph::new(3, [(0, 1, one), (0, 2, one), (1, 2, big_w)])
}

/// The cycle `0..n` with every edge of weight `w`.
pub fn gen_cycle(n: usize, w: Rational) -> Result<WeightedMultigraph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("a cycle needs n >= 3, got {n}")));
    }
    let w = positive("weight", w)?;
    WeightedMultigraph::new(n, (0..n).map(|i| (i, (i + 1) % n, w)))
}

/// `(2m − 2)/k − eps`, the weight of the heavy edges of both cycle families.
fn heavy_weight(m: usize, k: Stretch, eps: Rational) -> Result<Rational> {
    positive(
        "(2m - 2)/k - eps",
        Rational::from_integer(2 * m as i128 - 2) / k.value() - eps,
    )
}

/// A unit `2n`-cycle `v_0 .. v_{2n-1}` (edge ids `0..2n`, edge `i` joins
/// `v_i` and `v_{i+1}`) plus `n` chords `v_{2j} – v_{2j+2}` of weight
/// `(2n − 2)/k − eps` (edge ids `2n + j`).
pub fn gen_cycle_chords(n: usize, k: Stretch, eps: Rational) -> Result<WeightedMultigraph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle-chords needs n >= 3, got {n}")));
    }
    let chord = heavy_weight(n, k, eps)?;
    let len = 2 * n;
    let cycle = (0..len).map(|i| (i, (i + 1) % len, Rational::one()));
    let chords = (0..n).map(|j| (2 * j, (2 * j + 2) % len, chord));
    WeightedMultigraph::new(len, cycle.chain(chords))
}

/// Vertex of cloud member `j` between hubs `i` and `i + 1`.
pub fn cloud_vertex(m: usize, f: usize, i: usize, j: usize) -> VertexId {
    debug_assert!(i < m && j < f);
    m + i * f + j
}

/// Hubs `v_0 .. v_{m-1}` and clouds `v_{i,j}`, `j < f`, each joined by unit
/// edges to `v_i` and `v_{i+1}` (indices mod `m`), plus heavy hub edges
/// `v_i – v_{i+1}` of weight `(2m − 2)/k − eps`. The `2mf` unit edges come
/// first (ids `0..2mf`), the heavy edges last.
pub fn gen_cloud_cycle(m: usize, f: usize, k: Stretch, eps: Rational) -> Result<WeightedMultigraph> {
    if m < 3 || f < 1 {
        return Err(Error::InvalidParameter(format!(
            "cloud-cycle needs m >= 3 and f >= 1, got m={m}, f={f}"
        )));
    }
    let heavy = heavy_weight(m, k, eps)?;
    let mut edges = Vec::with_capacity(2 * m * f + m);
    for i in 0..m {
        for j in 0..f {
            let c = cloud_vertex(m, f, i, j);
            edges.push((i, c, Rational::one()));
            edges.push(((i + 1) % m, c, Rational::one()));
        }
    }
    edges.extend((0..m).map(|i| (i, (i + 1) % m, heavy)));
    WeightedMultigraph::new(m + m * f, edges)
}

/// Cloud size of the blowup: `⌈√(c f + 1)⌉`.
pub fn blowup_cloud_size(f: usize, c: usize) -> usize {
    ceil_sqrt(c * f + 1)
}

/// Replaces every vertex `x` of `base` by the cloud `x·p .. x·p + p` and
/// every edge by the complete bipartite graph between the two clouds, all
/// copies carrying the original weight. The `p²` copies of base edge `e`
/// get ids `e·p² .. (e+1)·p²`.
pub fn gen_cloud_blowup(base: &WeightedMultigraph, f: usize, c: usize) -> Result<WeightedMultigraph> {
    if f < 1 || c < 2 {
        return Err(Error::InvalidParameter(format!(
            "cloud-blowup needs f >= 1 and c >= 2, got f={f}, c={c}"
        )));
    }
    if !is_connected(base, &base.all_edges()) {
        return Err(Error::Disconnected);
    }
    let p = blowup_cloud_size(f, c);
    let mut edges = Vec::with_capacity(base.m() * p * p);
    for e in base.edges() {
        for i in 0..p {
            for j in 0..p {
                edges.push((e.u * p + i, e.v * p + j, e.weight));
            }
        }
    }
    WeightedMultigraph::new(base.n() * p, edges)
}

fn check_weights(lo: i64, hi: i64) -> Result<()> {
    if lo < 1 || hi < lo {
        return Err(Error::InvalidParameter(format!(
            "weight range must satisfy 1 <= lo <= hi, got {lo}..={hi}"
        )));
    }
    Ok(())
}

/// Each pair `{u, v}` becomes an edge with probability `edge_prob`, weights
/// uniform in `lo..=hi`; disconnected samples are redrawn from the same
/// stream, up to `RANDOM_RETRIES` times.
pub fn gen_random(n: usize, edge_prob: f64, weights: (i64, i64), seed: u64) -> Result<WeightedMultigraph> {
    if n == 0 || !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1 and 0 < edge_prob <= 1, got n={n}, edge_prob={edge_prob}"
        )));
    }
    check_weights(weights.0, weights.1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RETRIES {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(edge_prob) {
                    edges.push((u, v, rng.gen_range(weights.0..=weights.1)));
                }
            }
        }
        let g = WeightedMultigraph::with_int_weights(n, &edges)?;
        if is_connected(&g, &g.all_edges()) {
            return Ok(g);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no connected sample for n={n}, edge_prob={edge_prob} after {RANDOM_RETRIES} attempts"
    )))
}

/// A random recursive tree (each vertex of a shuffled order attaches to a
/// uniformly chosen earlier one) plus `extra` further edges between distinct non-adjacent
/// pairs, weights uniform in `lo..=hi`, edges listed in random order. Always
/// connected; `extra` is capped by the number of free pairs.
pub fn gen_random_sparse(n: usize, extra: usize, weights: (i64, i64), seed: u64) -> Result<WeightedMultigraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    check_weights(weights.0, weights.1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut pairs = Vec::new();
    let mut used = vec![vec![false; n]; n];
    for i in 1..n {
        let (u, v) = (order[rng.gen_range(0..i)], order[i]);
        used[u][v] = true;
        used[v][u] = true;
        pairs.push((u.min(v), u.max(v)));
    }
    let mut free: Vec<(VertexId, VertexId)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !used[u][v])
        .collect();
    free.shuffle(&mut rng);
    pairs.extend(free.into_iter().take(extra));
    pairs.shuffle(&mut rng);
    let edges: Vec<(VertexId, VertexId, i64)> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, rng.gen_range(weights.0..=weights.1)))
        .collect();
    WeightedMultigraph::with_int_weights(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::io::{load_graph, write_graph};
    use crate::graph::{lightness, mst, EdgeSet};
    use crate::oracles::{forced_edges, is_ft_spanner, is_preserver_bruteforce, Budget};
    use crate::preserver::{competitive_lightness, is_preserver_fast, mst_weight, PreserverMode};
    use proptest::prelude::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn k(x: i128) -> Stretch {
        Stretch::integer(x).unwrap()
    }

    fn round_trips(g: &WeightedMultigraph) {
        assert!(is_connected(g, &g.all_edges()));
        assert_eq!(&load_graph(&write_graph(g)).unwrap(), g);
    }

    #[test]
    fn triangle_claims() {
        for w in [1, 4, 10, 100] {
            let g = gen_triangle(r(w, 1)).unwrap();
            round_trips(&g);
            assert_eq!(mst_weight(&g), r(2, 1));
            let all = g.all_edges();
            assert_eq!(lightness(&g, &all).unwrap(), r(w + 2, 2));
            for kk in [1, 3, 1000] {
                assert_eq!(forced_edges(&g, k(kk), 1, &Budget::default()).unwrap(), vec![0, 1, 2]);
            }
            let cl = competitive_lightness(&g, &all, 2, PreserverMode::Exact, &Budget::default()).unwrap();
            assert_eq!(cl.value, Rational::one());
        }
        assert!(gen_triangle(Rational::zero()).is_err());
    }

    #[test]
    fn cycle_chords_claims() {
        let g = gen_cycle_chords(4, k(2), r(1, 2)).unwrap();
        round_trips(&g);
        assert_eq!(g.weight(8), r(5, 2));
        assert_eq!(mst_weight(&g), r(7, 1));

        let (n, kk, eps) = (5, k(2), r(1, 4));
        let g = gen_cycle_chords(n, kk, eps).unwrap();
        round_trips(&g);
        assert_eq!((g.n(), g.m()), (10, 15));
        assert_eq!(mst_weight(&g), r(9, 1));
        let forced = forced_edges(&g, kk, 1, &Budget::default()).unwrap();
        assert!((2 * n..3 * n).all(|chord| forced.contains(&chord)));
        assert!(gen_cycle_chords(4, k(3), r(2, 1)).is_err());
    }

    #[test]
    fn cloud_cycle_claims() {
        let (m, f, kk, eps) = (4, 2, k(2), r(1, 4));
        let g = gen_cloud_cycle(m, f, kk, eps).unwrap();
        round_trips(&g);
        assert_eq!((g.n(), g.m()), (12, 20));
        let unit = EdgeSet::from_ids(g.m(), 0..2 * m * f);
        assert_eq!(g.weight_of(&unit), r(16, 1));
        let budget = Budget::default();
        assert!(is_preserver_bruteforce(&g, &unit, 2 * f - 1, &budget).unwrap().passed());
        assert!(!is_preserver_bruteforce(&g, &unit, 2 * f, &budget).unwrap().passed());
        assert!(is_preserver_fast(&g, &unit, 2 * f - 1));
        assert!(!is_preserver_fast(&g, &unit, 2 * f));
        let forced = forced_edges(&g, kk, f, &budget).unwrap();
        assert!((2 * m * f..g.m()).all(|e| forced.contains(&e)));
        // Any f-EFT spanner holds the heavy edges, so its weight over the
        // unit preserver is at least m((2m-2)/k - eps) / (2mf).
        let heavy = EdgeSet::from_ids(g.m(), 2 * m * f..g.m());
        let bound = g.weight_of(&heavy) / g.weight_of(&unit);
        assert_eq!(bound, r(4, 1) * r(11, 4) / r(16, 1));
        assert!(gen_cloud_cycle(2, 1, kk, eps).is_err());
    }

    #[test]
    fn cloud_blowup_claims() {
        assert_eq!(blowup_cloud_size(1, 2), 2);
        assert_eq!(blowup_cloud_size(4, 2), 3);
        let base = gen_cycle(5, Rational::one()).unwrap();
        let g = gen_cloud_blowup(&base, 1, 2).unwrap();
        round_trips(&g);
        assert_eq!((g.n(), g.m()), (10, 20));
        let p = 2;
        // Keeping a single copy of one base edge breaks the spanner.
        let budget = Budget::default();
        for e in 0..base.m() {
            for keep in 0..p * p {
                let mut h = g.all_edges();
                (0..p * p).filter(|&i| i != keep).for_each(|i| h.remove(e * p * p + i));
                assert!(!is_ft_spanner(&g, &h, k(3), 1, &budget).unwrap().passed());
            }
        }
        // The blown-up minimum spanning tree is a preserver of weight p²·w(mst).
        let tree = mst(&base);
        let q = EdgeSet::from_ids(g.m(), tree.iter().flat_map(|e| e * p * p..(e + 1) * p * p));
        assert_eq!(g.weight_of(&q), r((p * p) as i128, 1) * base.weight_of(&tree));
        assert!(is_preserver_fast(&g, &q, 1));
        assert!(is_preserver_bruteforce(&g, &q, 1, &budget).unwrap().passed());
    }

    #[test]
    fn greedy_on_blowup_meets_the_counting_bound() {
        let base = gen_cycle(5, Rational::one()).unwrap();
        let f = 1;
        let g = gen_cloud_blowup(&base, f, 2).unwrap();
        let budget = Budget::default();
        let out = crate::greedy::build_greedy(&g, k(3), f, crate::greedy::Competition::TwoF, PreserverMode::Exact, &budget)
            .unwrap();
        assert_eq!(out.preserver_mode, PreserverMode::Exact);
        let measured = competitive_lightness(&g, &out.spanner, 2 * f, PreserverMode::Exact, &budget).unwrap();
        let f = f as i128;
        let bound = r(f + 1, 1) * base.total_weight() / (r(2 * (2 * f + 1), 1) * mst_weight(&base));
        assert!(measured.value >= bound, "{} < {}", measured.value, bound);
    }

    #[test]
    fn random_families() {
        let full = gen_random(6, 1.0, (1, 3), 5).unwrap();
        assert_eq!(full.m(), 15);
        assert_eq!(gen_random(8, 0.4, (1, 9), 3).unwrap(), gen_random(8, 0.4, (1, 9), 3).unwrap());
        assert!(gen_random(30, 0.001, (1, 2), 1).is_err());
        assert!(gen_random(4, 0.0, (1, 2), 1).is_err());
        let fixture = include_str!("../tests/fixtures/random_n10_p05_s7.txt");
        assert_eq!(gen_random(10, 0.5, (1, 10), 7).unwrap(), load_graph(fixture).unwrap());
    }

    proptest! {
        #[test]
        fn random_sparse_is_connected_and_sized(n in 1usize..13, extra in 0usize..10, seed in any::<u64>()) {
            let g = gen_random_sparse(n, extra, (1, 9), seed).unwrap();
            round_trips(&g);
            prop_assert_eq!(g.m(), n - 1 + extra.min(n * (n - 1) / 2 - (n - 1)));
            prop_assert_eq!(g, gen_random_sparse(n, extra, (1, 9), seed).unwrap());
        }

        #[test]
        fn random_is_connected(n in 1usize..10, seed in any::<u64>()) {
            let g = gen_random(n, 0.6, (1, 5), seed).unwrap();
            round_trips(&g);
        }
    }
}
