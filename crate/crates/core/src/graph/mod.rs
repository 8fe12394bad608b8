//! Weighted multigraphs, edge-set views and the basic graph measures
//! (distances, spanning trees, edge connectivity, weighted girth).
//!
//! Weights are exact rationals. Internally every graph also keeps each weight
//! as an integer multiple of `1 / scale`, where `scale` is the least common
//! multiple of all weight denominators, so that path lengths are plain `i128`
//! sums and every comparison against a stretch bound is exact.

mod edge_set;
mod flow;
mod girth;
pub mod io;
mod mst;
mod paths;
mod union_find;

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use edge_set::EdgeSet;
pub use flow::{classes_of_pairs, connectivity_classes, edge_connectivity, pair_edge_connectivity};
pub use girth::{weighted_girth, CycleWitness, WeightedGirth};
pub use mst::{is_connected, lightness, min_spanning_forest, mst};
pub use paths::{dist, distances_from, shortest_path, shortest_units};
pub use union_find::DisjointSets;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Rational = Ratio<i128>;

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde helper writing a rational as its exact text form.
pub fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// Lossy conversion for reporting.
pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `"3"`, `"2.75"`, `"-1.5"` or `"11/4"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 30 {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: i128 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            digits => digits.parse().ok()?,
        };
        let denom = 10i128.checked_pow(frac.len() as u32)?;
        let frac_part: i128 = frac.parse().ok()?;
        let magnitude = int_part.checked_mul(denom)?.checked_add(frac_part)?;
        let numer = if negative { -magnitude } else { magnitude };
        return Some(Rational::new(numer, denom));
    }
    text.parse::<i128>().ok().map(Rational::from_integer)
}

/// A path length; `Infinite` compares greater than every finite length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(Rational),
    Infinite,
}

impl Length {
    pub fn is_finite(&self) -> bool {
        matches!(self, Length::Finite(_))
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            Length::Finite(r) => Some(*r),
            Length::Infinite => None,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(r) => f.write_str(&format_rational(r)),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Stretch factor `k >= 1`, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stretch(Rational);

impl Stretch {
    pub fn new(k: Rational) -> Result<Self> {
        if k < Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "stretch must be at least 1, got {}",
                format_rational(&k)
            )));
        }
        Ok(Stretch(k))
    }

    pub fn integer(k: i128) -> Result<Self> {
        Self::new(Rational::from_integer(k))
    }

    /// `(1 + eps) * (2 k0 - 1)`.
    pub fn from_k0_eps(k0: i128, eps: Rational) -> Result<Self> {
        if k0 < 1 || eps < Rational::zero() {
            return Err(Error::InvalidParameter(format!(
                "need k0 >= 1 and eps >= 0, got k0={k0}, eps={}",
                format_rational(&eps)
            )));
        }
        Self::new((Rational::one() + eps) * Rational::from_integer(2 * k0 - 1))
    }

    pub fn value(&self) -> Rational {
        self.0
    }

    /// Exact test `len > k * w` on scaled integer lengths.
    pub fn exceeded_by(&self, len: i128, w: i128) -> bool {
        len * self.0.denom() > self.0.numer() * w
    }

    /// Largest integer length `L` with `L <= k * w`.
    pub fn bound_units(&self, w: i128) -> i128 {
        num_integer::Integer::div_floor(&(self.0.numer() * w), self.0.denom())
    }
}

impl fmt::Display for Stretch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Rational,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected multigraph with strictly positive rational edge weights.
///
/// Edge ids are dense (`0..m`) and equal to the index in [`edges`](Self::edges).
/// Parallel edges are allowed, self-loops are not.
#[derive(Clone, Debug)]
pub struct WeightedMultigraph {
    n: usize,
    edges: Vec<Edge>,
    units: Vec<i128>,
    scale: i128,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl PartialEq for WeightedMultigraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for WeightedMultigraph {}

impl WeightedMultigraph {
    /// Builds a graph whose edge ids follow the order of `edges`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId, Rational)>) -> Result<Self> {
        let edges: Vec<Edge> = edges
            .into_iter()
            .enumerate()
            .map(|(id, (u, v, weight))| Edge { id, u, v, weight })
            .collect();
        Self::from_edges(n, edges)
    }

    /// Convenience constructor for integer weights.
    pub fn with_int_weights(n: usize, edges: &[(VertexId, VertexId, i64)]) -> Result<Self> {
        Self::new(
            n,
            edges
                .iter()
                .map(|&(u, v, w)| (u, v, Rational::from_integer(w as i128))),
        )
    }

    /// Builds a graph from edges that carry their own ids; the ids must form
    /// a permutation of `0..m`.
    pub fn from_edges(n: usize, mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_by_key(|e| e.id);
        for (i, e) in edges.iter().enumerate() {
            if e.id != i {
                return Err(Error::InvalidParameter(format!(
                    "edge ids must be dense 0..{}, found id {}",
                    edges.len(),
                    e.id
                )));
            }
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if e.u == e.v {
                return Err(Error::InvalidParameter(format!("edge {} is a self-loop", e.id)));
            }
            if e.weight <= Rational::zero() {
                return Err(Error::InvalidParameter(format!(
                    "edge {} has non-positive weight {}",
                    e.id,
                    format_rational(&e.weight)
                )));
            }
        }
        let scale = edges
            .iter()
            .fold(1i128, |acc, e| acc.lcm(e.weight.denom()));
        let units = edges
            .iter()
            .map(|e| e.weight.numer() * (scale / e.weight.denom()))
            .collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.id));
            adj[e.v].push((e.u, e.id));
        }
        Ok(WeightedMultigraph {
            n,
            edges,
            units,
            scale,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn endpoints(&self, id: EdgeId) -> (VertexId, VertexId) {
        let e = &self.edges[id];
        (e.u, e.v)
    }

    pub fn weight(&self, id: EdgeId) -> Rational {
        self.edges[id].weight
    }

    /// Weight of edge `id` in units of `1 / scale`.
    pub fn units(&self, id: EdgeId) -> i128 {
        self.units[id]
    }

    pub fn scale(&self) -> i128 {
        self.scale
    }

    pub fn from_units(&self, units: i128) -> Rational {
        Rational::new(units, self.scale)
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// The `(weight, id)` key used for every tie-break.
    pub fn order_key(&self, id: EdgeId) -> (i128, EdgeId) {
        (self.units[id], id)
    }

    pub fn cmp_edges(&self, a: EdgeId, b: EdgeId) -> Ordering {
        self.order_key(a).cmp(&self.order_key(b))
    }

    /// Edge ids in nondecreasing `(weight, id)` order.
    pub fn ids_by_weight(&self) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = (0..self.m()).collect();
        ids.sort_by_key(|&e| self.order_key(e));
        ids
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.m())
    }

    pub fn no_edges(&self) -> EdgeSet {
        EdgeSet::new(self.m())
    }

    pub fn units_of(&self, set: &EdgeSet) -> i128 {
        set.iter().map(|e| self.units[e]).sum()
    }

    pub fn weight_of(&self, set: &EdgeSet) -> Rational {
        self.from_units(self.units_of(set))
    }

    pub fn total_weight(&self) -> Rational {
        self.weight_of(&self.all_edges())
    }

    /// Degree of `v` counting only edges in `view`.
    pub fn degree_in(&self, view: &EdgeSet, v: VertexId) -> usize {
        self.adj[v].iter().filter(|&&(_, e)| view.contains(e)).count()
    }

    /// The subgraph spanned by `view` as a standalone graph with fresh dense
    /// ids, together with the map from new id to old id.
    pub fn extract(&self, view: &EdgeSet) -> (WeightedMultigraph, Vec<EdgeId>) {
        let origin: Vec<EdgeId> = view.iter().collect();
        let g = WeightedMultigraph::new(
            self.n,
            origin.iter().map(|&e| (self.edges[e].u, self.edges[e].v, self.edges[e].weight)),
        )
        .expect("a subgraph of a valid graph is valid");
        (g, origin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i128, q: i128) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3"), Some(r(3, 1)));
        assert_eq!(parse_rational("2.75"), Some(r(11, 4)));
        assert_eq!(parse_rational("11/4"), Some(r(11, 4)));
        assert_eq!(parse_rational(".5"), Some(r(1, 2)));
        assert_eq!(parse_rational("-1.5"), Some(r(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1."), None);
    }

    #[test]
    fn scale_is_lcm_of_denominators() {
        let g = WeightedMultigraph::new(3, [(0, 1, r(1, 2)), (1, 2, r(1, 3)), (0, 2, r(2, 1))]).unwrap();
        assert_eq!(g.scale(), 6);
        assert_eq!((0..3).map(|e| g.units(e)).collect::<Vec<_>>(), vec![3, 2, 12]);
        assert_eq!(g.total_weight(), r(17, 6));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(WeightedMultigraph::with_int_weights(2, &[(0, 0, 1)]).is_err());
        assert!(WeightedMultigraph::with_int_weights(2, &[(0, 1, 0)]).is_err());
        assert!(matches!(
            WeightedMultigraph::with_int_weights(2, &[(0, 2, 1)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn length_ordering_puts_infinity_last() {
        assert!(Length::Finite(r(1_000_000, 1)) < Length::Infinite);
        assert!(Length::Finite(r(1, 2)) < Length::Finite(r(2, 3)));
    }

    #[test]
    fn stretch_comparisons_are_exact() {
        let k = Stretch::new(r(3, 2)).unwrap();
        assert!(!k.exceeded_by(3, 2));
        assert!(k.exceeded_by(4, 2));
        assert_eq!(k.bound_units(3), 4);
        assert!(Stretch::new(r(1, 2)).is_err());
        assert_eq!(Stretch::from_k0_eps(2, r(1, 2)).unwrap().value(), r(9, 2));
    }
}
