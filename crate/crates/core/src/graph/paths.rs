use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{EdgeId, EdgeSet, Length, VertexId, WeightedMultigraph};
use crate::error::Result;

/// Single-source shortest path lengths (in weight units) over the edges
/// accepted by `allowed`.
pub fn distances_from(
    g: &WeightedMultigraph,
    allowed: impl Fn(EdgeId) -> bool,
    src: VertexId,
) -> Vec<Option<i128>> {
    let mut dist: Vec<Option<i128>> = vec![None; g.n()];
    let mut heap = BinaryHeap::new();
    dist[src] = Some(0);
    heap.push(Reverse((0i128, src)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if dist[x] != Some(d) {
            continue;
        }
        for &(y, e) in g.neighbors(x) {
            if !allowed(e) {
                continue;
            }
            let nd = d + g.units(e);
            if dist[y].is_none_or(|cur| nd < cur) {
                dist[y] = Some(nd);
                heap.push(Reverse((nd, y)));
            }
        }
    }
    dist
}

/// Shortest `src`-`dst` path and its edges, ignoring anything longer than
/// `cutoff` units.
pub fn shortest_path(
    g: &WeightedMultigraph,
    allowed: impl Fn(EdgeId) -> bool,
    src: VertexId,
    dst: VertexId,
    cutoff: Option<i128>,
) -> Option<(i128, Vec<EdgeId>)> {
    let n = g.n();
    let mut dist: Vec<Option<i128>> = vec![None; n];
    let mut via: Vec<Option<EdgeId>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[src] = Some(0);
    heap.push(Reverse((0i128, src)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if dist[x] != Some(d) {
            continue;
        }
        if x == dst {
            let mut path = Vec::new();
            let mut cur = dst;
            while let Some(e) = via[cur] {
                path.push(e);
                cur = g.edge(e).other(cur);
            }
            path.reverse();
            return Some((d, path));
        }
        for &(y, e) in g.neighbors(x) {
            if !allowed(e) {
                continue;
            }
            let nd = d + g.units(e);
            if cutoff.is_some_and(|c| nd > c) {
                continue;
            }
            if dist[y].is_none_or(|cur| nd < cur) {
                dist[y] = Some(nd);
                via[y] = Some(e);
                heap.push(Reverse((nd, y)));
            }
        }
    }
    None
}

/// Shortest `src`-`dst` length in units, or `None` if unreachable within `cutoff`.
pub fn shortest_units(
    g: &WeightedMultigraph,
    allowed: impl Fn(EdgeId) -> bool,
    src: VertexId,
    dst: VertexId,
    cutoff: Option<i128>,
) -> Option<i128> {
    shortest_path(g, allowed, src, dst, cutoff).map(|(d, _)| d)
}

/// Distance between `u` and `v` in the subgraph `view`.
pub fn dist(g: &WeightedMultigraph, view: &EdgeSet, u: VertexId, v: VertexId) -> Result<Length> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    Ok(match shortest_units(g, |e| view.contains(e), u, v, None) {
        Some(d) => Length::Finite(g.from_units(d)),
        None => Length::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Rational;

    fn triangle(w: i64) -> WeightedMultigraph {
        WeightedMultigraph::with_int_weights(3, &[(0, 1, 1), (0, 2, 1), (1, 2, w)]).unwrap()
    }

    #[test]
    fn heavy_triangle_edge_is_bypassed() {
        let g = triangle(10);
        let all = g.all_edges();
        assert_eq!(dist(&g, &all, 1, 2).unwrap(), Length::Finite(Rational::from_integer(2)));
        let (len, path) = shortest_path(&g, |_| true, 1, 2, None).unwrap();
        assert_eq!(len, 2);
        assert_eq!(path, vec![0, 1]);
    }

    #[test]
    fn self_distance_is_zero_and_disconnected_is_infinite() {
        let g = WeightedMultigraph::with_int_weights(2, &[]).unwrap();
        let none = g.no_edges();
        assert_eq!(dist(&g, &none, 1, 1).unwrap(), Length::Finite(Rational::from_integer(0)));
        assert_eq!(dist(&g, &none, 0, 1).unwrap(), Length::Infinite);
        assert!(dist(&g, &none, 0, 2).is_err());
    }

    #[test]
    fn cutoff_prunes_long_paths() {
        let g = triangle(10);
        assert_eq!(shortest_units(&g, |e| e != 2, 1, 2, Some(1)), None);
        assert_eq!(shortest_units(&g, |e| e != 2, 1, 2, Some(2)), Some(2));
    }
}
