use super::{DisjointSets, EdgeSet, Rational, WeightedMultigraph};
use crate::error::{Error, Result};

/// Kruskal over the edges of `view`, scanning in `(weight, id)` order.
pub fn min_spanning_forest(g: &WeightedMultigraph, view: &EdgeSet) -> EdgeSet {
    let mut ids: Vec<_> = view.iter().collect();
    ids.sort_by_key(|&e| g.order_key(e));
    let mut ds = DisjointSets::new(g.n());
    let mut out = g.no_edges();
    for e in ids {
        let (u, v) = g.endpoints(e);
        if ds.union(u, v) {
            out.insert(e);
        }
    }
    out
}

/// Minimum spanning forest of the whole graph; unique under the
/// `(weight, id)` tie-break.
pub fn mst(g: &WeightedMultigraph) -> EdgeSet {
    min_spanning_forest(g, &g.all_edges())
}

pub fn is_connected(g: &WeightedMultigraph, view: &EdgeSet) -> bool {
    let mut ds = DisjointSets::new(g.n());
    let mut parts = g.n();
    for e in view.iter() {
        let (u, v) = g.endpoints(e);
        if ds.union(u, v) {
            parts -= 1;
        }
    }
    parts <= 1
}

/// `w(H) / w(mst(G))`.
pub fn lightness(g: &WeightedMultigraph, h: &EdgeSet) -> Result<Rational> {
    if !is_connected(g, &g.all_edges()) {
        return Err(Error::Disconnected);
    }
    let tree = g.units_of(&mst(g));
    if tree == 0 {
        return Err(Error::InvalidParameter(
            "lightness is undefined for a graph without edges".into(),
        ));
    }
    Ok(Rational::new(g.units_of(h), tree))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_mst_and_lightness() {
        let g = WeightedMultigraph::with_int_weights(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 10)]).unwrap();
        let t = mst(&g);
        assert_eq!(t.to_vec(), vec![0, 1]);
        assert_eq!(g.weight_of(&t), Rational::from_integer(2));
        assert_eq!(lightness(&g, &t).unwrap(), Rational::from_integer(1));
        assert_eq!(lightness(&g, &g.all_edges()).unwrap(), Rational::from_integer(6));
        assert_eq!(lightness(&g, &g.no_edges()).unwrap(), Rational::from_integer(0));
    }

    #[test]
    fn lighter_parallel_edge_wins() {
        let g = WeightedMultigraph::with_int_weights(2, &[(0, 1, 5), (0, 1, 3)]).unwrap();
        assert_eq!(mst(&g).to_vec(), vec![1]);
    }

    #[test]
    fn equal_weights_break_ties_by_id() {
        let g = WeightedMultigraph::with_int_weights(2, &[(0, 1, 4), (0, 1, 4)]).unwrap();
        assert_eq!(mst(&g).to_vec(), vec![0]);
    }

    #[test]
    fn tree_is_its_own_mst() {
        let g = WeightedMultigraph::with_int_weights(4, &[(0, 1, 7), (1, 2, 2), (1, 3, 9)]).unwrap();
        assert_eq!(mst(&g), g.all_edges());
    }

    #[test]
    fn disconnected_lightness_is_an_error() {
        let g = WeightedMultigraph::with_int_weights(3, &[(0, 1, 1)]).unwrap();
        assert_eq!(lightness(&g, &g.all_edges()), Err(Error::Disconnected));
    }
}
