use serde::Serialize;

use super::{ser_rational, shortest_path, EdgeId, EdgeSet, Length, Rational, WeightedMultigraph};

/// A cycle given as a closed walk of distinct edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    pub edge_ids: Vec<EdgeId>,
    #[serde(serialize_with = "ser_rational")]
    pub total_weight: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub max_edge_weight: Rational,
}

impl CycleWitness {
    pub fn new(g: &WeightedMultigraph, edge_ids: Vec<EdgeId>) -> Self {
        let total_weight = edge_ids.iter().map(|&e| g.weight(e)).sum();
        let max_edge_weight = edge_ids
            .iter()
            .map(|&e| g.weight(e))
            .max()
            .unwrap_or_default();
        CycleWitness {
            edge_ids,
            total_weight,
            max_edge_weight,
        }
    }

    /// `w(C) / max_{e in C} w(e)`.
    pub fn normalized_weight(&self) -> Rational {
        self.total_weight / self.max_edge_weight
    }

    /// Consecutive edges share an endpoint, the walk closes and no edge repeats.
    pub fn is_closed_walk(&self, g: &WeightedMultigraph) -> bool {
        let ids = &self.edge_ids;
        if ids.len() < 2 {
            return false;
        }
        let mut distinct = ids.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != ids.len() {
            return false;
        }
        let (u0, v0) = g.endpoints(ids[0]);
        // Try both orientations of the first edge.
        [(u0, v0), (v0, u0)].into_iter().any(|(start, mut at)| {
            for &e in &ids[1..] {
                let (a, b) = g.endpoints(e);
                if a == at {
                    at = b;
                } else if b == at {
                    at = a;
                } else {
                    return false;
                }
            }
            at == start
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedGirth {
    pub value: Length,
    pub witness: Option<CycleWitness>,
}

/// Minimum normalized weight over the cycles of `view`.
///
/// Every cycle has a unique heaviest edge `e = (u, v)` under the
/// `(weight, id)` order, and the lightest such cycle is `e` plus a shortest
/// `u`-`v` path through edges that precede `e` in that order. So the girth
/// is the minimum over edges of `1 + dist_{<e}(u, v) / w(e)`.
pub fn weighted_girth(g: &WeightedMultigraph, view: &EdgeSet) -> WeightedGirth {
    let mut best: Option<(Rational, Vec<EdgeId>)> = None;
    for e in view.iter() {
        let (u, v) = g.endpoints(e);
        let key = g.order_key(e);
        let Some((len, mut path)) =
            shortest_path(g, |x| view.contains(x) && g.order_key(x) < key, u, v, None)
        else {
            continue;
        };
        let value = Rational::new(len + g.units(e), g.units(e));
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            path.push(e);
            best = Some((value, path));
        }
    }
    match best {
        Some((value, path)) => WeightedGirth {
            value: Length::Finite(value),
            witness: Some(CycleWitness::new(g, path)),
        },
        None => WeightedGirth {
            value: Length::Infinite,
            witness: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_four_cycle_has_girth_four() {
        let g = WeightedMultigraph::with_int_weights(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])
            .unwrap();
        let girth = weighted_girth(&g, &g.all_edges());
        assert_eq!(girth.value, Length::Finite(Rational::from_integer(4)));
        let w = girth.witness.unwrap();
        assert!(w.is_closed_walk(&g));
        assert_eq!(w.normalized_weight(), Rational::from_integer(4));
    }

    #[test]
    fn heavy_triangle_girth() {
        let g = WeightedMultigraph::with_int_weights(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 10)]).unwrap();
        let girth = weighted_girth(&g, &g.all_edges());
        assert_eq!(girth.value, Length::Finite(Rational::new(6, 5)));
        assert_eq!(girth.witness.unwrap().edge_ids.len(), 3);
    }

    #[test]
    fn trees_have_infinite_girth() {
        let g = WeightedMultigraph::with_int_weights(4, &[(0, 1, 3), (1, 2, 1), (1, 3, 2)]).unwrap();
        let girth = weighted_girth(&g, &g.all_edges());
        assert_eq!(girth.value, Length::Infinite);
        assert!(girth.witness.is_none());
    }

    #[test]
    fn parallel_pair_is_a_cycle() {
        let g = WeightedMultigraph::with_int_weights(2, &[(0, 1, 3), (0, 1, 5)]).unwrap();
        let girth = weighted_girth(&g, &g.all_edges());
        assert_eq!(girth.value, Length::Finite(Rational::new(8, 5)));
        assert!(girth.witness.unwrap().is_closed_walk(&g));
    }
}
