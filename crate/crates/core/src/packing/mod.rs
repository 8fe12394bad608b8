//! Forest packings of a preserver `Q`: `c` forests over the edges of `Q`,
//! each edge used at most twice overall, such that every class of
//! `connectivity_classes(Q, c)` is connected in at least `c` of them.
//!
//! Doubling `Q` makes it Eulerian, and every class becomes `2c`-connected.
//! Such a packing always exists then; we build it by splitting off the
//! non-terminal vertices, packing spanning trees per class where the class
//! is self-sufficient, and searching directly otherwise. The verifier runs
//! on every result.

mod matroid;
mod search;
mod split;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use matroid::{partition_into_forests, spanning_trees};

use crate::error::{Error, Result};
use crate::graph::{
    classes_of_pairs, connectivity_classes, min_spanning_forest, CycleWitness,
    DisjointSets, EdgeId, EdgeSet, VertexId, WeightedMultigraph,
};
use crate::oracles::{ConditionWitness, VerificationReport};
use split::WorkEdge;

/// How a packing was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PackingRoute {
    /// `c = 1`: a spanning forest of `Q`.
    SpanningForest,
    /// Spanning trees per class after splitting off non-terminals.
    TreePacking,
    RandomizedSearch,
    ExhaustiveSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForestPacking {
    pub level: usize,
    /// Edge ids of the parent graph, each forest sorted.
    pub forests: Vec<Vec<EdgeId>>,
    pub classes: Vec<Vec<VertexId>>,
    /// Per class, the forests in which it is connected.
    pub coverage: Vec<Vec<usize>>,
    /// Per parent edge, the number of forests containing it.
    pub multiplicity: Vec<u8>,
    pub route: PackingRoute,
}

impl ForestPacking {
    pub fn forest_set(&self, g: &WeightedMultigraph, i: usize) -> EdgeSet {
        EdgeSet::from_ids(g.m(), self.forests[i].iter().copied())
    }

    pub fn class_of(&self, v: VertexId) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PackingOptions {
    pub seed: u64,
    pub attempts: usize,
    /// Largest split-off multigraph handed to the exhaustive search.
    pub exhaustive_edges: usize,
    pub exhaustive_nodes: u64,
}

impl Default for PackingOptions {
    fn default() -> Self {
        PackingOptions {
            seed: 0x5eed_f0e5,
            attempts: 400,
            exhaustive_edges: 20,
            exhaustive_nodes: 2_000_000,
        }
    }
}

/// `Q` with every edge doubled. Copies `2i` and `2i + 1` come from the
/// `i`-th edge of `Q` in id order; the second vector maps back to `G`.
pub fn double_edges(g: &WeightedMultigraph, q: &EdgeSet) -> (WeightedMultigraph, Vec<EdgeId>) {
    let origin: Vec<EdgeId> = q.iter().flat_map(|e| [e, e]).collect();
    let doubled = WeightedMultigraph::new(g.n(), origin.iter().map(|&e| (g.edge(e).u, g.edge(e).v, g.weight(e))))
        .expect("copies of valid edges are valid");
    (doubled, origin)
}

fn coverage_of(g: &WeightedMultigraph, forests: &[Vec<EdgeId>], classes: &[Vec<VertexId>]) -> Vec<Vec<usize>> {
    let labels: Vec<Vec<usize>> = forests
        .iter()
        .map(|f| {
            let mut ds = DisjointSets::new(g.n());
            for &e in f {
                let (a, b) = g.endpoints(e);
                ds.union(a, b);
            }
            ds.canonical_labels()
        })
        .collect();
    classes
        .iter()
        .map(|class| {
            (0..forests.len())
                .filter(|&i| class.iter().all(|&x| labels[i][x] == labels[i][class[0]]))
                .collect()
        })
        .collect()
}

fn finish(
    g: &WeightedMultigraph,
    q: &EdgeSet,
    c: usize,
    classes: Vec<Vec<VertexId>>,
    lifted: Vec<EdgeSet>,
    route: PackingRoute,
) -> Result<ForestPacking> {
    // Spanning forests keep whatever the lifted walks connect.
    let forests: Vec<Vec<EdgeId>> = lifted
        .iter()
        .map(|set| {
            let mut ds = DisjointSets::new(g.n());
            set.iter()
                .filter(|&e| {
                    let (a, b) = g.endpoints(e);
                    ds.union(a, b)
                })
                .collect()
        })
        .collect();
    let mut multiplicity = vec![0u8; g.m()];
    for f in &forests {
        for &e in f {
            multiplicity[e] += 1;
        }
    }
    let coverage = coverage_of(g, &forests, &classes);
    let packing = ForestPacking {
        level: c,
        forests,
        classes,
        coverage,
        multiplicity,
        route,
    };
    let report = verify_packing(&packing, g, q, c);
    if !report.passed() {
        return Err(Error::PackingFailed {
            level: c,
            reason: format!("constructed packing failed verification: {:?}", report.witness),
        });
    }
    Ok(packing)
}

/// Packs `c` forests over `Q` as described in the module docs, with the
/// default search options.
pub fn pack_forests(g: &WeightedMultigraph, q: &EdgeSet, c: usize) -> Result<ForestPacking> {
    pack_forests_with(g, q, c, &PackingOptions::default())
}

pub fn pack_forests_with(
    g: &WeightedMultigraph,
    q: &EdgeSet,
    c: usize,
    options: &PackingOptions,
) -> Result<ForestPacking> {
    if c == 0 {
        return Err(Error::InvalidParameter("packing level must be positive".into()));
    }
    let classes = connectivity_classes(g, q, c);
    if c == 1 {
        let forest = min_spanning_forest(g, q);
        return finish(g, q, c, classes, vec![forest], PackingRoute::SpanningForest);
    }
    let terminal: Vec<Vec<VertexId>> = classes.iter().filter(|c| c.len() > 1).cloned().collect();
    let in_terminal: Vec<bool> = {
        let mut v = vec![false; g.n()];
        terminal.iter().flatten().for_each(|&x| v[x] = true);
        v
    };
    let steiner: Vec<VertexId> = (0..g.n()).filter(|&x| !in_terminal[x]).collect();
    let doubled: Vec<WorkEdge> = q
        .iter()
        .flat_map(|e| {
            let (a, b) = g.endpoints(e);
            [0, 1].map(|_| WorkEdge {
                a,
                b,
                lineage: vec![e],
            })
        })
        .collect();
    let work = split::split_off(g.n(), doubled, &steiner, &terminal, 2 * c).ok_or_else(|| {
        Error::PackingFailed {
            level: c,
            reason: "no admissible splitting found".into(),
        }
    })?;
    let pairs: Vec<(VertexId, VertexId)> = work.iter().map(|e| (e.a, e.b)).collect();
    let lift = |sets: Vec<Vec<usize>>| -> Vec<EdgeSet> {
        sets.into_iter()
            .map(|set| EdgeSet::from_ids(g.m(), set.into_iter().flat_map(|i| work[i].lineage.iter().copied())))
            .collect()
    };

    // Route 1: every class spans 2c edge-disjoint paths on its own edges.
    if let Some(sets) = per_class_trees(g.n(), &pairs, &terminal, c) {
        return finish(g, q, c, classes, lift(sets), PackingRoute::TreePacking);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ (c as u64).rotate_left(32));
    if let Some(sets) = search::randomized(g.n(), &pairs, &terminal, c, options.attempts, &mut rng) {
        return finish(g, q, c, classes, lift(sets), PackingRoute::RandomizedSearch);
    }
    if pairs.len() <= options.exhaustive_edges {
        if let Some(sets) = search::exhaustive(g.n(), &pairs, &terminal, c, options.exhaustive_nodes) {
            return finish(g, q, c, classes, lift(sets), PackingRoute::ExhaustiveSearch);
        }
    }
    Err(Error::PackingFailed {
        level: c,
        reason: format!(
            "searches exhausted on a split-off multigraph with {} edges",
            pairs.len()
        ),
    })
}

/// `c` spanning trees inside each class, merged by index, when every class
/// is `2c`-connected through its own edges alone.
fn per_class_trees(
    n: usize,
    pairs: &[(VertexId, VertexId)],
    classes: &[Vec<VertexId>],
    c: usize,
) -> Option<Vec<Vec<usize>>> {
    let mut sets = vec![Vec::new(); c];
    for class in classes {
        let mut local = vec![usize::MAX; n];
        for (i, &x) in class.iter().enumerate() {
            local[x] = i;
        }
        let inside: Vec<usize> = (0..pairs.len())
            .filter(|&e| local[pairs[e].0] != usize::MAX && local[pairs[e].1] != usize::MAX)
            .collect();
        let local_pairs: Vec<_> = inside
            .iter()
            .map(|&e| (local[pairs[e].0], local[pairs[e].1]))
            .collect();
        if classes_of_pairs(class.len(), &local_pairs, 2 * c).len() != 1 {
            return None;
        }
        let trees = spanning_trees(class.len(), &local_pairs, c)?;
        for (i, tree) in trees.into_iter().enumerate() {
            sets[i].extend(tree.into_iter().map(|t| inside[t]));
        }
    }
    Some(sets)
}

/// Independent check of a packing against `Q` at level `c`: forests lie in
/// `Q` and are acyclic, no edge is in more than two forests, and every
/// class of `connectivity_classes(Q, c)` is connected in at least `c`
/// forests.
pub fn verify_packing(p: &ForestPacking, g: &WeightedMultigraph, q: &EdgeSet, c: usize) -> VerificationReport {
    for (i, forest) in p.forests.iter().enumerate() {
        let mut ds = DisjointSets::new(g.n());
        let mut seen = g.no_edges();
        for &e in forest {
            if e >= g.m() || !q.contains(e) {
                return ConditionWitness::new("subset").forest(i).edge(e).into_report();
            }
            let (a, b) = g.endpoints(e);
            if seen.contains(e) || !ds.union(a, b) {
                return ConditionWitness::new("acyclic")
                    .forest(i)
                    .edge(e)
                    .cycle(forest_cycle(g, forest, e))
                    .into_report();
            }
            seen.insert(e);
        }
    }
    let mut count = vec![0usize; g.m()];
    for forest in &p.forests {
        for &e in forest {
            count[e] += 1;
        }
    }
    if let Some(e) = (0..g.m()).find(|&e| count[e] > 2) {
        return ConditionWitness::new("multiplicity").edge(e).into_report();
    }
    let classes = connectivity_classes(g, q, c);
    let coverage = coverage_of(g, &p.forests, &classes);
    for (class, covered) in classes.iter().zip(&coverage) {
        if covered.len() < c {
            return ConditionWitness::new("coverage").class(class.clone()).into_report();
        }
    }
    VerificationReport::pass()
}

/// The cycle that `e` closes among the forest edges listed before it.
fn forest_cycle(g: &WeightedMultigraph, forest: &[EdgeId], e: EdgeId) -> Option<CycleWitness> {
    let before: Vec<EdgeId> = forest.iter().copied().take_while(|&x| x != e).collect();
    if before.contains(&e) {
        return None;
    }
    let view = EdgeSet::from_ids(g.m(), before);
    let (u, v) = g.endpoints(e);
    let (_, mut path) = crate::graph::shortest_path(g, |x| view.contains(x), u, v, None)?;
    path.push(e);
    Some(CycleWitness::new(g, path))
}

/// Forests connecting the class of `u` and `v` that avoid every edge of
/// `forbidden`. Each forbidden edge lies in at most two forests, so at
/// least `c - 2 |forbidden ∩ Q|` hosts remain.
pub fn eligible_hosts(
    p: &ForestPacking,
    u: VertexId,
    v: VertexId,
    forbidden: &EdgeSet,
) -> Result<Vec<usize>> {
    let class = p
        .class_of(u)
        .filter(|&i| u != v && p.classes[i].contains(&v))
        .ok_or(Error::NotInCommonClass {
            u,
            v,
            level: p.level,
        })?;
    Ok(p.coverage[class]
        .iter()
        .copied()
        .filter(|&i| p.forests[i].iter().all(|&e| !forbidden.contains(e)))
        .collect())
}
