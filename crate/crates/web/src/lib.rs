//! Browser bindings for the `ftspan` demo page.
//!
//! Three operations are exposed, all taking and returning plain strings so
//! the page needs no glue beyond what `wasm-bindgen` generates:
//!
//! * [`generate`]: build an instance of a named family as edge-list text;
//! * [`build`]: run a construction and return a JSON summary with the chosen
//!   edges, weights and competitive lightness;
//! * [`verify`]: check a user-chosen subgraph exhaustively and return the
//!   verdict and witness as JSON.
//!
//! [`describe`] parses an edge list for drawing.
//!
//! The `*_json` functions hold the logic and are plain Rust so they can be
//! tested natively; the exported wrappers only convert errors.

use ftspan::generators::{gen_cloud_cycle, gen_cycle_chords, gen_random_sparse, gen_triangle};
use ftspan::graph::io::{load_graph, write_graph};
use ftspan::graph::{format_rational, lightness, parse_rational, Rational, Stretch, WeightedMultigraph};
use ftspan::greedy::{build_greedy, Competition};
use ftspan::oracles::{is_ft_spanner, Budget, VerificationReport};
use ftspan::polytime::{build_poly, PolyConfig};
use ftspan::preserver::{competitive_lightness, CompetitiveLightness, PreserverMode};
use ftspan::{Error, Result};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Exhaustive checks in the page stay well under a second.
fn demo_budget() -> Budget {
    Budget {
        max_fault_sets: 20_000,
        ..Budget::default()
    }
}

fn stretch(text: &str) -> Result<Stretch> {
    let k = parse_rational(text).ok_or_else(|| Error::InvalidParameter(format!("stretch `{text}` is not a number")))?;
    Stretch::new(k)
}

/// Edge-list text of a family instance. `size` is the triangle's heavy
/// weight, the half-length of `cycle-chords`, the hub count of
/// `cloud-cycle` or the vertex count of `random`.
pub fn generate_text(family: &str, size: usize, f: usize, k: &str, seed: u64) -> Result<String> {
    let quarter = Rational::new(1, 4);
    let g = match family {
        "triangle" => gen_triangle(Rational::from_integer(size as i128))?,
        "cycle-chords" => gen_cycle_chords(size, stretch(k)?, quarter)?,
        "cloud-cycle" => gen_cloud_cycle(size, f, stretch(k)?, quarter)?,
        "random" => gen_random_sparse(size, size / 2 + 1, (1, 10), seed)?,
        other => return Err(Error::InvalidParameter(format!("unknown family `{other}`"))),
    };
    Ok(write_graph(&g))
}

#[derive(Serialize)]
struct DemoEdge {
    id: usize,
    u: usize,
    v: usize,
    weight: String,
}

#[derive(Serialize)]
struct BuildSummary {
    n: usize,
    edges: Vec<DemoEdge>,
    spanner_edges: Vec<usize>,
    preserver_edges: Vec<usize>,
    spanner_weight: String,
    total_weight: String,
    lightness: String,
    competitive: Vec<CompetitiveLightness>,
    verification: VerificationReport,
}

/// Runs `algo` (`greedy` or `poly`) and summarises the result as JSON.
pub fn build_json(graph_text: &str, algo: &str, k: &str, f: usize, seed: u64) -> Result<String> {
    let g = load_graph(graph_text)?;
    let k = stretch(k)?;
    let budget = demo_budget();
    let (spanner, preserver, level) = match algo {
        "greedy" => {
            let out = build_greedy(&g, k, f, Competition::TwoF, PreserverMode::Exact, &budget)?;
            (out.spanner, out.preserver, out.level)
        }
        "poly" => {
            let out = build_poly(&g, &PolyConfig::new(k, f, seed), &budget)?;
            (out.spanner, out.preserver, out.level)
        }
        other => return Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
    };
    let mut levels = vec![f, level];
    levels.dedup();
    let competitive = levels
        .into_iter()
        .map(|l| match competitive_lightness(&g, &spanner, l, PreserverMode::Exact, &budget) {
            Err(e) if e.is_budget() => competitive_lightness(&g, &spanner, l, PreserverMode::Heuristic, &budget),
            other => other,
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = BuildSummary {
        n: g.n(),
        edges: edges_of(&g),
        spanner_edges: spanner.to_vec(),
        preserver_edges: preserver.to_vec(),
        spanner_weight: format_rational(&g.weight_of(&spanner)),
        total_weight: format_rational(&g.total_weight()),
        lightness: format_rational(&lightness(&g, &spanner)?),
        competitive,
        verification: is_ft_spanner(&g, &spanner, k, f, &budget)?,
    };
    Ok(serde_json::to_string(&summary).expect("summaries serialize"))
}

fn edges_of(g: &WeightedMultigraph) -> Vec<DemoEdge> {
    g.edges()
        .iter()
        .map(|e| DemoEdge {
            id: e.id,
            u: e.u,
            v: e.v,
            weight: format_rational(&e.weight),
        })
        .collect()
}

/// Checks the subgraph with the given comma- or space-separated edge ids.
pub fn verify_json(graph_text: &str, edge_ids: &str, k: &str, f: usize) -> Result<String> {
    let g = load_graph(graph_text)?;
    let mut h = g.no_edges();
    for token in edge_ids.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let id: usize = token
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad edge id `{token}`")))?;
        if id >= g.m() {
            return Err(Error::InvalidParameter(format!("edge id {id} out of range")));
        }
        h.insert(id);
    }
    let report = is_ft_spanner(&g, &h, stretch(k)?, f, &demo_budget())?;
    Ok(serde_json::to_string(&report).expect("reports serialize"))
}

/// Parses a graph and returns its vertex count and edges as JSON, for drawing.
pub fn describe_json(graph_text: &str) -> Result<String> {
    #[derive(Serialize)]
    struct Description {
        n: usize,
        edges: Vec<DemoEdge>,
    }
    let g = load_graph(graph_text)?;
    Ok(serde_json::to_string(&Description {
        n: g.n(),
        edges: edges_of(&g),
    })
    .expect("descriptions serialize"))
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn generate(family: &str, size: usize, f: usize, k: &str, seed: u64) -> std::result::Result<String, JsError> {
    js(generate_text(family, size, f, k, seed))
}

#[wasm_bindgen]
pub fn build(graph_text: &str, algo: &str, k: &str, f: usize, seed: u64) -> std::result::Result<String, JsError> {
    js(build_json(graph_text, algo, k, f, seed))
}

#[wasm_bindgen]
pub fn verify(graph_text: &str, edge_ids: &str, k: &str, f: usize) -> std::result::Result<String, JsError> {
    js(verify_json(graph_text, edge_ids, k, f))
}

#[wasm_bindgen]
pub fn describe(graph_text: &str) -> std::result::Result<String, JsError> {
    js(describe_json(graph_text))
}
