//! Instance families addressable from the command line and sweep configs.

use std::collections::BTreeMap;

use clap::ValueEnum;
use ftspan::generators::{
    gen_cloud_blowup, gen_cloud_cycle, gen_cycle, gen_cycle_chords, gen_random, gen_random_sparse, gen_triangle,
};
use ftspan::graph::{format_rational, parse_rational, Rational, Stretch, WeightedMultigraph};
use ftspan::Error;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Triangle,
    CycleChords,
    CloudCycle,
    CloudBlowup,
    Random,
    RandomSparse,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Triangle => "triangle",
            Family::CycleChords => "cycle-chords",
            Family::CloudCycle => "cloud-cycle",
            Family::CloudBlowup => "cloud-blowup",
            Family::Random => "random",
            Family::RandomSparse => "random-sparse",
        }
    }
}

/// Family parameters; unset ones take the documented defaults.
#[derive(Clone, Debug, Default, PartialEq, clap::Args)]
pub struct FamilyParams {
    /// Heavy edge weight of `triangle` (default 10).
    #[arg(long)]
    pub w: Option<String>,
    /// Half-length of `cycle-chords`, vertex count of `random*` (default 4 / 8).
    #[arg(long)]
    pub n: Option<usize>,
    /// Hub count of `cloud-cycle` (default 4).
    #[arg(long)]
    pub m: Option<usize>,
    /// Fault budget of `cloud-cycle` and `cloud-blowup` (default 1).
    #[arg(long)]
    pub f: Option<usize>,
    /// Stretch used by the chord and hub weights (default 2).
    #[arg(long)]
    pub k: Option<String>,
    /// Slack subtracted from chord and hub weights (default 1/4).
    #[arg(long)]
    pub eps: Option<String>,
    /// Competition multiple of `cloud-blowup` (default 2).
    #[arg(long)]
    pub c: Option<usize>,
    /// Unit cycle used as the `cloud-blowup` base when no --base file is given (default 5).
    #[arg(long)]
    pub base_cycle: Option<usize>,
    /// Edge-list file used as the `cloud-blowup` base.
    #[arg(long)]
    pub base: Option<std::path::PathBuf>,
    /// Edge probability of `random` (default 0.5).
    #[arg(long)]
    pub edge_prob: Option<f64>,
    /// Extra edges beyond the spanning tree of `random-sparse` (default 4).
    #[arg(long)]
    pub extra: Option<usize>,
    /// Smallest random weight (default 1).
    #[arg(long)]
    pub wmin: Option<i64>,
    /// Largest random weight (default 10).
    #[arg(long)]
    pub wmax: Option<i64>,
}

fn rational(name: &str, text: &str) -> Result<Rational, Error> {
    parse_rational(text).ok_or_else(|| Error::InvalidParameter(format!("--{name}: `{text}` is not a number")))
}

fn rational_or(name: &str, value: &Option<String>, default: &str) -> Result<Rational, Error> {
    rational(name, value.as_deref().unwrap_or(default))
}

/// Builds the instance and returns it with the parameters actually used.
pub fn generate(
    family: Family,
    params: &FamilyParams,
    seed: u64,
) -> Result<(WeightedMultigraph, BTreeMap<String, String>), crate::CliError> {
    let mut used = BTreeMap::new();
    let mut note = |key: &str, value: String| {
        used.insert(key.to_string(), value);
    };
    let stretch = |p: &FamilyParams| -> Result<Stretch, Error> { Stretch::new(rational_or("k", &p.k, "2")?) };
    let g = match family {
        Family::Triangle => {
            let w = rational_or("w", &params.w, "10")?;
            note("w", format_rational(&w));
            gen_triangle(w)?
        }
        Family::CycleChords => {
            let (n, k, eps) = (params.n.unwrap_or(4), stretch(params)?, rational_or("eps", &params.eps, "1/4")?);
            note("n", n.to_string());
            note("k", k.to_string());
            note("eps", format_rational(&eps));
            gen_cycle_chords(n, k, eps)?
        }
        Family::CloudCycle => {
            let (m, f) = (params.m.unwrap_or(4), params.f.unwrap_or(1));
            let (k, eps) = (stretch(params)?, rational_or("eps", &params.eps, "1/4")?);
            note("m", m.to_string());
            note("f", f.to_string());
            note("k", k.to_string());
            note("eps", format_rational(&eps));
            gen_cloud_cycle(m, f, k, eps)?
        }
        Family::CloudBlowup => {
            let (f, c) = (params.f.unwrap_or(1), params.c.unwrap_or(2));
            let base = match &params.base {
                Some(path) => {
                    note("base", path.display().to_string());
                    crate::read_graph(path)?
                }
                None => {
                    let len = params.base_cycle.unwrap_or(5);
                    note("base_cycle", len.to_string());
                    gen_cycle(len, Rational::from_integer(1))?
                }
            };
            note("f", f.to_string());
            note("c", c.to_string());
            gen_cloud_blowup(&base, f, c)?
        }
        Family::Random | Family::RandomSparse => {
            let n = params.n.unwrap_or(8);
            let weights = (params.wmin.unwrap_or(1), params.wmax.unwrap_or(10));
            note("n", n.to_string());
            note("wmin", weights.0.to_string());
            note("wmax", weights.1.to_string());
            note("seed", seed.to_string());
            if family == Family::Random {
                let p = params.edge_prob.unwrap_or(0.5);
                note("edge_prob", p.to_string());
                gen_random(n, p, weights, seed)?
            } else {
                let extra = params.extra.unwrap_or(4);
                note("extra", extra.to_string());
                gen_random_sparse(n, extra, weights, seed)?
            }
        }
    };
    Ok((g, used))
}
