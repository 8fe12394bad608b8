//! Running a construction and assembling its report.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::ValueEnum;
use ftspan::graph::{format_rational, lightness, weighted_girth, EdgeSet, Length, Rational, Stretch, WeightedMultigraph};
use ftspan::greedy::{build_greedy, check_blocking_set, Competition};
use ftspan::oracles::{is_ft_spanner, Budget, Verdict, VerificationReport};
use ftspan::polytime::{build_poly, build_poly_eta, PolyConfig};
use ftspan::preserver::{competitive_lightness, mst_weight, CompetitiveLightness, PreserverMode};
use ftspan::Result;
use serde::{Deserialize, Serialize};

use crate::report::{AlgorithmInfo, Check, Instance, Outputs, RunReport, Sampling, SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Greedy,
    Poly,
    PolyEta,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Greedy => "greedy",
            Algo::Poly => "poly",
            Algo::PolyEta => "poly-eta",
        }
    }
}

/// Fully resolved build parameters.
#[derive(Clone, Debug)]
pub struct BuildSpec {
    pub algo: Algo,
    pub k: Stretch,
    pub k0: Option<i128>,
    pub k_eps: Option<Rational>,
    pub f: usize,
    pub eta: Option<Rational>,
    pub competition: Competition,
    pub preserver: PreserverMode,
    pub seed: u64,
    pub threshold: Rational,
    pub c_const: f64,
    pub verify: bool,
    /// Competition levels at which to report `ℓ_f`; empty means `f` and the
    /// preserver level.
    pub ell_f: Vec<usize>,
    pub timing: bool,
    pub budget: Budget,
}

/// Where the instance came from, echoed into the report.
#[derive(Clone, Debug, Default)]
pub struct Provenance {
    pub family: Option<String>,
    pub params: BTreeMap<String, String>,
    pub source: Option<String>,
}

/// `ℓ_f` with an exact denominator when affordable, else the heuristic one
/// (the entry's `mode` says which).
pub fn ell_with_fallback(
    g: &WeightedMultigraph,
    h: &EdgeSet,
    f: usize,
    mode: PreserverMode,
    budget: &Budget,
) -> Result<CompetitiveLightness> {
    match competitive_lightness(g, h, f, mode, budget) {
        Err(e) if e.is_budget() => competitive_lightness(g, h, f, PreserverMode::Heuristic, budget),
        other => other,
    }
}

fn check(name: &str, report: VerificationReport, detail: Option<String>) -> Check {
    Check {
        name: name.into(),
        verdict: report.verdict,
        detail,
        witness: report.witness,
    }
}

pub fn run_build(g: &WeightedMultigraph, spec: &BuildSpec, provenance: &Provenance) -> Result<RunReport> {
    let start = Instant::now();
    let budget = &spec.budget;
    let mut config = PolyConfig::new(spec.k, spec.f, spec.seed);
    config.c_const = spec.c_const;
    config.threshold = spec.threshold;
    config.preserver_mode = spec.preserver;

    let mut verification = Vec::new();
    let (spanner, preserver, preserver_mode, fell_back, level, blocking_pairs, sampling, competition) = match spec.algo
    {
        Algo::Greedy => {
            let out = build_greedy(g, spec.k, spec.f, spec.competition, spec.preserver, budget)?;
            if spec.verify {
                let report = check_blocking_set(g, &out.blocking, &out.spanner, &out.preserver, spec.k, budget)?;
                verification.push(check("blocking_set", report, None));
            }
            (
                out.spanner,
                out.preserver,
                out.preserver_mode,
                out.preserver_fell_back,
                out.level,
                Some(out.blocking.pairs.len()),
                None,
                spec.competition.to_string(),
            )
        }
        Algo::Poly | Algo::PolyEta => {
            let out = match spec.algo {
                Algo::Poly => build_poly(g, &config, budget)?,
                _ => {
                    let eta = spec.eta.ok_or_else(|| {
                        ftspan::Error::InvalidParameter("--algo poly-eta needs --eta".into())
                    })?;
                    build_poly_eta(g, &config, eta, budget)?
                }
            };
            let competition = match spec.algo {
                Algo::Poly => Competition::TwoF.to_string(),
                _ => Competition::eta(spec.eta.expect("checked above"))?.to_string(),
            };
            (
                out.spanner,
                out.preserver,
                out.preserver_mode,
                out.preserver_fell_back,
                out.level,
                None,
                Some(Sampling {
                    samples: out.samples,
                    p_sample: format_rational(&out.p_sample),
                    votes_needed: out.votes_needed,
                    estimates: out.estimates,
                    host_log: out.host_log,
                }),
                competition,
            )
        }
    };

    if spec.verify {
        let report = is_ft_spanner(g, &spanner, spec.k, spec.f, budget)?;
        verification.push(check("ft_spanner", report, Some(format!("f = {}, k = {}", spec.f, spec.k))));
    }
    if spec.algo == Algo::Greedy && spec.f == 0 {
        let bound = spec.k.value() + Rational::from_integer(1);
        let girth = weighted_girth(g, &spanner);
        let shown = match girth.value {
            Length::Finite(v) => format_rational(&v),
            Length::Infinite => "inf".into(),
        };
        let report = match girth.value {
            Length::Finite(v) if v <= bound => {
                VerificationReport::fail(ftspan::oracles::Witness::Cycle(girth.witness.expect("finite girth")))
            }
            _ => VerificationReport::pass(),
        };
        let relation = if report.verdict == Verdict::Pass { ">" } else { "<=" };
        verification.push(check(
            "weighted_girth",
            report,
            Some(format!("weighted girth {shown} {relation} k + 1 = {}", format_rational(&bound))),
        ));
    }

    let mut levels = spec.ell_f.clone();
    if levels.is_empty() {
        levels = vec![spec.f, level];
    }
    levels.sort_unstable();
    levels.dedup();
    let competitive = levels
        .into_iter()
        .map(|l| ell_with_fallback(g, &spanner, l, spec.preserver, budget))
        .collect::<Result<Vec<_>>>()?;

    let outputs = Outputs {
        spanner_size: spanner.len(),
        spanner_weight: format_rational(&g.weight_of(&spanner)),
        spanner_edges: spanner.to_vec(),
        level,
        preserver_size: preserver.len(),
        preserver_weight: format_rational(&g.weight_of(&preserver)),
        preserver_mode,
        preserver_fell_back: fell_back,
        lightness: format_rational(&lightness(g, &spanner)?),
        competitive,
        blocking_pairs,
        sampling,
    };
    let is_poly = spec.algo != Algo::Greedy;
    let algorithm = AlgorithmInfo {
        name: spec.algo.name().into(),
        k: spec.k.to_string(),
        k0: spec.k0,
        eps: spec.k_eps.as_ref().map(format_rational),
        f: spec.f,
        eta: spec.eta.as_ref().map(format_rational),
        competition,
        preserver: spec.preserver,
        seed: spec.seed,
        threshold: is_poly.then(|| format_rational(&spec.threshold)),
        c_const: is_poly.then_some(spec.c_const),
    };
    Ok(RunReport {
        schema: SCHEMA,
        instance: instance_info(g, provenance),
        algorithm,
        outputs,
        verification,
        wall_clock_ms: spec.timing.then(|| start.elapsed().as_millis()),
    })
}

pub fn instance_info(g: &WeightedMultigraph, provenance: &Provenance) -> Instance {
    Instance {
        family: provenance.family.clone(),
        params: provenance.params.clone(),
        source: provenance.source.clone(),
        n: g.n(),
        m: g.m(),
        total_weight: format_rational(&g.total_weight()),
        mst_weight: format_rational(&mst_weight(g)),
    }
}
