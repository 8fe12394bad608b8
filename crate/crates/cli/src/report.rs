//! The JSON run report and its flat CSV form.

use std::collections::BTreeMap;

use ftspan::graph::EdgeId;
use ftspan::oracles::{Verdict, Witness};
use ftspan::polytime::HostLogEntry;
use ftspan::preserver::{CompetitiveLightness, PreserverMode};
use serde::Serialize;

/// Version tag carried by every report and CSV row.
pub const SCHEMA: &str = "ftspan-run/1";

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub instance: Instance,
    pub algorithm: AlgorithmInfo,
    pub outputs: Outputs,
    pub verification: Vec<Check>,
    /// Only present with `--timing`; omitted by default so that reports are
    /// byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub n: usize,
    pub m: usize,
    pub total_weight: String,
    pub mst_weight: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgorithmInfo {
    pub name: String,
    /// Effective stretch.
    pub k: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<i128>,
    /// The `eps` of `k = (1 + eps)(2 k0 − 1)`, when given that way.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    pub f: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    pub competition: String,
    pub preserver: PreserverMode,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_const: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outputs {
    pub spanner_size: usize,
    pub spanner_weight: String,
    pub spanner_edges: Vec<EdgeId>,
    /// Connectivity level of the seeding preserver.
    pub level: usize,
    pub preserver_size: usize,
    pub preserver_weight: String,
    pub preserver_mode: PreserverMode,
    pub preserver_fell_back: bool,
    /// `w(H) / w(mst(G))`.
    pub lightness: String,
    /// `ℓ_f(H | G)` for each requested `f`.
    pub competitive: Vec<CompetitiveLightness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocking_pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<Sampling>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sampling {
    pub samples: usize,
    pub p_sample: String,
    pub votes_needed: usize,
    pub estimates: usize,
    pub host_log: Vec<HostLogEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verification.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn ell(&self, f: usize) -> Option<&CompetitiveLightness> {
        self.outputs.competitive.iter().find(|c| c.f == f)
    }
}

/// Fixed CSV columns of a sweep.
pub const CSV_COLUMNS: [&str; 22] = [
    "schema",
    "key",
    "family",
    "params",
    "n",
    "m",
    "algo",
    "k",
    "f",
    "eta",
    "competition",
    "preserver",
    "seed",
    "status",
    "spanner_size",
    "spanner_weight",
    "preserver_weight",
    "preserver_mode",
    "lightness",
    "ell_f",
    "ell_2f_minus_1",
    "ell_2f",
];

fn verdict_word(report: &RunReport) -> &'static str {
    if report.verification.is_empty() {
        "built"
    } else if report.passed() {
        "pass"
    } else {
        "fail"
    }
}

/// One CSV record for a successful run.
pub fn csv_record(key: &str, report: &RunReport) -> Vec<String> {
    let params = report
        .instance
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";");
    let f = report.algorithm.f;
    let ell = |level: Option<usize>| {
        level
            .and_then(|l| report.ell(l))
            .map(|c| ftspan::graph::format_rational(&c.value))
            .unwrap_or_default()
    };
    vec![
        SCHEMA.into(),
        key.into(),
        report.instance.family.clone().unwrap_or_default(),
        params,
        report.instance.n.to_string(),
        report.instance.m.to_string(),
        report.algorithm.name.clone(),
        report.algorithm.k.clone(),
        f.to_string(),
        report.algorithm.eta.clone().unwrap_or_default(),
        report.algorithm.competition.clone(),
        report.algorithm.preserver.to_string(),
        report.algorithm.seed.to_string(),
        verdict_word(report).into(),
        report.outputs.spanner_size.to_string(),
        report.outputs.spanner_weight.clone(),
        report.outputs.preserver_weight.clone(),
        report.outputs.preserver_mode.to_string(),
        report.outputs.lightness.clone(),
        ell(Some(f)),
        ell((f >= 1).then(|| 2 * f - 1)),
        ell(Some(2 * f)),
    ]
}

/// One CSV record for a run that errored: identification plus the message.
pub fn csv_error_record(key: &str, family: &str, message: &str) -> Vec<String> {
    let mut row = vec![String::new(); CSV_COLUMNS.len()];
    row[0] = SCHEMA.into();
    row[1] = key.into();
    row[2] = family.into();
    row[13] = format!("error: {message}");
    row
}
