//! `ftspan`: build, verify and measure edge-fault-tolerant spanners.
//!
//! Exit codes: 0 success, 2 verification failure, 3 budget exceeded,
//! 4 bad input, 1 any other failure.

mod build;
mod experiment;
mod family;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ftspan::graph::io::{load_graph, write_graph};
use ftspan::graph::{format_rational, parse_rational, EdgeSet, Rational, Stretch, WeightedMultigraph};
use ftspan::greedy::{build_greedy, Competition};
use ftspan::oracles::{is_ft_spanner, is_preserver_bruteforce, Budget, VerificationReport};
use ftspan::packing::{pack_forests, verify_packing};
use ftspan::preserver::{is_preserver_fast, preserver_or_fallback, PreserverMode};
use ftspan::replay::{replay_analysis, HostMode};
use serde::Serialize;

use build::{ell_with_fallback, instance_info, run_build, Algo, BuildSpec, Provenance};
use family::{generate, Family, FamilyParams};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ftspan::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use ftspan::Error as E;
        match self {
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(E::Parse { .. } | E::InvalidParameter(_) | E::VertexOutOfRange { .. } | E::Disconnected) => 4,
            CliError::Core(_) => 1,
            CliError::Io { .. } | CliError::Usage(_) | CliError::Csv(_) | CliError::Toml(_) => 4,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    VerificationFailed,
}

#[derive(Parser, Debug)]
#[command(name = "ftspan", version, about = "Light edge-fault-tolerant graph spanners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance in the edge-list format.
    Gen(GenArgs),
    /// Build a spanner and write a JSON run report.
    Build(BuildArgs),
    /// Check a subgraph against the exhaustive oracles.
    Verify(VerifyArgs),
    /// Lightness and competitive lightness of a subgraph.
    Metrics(MetricsArgs),
    /// Pack forests over a connectivity preserver.
    Pack(PackArgs),
    /// Replay the host-graph analysis of a greedy run as per-forest CSV.
    ReplayAnalysis(ReplayArgs),
    /// Run a parameter sweep described by a TOML matrix into CSV.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[command(flatten)]
    params: FamilyParams,
    /// Seed of the random families.
    #[arg(long, env = "FTSPAN_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
struct BudgetArgs {
    /// Cap on fault sets enumerated per exhaustive check.
    #[arg(long, default_value_t = Budget::default().max_fault_sets)]
    budget_fault_sets: u64,
    /// Largest edge count for subset enumeration.
    #[arg(long, default_value_t = Budget::default().max_subset_edges)]
    budget_subset_edges: u32,
    /// Largest cycle rank for cycle enumeration.
    #[arg(long, default_value_t = Budget::default().max_cycle_rank)]
    budget_cycle_rank: u32,
    /// Node cap of the exact searches.
    #[arg(long, default_value_t = Budget::default().max_search_nodes)]
    budget_search_nodes: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_fault_sets: self.budget_fault_sets,
            max_subset_edges: self.budget_subset_edges,
            max_cycle_rank: self.budget_cycle_rank,
            max_search_nodes: self.budget_search_nodes,
        }
    }
}

/// Stretch, given directly or as `(1 + eps)(2 k0 − 1)`.
#[derive(Args, Debug, Clone)]
struct StretchArgs {
    /// Stretch factor (integer, decimal or p/q).
    #[arg(long, conflicts_with = "k0")]
    k: Option<String>,
    /// With --eps: stretch (1 + eps)(2 k0 - 1).
    #[arg(long)]
    k0: Option<i128>,
    /// Stretch slack used with --k0 (default 0).
    #[arg(long, requires = "k0")]
    eps: Option<String>,
}

impl StretchArgs {
    fn resolve(&self) -> CliResult<(Stretch, Option<i128>, Option<Rational>)> {
        match (&self.k, self.k0) {
            (Some(k), _) => Ok((Stretch::new(rational_arg("k", k)?)?, None, None)),
            (None, Some(k0)) => {
                let eps = self.eps.as_deref().map(|e| rational_arg("eps", e)).transpose()?;
                Ok((Stretch::from_k0_eps(k0, eps.unwrap_or_default())?, Some(k0), eps))
            }
            (None, None) => Err(CliError::Usage("give the stretch as --k or as --k0 [--eps]".into())),
        }
    }
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// Edge-list file of the input graph.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "greedy")]
    algo: Algo,
    #[command(flatten)]
    stretch: StretchArgs,
    /// Number of edge faults tolerated.
    #[arg(long, default_value_t = 1)]
    f: usize,
    /// η > 0 for `--competition 2+eta` and `--algo poly-eta`.
    #[arg(long)]
    eta: Option<String>,
    /// `2f`, `2+eta` (uses --eta) or `2+<rational>`.
    #[arg(long, default_value = "2f")]
    competition: String,
    /// Connectivity preserver: `exact` (falls back to `heuristic` past the budget) or `heuristic`.
    #[arg(long, default_value = "exact")]
    preserver: PreserverMode,
    #[arg(long, env = "FTSPAN_SEED", default_value_t = 0)]
    seed: u64,
    /// Estimate threshold of the sampling constructions.
    #[arg(long, default_value = "1/8")]
    threshold: String,
    /// Sample-count constant: samples = ceil(c * ln n).
    #[arg(long, default_value_t = 384.0)]
    c_const: f64,
    /// Run the exhaustive oracles on the result.
    #[arg(long)]
    verify: bool,
    /// Competition levels at which to report ℓ_f (default: f and the preserver level).
    #[arg(long, value_delimiter = ',')]
    ell_f: Vec<usize>,
    /// Record wall-clock time (makes reports differ between runs).
    #[arg(long)]
    timing: bool,
    /// Also write the spanner's edge ids here.
    #[arg(long)]
    spanner_out: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// File of edge ids of the subgraph.
    #[arg(long)]
    spanner: PathBuf,
    #[command(flatten)]
    stretch: StretchArgs,
    #[arg(long, default_value_t = 1)]
    f: usize,
    /// Check the connectivity-preserver property instead of stretch.
    #[arg(long)]
    preserver: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[arg(long)]
    input: PathBuf,
    /// File of edge ids of the subgraph (default: the whole graph).
    #[arg(long)]
    spanner: Option<PathBuf>,
    /// Competition levels for ℓ_f.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    f: Vec<usize>,
    /// Connectivity preserver: `exact` (falls back to `heuristic` past the budget) or `heuristic`.
    #[arg(long, default_value = "exact")]
    preserver: PreserverMode,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug)]
struct PackArgs {
    #[arg(long)]
    input: PathBuf,
    /// Packing level; the preserver is built at level c − 1.
    #[arg(long)]
    c: usize,
    /// Pack over the subgraph with these edge ids instead of a preserver.
    #[arg(long)]
    q: Option<PathBuf>,
    /// Connectivity preserver: `exact` (falls back to `heuristic` past the budget) or `heuristic`.
    #[arg(long, default_value = "exact")]
    preserver: PreserverMode,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    stretch: StretchArgs,
    #[arg(long, default_value_t = 1)]
    f: usize,
    #[arg(long, default_value = "2f")]
    competition: String,
    #[arg(long)]
    eta: Option<String>,
    /// Connectivity preserver: `exact` (falls back to `heuristic` past the budget) or `heuristic`.
    #[arg(long, default_value = "exact")]
    preserver: PreserverMode,
    /// single, all-eligible or q-light-heavy.
    #[arg(long, default_value = "single")]
    mode: HostMode,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, env = "FTSPAN_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the full JSON report instead of CSV.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// TOML sweep matrix.
    #[arg(long)]
    config: PathBuf,
    /// CSV output; rows already present are kept and not recomputed.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Default seed for rows that do not set one.
    #[arg(long, env = "FTSPAN_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    budget: BudgetArgs,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub(crate) fn read_graph(path: &Path) -> CliResult<WeightedMultigraph> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    Ok(load_graph(&text)?)
}

fn rational_arg(name: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text).ok_or_else(|| CliError::Usage(format!("--{name}: `{text}` is not a number")))
}

/// Edge ids separated by whitespace or commas; `#` starts a comment.
fn read_edge_ids(path: &Path, g: &WeightedMultigraph) -> CliResult<EdgeSet> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut set = g.no_edges();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for token in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let id: usize = token.parse().map_err(|_| {
                CliError::Core(ftspan::Error::Parse {
                    line: i + 1,
                    message: format!("bad edge id `{token}`"),
                })
            })?;
            if id >= g.m() {
                return Err(CliError::Core(ftspan::Error::Parse {
                    line: i + 1,
                    message: format!("edge id {id} out of range (m = {})", g.m()),
                }));
            }
            set.insert(id);
        }
    }
    Ok(set)
}

fn edge_id_text(set: &EdgeSet) -> String {
    let ids: Vec<String> = set.iter().map(|e| e.to_string()).collect();
    format!("{}\n", ids.join(" "))
}

fn emit(output: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(io_err(path)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn competition_arg(text: &str, eta: Option<Rational>) -> CliResult<Competition> {
    match text {
        "2+eta" => {
            let eta = eta.ok_or_else(|| CliError::Usage("--competition 2+eta needs --eta".into()))?;
            Ok(Competition::eta(eta)?)
        }
        other => Ok(other.parse()?),
    }
}

fn report_failure(name: &str, report: &VerificationReport) {
    if let Some(witness) = &report.witness {
        eprintln!(
            "{name} failed; witness: {}",
            serde_json::to_string(witness).expect("witnesses serialize")
        );
    }
}

fn cmd_gen(args: GenArgs) -> CliResult<Status> {
    let (g, used) = generate(args.family, &args.params, args.seed)?;
    let params: Vec<String> = used.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let text = format!("# {} {}\n{}", args.family.name(), params.join(" "), write_graph(&g));
    emit(&args.output, &text)?;
    Ok(Status::Ok)
}

fn cmd_build(args: BuildArgs) -> CliResult<Status> {
    let g = read_graph(&args.input)?;
    let (k, k0, k_eps) = args.stretch.resolve()?;
    let eta = args.eta.as_deref().map(|e| rational_arg("eta", e)).transpose()?;
    let spec = BuildSpec {
        algo: args.algo,
        k,
        k0,
        k_eps,
        f: args.f,
        eta,
        competition: competition_arg(&args.competition, eta)?,
        preserver: args.preserver,
        seed: args.seed,
        threshold: rational_arg("threshold", &args.threshold)?,
        c_const: args.c_const,
        verify: args.verify,
        ell_f: args.ell_f.clone(),
        timing: args.timing,
        budget: args.budget.budget(),
    };
    let provenance = Provenance {
        source: Some(args.input.display().to_string()),
        ..Default::default()
    };
    let report = run_build(&g, &spec, &provenance)?;
    if let Some(path) = &args.spanner_out {
        let set = EdgeSet::from_ids(g.m(), report.outputs.spanner_edges.iter().copied());
        std::fs::write(path, edge_id_text(&set)).map_err(io_err(path))?;
    }
    emit(&args.output, &json(&report))?;
    let mut status = Status::Ok;
    for check in report.verification.iter().filter(|c| c.verdict == ftspan::oracles::Verdict::Fail) {
        eprintln!(
            "{} failed; witness: {}",
            check.name,
            serde_json::to_string(&check.witness).expect("witnesses serialize")
        );
        status = Status::VerificationFailed;
    }
    Ok(status)
}

fn cmd_verify(args: VerifyArgs) -> CliResult<Status> {
    let g = read_graph(&args.input)?;
    let h = read_edge_ids(&args.spanner, &g)?;
    let budget = args.budget.budget();
    let (name, report) = if args.preserver {
        ("preserver", is_preserver_bruteforce(&g, &h, args.f, &budget)?)
    } else {
        let (k, _, _) = args.stretch.resolve()?;
        ("ft_spanner", is_ft_spanner(&g, &h, k, args.f, &budget)?)
    };
    emit(&args.output, &json(&report))?;
    if report.passed() {
        Ok(Status::Ok)
    } else {
        report_failure(name, &report);
        Ok(Status::VerificationFailed)
    }
}

#[derive(Serialize)]
struct Metrics {
    instance: report::Instance,
    subgraph_size: usize,
    subgraph_weight: String,
    lightness: String,
    competitive: Vec<ftspan::preserver::CompetitiveLightness>,
}

fn cmd_metrics(args: MetricsArgs) -> CliResult<Status> {
    let g = read_graph(&args.input)?;
    let h = match &args.spanner {
        Some(path) => read_edge_ids(path, &g)?,
        None => g.all_edges(),
    };
    let budget = args.budget.budget();
    let mut levels = args.f.clone();
    levels.sort_unstable();
    levels.dedup();
    let competitive = levels
        .into_iter()
        .map(|f| ell_with_fallback(&g, &h, f, args.preserver, &budget))
        .collect::<Result<Vec<_>, _>>()?;
    let metrics = Metrics {
        instance: instance_info(
            &g,
            &Provenance {
                source: Some(args.input.display().to_string()),
                ..Default::default()
            },
        ),
        subgraph_size: h.len(),
        subgraph_weight: format_rational(&g.weight_of(&h)),
        lightness: format_rational(&ftspan::graph::lightness(&g, &h)?),
        competitive,
    };
    emit(&args.output, &json(&metrics))?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct PackOutput {
    level: usize,
    q_edges: Vec<usize>,
    q_is_preserver: bool,
    packing: ftspan::packing::ForestPacking,
    verification: VerificationReport,
}

fn cmd_pack(args: PackArgs) -> CliResult<Status> {
    if args.c == 0 {
        return Err(CliError::Usage("--c must be at least 1".into()));
    }
    let g = read_graph(&args.input)?;
    let budget = args.budget.budget();
    let q = match &args.q {
        Some(path) => read_edge_ids(path, &g)?,
        None => preserver_or_fallback(&g, args.c - 1, args.preserver, &budget)?.edges,
    };
    let packing = pack_forests(&g, &q, args.c)?;
    let verification = verify_packing(&packing, &g, &q, args.c);
    let passed = verification.passed();
    let out = PackOutput {
        level: args.c,
        q_edges: q.to_vec(),
        q_is_preserver: is_preserver_fast(&g, &q, args.c - 1),
        packing,
        verification,
    };
    emit(&args.output, &json(&out))?;
    if passed {
        Ok(Status::Ok)
    } else {
        report_failure("packing", &out.verification);
        Ok(Status::VerificationFailed)
    }
}

fn cmd_replay(args: ReplayArgs) -> CliResult<Status> {
    let g = read_graph(&args.input)?;
    let (k, _, _) = args.stretch.resolve()?;
    let eta = args.eta.as_deref().map(|e| rational_arg("eta", e)).transpose()?;
    let competition = competition_arg(&args.competition, eta)?;
    let budget = args.budget.budget();
    let outcome = build_greedy(&g, k, args.f, competition, args.preserver, &budget)?;
    let report = replay_analysis(&g, &outcome, k, args.mode, args.trials, args.seed)?;
    let text = if args.json {
        json(&report)
    } else {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record([
            "forest_index",
            "group",
            "hosted",
            "w_T",
            "w_HT",
            "mean_w_H3",
            "w_HT_over_f_minus_w_T",
            "girth_check",
        ])?;
        for row in &report.rows {
            writer.write_record([
                row.forest_index.to_string(),
                row.group.to_string(),
                row.hosted.to_string(),
                format_rational(&row.weight_t),
                format_rational(&row.weight_ht),
                format_rational(&row.mean_h3),
                format_rational(&row.reference),
                if row.girth_check { "pass" } else { "fail" }.to_string(),
            ])?;
        }
        String::from_utf8(writer.into_inner().map_err(|e| CliError::Usage(e.to_string()))?)
            .expect("csv output is utf-8")
    };
    emit(&args.output, &text)?;
    if report.passed() {
        Ok(Status::Ok)
    } else {
        eprintln!("chain girth check failed on at least one host forest");
        Ok(Status::VerificationFailed)
    }
}

fn cmd_experiment(args: ExperimentArgs) -> CliResult<Status> {
    let text = std::fs::read_to_string(&args.config).map_err(io_err(&args.config))?;
    let config: toml::Table = toml::from_str(&text)?;
    let rows = experiment::expand(&config, args.seed)?;
    let existing = match &args.output {
        Some(path) => experiment::read_existing(path)?,
        None => Default::default(),
    };
    let records = experiment::sweep(&rows, existing, &args.budget.budget(), args.threads);
    match &args.output {
        Some(path) => {
            let tmp = path.with_extension("csv.partial");
            let file = std::fs::File::create(&tmp).map_err(io_err(&tmp))?;
            experiment::write_csv(file, &records)?;
            std::fs::rename(&tmp, path).map_err(io_err(path))?;
        }
        None => experiment::write_csv(std::io::stdout(), &records)?,
    }
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Pack(a) => cmd_pack(a),
        Command::ReplayAnalysis(a) => cmd_replay(a),
        Command::Experiment(a) => cmd_experiment(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
