//! Parameter sweeps described by a TOML matrix.
//!
//! ```toml
//! seed = 7                    # optional; otherwise --seed
//!
//! [[run]]
//! family = "cloud-cycle"
//! m = [4, 6]                  # arrays are swept, scalars are fixed
//! f = [1, 2]
//! k = 2
//! eps = "1/4"
//! algo = "greedy"
//! ```
//!
//! Every `[[run]]` expands to the Cartesian product of its array-valued
//! keys. Each resulting row is identified by its canonical key (sorted
//! `name=value` pairs); rows already present in an existing output file are
//! kept and not recomputed, and the file is rewritten sorted by key.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use ftspan::graph::{parse_rational, Rational, Stretch};
use ftspan::greedy::Competition;
use ftspan::oracles::Budget;
use ftspan::preserver::PreserverMode;

use crate::build::{run_build, Algo, BuildSpec, Provenance};
use crate::family::{generate, Family, FamilyParams};
use crate::report::{csv_error_record, csv_record, CSV_COLUMNS};
use crate::CliError;

const KEYS: [&str; 25] = [
    "algo",
    "base",
    "base_cycle",
    "c",
    "c_const",
    "competition",
    "edge_prob",
    "eps",
    "eta",
    "extra",
    "f",
    "family",
    "gen_k",
    "k",
    "k0",
    "k_eps",
    "m",
    "n",
    "preserver",
    "seed",
    "threshold",
    "verify",
    "w",
    "wmax",
    "wmin",
];

type Row = BTreeMap<String, String>;

fn scalar(key: &str, v: &toml::Value) -> Result<String, CliError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(x) => Ok(x.to_string()),
        toml::Value::Boolean(b) => Ok(b.to_string()),
        _ => Err(CliError::Usage(format!("`{key}`: expected a scalar or an array of scalars"))),
    }
}

/// Expands the matrix into rows, each with a canonical key.
pub fn expand(config: &toml::Table, default_seed: u64) -> Result<Vec<(String, Row)>, CliError> {
    let seed = match config.get("seed") {
        Some(v) => scalar("seed", v)?,
        None => default_seed.to_string(),
    };
    for key in config.keys() {
        if key != "seed" && key != "run" {
            return Err(CliError::Usage(format!("unknown top-level key `{key}`")));
        }
    }
    let runs = match config.get("run") {
        None => return Ok(Vec::new()),
        Some(toml::Value::Array(runs)) => runs,
        Some(_) => return Err(CliError::Usage("`run` must be an array of tables ([[run]])".into())),
    };
    let mut rows = BTreeMap::new();
    for run in runs {
        let toml::Value::Table(table) = run else {
            return Err(CliError::Usage("each [[run]] must be a table".into()));
        };
        let mut partial: Vec<Row> = vec![BTreeMap::from([("seed".to_string(), seed.clone())])];
        for (key, value) in table {
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("unknown run key `{key}`")));
            }
            let options = match value {
                toml::Value::Array(items) => items.iter().map(|v| scalar(key, v)).collect::<Result<Vec<_>, _>>()?,
                v => vec![scalar(key, v)?],
            };
            partial = partial
                .into_iter()
                .flat_map(|row| {
                    options.iter().map(move |o| {
                        let mut row = row.clone();
                        row.insert(key.clone(), o.clone());
                        row
                    })
                })
                .collect();
        }
        for row in partial {
            if !row.contains_key("family") {
                return Err(CliError::Usage("every [[run]] needs a `family`".into()));
            }
            let key = row.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
            rows.insert(key, row);
        }
    }
    Ok(rows.into_iter().collect())
}

fn parse<T: std::str::FromStr>(row: &Row, key: &str) -> Result<Option<T>, CliError> {
    row.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| CliError::Usage(format!("`{key}`: cannot parse `{v}`")))
        })
        .transpose()
}

fn rational(row: &Row, key: &str) -> Result<Option<Rational>, CliError> {
    row.get(key)
        .map(|v| parse_rational(v).ok_or_else(|| CliError::Usage(format!("`{key}`: `{v}` is not a number"))))
        .transpose()
}

fn family_of(row: &Row) -> Result<Family, CliError> {
    let name = &row["family"];
    <Family as clap::ValueEnum>::from_str(name, false).map_err(|_| CliError::Usage(format!("unknown family `{name}`")))
}

/// Builds and measures one row.
pub fn run_row(row: &Row, budget: &Budget) -> Result<crate::report::RunReport, CliError> {
    let family = family_of(row)?;
    let seed: u64 = parse(row, "seed")?.unwrap_or(0);
    let f: usize = parse(row, "f")?.unwrap_or(1);
    let k0: Option<i128> = parse(row, "k0")?;
    let k_eps = rational(row, "k_eps")?;
    let k = match (rational(row, "k")?, k0) {
        (Some(k), _) => Stretch::new(k)?,
        (None, Some(k0)) => Stretch::from_k0_eps(k0, k_eps.unwrap_or_default())?,
        (None, None) => Stretch::integer(3)?,
    };
    let params = FamilyParams {
        w: row.get("w").cloned(),
        n: parse(row, "n")?,
        m: parse(row, "m")?,
        f: Some(f),
        k: Some(row.get("gen_k").cloned().unwrap_or_else(|| k.to_string())),
        eps: row.get("eps").cloned(),
        c: parse(row, "c")?,
        base_cycle: parse(row, "base_cycle")?,
        base: row.get("base").map(Into::into),
        edge_prob: parse(row, "edge_prob")?,
        extra: parse(row, "extra")?,
        wmin: parse(row, "wmin")?,
        wmax: parse(row, "wmax")?,
    };
    let (g, used) = generate(family, &params, seed)?;
    let algo = match row.get("algo").map(String::as_str) {
        None | Some("greedy") => Algo::Greedy,
        Some("poly") => Algo::Poly,
        Some("poly-eta") => Algo::PolyEta,
        Some(other) => return Err(CliError::Usage(format!("unknown algo `{other}`"))),
    };
    let eta = rational(row, "eta")?;
    let competition = match row.get("competition").map(String::as_str) {
        None | Some("2f") => Competition::TwoF,
        Some("2+eta") => Competition::eta(eta.ok_or_else(|| CliError::Usage("competition 2+eta needs `eta`".into()))?)?,
        Some(other) => other.parse()?,
    };
    let preserver = match row.get("preserver") {
        Some(p) => p.parse::<PreserverMode>()?,
        None => PreserverMode::Exact,
    };
    let levels = if f >= 1 { vec![f, 2 * f - 1, 2 * f] } else { vec![0] };
    let spec = BuildSpec {
        algo,
        k,
        k0,
        k_eps,
        f,
        eta,
        competition,
        preserver,
        seed,
        threshold: rational(row, "threshold")?.unwrap_or(Rational::new(1, 8)),
        c_const: parse(row, "c_const")?.unwrap_or(384.0),
        verify: parse(row, "verify")?.unwrap_or(true),
        ell_f: levels,
        timing: false,
        budget: *budget,
    };
    let provenance = Provenance {
        family: Some(family.name().into()),
        params: used,
        source: None,
    };
    Ok(run_build(&g, &spec, &provenance)?)
}

/// Runs all rows not already in `existing` on `threads` workers and
/// returns every record sorted by key.
pub fn sweep(
    rows: &[(String, Row)],
    existing: BTreeMap<String, Vec<String>>,
    budget: &Budget,
    threads: usize,
) -> Vec<Vec<String>> {
    let todo: Vec<&(String, Row)> = rows.iter().filter(|(key, _)| !existing.contains_key(key)).collect();
    let results = Mutex::new(existing);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((key, row)) = todo.get(i) else { break };
                let record = match run_row(row, budget) {
                    Ok(report) => csv_record(key, &report),
                    Err(e) => csv_error_record(key, &row["family"], &e.to_string()),
                };
                results.lock().expect("no worker panics").insert(key.clone(), record);
            });
        }
    });
    results.into_inner().expect("no worker panics").into_values().collect()
}

/// Records of an earlier run of the same sweep, keyed by row key.
pub fn read_existing(path: &Path) -> Result<BTreeMap<String, Vec<String>>, CliError> {
    let mut out = BTreeMap::new();
    if !path.exists() {
        return Ok(out);
    }
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    if header != CSV_COLUMNS {
        return Err(CliError::Usage(format!(
            "{}: existing file has different columns; refusing to resume",
            path.display()
        )));
    }
    for record in reader.records() {
        let record: Vec<String> = record?.iter().map(String::from).collect();
        out.insert(record[1].clone(), record);
    }
    Ok(out)
}

pub fn write_csv<W: std::io::Write>(out: W, records: &[Vec<String>]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_COLUMNS)?;
    for record in records {
        writer.write_record(record)?;
    }
    writer.flush().map_err(|e| CliError::Io {
        path: "<csv>".into(),
        source: e,
    })?;
    Ok(())
}
