//! `pickup` command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 argument error, 3 I/O error.

pub mod args;
pub mod output;
pub mod verify;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use pickup_sticks::{
    estimate, grid_volume_estimate, kbonacci, p_no_quadrilateral, p_no_triangle, probability, probability_oracle,
    CoeffState, ExactRatio, KGonQuery, SequenceSpec, TrialConfig,
};
use serde_json::{json, Map, Value};
use thiserror::Error;

pub use args::{Cli, Command, Format};
use output::{csv_writer, finish_csv, render_records, Method, OutputRecord, TABLE_CSV_HEADER};

/// Grid resolution used by `exact --cross-check` for `n <= 4`.
pub const CROSS_CHECK_GRID_RESOLUTION: usize = 256;
const GRID_TOLERANCE: f64 = 5e-3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<pickup_sticks::Error> for CliError {
    fn from(e: pickup_sticks::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Rendered command output plus whether every check in it held.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub ok: bool,
}

impl CommandOutput {
    fn ok(text: String) -> Self {
        Self { text, ok: true }
    }
}

/// Runs a parsed command, writing to `--output` or `stdout`, and returns the
/// process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let out = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be >= 1".into())),
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| execute(cli))?,
        None => execute(cli)?,
    };
    match &cli.output {
        Some(path) => write_file(path, &out.text)?,
        None => stdout
            .write_all(out.text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?,
    }
    Ok(if out.ok { 0 } else { 1 })
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn execute(cli: &Cli) -> Result<CommandOutput, CliError> {
    let precision = usize::from(cli.precision);
    match &cli.command {
        Command::Exact { n, k, cross_check } => cmd_exact(*n, *k, *cross_check, precision, cli.format),
        Command::Table { max_n, k } => cmd_table(*max_n, k, precision, cli.format),
        Command::Simulate { n, k, trials, seed, chunk_size } => {
            let config = TrialConfig::with_chunk_size(*n, *k, *trials, *seed, *chunk_size)?;
            cmd_simulate(&config, precision, cli.format)
        }
        Command::Verify { max_n, max_k } => cmd_verify(*max_n, *max_k, cli.format),
        Command::Sequence { k, count } => cmd_sequence(*k, *count, cli.format),
    }
}

fn closed_form(n: usize, k: usize) -> Option<ExactRatio> {
    match k {
        3 => p_no_triangle(n).ok(),
        4 => p_no_quadrilateral(n).ok(),
        _ => None,
    }
}

pub fn cmd_exact(n: usize, k: usize, cross_check: bool, precision: usize, format: Format) -> Result<CommandOutput, CliError> {
    let query = KGonQuery::new(n, k)?;
    let theorem = closed_form(n, k);
    let mut records = Vec::new();
    let mut ok = true;

    if let Some(p) = &theorem {
        records.push(OutputRecord::exact(n, k, Method::Theorem, p, precision));
    }
    if theorem.is_none() || cross_check {
        records.push(OutputRecord::exact(n, k, Method::Engine, &probability(query), precision));
    }
    if cross_check {
        records.push(OutputRecord::exact(n, k, Method::Oracle, &probability_oracle(query), precision));
        let exacts: Vec<_> = records.iter().filter_map(|r| r.p_exact.clone()).collect();
        ok &= exacts.windows(2).all(|w| w[0] == w[1]);

        if !query.is_vacuous() && n <= 4 {
            let reference = probability(query);
            let est = grid_volume_estimate(query, CROSS_CHECK_GRID_RESOLUTION)?;
            let within = (est - reference.to_f64()).abs() <= GRID_TOLERANCE;
            ok &= within;
            let mut extra = Map::new();
            extra.insert("resolution".into(), json!(CROSS_CHECK_GRID_RESOLUTION));
            extra.insert("tolerance".into(), json!(GRID_TOLERANCE));
            extra.insert("pass".into(), json!(within));
            records.push(OutputRecord {
                n,
                k,
                method: Method::Grid,
                p_exact: None,
                p_decimal: format_float(est, precision),
                extra,
            });
        }
    }
    Ok(CommandOutput { text: render_records(&records, format), ok })
}

fn format_float(x: f64, precision: usize) -> String {
    ExactRatio::from_f64(x).map_or_else(|| x.to_string(), |r| r.to_decimal_string(precision))
}

fn coeff_summary(state: &CoeffState) -> String {
    let b: Vec<String> = state.b().iter().map(ToString::to_string).collect();
    format!("a={};b={};divisor={}", state.a(), b.join(" "), state.divisor())
}

struct TableRow {
    n: usize,
    k: usize,
    p: ExactRatio,
    coeffs: String,
}

pub fn cmd_table(max_n: usize, ks: &[usize], precision: usize, format: Format) -> Result<CommandOutput, CliError> {
    if max_n < 1 {
        return Err(CliError::Usage("--max-n must be >= 1".into()));
    }
    if ks.is_empty() {
        return Err(CliError::Usage("--k needs at least one value".into()));
    }
    let mut rows = Vec::new();
    for &k in ks {
        KGonQuery::new(1, k)?;
        for n in 1..=max_n {
            let query = KGonQuery::new(n, k)?;
            let coeffs = match pickup_sticks::coefficient_trace(query) {
                Ok(trace) => coeff_summary(trace.last().expect("trace is non-empty")),
                Err(_) => String::new(),
            };
            rows.push(TableRow { n, k, p: probability(query), coeffs });
        }
    }

    let text = match format {
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(TABLE_CSV_HEADER).expect("in-memory write");
            for r in &rows {
                w.write_record([
                    r.n.to_string(),
                    r.k.to_string(),
                    r.p.numer().to_string(),
                    r.p.denom().to_string(),
                    r.p.to_decimal_string(precision),
                    r.coeffs.clone(),
                ])
                .expect("in-memory write");
            }
            finish_csv(w)
        }
        Format::Json => {
            let values: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "k": r.k,
                        "p_num": r.p.numer().to_string(),
                        "p_den": r.p.denom().to_string(),
                        "p_decimal": r.p.to_decimal_string(precision),
                        "coeffs": r.coeffs,
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&values).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Human => {
            let cells: Vec<[String; 5]> = rows
                .iter()
                .map(|r| [r.n.to_string(), r.k.to_string(), r.p.to_string(), r.p.to_decimal_string(precision), r.coeffs.clone()])
                .collect();
            let header = ["n", "k", "p", "decimal", "coeffs"];
            let mut widths = header.map(str::len);
            for row in &cells {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.len());
                }
            }
            let mut s = String::new();
            let mut line = |cols: [&str; 5]| {
                let parts: Vec<String> = cols.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
                let _ = writeln!(s, "{}", parts.join("  ").trim_end());
            };
            line(header);
            for row in &cells {
                line([&row[0], &row[1], &row[2], &row[3], &row[4]].map(String::as_str));
            }
            s
        }
    };
    Ok(CommandOutput::ok(text))
}

pub fn cmd_simulate(config: &TrialConfig, precision: usize, format: Format) -> Result<CommandOutput, CliError> {
    let est = estimate(config)?;
    let exact = probability(KGonQuery::new(config.n, config.k)?);
    let sigmas = est.sigmas_from(exact.to_f64());
    let pass = sigmas <= 4.0;
    let p_hat = ExactRatio::new(est.successes, est.trials)?;

    let mut extra = Map::new();
    extra.insert("trials".into(), json!(est.trials));
    extra.insert("successes".into(), json!(est.successes));
    extra.insert("seed".into(), json!(config.seed));
    extra.insert("chunk_size".into(), json!(config.chunk_size));
    extra.insert("ci_low".into(), json!(est.ci_low));
    extra.insert("ci_high".into(), json!(est.ci_high));
    extra.insert("exact".into(), json!(exact.to_string()));
    extra.insert("sigmas".into(), json!(sigmas));
    extra.insert("pass".into(), json!(pass));
    let record = OutputRecord {
        n: config.n,
        k: config.k,
        method: Method::Montecarlo,
        p_exact: None,
        p_decimal: p_hat.to_decimal_string(precision),
        extra,
    };
    Ok(CommandOutput::ok(render_records(&[record], format)))
}

pub fn cmd_verify(max_n: usize, max_k: usize, format: Format) -> Result<CommandOutput, CliError> {
    if max_n < 3 || max_k < 3 {
        return Err(CliError::Usage("verify needs --max-n >= 3 and --max-k >= 3".into()));
    }
    let report = verify::run_verify(max_n, max_k, &probability);
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["check", "status", "detail"]).expect("in-memory write");
            for c in &report.checks {
                w.write_record([c.name.as_str(), status(c.passed), c.detail.as_str()])
                    .expect("in-memory write");
            }
            finish_csv(w)
        }
        Format::Human => {
            let mut s = String::new();
            for c in &report.checks {
                let _ = writeln!(s, "{:<4}  {}  ({})", status(c.passed), c.name, c.detail);
            }
            match report.first_failure() {
                None => {
                    let _ = writeln!(s, "verify: all {} checks passed", report.checks.len());
                }
                Some(c) => {
                    let at = c.failed_at.map_or(String::new(), |(n, k)| format!(" at (n={n}, k={k})"));
                    let _ = writeln!(s, "verify: FAILED{at}: {}", c.name);
                }
            }
            s
        }
    };
    Ok(CommandOutput { text, ok: report.passed })
}

fn status(passed: bool) -> &'static str {
    if passed { "PASS" } else { "FAIL" }
}

pub fn cmd_sequence(k: usize, count: usize, format: Format) -> Result<CommandOutput, CliError> {
    let terms: Vec<String> = kbonacci(SequenceSpec::new(k, count)?).iter().map(ToString::to_string).collect();
    let text = match format {
        Format::Human => format!("[{}]\n", terms.join(",")),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({ "k": k, "count": count, "terms": terms }))
                .expect("sequence serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["index", "value"]).expect("in-memory write");
            for (i, t) in terms.iter().enumerate() {
                w.write_record([(i + 1).to_string(), t.clone()]).expect("in-memory write");
            }
            finish_csv(w)
        }
    };
    Ok(CommandOutput::ok(text))
}
