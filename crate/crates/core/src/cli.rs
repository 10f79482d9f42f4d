//! The `dyncoh` command line.
//!
//! Exit codes: 0 success, 1 domain failure, 2 parse error, 3 shape or
//! dimension error, 4 I/O error. Every command is deterministic given its
//! flags and seed.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::channels::json::ChannelFile;
use crate::channels::random::derive_seed;
use crate::channels::{amplitude_damping, random_channel, validate, KrausChannel};
use crate::discrimination::{optimal_setup, simulate};
use crate::error::Error;
use crate::measures::{MeasureId, MeasureReport, OptimizerConfig};
use crate::tolerance::TOL;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SHAPE: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// CSV header of sweep files.
pub const SWEEP_HEADER: &str = "param,measure,value,method,gap_or_spread";

#[derive(Debug, Parser)]
#[command(name = "dyncoh", version, about = "Dynamical total-coherence measures of quantum channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    AmplitudeDamping,
}

#[derive(Debug, clap::Args)]
pub struct SolverFlags {
    /// Seed for every randomised step.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Duality-gap tolerance of the SDP solver.
    #[arg(long = "gap-tol", default_value_t = 1e-8)]
    pub gap_tol: f64,
    /// Multistart count of the numeric optimisers.
    #[arg(long, default_value_t = 32)]
    pub starts: usize,
}

impl SolverFlags {
    fn config(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            multistart_count: self.starts,
            seed,
            ..OptimizerConfig::default()
        }
    }

    fn check(&self) -> Result<(), CliError> {
        if !(self.gap_tol > 0.0 && self.gap_tol.is_finite()) {
            return Err(CliError::domain("--gap-tol must be positive"));
        }
        self.config(self.seed).check()?;
        Ok(())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report trace preservation and unitality of a channel file.
    Validate {
        /// Channel file in JSON Kraus format.
        path: PathBuf,
    },
    /// Evaluate one measure on a channel file.
    Measure {
        /// Channel file in JSON Kraus format.
        path: PathBuf,
        /// One of t2, tdiamond, t1, tre, tre-tilde.
        #[arg(long)]
        measure: MeasureId,
        /// Print one JSON object with diagnostics instead of the bare value.
        #[arg(long)]
        json: bool,
        /// Write the nearest free channel, when the measure has one.
        #[arg(long = "witness-out")]
        witness_out: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Evaluate measures over a parameter grid of a channel family.
    Sweep {
        /// Channel family parametrised by a real number.
        #[arg(long, value_enum, default_value_t = Family::AmplitudeDamping)]
        family: Family,
        /// First grid point.
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        /// Last grid point, always included.
        #[arg(long, default_value_t = 1.0)]
        end: f64,
        /// Grid spacing.
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Comma-separated list of measures.
        #[arg(long, value_delimiter = ',', required = true)]
        measure: Vec<MeasureId>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit JSON lines instead of CSV.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Simulate discrimination of two channels with the optimal entangled strategy.
    Discriminate {
        /// First channel file, sent with prior probability one half.
        path1: PathBuf,
        /// Second channel file.
        path2: PathBuf,
        /// Number of simulated trials.
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        /// Seed of the trial generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print one JSON object instead of key-value lines.
        #[arg(long)]
        json: bool,
    },
    /// Write a seeded random channel file.
    RandomChannel {
        /// Input and output dimension.
        #[arg(long)]
        dim: usize,
        /// Number of Kraus operators.
        #[arg(long)]
        rank: usize,
        /// Seed of the sampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An error with its exit code.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn domain(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => EXIT_PARSE,
            Error::Dimension(_) => EXIT_SHAPE,
            Error::Io(_) => EXIT_IO,
            _ => EXIT_DOMAIN,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn io_context(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

fn read_file(path: &Path) -> Result<(ChannelFile, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_context(path, e))?;
    let file = ChannelFile::parse(&text).map_err(|e| CliError {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })?;
    Ok((file, digest(text.as_bytes())))
}

/// Loads a channel, accepting the residual of four-decimal Kraus operators.
fn load_channel(path: &Path, err: &mut dyn Write) -> Result<(KrausChannel, String), CliError> {
    let (file, digest) = read_file(path)?;
    let ch = KrausChannel::with_tp_tolerance(file.kraus_matrices(), TOL.quoted_tp)?;
    if ch.tp_residual() > TOL.channel {
        writeln!(
            err,
            "warning: {}: trace-preservation residual {:.3e}",
            path.display(),
            ch.tp_residual()
        )?;
    }
    Ok((ch, digest))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_context(p, e)),
        None => out.write_all(text.as_bytes()).map_err(Into::into),
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Grid `start + i·step` up to and including `end`.
pub fn grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(start.is_finite() && end.is_finite() && step.is_finite()) || start > end || step <= 0.0 {
        return Err(CliError::domain("grid needs finite start <= end and step > 0"));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    let mut points: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
    let last = points.last_mut().expect("nonempty");
    if (*last - end).abs() <= 1e-9 * step {
        *last = end;
    }
    Ok(points)
}

#[derive(Debug, Serialize)]
struct MeasureLine<'a> {
    measure: String,
    value: f64,
    method: String,
    diagnostics: &'a std::collections::BTreeMap<String, f64>,
    input_digest: &'a str,
    seed: u64,
    tool_version: &'a str,
}

#[derive(Debug, Serialize)]
struct RunHeader<'a> {
    input_digest: &'a str,
    seed: u64,
    tool_version: &'a str,
    family: &'a str,
    start: f64,
    end: f64,
    step: f64,
    measures: Vec<String>,
}

#[derive(Debug, Serialize)]
struct SweepRow<'a> {
    param: f64,
    measure: String,
    value: f64,
    method: String,
    gap_or_spread: f64,
    diagnostics: &'a std::collections::BTreeMap<String, f64>,
}

/// One CSV row of a sweep.
pub fn csv_row(param: f64, measure: MeasureId, rep: &MeasureReport) -> String {
    format!(
        "{param:.16e},{measure},{:.16e},{},{:.16e}",
        rep.value,
        rep.method,
        rep.gap_or_spread()
    )
}

fn cmd_validate(path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let (file, _) = read_file(path)?;
    let report = validate(&file.kraus_matrices())?;
    writeln!(out, "dim_in: {}", file.dim_in)?;
    writeln!(out, "dim_out: {}", file.dim_out)?;
    writeln!(out, "kraus_operators: {}", file.kraus.len())?;
    writeln!(out, "cptp: {}", report.is_cptp)?;
    writeln!(out, "unital: {}", report.is_unital)?;
    writeln!(out, "tp_residual: {:.6e}", report.tp_residual)?;
    writeln!(out, "unital_residual: {:.6e}", report.unital_residual)?;
    Ok(if report.is_cptp { EXIT_OK } else { EXIT_DOMAIN })
}

fn cmd_measure(
    path: &Path,
    measure: MeasureId,
    json: bool,
    witness_out: Option<&Path>,
    solver: &SolverFlags,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    solver.check()?;
    let (ch, input_digest) = load_channel(path, err)?;
    let rep = measure.evaluate(&ch, &solver.config(solver.seed), solver.gap_tol)?;
    if json {
        let line = MeasureLine {
            measure: measure.to_string(),
            value: rep.value,
            method: rep.method.to_string(),
            diagnostics: &rep.diagnostics,
            input_digest: &input_digest,
            seed: solver.seed,
            tool_version: TOOL_VERSION,
        };
        writeln!(out, "{}", serde_json::to_string(&line).expect("plain data"))?;
    } else {
        writeln!(out, "{}", rep.value)?;
    }
    if let Some(p) = witness_out {
        match &rep.witness_channel {
            Some(w) => {
                let name = format!("{measure} witness");
                write_output(Some(p), &ChannelFile::from_channel(Some(name), w).to_json(), out)?;
            }
            None => writeln!(err, "warning: {measure} has no witness channel; nothing written")?,
        }
    }
    Ok(EXIT_OK)
}

fn family_channel(family: Family, param: f64) -> crate::error::Result<KrausChannel> {
    match family {
        Family::AmplitudeDamping => amplitude_damping(param),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    family: Family,
    start: f64,
    end: f64,
    step: f64,
    measures: &[MeasureId],
    out_path: Option<&Path>,
    json: bool,
    solver: &SolverFlags,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    solver.check()?;
    let points = grid(start, end, step)?;
    let mut measures = measures.to_vec();
    measures.sort();
    measures.dedup();
    let family_name = family.to_possible_value().expect("named").get_name().to_string();
    let spec = format!(
        "family={family_name};start={start:e};end={end:e};step={step:e};measures={};gap_tol={:e};starts={}",
        measures.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
        solver.gap_tol,
        solver.starts
    );
    let input_digest = digest(spec.as_bytes());

    let jobs: Vec<(usize, f64, MeasureId)> = points
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| measures.iter().map(move |&m| (i, p, m)))
        .collect();
    let results: Vec<crate::error::Result<MeasureReport>> = jobs
        .par_iter()
        .map(|&(i, p, m)| {
            let ch = family_channel(family, p)?;
            m.evaluate(&ch, &solver.config(derive_seed(solver.seed, i as u64)), solver.gap_tol)
        })
        .collect();
    let mut rows = Vec::with_capacity(jobs.len());
    for (job, res) in jobs.iter().zip(results) {
        rows.push((job.1, job.2, res?));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut text = String::new();
    if json {
        let header = RunHeader {
            input_digest: &input_digest,
            seed: solver.seed,
            tool_version: TOOL_VERSION,
            family: &family_name,
            start,
            end,
            step,
            measures: measures.iter().map(|m| m.to_string()).collect(),
        };
        writeln!(text, "{}", serde_json::to_string(&header).expect("plain data")).expect("string");
        for (p, m, rep) in &rows {
            let row = SweepRow {
                param: *p,
                measure: m.to_string(),
                value: rep.value,
                method: rep.method.to_string(),
                gap_or_spread: rep.gap_or_spread(),
                diagnostics: &rep.diagnostics,
            };
            writeln!(text, "{}", serde_json::to_string(&row).expect("plain data")).expect("string");
        }
    } else {
        writeln!(text, "{SWEEP_HEADER}").expect("string");
        for (p, m, rep) in &rows {
            writeln!(text, "{}", csv_row(*p, *m, rep)).expect("string");
        }
    }
    write_output(out_path, &text, out)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct DiscriminationLine {
    predicted: f64,
    empirical: f64,
    stderr: f64,
    z_score: f64,
    shots: u64,
    successes: u64,
    seed: u64,
    fallback: bool,
}

fn cmd_discriminate(
    path1: &Path,
    path2: &Path,
    shots: u64,
    seed: u64,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let (ch1, _) = load_channel(path1, err)?;
    let (ch2, _) = load_channel(path2, err)?;
    let setup = optimal_setup(&ch1, &ch2)?;
    let stats = simulate(&ch1, &ch2, &setup, shots, seed)?;
    let fallback = setup.diagnostics.get("fallback").is_some_and(|v| *v != 0.0);
    if fallback {
        writeln!(err, "warning: diamond-norm input unavailable; used the maximally entangled input")?;
    }
    let line = DiscriminationLine {
        predicted: setup.predicted_success,
        empirical: stats.empirical,
        stderr: stats.stderr,
        z_score: stats.z_score(setup.predicted_success),
        shots,
        successes: stats.successes,
        seed,
        fallback,
    };
    if json {
        writeln!(out, "{}", serde_json::to_string(&line).expect("plain data"))?;
    } else {
        writeln!(out, "predicted: {}", line.predicted)?;
        writeln!(out, "empirical: {}", line.empirical)?;
        writeln!(out, "stderr: {}", line.stderr)?;
        writeln!(out, "z_score: {}", line.z_score)?;
        writeln!(out, "shots: {shots}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_random_channel(
    dim: usize,
    rank: usize,
    seed: u64,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if dim < 2 || rank < 1 {
        return Err(CliError {
            code: EXIT_SHAPE,
            message: "random-channel needs --dim >= 2 and --rank >= 1".into(),
        });
    }
    let ch = random_channel(dim, dim, rank, seed)?;
    let name = format!("random-d{dim}-r{rank}-s{seed}");
    let mut text = ChannelFile::from_channel(Some(name), &ch).to_json();
    text.push('\n');
    write_output(out_path, &text, out)?;
    Ok(EXIT_OK)
}

/// Runs a parsed command; errors are reported on `err` and mapped to exit codes.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Validate { path } => cmd_validate(path, out),
        Command::Measure {
            path,
            measure,
            json,
            witness_out,
            solver,
        } => cmd_measure(path, *measure, *json, witness_out.as_deref(), solver, out, err),
        Command::Sweep {
            family,
            start,
            end,
            step,
            measure,
            out: out_path,
            json,
            solver,
        } => cmd_sweep(*family, *start, *end, *step, measure, out_path.as_deref(), *json, solver, out),
        Command::Discriminate {
            path1,
            path2,
            shots,
            seed,
            json,
        } => cmd_discriminate(path1, path2, *shots, *seed, *json, out, err),
        Command::RandomChannel {
            dim,
            rank,
            seed,
            out: out_path,
        } => cmd_random_channel(*dim, *rank, *seed, out_path.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

/// Parses `args` (program name first) and runs; usage errors exit with 2.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            code
        }
    }
}
