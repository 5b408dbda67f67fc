//! `symcount` command-line tool.

mod io;
mod verify;

use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use symcount::finite::{count_pmf_from_joint, finite_count_pmf_f64, Precision};
use symcount::limit::{char_fn, limit_pmf};
use symcount::montecarlo::{
    build_mixture_joint, estimate_coefficients, sample_counts, MixtureSpec, DEFAULT_BOOTSTRAP,
};
use symcount::{CorrelationModel, ModelRecord, Pmf};

use crate::io::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Library(#[from] symcount::Error),
    #[error("inadmissible model: p({s}) = {value:e}")]
    Inadmissible { s: usize, value: f64 },
    #[error("{0} identity check(s) failed")]
    VerifyFailed(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Inadmissible { .. } => 2,
            CliError::Library(symcount::Error::InadmissiblePmf { .. }) => 2,
            CliError::VerifyFailed(_) => 4,
            CliError::Io(_) | CliError::Csv(_) => 1,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    LimitPmf,
    FinitePmf,
    OraclePmf,
    Cf,
    Sample,
    Estimate,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum PrecisionArg {
    Double,
    DoubleDouble,
    Auto,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::DoubleDouble => Precision::DoubleDouble,
            PrecisionArg::Auto => Precision::Auto,
        }
    }
}

/// Count distributions of exchangeable correlated events.
#[derive(Debug, Parser)]
#[command(name = "symcount", version)]
struct Cli {
    /// Subcommand; may come from --config instead.
    command: Option<Command>,
    /// Correlation coefficients C_1,C_2,... as a comma list.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    c: Option<Vec<f64>>,
    /// Number of events N.
    #[arg(long)]
    n: Option<usize>,
    /// Model as inline JSON: {"l_max": .., "c": [..], "n": ..}.
    #[arg(long)]
    model: Option<String>,
    /// Model JSON file.
    #[arg(long)]
    model_file: Option<PathBuf>,
    /// Job configuration JSON; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Mass tolerance for the limiting pmf.
    #[arg(long)]
    tol: Option<f64>,
    /// Grid start:stop:count for `cf`.
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    /// Mixture atoms p:w,p:w,... for `oracle-pmf`.
    #[arg(long)]
    mixture: Option<String>,
    /// Number of samples for `sample`.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Counts file for `estimate` ("-" or absent reads stdin).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Highest coefficient order for `estimate`.
    #[arg(long)]
    lmax: Option<usize>,
    #[arg(long)]
    bootstrap: Option<usize>,
    /// Random trials per identity for `verify`.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum)]
    precision: Option<PrecisionArg>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobConfig {
    command: Option<Command>,
    model: Option<ModelRecord>,
    output_format: Option<Format>,
    seed: Option<u64>,
    mass_tolerance: Option<f64>,
    n: Option<usize>,
    u: Option<String>,
    mixture: Option<String>,
    count: Option<usize>,
    input: Option<PathBuf>,
    lmax: Option<usize>,
    bootstrap: Option<usize>,
    trials: Option<usize>,
    precision: Option<PrecisionArg>,
}

struct Job {
    command: Command,
    model: Option<CorrelationModel>,
    format: Option<Format>,
    seed: Option<u64>,
    tol: f64,
    n: Option<usize>,
    u: Option<String>,
    mixture: Option<String>,
    count: Option<usize>,
    input: Option<PathBuf>,
    lmax: Option<usize>,
    bootstrap: Option<usize>,
    trials: Option<usize>,
    precision: Precision,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("{what}: {e}")))
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

impl Job {
    fn resolve(cli: Cli) -> Result<Job, CliError> {
        let config: JobConfig = match &cli.config {
            Some(path) => parse_json(&read_file(path)?, "config")?,
            None => JobConfig::default(),
        };
        let command = cli
            .command
            .or(config.command)
            .ok_or_else(|| CliError::Invalid("no command given".into()))?;
        let n = cli.n.or(config.n);

        let sources = [cli.c.is_some(), cli.model.is_some(), cli.model_file.is_some()];
        let record = match sources.iter().filter(|&&s| s).count() {
            0 => config.model,
            1 => Some(match (cli.c, cli.model, cli.model_file) {
                (Some(c), _, _) => ModelRecord { l_max: c.len(), c, n: None },
                (_, Some(json), _) => parse_json(&json, "model")?,
                (_, _, Some(path)) => parse_json(&read_file(&path)?, "model file")?,
                _ => unreachable!(),
            }),
            _ => {
                return Err(CliError::Invalid(
                    "give the model once: --c, --model or --model-file".into(),
                ))
            }
        };
        let model = record
            .map(|mut r| {
                if n.is_some() {
                    r.n = n;
                }
                CorrelationModel::try_from(r)
            })
            .transpose()?;
        if let Some(w) = model.as_ref().and_then(|m| m.warning()) {
            eprintln!("warning: {w}");
        }

        Ok(Job {
            command,
            model,
            format: cli.format.or(config.output_format),
            seed: cli.seed.or(config.seed),
            tol: cli.tol.or(config.mass_tolerance).unwrap_or(1e-12),
            n,
            u: cli.u.or(config.u),
            mixture: cli.mixture.or(config.mixture),
            count: cli.count.or(config.count),
            input: cli.input.or(config.input),
            lmax: cli.lmax.or(config.lmax),
            bootstrap: cli.bootstrap.or(config.bootstrap),
            trials: cli.trials.or(config.trials),
            precision: cli.precision.or(config.precision).map_or(Precision::Auto, Into::into),
        })
    }

    fn model(&self) -> Result<&CorrelationModel, CliError> {
        self.model
            .as_ref()
            .ok_or_else(|| CliError::Invalid("this command needs a model (--c, --model or --model-file)".into()))
    }

    fn required<T: Clone>(value: &Option<T>, flag: &str) -> Result<T, CliError> {
        value
            .clone()
            .ok_or_else(|| CliError::Invalid(format!("missing --{flag}")))
    }
}

fn check_admissible(pmf: &Pmf) -> Result<(), CliError> {
    match pmf.most_negative() {
        Some((s, value)) if !pmf.admissible() => Err(CliError::Inadmissible { s, value }),
        _ => Ok(()),
    }
}

fn run(job: Job, out: &mut impl Write) -> Result<(), CliError> {
    let format = job.format.unwrap_or(match job.command {
        Command::Estimate => Format::Json,
        _ => Format::Csv,
    });
    match job.command {
        Command::LimitPmf => {
            let pmf = limit_pmf(&job.model()?.with_n(None)?, job.tol)?;
            io::write_pmf(&mut *out, &pmf, format)?;
            check_admissible(&pmf)
        }
        Command::FinitePmf => {
            let model = job.model()?;
            if model.n().is_none() {
                return Err(CliError::Invalid("finite-pmf needs --n".into()));
            }
            let pmf = finite_count_pmf_f64(model, job.precision)?;
            io::write_pmf(&mut *out, &pmf, format)?;
            check_admissible(&pmf)
        }
        Command::OraclePmf => {
            let n = Job::required(&job.n, "n")?;
            let atoms = io::parse_mixture(&Job::required(&job.mixture, "mixture")?)?;
            let joint = build_mixture_joint(&MixtureSpec::new(atoms)?, n)?;
            io::write_pmf(&mut *out, &count_pmf_from_joint(&joint), format)
        }
        Command::Cf => {
            let grid = io::parse_grid(&Job::required(&job.u, "u")?)?;
            io::write_cf(&mut *out, &char_fn(job.model()?, &grid), format)
        }
        Command::Sample => {
            let model = job.model()?;
            let count = Job::required(&job.count, "count")?;
            if count == 0 {
                return Err(CliError::Invalid("--count must be positive".into()));
            }
            let pmf = match model.n() {
                Some(_) => finite_count_pmf_f64(model, job.precision)?,
                None => limit_pmf(model, job.tol)?,
            };
            let counts = sample_counts(&pmf, count, job.seed.unwrap_or(0))?;
            io::write_counts(&mut *out, &counts, format)
        }
        Command::Estimate => {
            let counts = io::parse_counts(&io::read_input(job.input.as_deref())?)?;
            if counts.is_empty() {
                return Err(CliError::Invalid("no counts in input".into()));
            }
            let report = estimate_coefficients(
                &counts,
                job.lmax.unwrap_or(2),
                job.bootstrap.unwrap_or(DEFAULT_BOOTSTRAP),
                job.seed.unwrap_or(0),
            )?;
            io::write_estimate(&mut *out, &report, format)
        }
        Command::Verify => {
            let n = job.n.unwrap_or(6);
            if !(1..=verify::MAX_N).contains(&n) {
                return Err(CliError::Invalid(format!("verify needs 1 <= n <= {}", verify::MAX_N)));
            }
            let checks = verify::run_all(n, job.trials.unwrap_or(50), job.seed.unwrap_or(1))?;
            verify::report(&mut *out, &checks, format)?;
            match checks.iter().filter(|c| !c.pass).count() {
                0 => Ok(()),
                failed => Err(CliError::VerifyFailed(failed)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = Job::resolve(cli).and_then(|job| run(job, &mut out));
    let flushed = out.flush();
    match result.and(flushed.map_err(CliError::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
