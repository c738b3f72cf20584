//! Command-line interface.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 bad input or
//! configuration, 3 solver failure, 4 data ingestion failure. Errors are
//! reported on stderr as `error: <Name>: <message>`; stdout carries only
//! JSON, CSV or the verification report.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    self, quadrature_oracle_example, run_verify, transform_risk, OracleExample, OracleReport,
    TransformKind, VerifyConfig,
};
use crate::error::Error;
use crate::experiment::{run_experiment, write_csv, DataSource, ExperimentConfig, SweepSummary};
use crate::gibbs::solve_type1;
use crate::measure::{DiscreteMeasure, Fixture, RiskProfile};
use crate::normalization::{solve_type2, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_INGEST: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ermrer",
    version,
    about = "Relative-entropy-regularized empirical risk minimization over finite model sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveType {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "V")]
    V,
    #[value(name = "W")]
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Ex1,
    Ex2,
    Ex3,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one regularized problem for a JSON fixture and print the solution.
    Solve {
        /// Fixture: {"weights": [...], "risks": [...]}.
        fixture: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long = "type", value_enum)]
        kind: SolveType,
    },
    /// Check every solver property and identity on random instances.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Support sizes, cycled over instances.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Regularization factors checked on every instance.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        /// Shift every normalization constant by this amount (harness self-test).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        perturb_beta: f64,
    },
    /// Print the transformed risk that makes one regularizer reproduce the other.
    Transform {
        fixture: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Check the solvers against reference problems with known answers.
    Oracle {
        #[arg(value_enum, default_value = "all")]
        example: Example,
    },
    /// Run the λ-sweep and print one CSV row per (repetition, λ, type).
    Experiment {
        /// JSON file with any subset of the configuration fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// IDX image file; requires --labels.
        #[arg(long, requires = "labels")]
        images: Option<PathBuf>,
        /// IDX label file; requires --images.
        #[arg(long, requires = "images")]
        labels: Option<PathBuf>,
        /// The two labels to keep from the IDX files.
        #[arg(long, value_delimiter = ',', num_args = 1, default_value = "6,7")]
        keep: Vec<u8>,
    },
}

/// An error together with the exit code it maps to.
struct Failure {
    code: i32,
    error: Error,
}

fn fail(code: i32) -> impl Fn(Error) -> Failure {
    move |error| Failure { code, error }
}

fn load_fixture(path: &Path) -> Result<(DiscreteMeasure, RiskProfile), Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(EXIT_INPUT)(e.into()))?;
    let fixture: Fixture = serde_json::from_str(&text).map_err(|e| fail(EXIT_INPUT)(e.into()))?;
    fixture.into_parts().map_err(fail(EXIT_INPUT))
}

#[derive(Serialize)]
struct SolveOutput {
    lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_partition: Option<f64>,
    rn_derivative: Vec<f64>,
    expected_risk: f64,
    kl_p_q: f64,
    kl_q_p: f64,
    /// Input positions of the atoms kept (zero weights are dropped).
    support: Vec<usize>,
}

fn cmd_solve(fixture: &Path, lambda: f64, kind: SolveType) -> Result<String, Failure> {
    let (q, l) = load_fixture(fixture)?;
    let solver = fail(EXIT_SOLVER);
    let out = match kind {
        SolveType::I => {
            let s = solve_type1(&q, &l, lambda).map_err(&solver)?;
            let rn = s.rn_derivative();
            let log_rn = s.log_rn_derivative();
            // from the log densities, since entries may underflow to zero
            let kl_p_q = q.integrate(|i| if rn[i] == 0.0 { 0.0 } else { rn[i] * log_rn[i] });
            let kl_q_p = -q.integrate(|i| log_rn[i]);
            SolveOutput {
                lambda,
                beta: None,
                log_partition: Some(s.log_partition),
                expected_risk: analysis::expected_risk(&rn, &q, &l).map_err(&solver)?,
                rn_derivative: rn,
                kl_p_q,
                kl_q_p,
                support: q.retained().to_vec(),
            }
        }
        SolveType::II => {
            let s = solve_type2(&q, &l, lambda, &SolverConfig::default()).map_err(&solver)?;
            let report =
                analysis::functional_report(&s.rn_derivative, &q, &l, &s).map_err(&solver)?;
            SolveOutput {
                lambda,
                beta: Some(s.beta),
                log_partition: None,
                rn_derivative: s.rn_derivative,
                expected_risk: report.expected_risk,
                kl_p_q: report.kl_p_q,
                kl_q_p: report.kl_q_p,
                support: q.retained().to_vec(),
            }
        }
    };
    Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n")
}

#[derive(Serialize)]
struct TransformOutput {
    lambda: f64,
    kind: &'static str,
    values: Vec<f64>,
}

fn cmd_transform(fixture: &Path, lambda: f64, kind: Kind) -> Result<String, Failure> {
    let (q, l) = load_fixture(fixture)?;
    let kind = match kind {
        Kind::V => TransformKind::V,
        Kind::W => TransformKind::W,
    };
    let t = transform_risk(&q, &l, lambda, kind, &SolverConfig::default())
        .map_err(fail(EXIT_SOLVER))?;
    let out = TransformOutput {
        lambda,
        kind: match kind {
            TransformKind::V => "V",
            TransformKind::W => "W",
        },
        values: t.values,
    };
    Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n")
}

/// Whether an oracle report meets its expected outcome.
pub fn oracle_passes(report: &OracleReport) -> bool {
    match report.example {
        OracleExample::Ex1 => {
            !report.divergent
                && report
                    .divergence_integral
                    .is_some_and(|v| (v - 2.0).abs() <= 1e-4)
                && report.kbar_at_lambda_star.is_some_and(|v| v.abs() <= 1e-6)
        }
        OracleExample::Ex2 => report.divergent,
        OracleExample::Ex3 => report.max_error.is_some_and(|e| e <= 1e-10),
    }
}

#[derive(Serialize)]
struct OracleOutput {
    pass: bool,
    #[serde(flatten)]
    report: OracleReport,
}

fn cmd_oracle(example: Example) -> (String, bool) {
    let which: Vec<OracleExample> = match example {
        Example::Ex1 => vec![OracleExample::Ex1],
        Example::Ex2 => vec![OracleExample::Ex2],
        Example::Ex3 => vec![OracleExample::Ex3],
        Example::All => vec![OracleExample::Ex1, OracleExample::Ex2, OracleExample::Ex3],
    };
    let outputs: Vec<OracleOutput> = which
        .into_iter()
        .map(|w| {
            let report = quadrature_oracle_example(w);
            OracleOutput {
                pass: oracle_passes(&report),
                report,
            }
        })
        .collect();
    let ok = outputs.iter().all(|o| o.pass);
    (
        serde_json::to_string_pretty(&outputs).expect("serializable") + "\n",
        ok,
    )
}

fn ingest_failure(error: Error) -> Failure {
    let code = match error {
        Error::InvalidConfig(_) => EXIT_INPUT,
        Error::NoConvergence { .. } | Error::NonPositiveLambda(_) => EXIT_SOLVER,
        _ => EXIT_INGEST,
    };
    Failure { code, error }
}

#[allow(clippy::too_many_arguments)]
fn cmd_experiment(
    config: Option<&Path>,
    seed: Option<u64>,
    out: Option<&Path>,
    images: Option<PathBuf>,
    labels: Option<PathBuf>,
    keep: &[u8],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    let mut cfg = match config {
        Some(p) => ExperimentConfig::from_path(p).map_err(fail(EXIT_INPUT))?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = seed {
        cfg.rng_seed = s;
    }
    let source = match (images, labels) {
        (Some(images), Some(labels)) => {
            let keep: [u8; 2] = keep.try_into().map_err(|_| {
                fail(EXIT_INPUT)(Error::InvalidConfig(
                    "--keep takes exactly two labels".into(),
                ))
            })?;
            DataSource::Images {
                images,
                labels,
                keep,
            }
        }
        _ => DataSource::Synthetic,
    };
    let rows = run_experiment(&cfg, &source).map_err(ingest_failure)?;
    let io = |e: std::io::Error| fail(EXIT_INPUT)(e.into());
    match out {
        Some(path) => {
            let file = fs::File::create(path).map_err(io)?;
            write_csv(&rows, std::io::BufWriter::new(file)).map_err(io)?;
        }
        None => write_csv(&rows, &mut *stdout).map_err(io)?,
    }
    let _ = writeln!(stderr, "summary: {}", SweepSummary::from_rows(&rows));
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    let result: Result<i32, Failure> = match cli.command {
        Command::Solve {
            fixture,
            lambda,
            kind,
        } => cmd_solve(&fixture, lambda, kind).map(|s| {
            let _ = stdout.write_all(s.as_bytes());
            EXIT_OK
        }),
        Command::Transform {
            fixture,
            lambda,
            kind,
        } => cmd_transform(&fixture, lambda, kind).map(|s| {
            let _ = stdout.write_all(s.as_bytes());
            EXIT_OK
        }),
        Command::Verify {
            seed,
            instances,
            sizes,
            lambdas,
            perturb_beta,
        } => {
            let defaults = VerifyConfig::default();
            let cfg = VerifyConfig {
                seed,
                instances,
                sizes: sizes.unwrap_or(defaults.sizes),
                lambda_grid: lambdas.unwrap_or(defaults.lambda_grid),
                perturb_beta,
                ..defaults
            };
            if cfg.sizes.contains(&0) || cfg.lambda_grid.iter().any(|l| !(*l > 0.0)) {
                Err(fail(EXIT_INPUT)(Error::InvalidConfig(
                    "sizes and lambdas must be positive".into(),
                )))
            } else {
                run_verify(&cfg).map_err(fail(EXIT_SOLVER)).map(|report| {
                    let _ = write!(stdout, "{report}");
                    if report.all_passed() {
                        EXIT_OK
                    } else {
                        EXIT_PROPERTY
                    }
                })
            }
        }
        Command::Oracle { example } => {
            let (text, ok) = cmd_oracle(example);
            let _ = stdout.write_all(text.as_bytes());
            Ok(if ok { EXIT_OK } else { EXIT_PROPERTY })
        }
        Command::Experiment {
            config,
            seed,
            out,
            images,
            labels,
            keep,
        } => cmd_experiment(
            config.as_deref(),
            seed,
            out.as_deref(),
            images,
            labels,
            &keep,
            stdout,
            stderr,
        )
        .map(|()| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, error }) => {
            let _ = writeln!(stderr, "error: {}: {error}", error.name());
            code
        }
    }
}
