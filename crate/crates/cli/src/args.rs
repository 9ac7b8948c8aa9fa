//! Flag definitions and their translation into solver configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use fgpp_core::error::{Error, Result};
use fgpp_core::problem::{parse_rational, Objective, ProblemSpec, Rational};
use fgpp_core::repfam::RepMode;
use fgpp_core::separation::UsMode;
use fgpp_core::solvers::{Algorithm, Rounding, SolverConfig};

#[derive(Parser, Debug)]
#[command(
    name = "fgpp",
    version,
    about = "Exact decision/witness solvers for fixed-cardinality graph partitioning"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one instance with the routed (or forced) algorithm.
    Solve(SolveArgs),
    /// Solve one instance by scanning every k-subset.
    Oracle(OracleArgs),
    /// Write a graph file; identical parameters give identical bytes.
    Gen(GenArgs),
    /// Sweep thresholds on one graph and emit CSV telemetry rows.
    Bench(BenchArgs),
    /// Run a verification oracle; exits 0 iff it accepts.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Elementary-step estimate cap for the subset scan.
    #[arg(long = "max-work", default_value_t = 100_000_000, value_name = "INT")]
    pub max_work: u64,
}

#[derive(Args, Debug)]
pub struct InstanceArgs {
    /// Graph file (`p <n> <m>` header, then `e <u> <v>` lines).
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Solution cardinality.
    #[arg(short = 'k', value_name = "INT")]
    pub k: usize,
    /// Threshold, as an integer or `a/b`.
    #[arg(short = 'p', value_name = "Q", allow_hyphen_values = true)]
    pub p: String,
}

#[derive(Args, Debug)]
pub struct ProblemArgs {
    /// max-cut, min-cut, max-vc, min-vc, densest, sparsest, or custom.
    #[arg(long, value_name = "NAME")]
    pub problem: String,
    /// Inner-edge coefficient for custom rows, integer or `a/b`.
    #[arg(long, value_name = "Q", allow_hyphen_values = true)]
    pub alpha1: Option<String>,
    /// Cut-edge coefficient for custom rows, integer or `a/b`.
    #[arg(long, value_name = "Q", allow_hyphen_values = true)]
    pub alpha2: Option<String>,
    /// min or max, for custom rows.
    #[arg(long, value_name = "DIR")]
    pub objective: Option<String>,
}

impl ProblemArgs {
    /// Resolves to a parameter row plus the name echoed in reports.
    pub fn resolve(&self) -> Result<(ProblemSpec, String)> {
        if self.problem == "custom" {
            fn need<'a>(field: &'a Option<String>, flag: &str) -> Result<&'a str> {
                field.as_deref().ok_or_else(|| {
                    Error::Input(format!("--problem custom requires {flag}"))
                })
            }
            let alpha1 = parse_rational(need(&self.alpha1, "--alpha1")?)?;
            let alpha2 = parse_rational(need(&self.alpha2, "--alpha2")?)?;
            let objective = parse_objective(need(&self.objective, "--objective")?)?;
            Ok((ProblemSpec::new(alpha1, alpha2, objective), "custom".into()))
        } else {
            let spec = ProblemSpec::builtin(&self.problem)?;
            if self.alpha1.is_some() || self.alpha2.is_some() || self.objective.is_some() {
                return Err(Error::Input(
                    "catalog rows fix alpha1/alpha2/objective; use --problem custom instead"
                        .into(),
                ));
            }
            Ok((spec, self.problem.clone()))
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// auto, fgpp, deg, maxcut, palg, fastpalg, or oracle.
    #[arg(long, default_value = "auto", value_name = "NAME")]
    pub algorithm: String,
    /// Universal-set mode: exhaustive, verified, or monte-carlo.
    #[arg(long = "us-mode", default_value = "verified", value_name = "MODE")]
    pub us_mode: String,
    /// Seed for every randomized component.
    #[arg(long, default_value_t = 0, value_name = "INT")]
    pub seed: u64,
    /// Failure-probability budget in (0, 1), integer or `a/b`.
    #[arg(long = "error-prob", default_value = "1/100", value_name = "Q")]
    pub error_prob: String,
    /// floor or ceil, applied to fractional coloring strengths.
    #[arg(long, default_value = "floor", value_name = "RULE")]
    pub rounding: String,
    /// Prune cover levels once they hold at least this many sets.
    #[arg(long = "decrease-threshold", value_name = "INT")]
    pub decrease_threshold: Option<usize>,
    /// Worker threads for coloring scans; 1 is the sequential baseline.
    #[arg(long, default_value_t = 1, value_name = "INT")]
    pub threads: usize,
    /// Elementary-step estimate cap.
    #[arg(long = "max-work", default_value_t = 100_000_000, value_name = "INT")]
    pub max_work: u64,
}

impl ConfigArgs {
    pub fn to_solver_config(&self) -> Result<SolverConfig> {
        let algorithm: Algorithm = self.algorithm.parse().map_err(Error::Input)?;
        let error_prob = parse_rational(&self.error_prob)?;
        if error_prob <= Rational::from_integer(0) || error_prob >= Rational::from_integer(1) {
            return Err(Error::Input(format!(
                "--error-prob must lie strictly between 0 and 1, got {error_prob}"
            )));
        }
        if self.threads == 0 {
            return Err(Error::Input("--threads must be at least 1".into()));
        }
        Ok(SolverConfig {
            algorithm,
            us_mode: parse_us_mode(&self.us_mode)?,
            seed: self.seed,
            error_prob,
            rounding: parse_rounding(&self.rounding)?,
            decrease_threshold: self.decrease_threshold,
            threads: self.threads,
            max_work: self.max_work,
        })
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// gnp, regular-ish, path, cycle, star, or complete.
    #[arg(long, value_name = "NAME")]
    pub kind: String,
    /// Vertex count.
    #[arg(long, value_name = "INT")]
    pub n: usize,
    /// Edge probability for gnp, integer or `a/b`.
    #[arg(long, default_value = "1/2", value_name = "Q")]
    pub prob: String,
    /// Degree bound for regular-ish.
    #[arg(long, default_value_t = 3, value_name = "INT")]
    pub degree: usize,
    #[arg(long, default_value_t = 0, value_name = "INT")]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Graph file (`p <n> <m>` header, then `e <u> <v>` lines).
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Solution cardinality.
    #[arg(short = 'k', value_name = "INT")]
    pub k: usize,
    /// First threshold of the sweep.
    #[arg(long = "p-from", value_name = "INT", allow_hyphen_values = true)]
    pub p_from: i64,
    /// Last threshold of the sweep, inclusive.
    #[arg(long = "p-to", value_name = "INT", allow_hyphen_values = true)]
    pub p_to: i64,
    /// Sweep stride.
    #[arg(long = "p-step", default_value_t = 1, value_name = "INT")]
    pub p_step: i64,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub target: VerifyTarget,
}

#[derive(Subcommand, Debug)]
pub enum VerifyTarget {
    /// Build an (n, t)-universal family and check the covering definition.
    Universal(VerifyUniversalArgs),
    /// Prune a seeded weighted family and check representativeness.
    Repfam(VerifyRepfamArgs),
    /// Check a solve report's witness against its graph file.
    Witness(VerifyWitnessArgs),
}

#[derive(Args, Debug)]
pub struct VerifyUniversalArgs {
    /// Domain size.
    #[arg(long, value_name = "INT")]
    pub n: usize,
    /// Strength: every pattern on every t coordinates must appear.
    #[arg(long, value_name = "INT")]
    pub t: usize,
    /// exhaustive, verified, or monte-carlo.
    #[arg(long = "us-mode", default_value = "verified", value_name = "MODE")]
    pub us_mode: String,
    #[arg(long, default_value_t = 0, value_name = "INT")]
    pub seed: u64,
    /// Failure-probability budget, integer or `a/b`.
    #[arg(long = "error-prob", default_value = "1/100", value_name = "Q")]
    pub error_prob: String,
    #[arg(long = "max-work", default_value_t = 100_000_000, value_name = "INT")]
    pub max_work: u64,
    /// Keep only the first COUNT vectors before checking.
    #[arg(long, value_name = "COUNT")]
    pub truncate: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyRepfamArgs {
    /// Ground-set size of the generated family.
    #[arg(long, value_name = "INT")]
    pub universe: usize,
    /// Uniform member cardinality.
    #[arg(long = "member-size", value_name = "INT")]
    pub member_size: usize,
    /// Number of generated members.
    #[arg(long, value_name = "INT")]
    pub count: usize,
    /// Completion budget the family must stay representative for.
    #[arg(short = 'k', value_name = "INT")]
    pub k: usize,
    /// max or min.
    #[arg(long, default_value = "max", value_name = "DIR")]
    pub objective: String,
    /// identity, verified, or monte-carlo.
    #[arg(long, default_value = "verified", value_name = "MODE")]
    pub mode: String,
    #[arg(long, default_value_t = 0, value_name = "INT")]
    pub seed: u64,
    /// Failure-probability budget, integer or `a/b`.
    #[arg(long = "error-prob", default_value = "1/100", value_name = "Q")]
    pub error_prob: String,
    #[arg(long = "max-work", default_value_t = 100_000_000, value_name = "INT")]
    pub max_work: u64,
}

#[derive(Args, Debug)]
pub struct VerifyWitnessArgs {
    /// Graph file the report was produced from.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// RunReport JSON file from a solve or oracle run.
    #[arg(long, value_name = "FILE")]
    pub report: PathBuf,
}

pub fn parse_objective(s: &str) -> Result<Objective> {
    match s {
        "max" => Ok(Objective::Max),
        "min" => Ok(Objective::Min),
        other => Err(Error::Input(format!(
            "unknown objective `{other}` (expected min or max)"
        ))),
    }
}

pub fn parse_us_mode(s: &str) -> Result<UsMode> {
    match s {
        "exhaustive" => Ok(UsMode::Exhaustive),
        "verified" => Ok(UsMode::Verified),
        "monte-carlo" => Ok(UsMode::MonteCarlo),
        other => Err(Error::Input(format!(
            "unknown universal-set mode `{other}` (expected exhaustive, verified, or monte-carlo)"
        ))),
    }
}

pub fn parse_rounding(s: &str) -> Result<Rounding> {
    match s {
        "floor" => Ok(Rounding::Floor),
        "ceil" => Ok(Rounding::Ceil),
        other => Err(Error::Input(format!(
            "unknown rounding rule `{other}` (expected floor or ceil)"
        ))),
    }
}

pub fn parse_rep_mode(s: &str) -> Result<RepMode> {
    match s {
        "identity" => Ok(RepMode::Identity),
        "verified" => Ok(RepMode::Verified),
        "monte-carlo" => Ok(RepMode::MonteCarlo),
        other => Err(Error::Input(format!(
            "unknown representative mode `{other}` (expected identity, verified, or monte-carlo)"
        ))),
    }
}
