//! Machine-readable run reports.
//!
//! One solve or oracle run emits a single-line JSON object. Field order is
//! fixed by the struct, counters live in ordered maps, and wall time stays
//! out of the payload, so identical commands with identical seeds produce
//! byte-identical lines.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use fgpp_core::error::{Error, Result};
use fgpp_core::problem::{Objective, ProblemSpec, Rational};
use fgpp_core::separation::UsMode;
use fgpp_core::solvers::{Algorithm, Rounding, SolverConfig};
use fgpp_core::{Graph, SolveResult};

/// Exact rational as a numerator/denominator pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl From<Rational> for Ratio {
    fn from(r: Rational) -> Ratio {
        Ratio {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl Ratio {
    pub fn to_rational(self) -> Result<Rational> {
        if self.den == 0 {
            return Err(Error::Input("zero denominator in report rational".into()));
        }
        Ok(Rational::new(self.num, self.den))
    }
}

/// The parameter row a run was solved under.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemEcho {
    pub name: String,
    pub alpha1: Ratio,
    pub alpha2: Ratio,
    pub objective: String,
}

impl ProblemEcho {
    pub fn new(name: &str, spec: &ProblemSpec) -> ProblemEcho {
        ProblemEcho {
            name: name.to_string(),
            alpha1: spec.alpha1.into(),
            alpha2: spec.alpha2.into(),
            objective: objective_name(spec.objective).to_string(),
        }
    }

    pub fn to_spec(&self) -> Result<ProblemSpec> {
        let objective = match self.objective.as_str() {
            "max" => Objective::Max,
            "min" => Objective::Min,
            other => {
                return Err(Error::Input(format!(
                    "unknown objective `{other}` in report"
                )))
            }
        };
        Ok(ProblemSpec::new(
            self.alpha1.to_rational()?,
            self.alpha2.to_rational()?,
            objective,
        ))
    }
}

/// Echo of every knob that influenced the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub algorithm: String,
    pub us_mode: String,
    pub seed: u64,
    pub error_prob: Ratio,
    pub rounding: String,
    pub decrease_threshold: Option<usize>,
    pub threads: usize,
    pub max_work: u64,
}

impl From<&SolverConfig> for ConfigEcho {
    fn from(cfg: &SolverConfig) -> ConfigEcho {
        ConfigEcho {
            algorithm: algorithm_name(cfg.algorithm).to_string(),
            us_mode: us_mode_name(cfg.us_mode).to_string(),
            seed: cfg.seed,
            error_prob: cfg.error_prob.into(),
            rounding: rounding_name(cfg.rounding).to_string(),
            decrease_threshold: cfg.decrease_threshold,
            threads: cfg.threads,
            max_work: cfg.max_work,
        }
    }
}

/// Single-line JSON payload of one run. `algorithm` is the route that
/// actually executed; the requested route sits in `config.algorithm`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub digest: String,
    pub problem: ProblemEcho,
    pub k: usize,
    pub p: Ratio,
    pub algorithm: String,
    pub decision: bool,
    pub witness: Option<Vec<usize>>,
    pub value: Option<Ratio>,
    pub stats: BTreeMap<String, u64>,
    pub seed: u64,
    pub config: ConfigEcho,
}

impl RunReport {
    pub fn new(
        graph: &Graph,
        problem: ProblemEcho,
        k: usize,
        p: Rational,
        route: &str,
        result: &SolveResult,
        config: ConfigEcho,
    ) -> RunReport {
        let spec = problem
            .to_spec()
            .expect("echo built from a parsed spec is valid");
        RunReport {
            digest: instance_digest(graph, &spec, k, p),
            problem,
            k,
            p: p.into(),
            algorithm: route.to_string(),
            decision: result.decision,
            witness: result.witness.clone(),
            value: result.value.map(Ratio::from),
            stats: result.stats.iter().map(|(k, v)| (k.to_string(), v)).collect(),
            seed: config.seed,
            config,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<RunReport> {
        serde_json::from_str(text.trim())
            .map_err(|e| Error::Input(format!("malformed report JSON: {e}")))
    }
}

/// SHA-256 over the canonical graph rendering and the instance parameters.
pub fn instance_digest(graph: &Graph, spec: &ProblemSpec, k: usize, p: Rational) -> String {
    let mut hasher = Sha256::new();
    hasher.update(graph.to_text().as_bytes());
    hasher.update(
        format!(
            "problem {}/{} {}/{} {}\nk {k}\np {}/{}\n",
            spec.alpha1.numer(),
            spec.alpha1.denom(),
            spec.alpha2.numer(),
            spec.alpha2.denom(),
            objective_name(spec.objective),
            p.numer(),
            p.denom(),
        )
        .as_bytes(),
    );
    let bytes = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

pub fn objective_name(objective: Objective) -> &'static str {
    match objective {
        Objective::Max => "max",
        Objective::Min => "min",
    }
}

pub fn algorithm_name(algorithm: Algorithm) -> &'static str {
    match algorithm {
        Algorithm::Auto => "auto",
        Algorithm::Fgpp => "fgpp",
        Algorithm::Deg => "deg",
        Algorithm::MaxCut => "maxcut",
        Algorithm::PAlg => "palg",
        Algorithm::FastPAlg => "fastpalg",
        Algorithm::Oracle => "oracle",
    }
}

pub fn us_mode_name(mode: UsMode) -> &'static str {
    match mode {
        UsMode::Exhaustive => "exhaustive",
        UsMode::Verified => "verified",
        UsMode::MonteCarlo => "monte-carlo",
    }
}

pub fn rounding_name(rounding: Rounding) -> &'static str {
    match rounding {
        Rounding::Floor => "floor",
        Rounding::Ceil => "ceil",
    }
}
