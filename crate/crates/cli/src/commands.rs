//! Command implementations behind the thin argv shell.
//!
//! Every command returns the process exit code, with core errors mapped by
//! the caller: parse/usage problems exit 2, resource caps exit 3, and
//! failed verifications exit 1.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fgpp_core::error::{Error, Result};
use fgpp_core::graph;
use fgpp_core::problem::{parse_rational, rat, FgppInstance, ProblemSpec, Rational};
use fgpp_core::repfam::{rep_alg, verify_representative, RepConfig, WeightedFamily};
use fgpp_core::separation::{build_universal_set, verify_universal, UsConfig};
use fgpp_core::solvers::{auto_solve, brute_force, Algorithm, SolverConfig};
use fgpp_core::{Graph, SolveResult};

use crate::args::{
    parse_objective, parse_rep_mode, parse_us_mode, BenchArgs, Command, GenArgs, OracleArgs,
    SolveArgs, VerifyArgs, VerifyRepfamArgs, VerifyTarget, VerifyUniversalArgs, VerifyWitnessArgs,
};
use crate::report::{instance_digest, ConfigEcho, ProblemEcho, RunReport};
use crate::{EXIT_OK, EXIT_VERIFY};

pub fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Verify(VerifyArgs { target }) => match target {
            VerifyTarget::Universal(args) => cmd_verify_universal(args),
            VerifyTarget::Repfam(args) => cmd_verify_repfam(args),
            VerifyTarget::Witness(args) => cmd_verify_witness(args),
        },
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read_file(path)?)
}

/// A forced route outside its parameter regime is a usage error; without
/// this check the solver contract would fail an internal assertion.
fn validate_forced(cfg: &SolverConfig, spec: &ProblemSpec) -> Result<()> {
    let cls = spec.classify();
    let cut_row = spec.alpha1 == Rational::from_integer(0)
        && spec.alpha2 == Rational::from_integer(1)
        && spec.objective == fgpp_core::problem::Objective::Max;
    let reject = |msg: &str| Err(Error::Input(msg.into()));
    match cfg.algorithm {
        Algorithm::MaxCut if !cut_row => {
            reject("--algorithm maxcut applies only to the (0, 1, max) row")
        }
        Algorithm::Deg if !cls.degrading => reject(
            "--algorithm deg requires a degrading row \
             (max with alpha1/2 <= alpha2, or min with alpha1/2 >= alpha2)",
        ),
        Algorithm::PAlg if !cls.positive_min => {
            reject("--algorithm palg requires a minimization row with alpha1 >= 0 and alpha2 > 0")
        }
        Algorithm::FastPAlg
            if !(cls.non_degrading_positive_min && spec.alpha1 > Rational::from_integer(0)) =>
        {
            reject(
                "--algorithm fastpalg requires a minimization row with alpha2 >= alpha1/2 > 0",
            )
        }
        _ => Ok(()),
    }
}

pub fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let graph = Arc::new(load_graph(&args.instance.graph)?);
    let (spec, name) = args.instance.problem.resolve()?;
    let p = parse_rational(&args.instance.p)?;
    let cfg = args.config.to_solver_config()?;
    validate_forced(&cfg, &spec)?;
    let inst = FgppInstance::new(Arc::clone(&graph), args.instance.k, p);
    let started = Instant::now();
    let (result, route) = auto_solve(&inst, &spec, &cfg)?;
    let wall = started.elapsed();
    let report = RunReport::new(
        &graph,
        ProblemEcho::new(&name, &spec),
        args.instance.k,
        p,
        route,
        &result,
        ConfigEcho::from(&cfg),
    );
    println!("{}", report.to_json_line());
    eprintln!("# wall_ms {:.3}", wall.as_secs_f64() * 1e3);
    Ok(EXIT_OK)
}

pub fn cmd_oracle(args: OracleArgs) -> Result<i32> {
    let graph = Arc::new(load_graph(&args.instance.graph)?);
    let (spec, name) = args.instance.problem.resolve()?;
    let p = parse_rational(&args.instance.p)?;
    let cfg = SolverConfig {
        algorithm: Algorithm::Oracle,
        max_work: args.max_work,
        ..SolverConfig::default()
    };
    let inst = FgppInstance::new(Arc::clone(&graph), args.instance.k, p);
    let started = Instant::now();
    let result = brute_force(&inst, &spec, cfg.max_work)?;
    let wall = started.elapsed();
    let report = RunReport::new(
        &graph,
        ProblemEcho::new(&name, &spec),
        args.instance.k,
        p,
        "oracle",
        &result,
        ConfigEcho::from(&cfg),
    );
    println!("{}", report.to_json_line());
    eprintln!("# wall_ms {:.3}", wall.as_secs_f64() * 1e3);
    Ok(EXIT_OK)
}

pub fn cmd_gen(args: GenArgs) -> Result<i32> {
    let g = match args.kind.as_str() {
        "path" => graph::path(args.n),
        "cycle" => graph::cycle(args.n)?,
        "star" => graph::star(args.n),
        "complete" => graph::complete(args.n),
        "gnp" => graph::gnp(args.n, parse_rational(&args.prob)?, args.seed)?,
        "regular-ish" => graph::regular_ish(args.n, args.degree, args.seed)?,
        other => {
            return Err(Error::Input(format!(
                "unknown generator `{other}` \
                 (expected gnp, regular-ish, path, cycle, star, or complete)"
            )))
        }
    };
    match &args.out {
        Some(path) => std::fs::write(path, g.to_text())
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", g.to_text()),
    }
    Ok(EXIT_OK)
}

pub fn cmd_bench(args: BenchArgs) -> Result<i32> {
    if args.p_step <= 0 {
        return Err(Error::Input(format!(
            "--p-step must be positive, got {}",
            args.p_step
        )));
    }
    let graph = Arc::new(load_graph(&args.graph)?);
    let (spec, _) = args.problem.resolve()?;
    let cfg = args.config.to_solver_config()?;
    validate_forced(&cfg, &spec)?;
    println!("n,m,max_degree,k,p,algorithm,colorings,wall_ms");
    let mut pv = args.p_from;
    while pv <= args.p_to {
        let inst = FgppInstance::new(Arc::clone(&graph), args.k, Rational::from_integer(pv));
        let started = Instant::now();
        let (result, route) = auto_solve(&inst, &spec, &cfg)?;
        let wall_ms = started.elapsed().as_secs_f64() * 1e3;
        println!(
            "{},{},{},{},{},{},{},{:.3}",
            graph.n(),
            graph.m(),
            graph.max_degree(),
            args.k,
            pv,
            route,
            result.stats.get("coloring_family_size"),
            wall_ms,
        );
        pv += args.p_step;
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify_universal(args: VerifyUniversalArgs) -> Result<i32> {
    let cfg = UsConfig {
        mode: parse_us_mode(&args.us_mode)?,
        seed: args.seed,
        error_prob: parse_rational(&args.error_prob)?,
        max_work: args.max_work,
    };
    let family = build_universal_set(args.n, args.t, &cfg)?;
    let mut vectors = family.vectors.clone();
    if let Some(count) = args.truncate {
        vectors.truncate(count);
    }
    let ok = verify_universal(args.n, args.t, &vectors, args.max_work)?;
    println!(
        "universal n={} t={} size={}: {}",
        args.n,
        args.t,
        vectors.len(),
        if ok { "VERIFIED" } else { "REFUTED" }
    );
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

/// Deterministic random family for the repfam checker: `count` members of
/// uniform size drawn from `0..universe` with small rational weights.
pub fn random_weighted_family(
    universe: usize,
    member_size: usize,
    count: usize,
    seed: u64,
) -> Result<WeightedFamily> {
    if member_size > universe {
        return Err(Error::Input(format!(
            "--member-size {member_size} exceeds --universe {universe}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = Vec::with_capacity(count);
    for _ in 0..count {
        let mut pool: Vec<usize> = (0..universe).collect();
        for i in 0..member_size {
            let j = rng.gen_range(i..universe);
            pool.swap(i, j);
        }
        pool.truncate(member_size);
        let weight = rat(rng.gen_range(-9..=9), rng.gen_range(1..=3));
        members.push((pool, weight));
    }
    WeightedFamily::new(universe, member_size, members)
}

pub fn cmd_verify_repfam(args: VerifyRepfamArgs) -> Result<i32> {
    let objective = parse_objective(&args.objective)?;
    let cfg = RepConfig {
        mode: parse_rep_mode(&args.mode)?,
        seed: args.seed,
        error_prob: parse_rational(&args.error_prob)?,
        max_work: args.max_work,
    };
    let family = random_weighted_family(args.universe, args.member_size, args.count, args.seed)?;
    let pruned = rep_alg(&family, args.k, objective, &cfg)?;
    let ok = verify_representative(&family, &pruned, args.k, objective, args.max_work)?;
    println!(
        "repfam universe={} size={} members={} -> {}: {}",
        args.universe,
        args.member_size,
        family.len(),
        pruned.len(),
        if ok { "VERIFIED" } else { "REFUTED" }
    );
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

pub fn cmd_verify_witness(args: VerifyWitnessArgs) -> Result<i32> {
    let graph = load_graph(&args.graph)?;
    let report = RunReport::from_json(&read_file(&args.report)?)?;
    let spec = report.problem.to_spec()?;
    let p = report.p.to_rational()?;
    let digest = instance_digest(&graph, &spec, report.k, p);
    if digest != report.digest {
        println!("witness: REFUTED (digest mismatch: report is not about this instance)");
        return Ok(EXIT_VERIFY);
    }
    let Some(witness) = &report.witness else {
        println!("witness: REFUTED (report carries no witness)");
        return Ok(EXIT_VERIFY);
    };
    // Out-of-range ids in a tampered report refute it rather than erroring.
    let ok = report.decision
        && SolveResult::verify_witness(&graph, &spec, report.k, p, witness).unwrap_or(false);
    println!("witness: {}", if ok { "VERIFIED" } else { "REFUTED" });
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fgpp_core::problem::Objective;
    use fgpp_core::solvers::Rounding;

    fn config_with(algorithm: Algorithm) -> SolverConfig {
        SolverConfig {
            algorithm,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn forced_routes_check_their_regime() {
        let max_cut = ProblemSpec::builtin("max-cut").unwrap();
        let min_vc = ProblemSpec::builtin("min-vc").unwrap();
        let densest = ProblemSpec::builtin("densest").unwrap();
        assert!(validate_forced(&config_with(Algorithm::MaxCut), &max_cut).is_ok());
        assert!(validate_forced(&config_with(Algorithm::MaxCut), &min_vc).is_err());
        assert!(validate_forced(&config_with(Algorithm::Deg), &max_cut).is_ok());
        assert!(validate_forced(&config_with(Algorithm::Deg), &densest).is_err());
        assert!(validate_forced(&config_with(Algorithm::PAlg), &min_vc).is_ok());
        assert!(validate_forced(&config_with(Algorithm::PAlg), &densest).is_err());
        assert!(validate_forced(&config_with(Algorithm::FastPAlg), &min_vc).is_ok());
        assert!(validate_forced(&config_with(Algorithm::FastPAlg), &max_cut).is_err());
        assert!(validate_forced(&config_with(Algorithm::Auto), &densest).is_ok());
        assert!(validate_forced(&config_with(Algorithm::Oracle), &densest).is_ok());
    }

    #[test]
    fn random_family_is_deterministic_and_valid() {
        let a = random_weighted_family(8, 2, 12, 7).unwrap();
        let b = random_weighted_family(8, 2, 12, 7).unwrap();
        assert_eq!(a.members, b.members);
        assert_eq!(a.len(), 12);
        assert!(a.members.iter().all(|(s, _)| s.len() == 2));
        let c = random_weighted_family(8, 2, 12, 8).unwrap();
        assert_ne!(a.members, c.members);
        assert!(random_weighted_family(3, 4, 1, 0).is_err());
    }

    #[test]
    fn rounding_and_objective_parsers_reject_junk() {
        assert!(parse_objective("max").is_ok());
        assert!(parse_objective("between").is_err());
        assert!(matches!(
            crate::args::parse_rounding("ceil"),
            Ok(Rounding::Ceil)
        ));
        assert!(crate::args::parse_rounding("nearest").is_err());
        assert_eq!(parse_objective("min").unwrap(), Objective::Min);
    }
}
