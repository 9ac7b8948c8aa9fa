//! Randomized (but seeded and fully deterministic) coverage of the
//! verified randomized machinery: universal coloring families, weighted
//! representative families, family shrinking, and solver routes on graphs
//! larger than the exhaustive grid.

use std::sync::Arc;

use fgpp_core::enumeration::reduce_to_wec;
use fgpp_core::graph::gnp;
use fgpp_core::problem::rat;
use fgpp_core::repfam::{decrease, rep_alg, verify_representative, RepConfig, RepMode, WeightedFamily};
use fgpp_core::separation::{build_universal_set, mc_family_size, verify_universal, UsConfig, UsMode};
use fgpp_core::solvers::{auto_solve, brute_force, SolverConfig};
use fgpp_core::wec::brute_wec_capped;
use fgpp_core::{FgppInstance, Objective, ProblemSpec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn verified_universal_families_cover_all_patterns() {
    for n in [4usize, 7, 10, 15] {
        for t in 1..=3usize.min(n) {
            for seed in [0u64, 17] {
                let cfg = UsConfig {
                    mode: UsMode::Verified,
                    seed,
                    ..Default::default()
                };
                let fam = build_universal_set(n, t, &cfg).unwrap();
                assert!(
                    verify_universal(n, t, &fam.vectors, 1 << 30).unwrap(),
                    "verified family fails its own check: n={n} t={t} seed={seed}"
                );
                // families never exceed the exhaustive size
                assert!(fam.len() as u128 <= 1u128 << n);
            }
        }
    }
}

#[test]
fn monte_carlo_family_sizes_follow_the_formula() {
    for (n, t) in [(12usize, 2usize), (20, 3), (40, 4)] {
        let cfg = UsConfig {
            mode: UsMode::MonteCarlo,
            seed: 5,
            ..Default::default()
        };
        let fam = build_universal_set(n, t, &cfg).unwrap();
        assert_eq!(fam.len() as u64, mc_family_size(n, t, cfg.error_prob));
    }
}

fn random_family(rng: &mut ChaCha8Rng, universe: usize, size: usize, count: usize) -> WeightedFamily {
    let mut members = Vec::new();
    for _ in 0..count {
        let mut set: Vec<usize> = Vec::new();
        while set.len() < size {
            let v = rng.gen_range(0..universe);
            if !set.contains(&v) {
                set.push(v);
            }
        }
        members.push((set, rat(rng.gen_range(-5..=9), 1)));
    }
    WeightedFamily::new(universe, size, members).unwrap()
}

#[test]
fn verified_representative_families_pass_the_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..30 {
        let universe = rng.gen_range(4..=8);
        let size = rng.gen_range(1..=2usize);
        let k = rng.gen_range(size..=4.min(universe));
        let count = rng.gen_range(1..=10);
        let family = random_family(&mut rng, universe, size, count);
        for objective in [Objective::Max, Objective::Min] {
            let cfg = RepConfig {
                mode: RepMode::Verified,
                seed: case,
                ..Default::default()
            };
            let rep = rep_alg(&family, k, objective, &cfg).unwrap();
            assert!(rep.len() <= family.len());
            assert!(
                verify_representative(&family, &rep, k, objective, 1 << 28).unwrap(),
                "case {case}: representative family fails the definition"
            );
        }
    }
}

#[test]
fn family_shrinking_preserves_cover_decisions() {
    let specs = [
        ProblemSpec::builtin("min-cut").unwrap(),
        ProblemSpec::builtin("densest").unwrap(),
        ProblemSpec::builtin("sparsest").unwrap(),
    ];
    let mut cases = 0;
    for seed in 0..12u64 {
        let g = gnp(6, rat(1, 2), seed).unwrap();
        for spec in &specs {
            if !spec.merge_safe() {
                continue;
            }
            for k in 1..=3usize {
                for p in [rat(0, 1), rat(1, 1), rat(3, 1)] {
                    let inst = reduce_to_wec(&g, spec, k, p, 1 << 30).unwrap();
                    let before = brute_wec_capped(&inst, 512).unwrap();
                    let cfg = RepConfig {
                        mode: RepMode::Verified,
                        seed,
                        ..Default::default()
                    };
                    let shrunk = decrease(&inst, &cfg, Some(0)).unwrap();
                    assert!(shrunk.family.len() <= inst.family.len());
                    let after = brute_wec_capped(&shrunk, 512).unwrap();
                    assert_eq!(
                        before.decision, after.decision,
                        "shrinking changed a decision: seed={seed} k={k} p={p}"
                    );
                    cases += 1;
                }
            }
        }
    }
    assert!(cases >= 100);
}

#[test]
fn verified_routes_match_oracle_on_medium_graphs() {
    let cfg = SolverConfig::default(); // verified universal sets
    let specs: Vec<ProblemSpec> = ["max-cut", "min-cut", "max-vc", "min-vc", "densest", "sparsest"]
        .iter()
        .map(|n| ProblemSpec::builtin(n).unwrap())
        .collect();
    for (n, seed) in [(7usize, 1u64), (8, 2), (9, 3)] {
        let graph = Arc::new(gnp(n, rat(1, 2), seed).unwrap());
        for spec in &specs {
            for k in 0..=n {
                let probe = FgppInstance::new(Arc::clone(&graph), k, rat(0, 1));
                let best = brute_force(&probe, spec, 1 << 30).unwrap().value.unwrap();
                for p in [best - rat(1, 1), best, best + rat(1, 1)] {
                    let inst = FgppInstance::new(Arc::clone(&graph), k, p);
                    let oracle = brute_force(&inst, spec, 1 << 30).unwrap();
                    let (routed, label) = auto_solve(&inst, spec, &cfg).unwrap();
                    assert_eq!(
                        routed.decision, oracle.decision,
                        "route {label} disagrees: n={n} seed={seed} k={k} p={p}"
                    );
                }
            }
        }
    }
}
