//! Decision equivalence of every solver route against the subset-scan
//! oracle on a deterministic grid of small graphs, plus the structural
//! properties that come for free on the same sweep: monotone decisions in
//! the threshold, complement symmetry of the cut solver, and witness
//! re-verification.

use std::collections::BTreeSet;
use std::sync::Arc;

use fgpp_core::ensemble::nonisomorphic_graphs;
use fgpp_core::problem::rat;
use fgpp_core::separation::UsMode;
use fgpp_core::solvers::{
    auto_solve, brute_force, deg_alg, fast_p_alg, fgpp_alg, max_cut_alg, p_alg, SolverConfig,
};
use fgpp_core::subsets::combinations;
use fgpp_core::{val, FgppInstance, Graph, Objective, ProblemSpec, Rational, SolveResult};

fn specs() -> Vec<ProblemSpec> {
    let mut out: Vec<ProblemSpec> = ["max-cut", "min-cut", "max-vc", "min-vc", "densest", "sparsest"]
        .iter()
        .map(|n| ProblemSpec::builtin(n).unwrap())
        .collect();
    out.push(ProblemSpec::new(rat(3, 2), rat(1, 1), Objective::Max));
    out.push(ProblemSpec::new(rat(1, 1), rat(5, 3), Objective::Min));
    out
}

/// Every distinct attainable value plus one beyond each end.
fn thresholds(g: &Graph, spec: &ProblemSpec, k: usize) -> Vec<Rational> {
    let mut vals: BTreeSet<Rational> = combinations(g.n(), k)
        .map(|s| val(g, spec, &s).unwrap())
        .collect();
    let lo = *vals.iter().next().unwrap();
    let hi = *vals.iter().next_back().unwrap();
    vals.insert(lo - rat(1, 1));
    vals.insert(hi + rat(1, 1));
    vals.into_iter().collect()
}

fn is_cut_row(spec: &ProblemSpec) -> bool {
    spec.alpha1 == rat(0, 1) && spec.alpha2 == rat(1, 1) && spec.objective == Objective::Max
}

#[test]
fn grid_matches_oracle_and_decisions_are_monotone() {
    let cfg = SolverConfig {
        us_mode: UsMode::Exhaustive,
        ..Default::default()
    };
    let mut cells = 0u64;
    for n in 1..=5 {
        for g in nonisomorphic_graphs(n) {
            let graph = Arc::new(g);
            for spec in specs() {
                let cls = spec.classify();
                for k in 0..=n {
                    let mut prev: Option<bool> = None;
                    for p in thresholds(&graph, &spec, k) {
                        cells += 1;
                        let inst = FgppInstance::new(Arc::clone(&graph), k, p);
                        let oracle = brute_force(&inst, &spec, 1 << 30).unwrap();
                        let (routed, _) = auto_solve(&inst, &spec, &cfg).unwrap();
                        assert_eq!(
                            routed.decision, oracle.decision,
                            "auto route disagrees with oracle: n={n} k={k} p={p} spec={}/{}",
                            spec.alpha1, spec.alpha2
                        );
                        if routed.decision {
                            let w = routed.witness.as_ref().unwrap();
                            assert!(
                                SolveResult::verify_witness(&graph, &spec, k, p, w).unwrap(),
                                "witness fails re-verification"
                            );
                        }
                        let general = fgpp_alg(&inst, &spec, &cfg).unwrap();
                        assert_eq!(general.decision, oracle.decision, "general route disagrees");
                        if cls.degrading {
                            assert_eq!(deg_alg(&inst, &spec).decision, oracle.decision);
                        }
                        if cls.positive_min {
                            assert_eq!(
                                p_alg(&inst, &spec, &cfg).unwrap().decision,
                                oracle.decision
                            );
                        }
                        if cls.non_degrading_positive_min && spec.alpha1 > rat(0, 1) {
                            assert_eq!(
                                fast_p_alg(&inst, &spec, &cfg).unwrap().decision,
                                oracle.decision
                            );
                        }
                        if is_cut_row(&spec) {
                            let here = max_cut_alg(&inst, &cfg).unwrap();
                            assert_eq!(here.decision, oracle.decision);
                            let flipped = FgppInstance::new(Arc::clone(&graph), n - k, p);
                            let mirror = max_cut_alg(&flipped, &cfg).unwrap();
                            assert_eq!(
                                here.decision, mirror.decision,
                                "complement symmetry broken: n={n} k={k} p={p}"
                            );
                        }
                        // thresholds ascend, so max decisions may only fall
                        // and min decisions may only rise
                        if let Some(prev) = prev {
                            match spec.objective {
                                Objective::Max => assert!(prev || !routed.decision),
                                Objective::Min => assert!(!prev || routed.decision),
                            }
                        }
                        prev = Some(routed.decision);
                    }
                }
            }
        }
    }
    assert!(cells > 5_000, "sweep unexpectedly small: {cells}");
}
