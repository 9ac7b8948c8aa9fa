//! Solver outcome and work counters.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::graph::Graph;
use crate::problem::{val, ProblemSpec, Rational};

/// Deterministic counter map (sorted keys, stable serialization order).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats(BTreeMap<&'static str, u64>);

impl Stats {
    pub fn new() -> Self {
        Stats::default()
    }

    pub fn add(&mut self, key: &'static str, amount: u64) {
        *self.0.entry(key).or_insert(0) += amount;
    }

    pub fn set(&mut self, key: &'static str, value: u64) {
        self.0.insert(key, value);
    }

    pub fn get(&self, key: &str) -> u64 {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: &Stats) {
        for (k, v) in &other.0 {
            *self.0.entry(k).or_insert(0) += v;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, u64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }
}

/// Decision plus optional witness, achieved value and work counters.
///
/// Invariant: an accepting result built through [`SolveResult::accepted`]
/// has a witness of the exact cardinality whose re-computed value meets the
/// threshold; construction panics otherwise, so a buggy solver cannot
/// silently report a bad witness.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub decision: bool,
    pub witness: Option<Vec<usize>>,
    pub value: Option<Rational>,
    pub stats: Stats,
}

impl SolveResult {
    /// Accepting result; re-verifies the witness against the instance.
    pub fn accepted(
        graph: &Graph,
        spec: &ProblemSpec,
        k: usize,
        p: Rational,
        mut witness: Vec<usize>,
        stats: Stats,
    ) -> SolveResult {
        witness.sort_unstable();
        assert_eq!(
            witness.len(),
            k,
            "internal error: witness cardinality {} != k = {k}",
            witness.len()
        );
        let value = val(graph, spec, &witness).expect("internal error: invalid witness set");
        assert!(
            spec.objective.meets(value, p),
            "internal error: witness value {value} fails threshold {p} ({})",
            spec.objective
        );
        SolveResult {
            decision: true,
            witness: Some(witness),
            value: Some(value),
            stats,
        }
    }

    /// Rejecting result; `value` may carry the proven optimum when the
    /// solver computed one.
    pub fn rejected(value: Option<Rational>, stats: Stats) -> SolveResult {
        SolveResult {
            decision: false,
            witness: None,
            value,
            stats,
        }
    }

    /// Standalone witness check, usable on untrusted input.
    pub fn verify_witness(
        graph: &Graph,
        spec: &ProblemSpec,
        k: usize,
        p: Rational,
        witness: &[usize],
    ) -> Result<bool> {
        if witness.len() != k {
            return Ok(false);
        }
        let value = val(graph, spec, witness)?;
        Ok(spec.objective.meets(value, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use crate::problem::{rat, Objective};

    #[test]
    fn stats_accumulate_and_merge() {
        let mut a = Stats::new();
        a.add("colorings", 2);
        a.add("colorings", 3);
        let mut b = Stats::new();
        b.add("colorings", 1);
        b.set("dp_cells", 9);
        a.merge(&b);
        assert_eq!(a.get("colorings"), 6);
        assert_eq!(a.get("dp_cells"), 9);
        assert_eq!(a.get("missing"), 0);
    }

    #[test]
    fn accepted_recomputes_value() {
        let g = graph::complete(3);
        let spec = ProblemSpec::builtin("max-cut").unwrap();
        let r = SolveResult::accepted(&g, &spec, 1, rat(2, 1), vec![1], Stats::new());
        assert!(r.decision);
        assert_eq!(r.value, Some(rat(2, 1)));
        assert_eq!(r.witness, Some(vec![1]));
    }

    #[test]
    #[should_panic(expected = "witness cardinality")]
    fn accepted_panics_on_wrong_size() {
        let g = graph::complete(3);
        let spec = ProblemSpec::builtin("max-cut").unwrap();
        SolveResult::accepted(&g, &spec, 2, rat(0, 1), vec![1], Stats::new());
    }

    #[test]
    #[should_panic(expected = "fails threshold")]
    fn accepted_panics_on_bad_value() {
        let g = graph::complete(3);
        let spec = ProblemSpec::builtin("max-cut").unwrap();
        SolveResult::accepted(&g, &spec, 1, rat(5, 1), vec![1], Stats::new());
    }

    #[test]
    fn verify_witness_paths() {
        let g = graph::path(4);
        let spec = ProblemSpec::new(rat(0, 1), rat(1, 1), Objective::Max);
        assert!(SolveResult::verify_witness(&g, &spec, 2, rat(2, 1), &[0, 2]).unwrap());
        assert!(!SolveResult::verify_witness(&g, &spec, 2, rat(4, 1), &[0, 1]).unwrap());
        assert!(!SolveResult::verify_witness(&g, &spec, 3, rat(0, 1), &[0, 1]).unwrap());
        assert!(SolveResult::verify_witness(&g, &spec, 2, rat(0, 1), &[0, 9]).is_err());
    }
}
