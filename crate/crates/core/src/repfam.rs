//! Weighted representative families.
//!
//! A family `S` of p-element subsets with weights is q-represented by a
//! subfamily `Ŝ` (with q = k - p) when for every `X` in `S` and every set
//! `Y` disjoint from `X` with `|Y| <= q`, some member of `Ŝ` avoids `Y` and
//! weighs no worse than `X`. Pruning a search-table level to a representative
//! subfamily preserves the existence of optimal completions.
//!
//! Construction is randomized: draw colorings of the universe with `k`
//! colors; a member colored injectively "survives" in the cell of its color
//! set, and only the best member per (coloring, cell) is retained. With
//! enough colorings every (X, Y) pair is covered with high probability, and
//! verified mode re-draws until the definitional check passes.

use std::collections::BTreeSet;
use std::collections::HashMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::problem::{rat, Objective, Rational};
use crate::subsets::{choose, combinations, ln_choose};
use crate::wec::WecInstance;

/// Uniform-cardinality weighted set family over universe `0..universe`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedFamily {
    pub universe: usize,
    pub member_size: usize,
    pub members: Vec<(Vec<usize>, Rational)>,
}

impl WeightedFamily {
    /// Validates membership and uniform cardinality; members are stored
    /// sorted by (set, weight) with sets themselves sorted ascending.
    pub fn new(
        universe: usize,
        member_size: usize,
        members: Vec<(Vec<usize>, Rational)>,
    ) -> Result<WeightedFamily> {
        let mut canon = Vec::with_capacity(members.len());
        for (set, w) in members {
            let mut s = set;
            s.sort_unstable();
            if s.len() != member_size {
                return Err(Error::Input(format!(
                    "member {s:?} has size {} in a family of uniform size {member_size}",
                    s.len()
                )));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Input(format!("member {s:?} has repeated elements")));
            }
            if s.iter().any(|&v| v >= universe) {
                return Err(Error::Input(format!(
                    "member {s:?} out of range for universe {universe}"
                )));
            }
            canon.push((s, w));
        }
        canon.sort();
        Ok(WeightedFamily {
            universe,
            member_size,
            members: canon,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepMode {
    /// Return the family unchanged; always valid.
    Identity,
    /// Randomized construction re-drawn until `verify_representative` passes.
    Verified,
    /// Randomized construction sized for failure probability <= error_prob.
    MonteCarlo,
}

#[derive(Clone, Debug)]
pub struct RepConfig {
    pub mode: RepMode,
    pub seed: u64,
    pub error_prob: Rational,
    pub max_work: u64,
}

impl Default for RepConfig {
    fn default() -> Self {
        RepConfig {
            mode: RepMode::Verified,
            seed: 0,
            error_prob: rat(1, 100),
            max_work: 100_000_000,
        }
    }
}

/// Number of random colorings for the separating construction.
fn coloring_rounds(k: usize, family_len: usize, universe: usize, q: usize, eps: f64) -> f64 {
    let ln_pairs = (family_len as f64).ln() + ln_choose(universe, q) + (1.0 / eps).ln();
    ((k as f64).exp() * k as f64 * ln_pairs.max(1.0)).ceil()
}

/// Computes a subfamily representing `family` for completions of size up to
/// `k - member_size`. The output is always a subset of the input.
pub fn rep_alg(
    family: &WeightedFamily,
    k: usize,
    objective: Objective,
    cfg: &RepConfig,
) -> Result<WeightedFamily> {
    let p = family.member_size;
    if p > k {
        return Err(Error::Input(format!(
            "member size {p} exceeds completion budget k = {k}"
        )));
    }
    if family.is_empty() || cfg.mode == RepMode::Identity {
        return Ok(family.clone());
    }
    // q = 0 (and the degenerate p = 0 case) need only one best member: every
    // obligation has Y = empty or X̂ = empty-set disjoint from everything.
    if p == k || p == 0 {
        let mut best = family.members[0].clone();
        for m in &family.members[1..] {
            if objective.better(m.1, best.1) {
                best = m.clone();
            }
        }
        return WeightedFamily::new(family.universe, p, vec![best]);
    }
    if k > 60 {
        return Err(Error::Input(format!(
            "separating construction supports k <= 60, got k = {k}"
        )));
    }
    let q = k - p;
    let eps = cfg.error_prob.to_f64().unwrap_or(0.01).clamp(1e-9, 0.5);
    let rounds_f = coloring_rounds(k, family.len(), family.universe, q, eps);
    let per_round = (family.len() * p + family.len()) as f64;
    if rounds_f * per_round > cfg.max_work as f64 {
        return Err(Error::Resource(format!(
            "separating construction needs ~{:.0} steps (cap {})",
            rounds_f * per_round,
            cfg.max_work
        )));
    }
    let rounds = rounds_f as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let attempts = if cfg.mode == RepMode::Verified { 64 } else { 1 };
    for _ in 0..attempts {
        let kept = separate_once(family, k, objective, rounds, &mut rng);
        let members: Vec<(Vec<usize>, Rational)> = kept
            .into_iter()
            .map(|i| family.members[i].clone())
            .collect();
        let out = WeightedFamily::new(family.universe, p, members)?;
        match cfg.mode {
            RepMode::MonteCarlo => return Ok(out),
            _ => {
                if verify_representative(family, &out, k, objective, cfg.max_work)? {
                    return Ok(out);
                }
            }
        }
    }
    Err(Error::Resource(
        "verified representative construction did not converge".into(),
    ))
}

/// One pass of the separating construction: returns retained member indices.
fn separate_once(
    family: &WeightedFamily,
    k: usize,
    objective: Objective,
    rounds: u64,
    rng: &mut ChaCha8Rng,
) -> BTreeSet<usize> {
    let mut kept: BTreeSet<usize> = BTreeSet::new();
    let mut colors: Vec<u8> = vec![0; family.universe];
    // cell key: bitmask over the k colors hit by an injectively colored member
    let mut best_cell: HashMap<u64, usize> = HashMap::new();
    for _ in 0..rounds {
        for c in colors.iter_mut() {
            *c = rng.gen_range(0..k as u8);
        }
        best_cell.clear();
        'member: for (idx, (set, w)) in family.members.iter().enumerate() {
            let mut mask = 0u64;
            for &v in set {
                let bit = 1u64 << colors[v];
                if mask & bit != 0 {
                    continue 'member;
                }
                mask |= bit;
            }
            match best_cell.entry(mask) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(idx);
                }
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let cur = &family.members[*e.get()];
                    // strict improvement, then lexicographically smaller set
                    if objective.better(*w, cur.1) || (*w == cur.1 && *set < cur.0) {
                        e.insert(idx);
                    }
                }
            }
        }
        kept.extend(best_cell.values());
    }
    kept
}

/// Exhaustive check of the representative-family definition.
///
/// Returns false when `candidate` is not a sub-multiset of `original` or
/// some obligation (X, Y) is uncovered.
pub fn verify_representative(
    original: &WeightedFamily,
    candidate: &WeightedFamily,
    k: usize,
    objective: Objective,
    max_work: u64,
) -> Result<bool> {
    let p = original.member_size;
    if p > k {
        return Err(Error::Input(format!(
            "member size {p} exceeds completion budget k = {k}"
        )));
    }
    if candidate.universe != original.universe || candidate.member_size != p {
        return Err(Error::Input("candidate family shape mismatch".into()));
    }
    // Sub-multiset check.
    let mut counts: HashMap<&(Vec<usize>, Rational), isize> = HashMap::new();
    for m in &original.members {
        *counts.entry(m).or_insert(0) += 1;
    }
    for m in &candidate.members {
        match counts.get_mut(m) {
            Some(c) if *c > 0 => *c -= 1,
            _ => return Ok(false),
        }
    }
    let q = k - p;
    let u = original.universe;
    let rest = u.saturating_sub(p);
    let y_count: f64 = (0..=q.min(rest)).map(|j| choose(rest, j) as f64).sum();
    let work = original.len() as f64 * y_count * (candidate.len().max(1) as f64);
    if work > max_work as f64 {
        return Err(Error::Resource(format!(
            "definitional check needs ~{work:.0} steps (cap {max_work})"
        )));
    }
    // Scan candidates best-weight-first so the first Y-avoiding member
    // decides the obligation.
    let mut order: Vec<usize> = (0..candidate.len()).collect();
    order.sort_by(|&a, &b| {
        let (wa, wb) = (candidate.members[a].1, candidate.members[b].1);
        match objective {
            Objective::Max => wb.cmp(&wa),
            Objective::Min => wa.cmp(&wb),
        }
    });
    let cand_masks: Vec<BitSet> = candidate
        .members
        .iter()
        .map(|(s, _)| BitSet::from_indices(u, s))
        .collect();
    for (x, wx) in &original.members {
        let x_mask = BitSet::from_indices(u, x);
        let outside: Vec<usize> = (0..u).filter(|&v| !x_mask.contains(v)).collect();
        for j in 0..=q.min(outside.len()) {
            for pick in combinations(outside.len(), j) {
                let y: Vec<usize> = pick.iter().map(|&i| outside[i]).collect();
                let y_mask = BitSet::from_indices(u, &y);
                let covered = order.iter().any(|&i| {
                    cand_masks[i].is_disjoint(&y_mask)
                        && objective.meets(candidate.members[i].1, *wx)
                });
                if !covered {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Shrinks a cover instance by replacing each uniform-size class of its
/// family with a representative subfamily. Decisions are preserved; this is
/// an optimization, never required for correctness.
///
/// `threshold`: prune only when the family has at least this many members;
/// `None` means never prune (identity).
pub fn decrease(
    inst: &WecInstance,
    cfg: &RepConfig,
    threshold: Option<usize>,
) -> Result<WecInstance> {
    let prune = match threshold {
        None => false,
        Some(t) => inst.family.len() >= t,
    };
    if !prune || cfg.mode == RepMode::Identity {
        return Ok(inst.clone());
    }
    let mut members = Vec::new();
    for size in 1..=inst.k {
        let class: Vec<(Vec<usize>, Rational)> = inst
            .family
            .iter()
            .filter(|(s, _)| s.len() == size)
            .cloned()
            .collect();
        if class.is_empty() {
            continue;
        }
        let wf = WeightedFamily::new(inst.universe, size, class)?;
        let kept = rep_alg(&wf, inst.k, inst.objective, cfg)?;
        members.extend(kept.members);
    }
    WecInstance::new(inst.universe, members, inst.k, inst.p, inst.objective)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singletons() -> WeightedFamily {
        WeightedFamily::new(
            3,
            1,
            vec![
                (vec![0], rat(3, 1)),
                (vec![1], rat(2, 1)),
                (vec![2], rat(1, 1)),
            ],
        )
        .unwrap()
    }

    fn sub(of: &WeightedFamily, keep: &[usize]) -> WeightedFamily {
        WeightedFamily::new(
            of.universe,
            of.member_size,
            keep.iter().map(|&i| of.members[i].clone()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn family_validation() {
        assert!(WeightedFamily::new(3, 2, vec![(vec![0], rat(1, 1))]).is_err());
        assert!(WeightedFamily::new(3, 2, vec![(vec![0, 0], rat(1, 1))]).is_err());
        assert!(WeightedFamily::new(3, 2, vec![(vec![0, 5], rat(1, 1))]).is_err());
        let wf = WeightedFamily::new(3, 2, vec![(vec![2, 0], rat(1, 1))]).unwrap();
        assert_eq!(wf.members[0].0, vec![0, 2]);
    }

    #[test]
    fn verify_accepts_two_top_singletons() {
        let s = singletons();
        let good = sub(&s, &[0, 1]);
        assert!(verify_representative(&s, &good, 2, Objective::Max, 1 << 20).unwrap());
    }

    #[test]
    fn verify_rejects_single_top_singleton() {
        let s = singletons();
        let bad = sub(&s, &[0]);
        // Y = {0} blocks the only member while {1} in S survives.
        assert!(!verify_representative(&s, &bad, 2, Objective::Max, 1 << 20).unwrap());
    }

    #[test]
    fn verify_reflexive_and_empty() {
        let s = singletons();
        assert!(verify_representative(&s, &s, 2, Objective::Max, 1 << 20).unwrap());
        let empty = WeightedFamily::new(3, 1, vec![]).unwrap();
        assert!(!verify_representative(&s, &empty, 2, Objective::Max, 1 << 20).unwrap());
    }

    #[test]
    fn verify_rejects_foreign_member() {
        let s = singletons();
        let foreign =
            WeightedFamily::new(3, 1, vec![(vec![0], rat(9, 1))]).unwrap();
        assert!(!verify_representative(&s, &foreign, 2, Objective::Max, 1 << 20).unwrap());
    }

    #[test]
    fn rep_alg_identity_and_empty() {
        let s = singletons();
        let cfg = RepConfig {
            mode: RepMode::Identity,
            ..Default::default()
        };
        assert_eq!(rep_alg(&s, 2, Objective::Max, &cfg).unwrap(), s);
        let empty = WeightedFamily::new(5, 2, vec![]).unwrap();
        assert!(rep_alg(&empty, 3, Objective::Max, &RepConfig::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn rep_alg_rejects_oversized_members() {
        let wf = WeightedFamily::new(4, 3, vec![(vec![0, 1, 2], rat(1, 1))]).unwrap();
        assert!(rep_alg(&wf, 2, Objective::Max, &RepConfig::default()).is_err());
    }

    #[test]
    fn rep_alg_budget_zero_keeps_single_best() {
        let wf = WeightedFamily::new(
            4,
            2,
            vec![
                (vec![0, 1], rat(1, 1)),
                (vec![2, 3], rat(5, 1)),
                (vec![0, 2], rat(5, 1)),
            ],
        )
        .unwrap();
        let out = rep_alg(&wf, 2, Objective::Max, &RepConfig::default()).unwrap();
        // ties prefer the lexicographically smallest set
        assert_eq!(out.members, vec![(vec![0, 2], rat(5, 1))]);
        assert!(verify_representative(&wf, &out, 2, Objective::Max, 1 << 20).unwrap());
    }

    #[test]
    fn rep_alg_verified_output_verifies() {
        let s = singletons();
        let out = rep_alg(&s, 2, Objective::Max, &RepConfig::default()).unwrap();
        assert!(out.len() <= s.len());
        assert!(verify_representative(&s, &out, 2, Objective::Max, 1 << 20).unwrap());
        // determinism under a fixed seed
        let again = rep_alg(&s, 2, Objective::Max, &RepConfig::default()).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn rep_alg_verified_on_pair_family() {
        let members: Vec<(Vec<usize>, Rational)> = vec![
            (vec![0, 1], rat(4, 1)),
            (vec![1, 2], rat(2, 1)),
            (vec![2, 3], rat(7, 1)),
            (vec![3, 4], rat(1, 1)),
            (vec![0, 4], rat(3, 1)),
            (vec![1, 4], rat(6, 1)),
        ];
        let wf = WeightedFamily::new(5, 2, members).unwrap();
        for objective in [Objective::Max, Objective::Min] {
            let out = rep_alg(&wf, 3, objective, &RepConfig::default()).unwrap();
            assert!(verify_representative(&wf, &out, 3, objective, 1 << 22).unwrap());
        }
    }

    #[test]
    fn monte_carlo_output_is_subset() {
        let s = singletons();
        let cfg = RepConfig {
            mode: RepMode::MonteCarlo,
            seed: 5,
            ..Default::default()
        };
        let out = rep_alg(&s, 2, Objective::Max, &cfg).unwrap();
        for m in &out.members {
            assert!(s.members.contains(m));
        }
    }

    #[test]
    fn decrease_identity_when_below_threshold() {
        let inst = WecInstance::new(
            3,
            vec![(vec![0], rat(1, 1)), (vec![1, 2], rat(2, 1))],
            3,
            rat(3, 1),
            Objective::Max,
        )
        .unwrap();
        let same = decrease(&inst, &RepConfig::default(), None).unwrap();
        assert_eq!(same.family, inst.family);
        let same2 = decrease(&inst, &RepConfig::default(), Some(10)).unwrap();
        assert_eq!(same2.family, inst.family);
    }

    #[test]
    fn decrease_drops_dominated_duplicate() {
        let inst = WecInstance::new(
            2,
            vec![(vec![0, 1], rat(5, 1)), (vec![0, 1], rat(3, 1))],
            2,
            rat(4, 1),
            Objective::Max,
        )
        .unwrap();
        let out = decrease(&inst, &RepConfig::default(), Some(0)).unwrap();
        assert_eq!(out.family, vec![(vec![0, 1], rat(5, 1))]);
    }
}
