//! Weighted exact cover with a fixed union size.
//!
//! An instance holds a universe `0..universe`, a weighted family of
//! non-empty subsets, a target union size `k`, and a threshold `p`. A
//! solution is a subfamily of pairwise-disjoint sets whose union has exactly
//! `k` elements and whose total weight meets `p` under the objective.
//!
//! [`solve_wec`] runs a level dynamic program: level `j` stores, for each
//! reachable union of size `j`, the best achievable weight plus a back
//! pointer for witness recovery. Levels may optionally be pruned to
//! representative subfamilies before they are extended, which bounds table
//! width without changing decisions. [`brute_wec`] enumerates subfamilies
//! directly and serves as the reference implementation.

use std::collections::BTreeMap;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::problem::{Objective, Rational};
use crate::repfam::{rep_alg, RepConfig, WeightedFamily};
use crate::result::Stats;

/// A weighted exact-cover instance. The family is kept in a canonical order
/// (by size, then set, then weight); witness indices refer to this order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WecInstance {
    pub universe: usize,
    pub family: Vec<(Vec<usize>, Rational)>,
    pub k: usize,
    pub p: Rational,
    pub objective: Objective,
}

impl WecInstance {
    pub fn new(
        universe: usize,
        family: Vec<(Vec<usize>, Rational)>,
        k: usize,
        p: Rational,
        objective: Objective,
    ) -> Result<WecInstance> {
        let mut canon = Vec::with_capacity(family.len());
        for (set, w) in family {
            let mut s = set;
            s.sort_unstable();
            if s.is_empty() {
                return Err(Error::Input("family contains an empty set".into()));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Input(format!("family set {s:?} has repeated elements")));
            }
            if s.iter().any(|&v| v >= universe) {
                return Err(Error::Input(format!(
                    "family set {s:?} out of range for universe {universe}"
                )));
            }
            canon.push((s, w));
        }
        canon.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
        Ok(WecInstance {
            universe,
            family: canon,
            k,
            p,
            objective,
        })
    }
}

/// Best weight and provenance for one reachable union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub weight: Rational,
    /// Index of the last family set used to reach this union; `None` only
    /// for the empty union at level 0.
    pub back: Option<usize>,
}

/// Level table of the dynamic program: `levels[j]` maps each reachable
/// union of size `j` to its best [`Entry`].
#[derive(Clone, Debug)]
pub struct PartialCoverTable {
    pub levels: Vec<BTreeMap<BitSet, Entry>>,
}

/// Outcome of a cover search. `value` is the best exact-size weight found
/// (even on a rejected instance); `witness` lists family indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WecSolution {
    pub decision: bool,
    pub witness: Option<Vec<usize>>,
    pub value: Option<Rational>,
    pub stats: Stats,
}

/// Builds the level table bottom-up. When `threshold` is set, any level
/// with at least that many entries is pruned to a representative subfamily
/// before it is extended; a pruning failure falls back to the unpruned
/// level and is counted in `stats` under `prune_skipped`.
pub fn build_table(
    inst: &WecInstance,
    rep: &RepConfig,
    threshold: Option<usize>,
    stats: &mut Stats,
) -> PartialCoverTable {
    let masks: Vec<BitSet> = inst
        .family
        .iter()
        .map(|(s, _)| BitSet::from_indices(inst.universe, s))
        .collect();
    let mut levels: Vec<BTreeMap<BitSet, Entry>> = vec![BTreeMap::new(); inst.k + 1];
    levels[0].insert(
        BitSet::new(inst.universe),
        Entry {
            weight: Rational::from_integer(0),
            back: None,
        },
    );
    for j in 0..inst.k {
        if j >= 1 {
            if let Some(t) = threshold {
                if levels[j].len() >= t {
                    match prune_level(&mut levels[j], j, inst, rep) {
                        Ok(()) => stats.add("wec_levels_pruned", 1),
                        Err(_) => stats.add("prune_skipped", 1),
                    }
                }
            }
        }
        let (done, todo) = levels.split_at_mut(j + 1);
        let source = &done[j];
        for (union, entry) in source {
            for (idx, (set, w)) in inst.family.iter().enumerate() {
                let len = set.len();
                if len > inst.k - j || !union.is_disjoint(&masks[idx]) {
                    continue;
                }
                let mut next = union.clone();
                next.union_with(&masks[idx]);
                let cand = entry.weight + *w;
                let dest = &mut todo[len - 1];
                match dest.get(&next) {
                    Some(cur) if !inst.objective.better(cand, cur.weight) => {}
                    _ => {
                        dest.insert(
                            next,
                            Entry {
                                weight: cand,
                                back: Some(idx),
                            },
                        );
                    }
                }
            }
        }
    }
    let entries: u64 = levels.iter().map(|l| l.len() as u64).sum();
    stats.set("wec_entries", entries);
    let width = levels.iter().map(|l| l.len() as u64).max().unwrap_or(0);
    stats.set("wec_max_level_width", width);
    PartialCoverTable { levels }
}

/// Replaces a level's unions by a representative subfamily of them,
/// retaining the surviving entries (and their back pointers) in place.
fn prune_level(
    level: &mut BTreeMap<BitSet, Entry>,
    size: usize,
    inst: &WecInstance,
    rep: &RepConfig,
) -> Result<()> {
    let members: Vec<(Vec<usize>, Rational)> = level
        .iter()
        .map(|(u, e)| (u.indices(), e.weight))
        .collect();
    let wf = WeightedFamily::new(inst.universe, size, members)?;
    let kept = rep_alg(&wf, inst.k, inst.objective, rep)?;
    let keep: Vec<BitSet> = kept
        .members
        .iter()
        .map(|(s, _)| BitSet::from_indices(inst.universe, s))
        .collect();
    level.retain(|u, _| keep.contains(u));
    Ok(())
}

/// Decides the instance. Never fails: pruning problems degrade to the
/// exact unpruned table.
pub fn solve_wec(inst: &WecInstance, rep: &RepConfig, threshold: Option<usize>) -> WecSolution {
    let mut stats = Stats::new();
    let table = build_table(inst, rep, threshold, &mut stats);
    let last = &table.levels[inst.k];
    // BTreeMap order makes the tie winner the lexicographically least union.
    let mut best: Option<(&BitSet, &Entry)> = None;
    for (union, entry) in last {
        match best {
            Some((_, b)) if !inst.objective.better(entry.weight, b.weight) => {}
            _ => best = Some((union, entry)),
        }
    }
    let Some((union, entry)) = best else {
        return WecSolution {
            decision: false,
            witness: None,
            value: None,
            stats,
        };
    };
    let value = entry.weight;
    if !inst.objective.meets(value, inst.p) {
        return WecSolution {
            decision: false,
            witness: None,
            value: Some(value),
            stats,
        };
    }
    // Recover the chosen sets by walking back pointers down the levels.
    let mut witness = Vec::new();
    let mut level = inst.k;
    let mut union = union.clone();
    let mut entry = entry.clone();
    while let Some(idx) = entry.back {
        witness.push(idx);
        let (set, _) = &inst.family[idx];
        union.subtract(&BitSet::from_indices(inst.universe, set));
        level -= set.len();
        entry = table.levels[level]
            .get(&union)
            .expect("back pointer chain broken")
            .clone();
    }
    assert_eq!(level, 0, "witness walk must end at the empty union");
    witness.sort_unstable();
    // Re-check the reconstruction against the instance.
    let mut total = Rational::from_integer(0);
    let mut seen = BitSet::new(inst.universe);
    for &idx in &witness {
        let (set, w) = &inst.family[idx];
        let mask = BitSet::from_indices(inst.universe, set);
        assert!(seen.is_disjoint(&mask), "witness sets overlap");
        seen.union_with(&mask);
        total += *w;
    }
    assert_eq!(seen.count(), inst.k, "witness union has wrong size");
    assert_eq!(total, value, "witness weight mismatch");
    WecSolution {
        decision: true,
        witness: Some(witness),
        value: Some(value),
        stats,
    }
}

/// Reference solver: depth-first search over subfamilies. Errors out above
/// `cap` family members (default 20).
pub fn brute_wec(inst: &WecInstance) -> Result<WecSolution> {
    brute_wec_capped(inst, 20)
}

pub fn brute_wec_capped(inst: &WecInstance, cap: usize) -> Result<WecSolution> {
    if inst.family.len() > cap {
        return Err(Error::Resource(format!(
            "family of {} sets exceeds brute-force cap {cap}",
            inst.family.len()
        )));
    }
    let masks: Vec<BitSet> = inst
        .family
        .iter()
        .map(|(s, _)| BitSet::from_indices(inst.universe, s))
        .collect();
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut chosen = Vec::new();
    let mut union = BitSet::new(inst.universe);
    dfs(inst, &masks, 0, 0, Rational::from_integer(0), &mut union, &mut chosen, &mut best);
    let mut stats = Stats::new();
    stats.set("brute_subfamilies", 1 << inst.family.len().min(63));
    match best {
        None => Ok(WecSolution {
            decision: false,
            witness: None,
            value: None,
            stats,
        }),
        Some((value, witness)) => {
            let decision = inst.objective.meets(value, inst.p);
            Ok(WecSolution {
                decision,
                witness: decision.then_some(witness),
                value: Some(value),
                stats,
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    inst: &WecInstance,
    masks: &[BitSet],
    idx: usize,
    covered: usize,
    weight: Rational,
    union: &mut BitSet,
    chosen: &mut Vec<usize>,
    best: &mut Option<(Rational, Vec<usize>)>,
) {
    if covered == inst.k {
        match best {
            Some((w, _)) if !inst.objective.better(weight, *w) => {}
            _ => *best = Some((weight, chosen.clone())),
        }
        return;
    }
    if idx == inst.family.len() {
        return;
    }
    let len = inst.family[idx].0.len();
    if covered + len <= inst.k && union.is_disjoint(&masks[idx]) {
        union.union_with(&masks[idx]);
        chosen.push(idx);
        dfs(
            inst,
            masks,
            idx + 1,
            covered + len,
            weight + inst.family[idx].1,
            union,
            chosen,
            best,
        );
        chosen.pop();
        union.subtract(&masks[idx]);
    }
    dfs(inst, masks, idx + 1, covered, weight, union, chosen, best);
}
