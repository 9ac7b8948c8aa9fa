//! Enumeration of connected vertex sets and the reduction to weighted
//! exact cover.
//!
//! For merge-safe parameter rows (where joining disjoint pieces never hurts
//! the objective), a size-k solution can be assembled from pairwise
//! disjoint connected sets. Enumerating every connected set of size up to k
//! and weighing it by its own objective value therefore turns the
//! partitioning problem into a weighted exact cover over the vertex set.

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::problem::{val, ProblemSpec, Rational};
use crate::wec::WecInstance;
use std::collections::BTreeSet;

/// Connected vertex sets grouped by size; `size_class(i)` lists the size-i
/// sets in lexicographic order.
#[derive(Clone, Debug)]
pub struct ConnectedFamilies {
    pub n: usize,
    pub max_degree: usize,
    per_size: Vec<Vec<Vec<usize>>>,
}

impl ConnectedFamilies {
    /// Size classes run from 1 to this value.
    pub fn max_size(&self) -> usize {
        self.per_size.len()
    }

    pub fn size_class(&self, i: usize) -> &[Vec<usize>] {
        assert!(i >= 1 && i <= self.per_size.len(), "size class out of range");
        &self.per_size[i - 1]
    }

    pub fn total(&self) -> usize {
        self.per_size.iter().map(Vec::len).sum()
    }

    /// Upper bound 4^i * (max_degree - 1)^i * n on the number of size-i
    /// connected sets; only meaningful when the degree is at least 2.
    pub fn count_bound(n: usize, max_degree: usize, i: usize) -> Option<u128> {
        if max_degree < 2 {
            return None;
        }
        let four = 4u128.checked_pow(i as u32)?;
        let deg = (max_degree as u128 - 1).checked_pow(i as u32)?;
        four.checked_mul(deg)?.checked_mul(n as u128)
    }
}

/// Enumerates all connected vertex sets of size 1..=k by growing each set
/// one neighbor at a time, deduplicating per size.
pub fn enumerate_connected(graph: &Graph, k: usize, max_work: u64) -> Result<ConnectedFamilies> {
    let n = graph.n();
    let limit = k.min(n);
    let mut per_size: Vec<Vec<Vec<usize>>> = Vec::with_capacity(limit);
    let mut work: u64 = 0;
    let mut current: BTreeSet<BitSet> = (0..n)
        .map(|v| BitSet::from_indices(n, &[v]))
        .collect();
    for size in 1..=limit {
        check_count_bound(n, graph.max_degree(), size, current.len());
        let mut sorted: Vec<Vec<usize>> = current.iter().map(BitSet::indices).collect();
        sorted.sort();
        per_size.push(sorted);
        if size == limit {
            break;
        }
        let mut next: BTreeSet<BitSet> = BTreeSet::new();
        for set in &current {
            for v in set.indices() {
                for &u in graph.neighbors(v) {
                    work += 1;
                    if work > max_work {
                        return Err(Error::Resource(format!(
                            "connected-set enumeration exceeded {max_work} steps at size {size}"
                        )));
                    }
                    if !set.contains(u) {
                        let mut grown = set.clone();
                        grown.insert(u);
                        next.insert(grown);
                    }
                }
            }
        }
        current = next;
    }
    Ok(ConnectedFamilies {
        n,
        max_degree: graph.max_degree(),
        per_size,
    })
}

fn check_count_bound(n: usize, max_degree: usize, size: usize, count: usize) {
    if let Some(bound) = ConnectedFamilies::count_bound(n, max_degree, size) {
        assert!(
            (count as u128) <= bound,
            "size-{size} connected sets: {count} exceeds bound {bound}"
        );
    }
}

/// Builds the weighted exact-cover instance whose solutions are exactly the
/// merge-safe partitioning solutions: universe = vertices, family = all
/// connected sets of size 1..=k weighted by their own objective value, same
/// k and threshold.
///
/// Only valid for merge-safe parameter rows; calling it otherwise is a
/// caller bug.
pub fn reduce_to_wec(
    graph: &Graph,
    spec: &ProblemSpec,
    k: usize,
    p: Rational,
    max_work: u64,
) -> Result<WecInstance> {
    assert!(
        spec.merge_safe(),
        "cover reduction requires a merge-safe parameter row"
    );
    let families = enumerate_connected(graph, k, max_work)?;
    let mut members = Vec::with_capacity(families.total());
    for size in 1..=families.max_size() {
        for set in families.size_class(size) {
            let w = val(graph, spec, set).expect("enumerated sets are valid");
            members.push((set.clone(), w));
        }
    }
    WecInstance::new(graph.n(), members, k, p, spec.objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::rat;

    const CAP: u64 = 1 << 24;

    #[test]
    fn path_has_contiguous_windows() {
        let g = crate::graph::path(5);
        let fam = enumerate_connected(&g, 3, CAP).unwrap();
        assert_eq!(fam.size_class(1).len(), 5);
        assert_eq!(
            fam.size_class(2),
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4]]
        );
        assert_eq!(
            fam.size_class(3),
            &[vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4]]
        );
    }

    #[test]
    fn star_counts_center_sets() {
        let g = crate::graph::star(5); // center 0, leaves 1..4
        let fam = enumerate_connected(&g, 3, CAP).unwrap();
        assert_eq!(fam.size_class(2).len(), 4);
        assert!(fam.size_class(2).iter().all(|s| s[0] == 0));
        assert_eq!(fam.size_class(3).len(), 6); // {0} plus any two leaves
    }

    #[test]
    fn size_cap_clamps_to_vertex_count() {
        let g = crate::graph::complete(3);
        let fam = enumerate_connected(&g, 10, CAP).unwrap();
        assert_eq!(fam.max_size(), 3);
        assert_eq!(fam.size_class(3), &[vec![0, 1, 2]]);
    }

    #[test]
    fn counts_respect_the_degree_bound() {
        for g in [crate::graph::complete(6), crate::graph::cycle(7).unwrap(), crate::graph::star(6)] {
            let fam = enumerate_connected(&g, 4, CAP).unwrap();
            for i in 1..=fam.max_size() {
                if let Some(bound) = ConnectedFamilies::count_bound(g.n(), g.max_degree(), i) {
                    assert!((fam.size_class(i).len() as u128) <= bound);
                }
            }
        }
    }

    #[test]
    fn enumeration_respects_work_cap() {
        let g = crate::graph::complete(8);
        assert!(matches!(
            enumerate_connected(&g, 8, 10),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn triangle_density_reduction() {
        let g = crate::graph::complete(3);
        let spec = ProblemSpec::builtin("densest").unwrap();
        let inst = reduce_to_wec(&g, &spec, 2, rat(1, 1), CAP).unwrap();
        assert_eq!(inst.universe, 3);
        assert_eq!(inst.k, 2);
        let singles: Vec<_> = inst.family.iter().filter(|(s, _)| s.len() == 1).collect();
        let pairs: Vec<_> = inst.family.iter().filter(|(s, _)| s.len() == 2).collect();
        assert_eq!(singles.len(), 3);
        assert!(singles.iter().all(|(_, w)| *w == rat(0, 1)));
        assert_eq!(pairs.len(), 3);
        assert!(pairs.iter().all(|(_, w)| *w == rat(1, 1)));
    }

    #[test]
    fn path_cover_reduction_weights() {
        let g = crate::graph::path(3);
        let spec = ProblemSpec::builtin("min-vc").unwrap();
        let inst = reduce_to_wec(&g, &spec, 2, rat(2, 1), CAP).unwrap();
        let singleton_weights: Vec<Rational> = inst
            .family
            .iter()
            .filter(|(s, _)| s.len() == 1)
            .map(|(_, w)| *w)
            .collect();
        // singleton value is its degree here: alpha1*0 + alpha2*deg
        assert_eq!(singleton_weights, vec![rat(1, 1), rat(2, 1), rat(1, 1)]);
        let pairs: Vec<_> = inst.family.iter().filter(|(s, _)| s.len() == 2).collect();
        assert_eq!(pairs.len(), 2); // {0,1} and {1,2}; {0,2} is disconnected
        assert!(pairs.iter().all(|(_, w)| *w == rat(2, 1)));
    }

    #[test]
    fn zero_budget_reduction_is_empty() {
        let g = crate::graph::path(3);
        let spec = ProblemSpec::builtin("min-vc").unwrap();
        let inst = reduce_to_wec(&g, &spec, 0, rat(0, 1), CAP).unwrap();
        assert!(inst.family.is_empty());
        assert_eq!(inst.k, 0);
    }

    #[test]
    #[should_panic(expected = "merge-safe")]
    fn reduction_rejects_non_merge_safe_rows() {
        let g = crate::graph::path(3);
        let spec = ProblemSpec::builtin("max-cut").unwrap();
        let _ = reduce_to_wec(&g, &spec, 2, rat(1, 1), CAP);
    }
}
