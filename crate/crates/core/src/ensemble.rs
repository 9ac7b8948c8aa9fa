//! Exhaustive graph ensembles for verification: all labeled graphs on a few
//! vertices, one representative per isomorphism class, and relabelings.

use std::collections::HashSet;

use crate::graph::Graph;

fn pair_index(u: usize, v: usize, n: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if mask >> pair_index(u, v, n) & 1 == 1 {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("mask graph is valid")
}

/// All permutations of `0..n` (Heap's algorithm, deterministic order).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// Applies `perm` to vertex ids: vertex `v` becomes `perm[v]`.
pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    Graph::new(g.n(), edges).expect("relabeling is valid")
}

/// Every labeled graph on `n` vertices. Exponential in `n^2`; capped at
/// `n <= 6` (32768 graphs).
pub fn labeled_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "labeled enumeration capped at n = 6");
    let bits = n * (n - 1) / 2;
    (0u32..1 << bits).map(|mask| graph_from_mask(n, mask)).collect()
}

/// One representative per isomorphism class on `n` vertices, in a
/// deterministic order (minimal edge mask first).
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    assert!(n >= 1 && n <= 6, "isomorphism enumeration capped at n = 6");
    let bits = n * (n - 1) / 2;
    let perms = permutations(n);
    // Precompute the pair remap for every permutation.
    let tables: Vec<Vec<usize>> = perms
        .iter()
        .map(|perm| {
            let mut table = vec![0; bits];
            for u in 0..n {
                for v in u + 1..n {
                    let (pu, pv) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                    table[pair_index(u, v, n)] = pair_index(pu, pv, n);
                }
            }
            table
        })
        .collect();
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for mask in 0u32..1 << bits {
        let mut canon = mask;
        for table in &tables {
            let mut remapped = 0u32;
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                remapped |= 1 << table[i];
                rest &= rest - 1;
            }
            canon = canon.min(remapped);
        }
        if canon == mask && seen.insert(mask) {
            reps.push(graph_from_mask(n, mask));
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeled_counts() {
        assert_eq!(labeled_graphs(1).len(), 1);
        assert_eq!(labeled_graphs(3).len(), 8);
        assert_eq!(labeled_graphs(4).len(), 64);
    }

    #[test]
    fn isomorphism_class_counts() {
        // Known numbers of graphs on 1..=6 unlabeled vertices.
        assert_eq!(nonisomorphic_graphs(1).len(), 1);
        assert_eq!(nonisomorphic_graphs(2).len(), 2);
        assert_eq!(nonisomorphic_graphs(3).len(), 4);
        assert_eq!(nonisomorphic_graphs(4).len(), 11);
        assert_eq!(nonisomorphic_graphs(5).len(), 34);
    }

    #[test]
    fn permutations_count_and_distinct() {
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        let unique: HashSet<_> = perms.iter().collect();
        assert_eq!(unique.len(), 24);
    }

    #[test]
    fn relabel_preserves_degree_multiset() {
        let g = crate::graph::star(5);
        let perm = vec![4, 3, 2, 1, 0];
        let h = relabel(&g, &perm);
        let mut dg: Vec<usize> = (0..5).map(|v| g.degree(v)).collect();
        let mut dh: Vec<usize> = (0..5).map(|v| h.degree(v)).collect();
        dg.sort_unstable();
        dh.sort_unstable();
        assert_eq!(dg, dh);
        assert_eq!(h.degree(4), 4);
    }
}
