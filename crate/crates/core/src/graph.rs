//! Simple undirected graph with a line-oriented text format and seeded
//! generators.
//!
//! Text format, one record per line:
//!
//! ```text
//! p <n> <m>
//! e <u> <v>
//! ```
//!
//! exactly `m` edge lines, `0 <= u, v < n`, `u != v`, no duplicate edges.
//! Lines starting with `#` and blank lines are ignored. Rendering emits the
//! canonical form: header first, then edges sorted ascending.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::Rational;

/// Undirected simple graph over vertices `0..n`.
///
/// Edges are stored normalized (`u < v`) and sorted; the position of an edge
/// in `edges()` is its stable edge index, used by edge colorings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph, validating range, loops and duplicates.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        let mut seen = HashSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::Input(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            norm.push(e);
        }
        norm.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph {
            n,
            edges: norm,
            adj,
            max_degree,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Normalized, sorted edge list; the index of an edge here is its edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.adj[v].is_empty()).collect()
    }

    /// Subgraph induced by `keep` (sorted, deduplicated internally), together
    /// with the map from new vertex ids back to the original ids.
    pub fn induced_subgraph(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut old_ids: Vec<usize> = keep.to_vec();
        old_ids.sort_unstable();
        old_ids.dedup();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
            .map(|&(u, v)| (new_id[u], new_id[v]))
            .collect();
        let g = Graph::new(old_ids.len(), edges).expect("induced subgraph is valid");
        (g, old_ids)
    }

    /// Parses the text format. Errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = s.split_whitespace().collect();
            match header {
                None => {
                    if fields.len() != 3 || fields[0] != "p" {
                        return Err(Error::Parse {
                            line,
                            msg: format!("expected header `p <n> <m>`, got `{s}`"),
                        });
                    }
                    let n = parse_count(fields[1], line, "n")?;
                    let m = parse_count(fields[2], line, "m")?;
                    header = Some((n, m));
                }
                Some((n, m)) => {
                    if fields.len() != 3 || fields[0] != "e" {
                        return Err(Error::Parse {
                            line,
                            msg: format!("expected edge `e <u> <v>`, got `{s}`"),
                        });
                    }
                    if edges.len() == m {
                        return Err(Error::Parse {
                            line,
                            msg: format!("more than {m} edge lines"),
                        });
                    }
                    let u = parse_count(fields[1], line, "u")?;
                    let v = parse_count(fields[2], line, "v")?;
                    if u >= n || v >= n {
                        return Err(Error::Parse {
                            line,
                            msg: format!("endpoint out of range: ({u}, {v}) with n = {n}"),
                        });
                    }
                    if u == v {
                        return Err(Error::Parse {
                            line,
                            msg: format!("self-loop at vertex {u}"),
                        });
                    }
                    if !seen.insert((u.min(v), u.max(v))) {
                        return Err(Error::Parse {
                            line,
                            msg: format!("duplicate edge ({u}, {v})"),
                        });
                    }
                    edges.push((u, v));
                }
            }
        }
        let last = text.lines().count();
        match header {
            None => Err(Error::Parse {
                line: last,
                msg: "missing header line".into(),
            }),
            Some((n, m)) => {
                if edges.len() != m {
                    return Err(Error::Parse {
                        line: last,
                        msg: format!("declared {m} edges, found {}", edges.len()),
                    });
                }
                Graph::new(n, edges)
            }
        }
    }

    /// Canonical rendering: identical graphs produce identical bytes.
    pub fn to_text(&self) -> String {
        let mut out = format!("p {} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }
}

fn parse_count(s: &str, line: usize, what: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what}: `{s}`"),
    })
}

// ---------------------------------------------------------------------------
// Deterministic generators
// ---------------------------------------------------------------------------

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (v - 1, v)).collect()).expect("path is valid")
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Input(format!("cycle needs n >= 3, got {n}")));
    }
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((0, n - 1));
    Graph::new(n, edges)
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::new(n, edges).expect("complete graph is valid")
}

/// Star with center 0 and `n - 1` leaves.
pub fn star(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (0, v)).collect()).expect("star is valid")
}

/// G(n, prob) with exact rational edge probability; identical seeds give
/// identical graphs. Pairs are scanned in ascending `(u, v)` order.
pub fn gnp(n: usize, prob: Rational, seed: u64) -> Result<Graph> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if prob < zero || prob > one {
        return Err(Error::Input(format!("edge probability {prob} not in [0, 1]")));
    }
    let num = *prob.numer() as u64;
    let den = *prob.denom() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_range(0..den) < num {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Random graph with all degrees at most `degree`, close to regular when the
/// stub pairing cooperates. Deterministic per seed.
pub fn regular_ish(n: usize, degree: usize, seed: u64) -> Result<Graph> {
    if degree >= n && n > 0 {
        return Err(Error::Input(format!(
            "degree {degree} too large for n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(degree)).collect();
    // Fisher-Yates with the seeded generator.
    for i in (1..stubs.len()).rev() {
        let j = rng.gen_range(0..=i);
        stubs.swap(i, j);
    }
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for pair in stubs.chunks(2) {
        if let [u, v] = *pair {
            if u != v && seen.insert((u.min(v), u.max(v))) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::rat;

    #[test]
    fn parse_path() {
        let g = Graph::parse("p 3 2\ne 0 1\ne 1 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn parse_ignores_comments_and_blanks() {
        let g = Graph::parse("# header next\n\np 2 1\n# edge next\ne 1 0\n\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn parse_rejects_self_loop() {
        let err = Graph::parse("p 2 1\ne 0 0\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_duplicate_even_reversed() {
        assert!(Graph::parse("p 3 2\ne 0 1\ne 1 0\n").is_err());
    }

    #[test]
    fn parse_rejects_out_of_range() {
        assert!(Graph::parse("p 3 1\ne 0 5\n").is_err());
    }

    #[test]
    fn parse_rejects_bad_counts() {
        assert!(Graph::parse("p 3 2\ne 0 1\n").is_err());
        assert!(Graph::parse("p 3 1\ne 0 1\ne 1 2\n").is_err());
        assert!(Graph::parse("e 0 1\n").is_err());
        assert!(Graph::parse("").is_err());
    }

    #[test]
    fn roundtrip_is_canonical() {
        let g = Graph::parse("p 4 3\ne 2 3\ne 0 1\ne 3 1\n").unwrap();
        let text = g.to_text();
        assert_eq!(text, "p 4 3\ne 0 1\ne 1 3\ne 2 3\n");
        assert_eq!(Graph::parse(&text).unwrap(), g);
    }

    #[test]
    fn empty_graph_allowed() {
        let g = Graph::parse("p 0 0\n").unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn induced_subgraph_maps_back() {
        let g = path(5);
        let (h, old) = g.induced_subgraph(&[1, 2, 4]);
        assert_eq!(h.n(), 3);
        assert_eq!(h.edges(), &[(0, 1)]);
        assert_eq!(old, vec![1, 2, 4]);
    }

    #[test]
    fn generator_shapes() {
        assert_eq!(path(4).m(), 3);
        assert_eq!(cycle(4).unwrap().m(), 4);
        assert!(cycle(2).is_err());
        assert_eq!(complete(4).m(), 6);
        let s = star(5);
        assert_eq!(s.degree(0), 4);
        assert_eq!(s.m(), 4);
        assert_eq!(path(0).n(), 0);
    }

    #[test]
    fn gnp_is_deterministic_and_respects_extremes() {
        let a = gnp(8, rat(1, 2), 7).unwrap();
        let b = gnp(8, rat(1, 2), 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gnp(8, rat(1, 2), 8).unwrap());
        assert_eq!(gnp(6, rat(0, 1), 3).unwrap().m(), 0);
        assert_eq!(gnp(6, rat(1, 1), 3).unwrap().m(), 15);
        assert!(gnp(4, rat(3, 2), 0).is_err());
    }

    #[test]
    fn regular_ish_degree_bound() {
        let g = regular_ish(10, 3, 5).unwrap();
        assert!((0..10).all(|v| g.degree(v) <= 3));
        assert_eq!(g, regular_ish(10, 3, 5).unwrap());
        assert!(regular_ish(4, 5, 0).is_err());
    }
}
