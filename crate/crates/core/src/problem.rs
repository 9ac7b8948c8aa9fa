//! Problem specifications and the value function.
//!
//! A spec is a pair of exact rational coefficients plus an objective
//! direction. For a vertex set `X` the value is
//! `val(X) = alpha1 * |E(X)| + alpha2 * |E(X, V \ X)|`; a decision instance
//! asks for `|X| = k` with `val(X) >= p` (max) or `val(X) <= p` (min).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Exact rational scalar. Canonical reduced form with positive denominator
/// and total order, provided by `num-rational`.
pub type Rational = num_rational::Rational64;

/// Shorthand constructor. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

/// Parses `a` or `a/b` with nonzero `b`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Input(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        None => {
            let n: i64 = s.trim().parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
        Some((a, b)) => {
            let n: i64 = a.trim().parse().map_err(|_| bad())?;
            let d: i64 = b.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(Error::Input(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Max,
    Min,
}

impl Objective {
    /// Does `value` satisfy threshold `p` in this direction?
    pub fn meets(self, value: Rational, p: Rational) -> bool {
        match self {
            Objective::Max => value >= p,
            Objective::Min => value <= p,
        }
    }

    /// Is `a` strictly better than `b`?
    pub fn better(self, a: Rational, b: Rational) -> bool {
        match self {
            Objective::Max => a > b,
            Objective::Min => a < b,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Max => "max",
            Objective::Min => "min",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Objective> {
        match s {
            "max" => Ok(Objective::Max),
            "min" => Ok(Objective::Min),
            other => Err(Error::Input(format!("unknown objective `{other}`"))),
        }
    }
}

/// Coefficients and direction of one partition problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProblemSpec {
    pub alpha1: Rational,
    pub alpha2: Rational,
    pub objective: Objective,
}

impl ProblemSpec {
    pub fn new(alpha1: Rational, alpha2: Rational, objective: Objective) -> Self {
        ProblemSpec {
            alpha1,
            alpha2,
            objective,
        }
    }

    /// The six named problems.
    pub fn builtin(name: &str) -> Result<ProblemSpec> {
        let spec = |a1: i64, a2: i64, obj| ProblemSpec::new(rat(a1, 1), rat(a2, 1), obj);
        match name {
            "max-cut" => Ok(spec(0, 1, Objective::Max)),
            "min-cut" => Ok(spec(0, 1, Objective::Min)),
            "max-vc" => Ok(spec(1, 1, Objective::Max)),
            "min-vc" => Ok(spec(1, 1, Objective::Min)),
            "densest" => Ok(spec(1, 0, Objective::Max)),
            "sparsest" => Ok(spec(1, 0, Objective::Min)),
            other => Err(Error::Input(format!("unknown problem `{other}`"))),
        }
    }

    pub fn classify(&self) -> Classification {
        classify(self)
    }

    /// True when merging two disjoint sets never moves the value in the
    /// unhelpful direction, i.e. `val(A u B) >= val(A) + val(B)` under max
    /// (and `<=` under min) for disjoint `A`, `B`. This is the soundness
    /// condition for the exact-cover reduction.
    pub fn merge_safe(&self) -> bool {
        let half = self.alpha1 / rat(2, 1);
        match self.objective {
            Objective::Max => half >= self.alpha2,
            Objective::Min => half <= self.alpha2,
        }
    }
}

/// Outcome of spec classification. `degrading` is the dominant label; the
/// two flags mark the minimization subfamilies with dedicated solvers. At
/// the boundary `alpha1 / 2 = alpha2` a min spec is labeled degrading and
/// can still carry the `non_degrading_positive_min` flag: both routes are
/// valid there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub degrading: bool,
    pub positive_min: bool,
    pub non_degrading_positive_min: bool,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        if self.degrading {
            "degrading"
        } else {
            "non-degrading"
        }
    }
}

/// Classifies a spec. Invariant under scaling both coefficients by any
/// positive rational.
pub fn classify(spec: &ProblemSpec) -> Classification {
    let zero = Rational::from_integer(0);
    let half = spec.alpha1 / rat(2, 1);
    let degrading = match spec.objective {
        Objective::Max => half <= spec.alpha2,
        Objective::Min => half >= spec.alpha2,
    };
    let is_min = spec.objective == Objective::Min;
    let positive_min = is_min && spec.alpha1 >= zero && spec.alpha2 > zero;
    let non_degrading_positive_min = is_min && half > zero && spec.alpha2 >= half;
    Classification {
        degrading,
        positive_min,
        non_degrading_positive_min,
    }
}

fn check_set(graph: &Graph, x: &[usize]) -> Result<Vec<bool>> {
    let mut member = vec![false; graph.n()];
    for &v in x {
        if v >= graph.n() {
            return Err(Error::Input(format!(
                "vertex {v} out of range for n = {}",
                graph.n()
            )));
        }
        if member[v] {
            return Err(Error::Input(format!("duplicate vertex {v} in set")));
        }
        member[v] = true;
    }
    Ok(member)
}

/// `val(X) = alpha1 * |E(X)| + alpha2 * |E(X, V \ X)|`.
pub fn val(graph: &Graph, spec: &ProblemSpec, x: &[usize]) -> Result<Rational> {
    let member = check_set(graph, x)?;
    let mut inner: i64 = 0;
    let mut cut: i64 = 0;
    for &(u, v) in graph.edges() {
        match (member[u], member[v]) {
            (true, true) => inner += 1,
            (true, false) | (false, true) => cut += 1,
            _ => {}
        }
    }
    Ok(spec.alpha1 * Rational::from_integer(inner) + spec.alpha2 * Rational::from_integer(cut))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeColor {
    Red,
    Blue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeColor {
    Red,
    Blue,
}

/// Component-wise relaxation of `val` under an edge coloring: the sum of
/// `val(C)` over the connected components `C` of `(X, red edges inside X)`.
/// Overestimates `val(X)` whenever `alpha2 >= alpha1 / 2` and equals it when
/// `X` is connected through red edges.
pub fn val_star(
    graph: &Graph,
    spec: &ProblemSpec,
    colors: &[EdgeColor],
    x: &[usize],
) -> Result<Rational> {
    if colors.len() != graph.m() {
        return Err(Error::Input(format!(
            "edge coloring has {} entries for {} edges",
            colors.len(),
            graph.m()
        )));
    }
    let member = check_set(graph, x)?;
    // Union-find restricted to X over red inner edges.
    let mut parent: Vec<usize> = (0..graph.n()).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        let mut v = v;
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (i, &(u, v)) in graph.edges().iter().enumerate() {
        if colors[i] == EdgeColor::Red && member[u] && member[v] {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    let mut sorted = x.to_vec();
    sorted.sort_unstable();
    for v in sorted {
        let r = find(&mut parent, v);
        by_root.entry(r).or_default().push(v);
    }
    let mut total = Rational::from_integer(0);
    for comp in by_root.values() {
        total += val(graph, spec, comp)?;
    }
    Ok(total)
}

/// One decision instance: a graph, the cardinality `k`, the threshold `p`,
/// and at most one of a node or an edge coloring.
#[derive(Clone, Debug)]
pub struct FgppInstance {
    pub graph: Arc<Graph>,
    pub k: usize,
    pub p: Rational,
    node_colors: Option<Vec<NodeColor>>,
    edge_colors: Option<Vec<EdgeColor>>,
}

impl FgppInstance {
    pub fn new(graph: Arc<Graph>, k: usize, p: Rational) -> Self {
        FgppInstance {
            graph,
            k,
            p,
            node_colors: None,
            edge_colors: None,
        }
    }

    /// Replaces the coloring with a node coloring (at most one kind may be
    /// present, so any edge coloring is an error).
    pub fn with_node_colors(&self, colors: Vec<NodeColor>) -> Result<FgppInstance> {
        if self.edge_colors.is_some() {
            return Err(Error::Input(
                "instance already carries an edge coloring".into(),
            ));
        }
        if colors.len() != self.graph.n() {
            return Err(Error::Input(format!(
                "node coloring has {} entries for {} vertices",
                colors.len(),
                self.graph.n()
            )));
        }
        let mut inst = self.clone();
        inst.node_colors = Some(colors);
        Ok(inst)
    }

    pub fn with_edge_colors(&self, colors: Vec<EdgeColor>) -> Result<FgppInstance> {
        if self.node_colors.is_some() {
            return Err(Error::Input(
                "instance already carries a node coloring".into(),
            ));
        }
        if colors.len() != self.graph.m() {
            return Err(Error::Input(format!(
                "edge coloring has {} entries for {} edges",
                colors.len(),
                self.graph.m()
            )));
        }
        let mut inst = self.clone();
        inst.edge_colors = Some(colors);
        Ok(inst)
    }

    pub fn node_colors(&self) -> Option<&[NodeColor]> {
        self.node_colors.as_deref()
    }

    pub fn edge_colors(&self) -> Option<&[EdgeColor]> {
        self.edge_colors.as_deref()
    }
}
