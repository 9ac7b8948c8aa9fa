//! Decision solvers for fixed-cardinality partitioning.
//!
//! Entry points by parameter regime:
//!
//! * [`fgpp_alg`] — the general route: degrading rows go to branch-and-bound
//!   ([`deg_alg`]), all other rows reduce to weighted exact cover.
//! * [`max_cut_alg`] — the (0, 1, max) cut row, with a shortcut accept for
//!   small thresholds, complement recursion, and node colorings otherwise.
//! * [`p_alg`] — minimization rows with alpha1 >= 0 and alpha2 > 0, via
//!   node colorings and a component knapsack ([`solve_ncp`]).
//! * [`fast_p_alg`] — minimization rows with alpha2 >= alpha1/2 > 0, via
//!   edge colorings and the same knapsack over red-edge components
//!   ([`solve_ecp`]).
//! * [`brute_force`] — the subset-scan oracle.
//! * [`auto_solve`] — cost-estimating dispatcher over all of the above.
//!
//! All solvers are deterministic for a fixed seed and configuration: ties
//! break by ascending vertex id, accepted colorings are the lowest-index
//! ones even when running multi-threaded, and every accepting result
//! re-verifies its witness on construction.


use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bits::BitSet;
use crate::enumeration::reduce_to_wec;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::problem::{
    val, val_star, EdgeColor, FgppInstance, NodeColor, Objective, ProblemSpec, Rational,
};
use crate::repfam::{decrease, RepConfig, RepMode};
use crate::result::{SolveResult, Stats};
use crate::separation::{color_edges, color_nodes, mc_family_size, ColoringFamily, UsConfig, UsMode};
use crate::subsets::{choose, combinations};
use crate::wec::solve_wec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Auto,
    Fgpp,
    Deg,
    MaxCut,
    PAlg,
    FastPAlg,
    Oracle,
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "auto" => Algorithm::Auto,
            "fgpp" => Algorithm::Fgpp,
            "deg" => Algorithm::Deg,
            "maxcut" => Algorithm::MaxCut,
            "palg" => Algorithm::PAlg,
            "fastpalg" => Algorithm::FastPAlg,
            "oracle" => Algorithm::Oracle,
            other => return Err(format!("unknown algorithm `{other}`")),
        })
    }
}

/// Rounding rule for fractional coloring strengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
}

impl Rounding {
    fn apply(self, x: Rational) -> Rational {
        match self {
            Rounding::Floor => x.floor(),
            Rounding::Ceil => x.ceil(),
        }
    }
}

/// Shared solver knobs; same defaults as the command line.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub us_mode: UsMode,
    pub seed: u64,
    pub error_prob: Rational,
    pub rounding: Rounding,
    pub decrease_threshold: Option<usize>,
    pub threads: usize,
    pub max_work: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            algorithm: Algorithm::Auto,
            us_mode: UsMode::Verified,
            seed: 0,
            error_prob: crate::problem::rat(1, 100),
            rounding: Rounding::Floor,
            decrease_threshold: None,
            threads: 1,
            max_work: 100_000_000,
        }
    }
}

impl SolverConfig {
    pub fn us_config(&self) -> UsConfig {
        UsConfig {
            mode: self.us_mode,
            seed: self.seed,
            error_prob: self.error_prob,
            max_work: self.max_work,
        }
    }

    pub fn rep_config(&self) -> RepConfig {
        RepConfig {
            mode: match self.us_mode {
                UsMode::MonteCarlo => RepMode::MonteCarlo,
                _ => RepMode::Verified,
            },
            seed: self.seed,
            error_prob: self.error_prob,
            max_work: self.max_work,
        }
    }
}

/// Maximal components used by the knapsack procedures, each with its
/// objective-value summand.
#[derive(Clone, Debug)]
pub struct ComponentList {
    pub components: Vec<(Vec<usize>, Rational)>,
}

/// Knapsack over components: `value(i, j)` is the minimum total summand of
/// a subfamily of the first i components whose sizes add up to exactly j,
/// or `None` when no such subfamily exists.
#[derive(Clone, Debug)]
pub struct DpMatrix {
    pub rows: usize,
    pub cols: usize,
    cells: Vec<Option<Rational>>,
    take: Vec<bool>,
}

impl DpMatrix {
    pub fn value(&self, i: usize, j: usize) -> Option<Rational> {
        self.cells[i * self.cols + j]
    }

    /// Components chosen for the optimal `value(rows-1, j)`, by index.
    pub fn chosen(&self, comps: &ComponentList, mut j: usize) -> Vec<usize> {
        let mut picked = Vec::new();
        for i in (1..self.rows).rev() {
            if self.take[i * self.cols + j] {
                picked.push(i - 1);
                j -= comps.components[i - 1].0.len();
            }
        }
        assert_eq!(j, 0, "knapsack back pointers must account for every unit");
        picked.reverse();
        picked
    }
}

/// Fills the knapsack matrix; ties prefer skipping a component, keeping
/// witnesses deterministic.
pub fn component_dp(comps: &ComponentList, k: usize) -> DpMatrix {
    let rows = comps.components.len() + 1;
    let cols = k + 1;
    let mut cells: Vec<Option<Rational>> = vec![None; rows * cols];
    let mut take = vec![false; rows * cols];
    cells[0] = Some(Rational::zero());
    for i in 1..rows {
        let (set, summand) = &comps.components[i - 1];
        let size = set.len();
        for j in 0..cols {
            let skip = cells[(i - 1) * cols + j];
            let took = if j >= size {
                cells[(i - 1) * cols + (j - size)].map(|w| w + *summand)
            } else {
                None
            };
            let cell = match (skip, took) {
                (Some(s), Some(t)) if t < s => {
                    take[i * cols + j] = true;
                    Some(t)
                }
                (Some(s), _) => Some(s),
                (None, Some(t)) => {
                    take[i * cols + j] = true;
                    Some(t)
                }
                (None, None) => None,
            };
            cells[i * cols + j] = cell;
        }
    }
    DpMatrix {
        rows,
        cols,
        cells,
        take,
    }
}

/// Maximal connected components of the red-vertex-induced subgraph, in
/// ascending order of their smallest vertex, with summand val(C).
pub fn nc_components(graph: &Graph, spec: &ProblemSpec, red: &BitSet) -> ComponentList {
    let mut seen = vec![false; graph.n()];
    let mut components = Vec::new();
    for start in 0..graph.n() {
        if !red.contains(start) || seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &u in graph.neighbors(v) {
                if red.contains(u) && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        let summand = val(graph, spec, &comp).expect("component indices are valid");
        components.push((comp, summand));
    }
    ComponentList { components }
}

/// Components of the graph after deleting blue edges (red-edge components
/// over the whole vertex set, singletons included), with summand val(C).
pub fn ec_components(graph: &Graph, spec: &ProblemSpec, red_edges: &BitSet) -> ComponentList {
    let mut parent: Vec<usize> = (0..graph.n()).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        let mut root = v;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = v;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for (idx, &(u, v)) in graph.edges().iter().enumerate() {
        if red_edges.contains(idx) {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
    }
    let mut grouped: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for v in 0..graph.n() {
        grouped.entry(find(&mut parent, v)).or_default().push(v);
    }
    let components = grouped
        .into_values()
        .map(|comp| {
            let summand = val(graph, spec, &comp).expect("component indices are valid");
            (comp, summand)
        })
        .collect();
    ComponentList { components }
}

fn red_vertex_set(graph: &Graph, colors: &[NodeColor]) -> BitSet {
    let reds: Vec<usize> = (0..graph.n())
        .filter(|&v| colors[v] == NodeColor::Red)
        .collect();
    BitSet::from_indices(graph.n(), &reds)
}

fn red_edge_set(graph: &Graph, colors: &[EdgeColor]) -> BitSet {
    let reds: Vec<usize> = (0..graph.m())
        .filter(|&e| colors[e] == EdgeColor::Red)
        .collect();
    BitSet::from_indices(graph.m(), &reds)
}

/// Cut maximization restricted to one node coloring: the solution must be
/// red and its cut counted toward blue vertices only. Sorts red vertices by
/// blue-neighbor count (ties by id) and takes the top k.
pub fn solve_nc_max_cut(inst: &FgppInstance) -> SolveResult {
    let colors = inst
        .node_colors()
        .expect("solve_nc_max_cut needs node colors");
    let graph = &inst.graph;
    let red = red_vertex_set(graph, colors);
    let spec = ProblemSpec::builtin("max-cut").expect("catalog row");
    let mut stats = Stats::new();
    match nc_max_cut_core(graph, inst.k, inst.p, &red) {
        Some(witness) => SolveResult::accepted(graph, &spec, inst.k, inst.p, witness, stats),
        None => {
            stats.set("colorings_tried", 1);
            SolveResult::rejected(None, stats)
        }
    }
}

fn nc_max_cut_core(graph: &Graph, k: usize, p: Rational, red: &BitSet) -> Option<Vec<usize>> {
    let mut ranked: Vec<(usize, usize)> = Vec::new(); // (blue-neighbor count, id)
    for v in 0..graph.n() {
        if red.contains(v) {
            let blue = graph.neighbors(v).iter().filter(|&&u| !red.contains(u)).count();
            ranked.push((blue, v));
        }
    }
    if ranked.len() < k {
        return None;
    }
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let sum: u64 = ranked[..k].iter().map(|&(b, _)| b as u64).sum();
    if Rational::from_integer(sum as i64) >= p {
        Some(ranked[..k].iter().map(|&(_, v)| v).collect())
    } else {
        None
    }
}

/// Cut-row solver. Strips isolated vertices (zero-contribution padding),
/// accepts outright with a greedy witness when p < min{k, n-k}, recurses on
/// the complement when that is smaller, and otherwise tries node colorings
/// of strength k + p.
pub fn max_cut_alg(inst: &FgppInstance, cfg: &SolverConfig) -> Result<SolveResult> {
    let graph = &inst.graph;
    let (k, p) = (inst.k, inst.p);
    assert!(k <= graph.n(), "budget k = {k} exceeds n = {}", graph.n());
    let spec = ProblemSpec::builtin("max-cut").expect("catalog row");
    let isolated = graph.isolated_vertices();
    if isolated.is_empty() {
        return max_cut_core(graph, &spec, k, p, cfg);
    }
    let keep: Vec<usize> = (0..graph.n()).filter(|v| !isolated.contains(v)).collect();
    let (core, old_ids) = graph.induced_subgraph(&keep);
    let lo = k.saturating_sub(isolated.len());
    let hi = k.min(core.n());
    let mut stats = Stats::new();
    stats.set("isolated_vertices", isolated.len() as u64);
    for j in lo..=hi {
        let sub = max_cut_core(&core, &spec, j, p, cfg)?;
        stats.merge(&sub.stats);
        if sub.decision {
            let mut witness: Vec<usize> = sub
                .witness
                .expect("accepting result carries a witness")
                .into_iter()
                .map(|v| old_ids[v])
                .collect();
            witness.extend(isolated.iter().take(k - j));
            return Ok(SolveResult::accepted(graph, &spec, k, p, witness, stats));
        }
    }
    Ok(SolveResult::rejected(None, stats))
}

fn max_cut_core(
    graph: &Graph,
    spec: &ProblemSpec,
    k: usize,
    p: Rational,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    let n = graph.n();
    let mut stats = Stats::new();
    if k == 0 || k == n {
        // either side of a trivial split has an empty cut
        let witness: Vec<usize> = (0..k).collect();
        return Ok(if p <= Rational::zero() {
            SolveResult::accepted(graph, spec, k, p, witness, stats)
        } else {
            SolveResult::rejected(Some(Rational::zero()), stats)
        });
    }
    let slack = k.min(n - k) as i64;
    if p < Rational::from_integer(slack) {
        stats.set("shortcut_accept", 1);
        let witness = greedy_cut_witness(graph, k, &mut stats);
        return Ok(SolveResult::accepted(graph, spec, k, p, witness, stats));
    }
    if n - k < k {
        stats.set("complement_recursion", 1);
        let sub = max_cut_core(graph, spec, n - k, p, cfg)?;
        stats.merge(&sub.stats);
        return Ok(match sub.witness {
            Some(w) => {
                let inside: Vec<usize> = (0..n).filter(|v| !w.contains(v)).collect();
                SolveResult::accepted(graph, spec, k, p, inside, stats)
            }
            None => SolveResult::rejected(None, stats),
        });
    }
    let q = strength_from(p, k, n, cfg.rounding);
    let colors = color_nodes(n, q, &cfg.us_config())?;
    stats.set("coloring_family_size", colors.len() as u64);
    let found = first_accept(colors.len(), cfg.threads, |idx| {
        let red = red_from_mask(n, &colors, idx);
        nc_max_cut_core(graph, k, p, &red)
    });
    Ok(finish_colored(graph, spec, k, p, found, colors.len(), stats))
}

/// Greedy realization of the small-threshold cut witness: repeatedly add
/// the vertex with the best marginal cut gain. On isolated-free graphs this
/// reaches a cut of at least min{k, n-k}; if that somehow fails, fall back
/// to scanning subsets and raise an alarm counter instead of accepting a
/// weak witness.
pub fn greedy_cut_witness(graph: &Graph, k: usize, stats: &mut Stats) -> Vec<usize> {
    let n = graph.n();
    let mut inside = vec![false; n];
    let mut picked = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(i64, usize)> = None;
        for v in 0..n {
            if inside[v] {
                continue;
            }
            let d_in = graph.neighbors(v).iter().filter(|&&u| inside[u]).count() as i64;
            let gain = graph.degree(v) as i64 - 2 * d_in;
            if best.map_or(true, |(g, _)| gain > g) {
                best = Some((gain, v));
            }
        }
        let (_, v) = best.expect("k <= n leaves a vertex to pick");
        inside[v] = true;
        picked.push(v);
    }
    picked.sort_unstable();
    let target = k.min(n - k) as i64;
    let cut: i64 = graph
        .edges()
        .iter()
        .filter(|&&(u, v)| inside[u] != inside[v])
        .count() as i64;
    if cut >= target {
        return picked;
    }
    stats.set("greedy_fallback_alarm", 1);
    for subset in combinations(n, k) {
        let mut member = vec![false; n];
        subset.iter().for_each(|&v| member[v] = true);
        let cut: i64 = graph
            .edges()
            .iter()
            .filter(|&&(u, v)| member[u] != member[v])
            .count() as i64;
        if cut >= target {
            return subset;
        }
    }
    unreachable!("an isolated-free graph has a k-set cutting at least min(k, n-k) edges");
}

/// Node-coloring minimization solver for rows with alpha1 >= 0, alpha2 > 0.
pub fn p_alg(inst: &FgppInstance, spec: &ProblemSpec, cfg: &SolverConfig) -> Result<SolveResult> {
    let cls = spec.classify();
    assert!(
        cls.positive_min,
        "p_alg requires a minimization row with alpha1 >= 0 and alpha2 > 0"
    );
    let graph = &inst.graph;
    let (k, p) = (inst.k, inst.p);
    assert!(k <= graph.n(), "budget k = {k} exceeds n = {}", graph.n());
    let mut stats = Stats::new();
    if p.is_negative() {
        // values are nonnegative sums here, so no set can reach p
        return Ok(SolveResult::rejected(None, stats));
    }
    if k == 0 || k == graph.n() {
        return Ok(decide_directly(graph, spec, k, p, stats));
    }
    let q = strength_from(p / spec.alpha2, k, graph.n(), cfg.rounding);
    let colors = color_nodes(graph.n(), q, &cfg.us_config())?;
    stats.set("coloring_family_size", colors.len() as u64);
    let found = first_accept(colors.len(), cfg.threads, |idx| {
        let red = red_from_mask(graph.n(), &colors, idx);
        ncp_core(graph, spec, k, p, &red)
    });
    Ok(finish_colored(graph, spec, k, p, found, colors.len(), stats))
}

/// Minimization restricted to one node coloring: the solution must be a
/// union of maximal red components (so its outside neighborhood is all
/// blue), found by a knapsack over component sizes.
pub fn solve_ncp(inst: &FgppInstance, spec: &ProblemSpec) -> SolveResult {
    let colors = inst.node_colors().expect("solve_ncp needs node colors");
    let graph = &inst.graph;
    let red = red_vertex_set(graph, colors);
    let comps = nc_components(graph, spec, &red);
    let mut stats = Stats::new();
    stats.set("components", comps.components.len() as u64);
    match ncp_core(graph, spec, inst.k, inst.p, &red) {
        Some(witness) => SolveResult::accepted(graph, spec, inst.k, inst.p, witness, stats),
        None => {
            let dp = component_dp(&comps, inst.k);
            SolveResult::rejected(dp.value(dp.rows - 1, inst.k), stats)
        }
    }
}

fn ncp_core(
    graph: &Graph,
    spec: &ProblemSpec,
    k: usize,
    p: Rational,
    red: &BitSet,
) -> Option<Vec<usize>> {
    let comps = nc_components(graph, spec, red);
    knapsack_witness(&comps, k, p)
}

fn knapsack_witness(comps: &ComponentList, k: usize, p: Rational) -> Option<Vec<usize>> {
    let dp = component_dp(comps, k);
    let best = dp.value(dp.rows - 1, k)?;
    if best > p {
        return None;
    }
    let mut witness = Vec::new();
    for i in dp.chosen(comps, k) {
        witness.extend_from_slice(&comps.components[i].0);
    }
    witness.sort_unstable();
    Some(witness)
}

/// Strength for edge colorings: floor of
/// x = max{p/a2, min{p/a1, p/a2 + (1 - a1/a2) * k}}, computed exactly.
pub fn edge_color_strength(spec: &ProblemSpec, k: usize, p: Rational) -> Rational {
    let a1 = spec.alpha1;
    let a2 = spec.alpha2;
    assert!(a1 > Rational::zero() && a2 > Rational::zero());
    let budgeted = p / a2 + (Rational::from_integer(1) - a1 / a2) * Rational::from_integer(k as i64);
    (p / a2).max((p / a1).min(budgeted))
}

/// Edge-coloring minimization solver for rows with alpha2 >= alpha1/2 > 0.
pub fn fast_p_alg(
    inst: &FgppInstance,
    spec: &ProblemSpec,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    let cls = spec.classify();
    assert!(
        cls.non_degrading_positive_min && spec.alpha1 > Rational::zero(),
        "fast_p_alg requires a minimization row with alpha2 >= alpha1/2 > 0"
    );
    let graph = &inst.graph;
    let (k, p) = (inst.k, inst.p);
    assert!(k <= graph.n(), "budget k = {k} exceeds n = {}", graph.n());
    let mut stats = Stats::new();
    if p.is_negative() {
        return Ok(SolveResult::rejected(None, stats));
    }
    if k == 0 || k == graph.n() {
        return Ok(decide_directly(graph, spec, k, p, stats));
    }
    let x = edge_color_strength(spec, k, p);
    let t = rational_to_clamped(cfg.rounding.apply(x), graph.m());
    let colors = color_edges(graph.m(), t, &cfg.us_config())?;
    stats.set("coloring_family_size", colors.len() as u64);
    let found = first_accept(colors.len(), cfg.threads, |idx| {
        let red = red_from_mask(graph.m(), &colors, idx);
        ecp_core(graph, spec, k, p, &red)
    });
    match found {
        Some((idx, witness)) => {
            stats.set("colorings_tried", idx as u64 + 1);
            // soundness here rests on the merged-value bound, not plain val
            let red: Vec<usize> = red_from_mask(graph.m(), &colors, idx).indices();
            let colors_vec = edge_colors_from(graph.m(), &red);
            let merged =
                val_star(graph, spec, &colors_vec, &witness).expect("witness indices are valid");
            assert!(
                spec.objective.meets(merged, p),
                "internal error: merged witness value {merged} fails threshold {p}"
            );
            Ok(SolveResult::accepted(graph, spec, k, p, witness, stats))
        }
        None => {
            stats.set("colorings_tried", colors.len() as u64);
            Ok(SolveResult::rejected(None, stats))
        }
    }
}

/// Minimization restricted to one edge coloring: the solution must be a
/// union of red-edge components with merged value (val*) within p.
pub fn solve_ecp(inst: &FgppInstance, spec: &ProblemSpec) -> SolveResult {
    let colors = inst.edge_colors().expect("solve_ecp needs edge colors");
    let graph = &inst.graph;
    let red = red_edge_set(graph, colors);
    let comps = ec_components(graph, spec, &red);
    let mut stats = Stats::new();
    stats.set("components", comps.components.len() as u64);
    match knapsack_witness(&comps, inst.k, inst.p) {
        Some(witness) => {
            let merged = val_star(graph, spec, colors, &witness).expect("witness is valid");
            assert!(
                spec.objective.meets(merged, inst.p),
                "internal error: merged witness value {merged} fails threshold {}",
                inst.p
            );
            SolveResult {
                decision: true,
                witness: Some(witness),
                value: Some(merged),
                stats,
            }
        }
        None => {
            let dp = component_dp(&comps, inst.k);
            SolveResult::rejected(dp.value(dp.rows - 1, inst.k), stats)
        }
    }
}

fn ecp_core(
    graph: &Graph,
    spec: &ProblemSpec,
    k: usize,
    p: Rational,
    red_edges: &BitSet,
) -> Option<Vec<usize>> {
    let comps = ec_components(graph, spec, red_edges);
    knapsack_witness(&comps, k, p)
}

fn edge_colors_from(m: usize, red: &[usize]) -> Vec<EdgeColor> {
    let mut colors = vec![EdgeColor::Blue; m];
    red.iter().for_each(|&e| colors[e] = EdgeColor::Red);
    colors
}

/// Branch-and-bound for degrading rows: vertices ordered by their
/// admissible per-vertex bound alpha2 * deg(v), partial values extended
/// exactly, branches cut when even the optimistic completion misses p.
pub fn deg_alg(inst: &FgppInstance, spec: &ProblemSpec) -> SolveResult {
    let cls = spec.classify();
    assert!(cls.degrading, "deg_alg requires a degrading row");
    let graph = &inst.graph;
    let (k, p) = (inst.k, inst.p);
    assert!(k <= graph.n(), "budget k = {k} exceeds n = {}", graph.n());
    let mut stats = Stats::new();
    // Adding v to a partial set changes the value by
    // alpha2*deg(v) + (alpha1 - 2*alpha2)*d_in; on a degrading row the
    // second term never helps, so alpha2*deg(v) bounds each addition.
    let mut order: Vec<usize> = (0..graph.n()).collect();
    let key = |v: usize| spec.alpha2 * Rational::from_integer(graph.degree(v) as i64);
    match spec.objective {
        Objective::Max => order.sort_by(|&a, &b| key(b).cmp(&key(a)).then(a.cmp(&b))),
        Objective::Min => order.sort_by(|&a, &b| key(a).cmp(&key(b)).then(a.cmp(&b))),
    }
    let mut prefix = vec![Rational::zero(); graph.n() + 1];
    for (i, &v) in order.iter().enumerate() {
        prefix[i + 1] = prefix[i] + key(v);
    }
    let mut inside = vec![false; graph.n()];
    let mut nodes = 0u64;
    let found = deg_branch(
        graph,
        spec,
        k,
        p,
        &order,
        &prefix,
        0,
        0,
        Rational::zero(),
        &mut inside,
        &mut nodes,
    );
    stats.set("branch_nodes", nodes);
    match found {
        Some(witness) => SolveResult::accepted(graph, spec, k, p, witness, stats),
        None => SolveResult::rejected(None, stats),
    }
}

#[allow(clippy::too_many_arguments)]
fn deg_branch(
    graph: &Graph,
    spec: &ProblemSpec,
    k: usize,
    p: Rational,
    order: &[usize],
    prefix: &[Rational],
    i: usize,
    chosen: usize,
    value: Rational,
    inside: &mut Vec<bool>,
    nodes: &mut u64,
) -> Option<Vec<usize>> {
    *nodes += 1;
    if chosen == k {
        if spec.objective.meets(value, p) {
            let mut witness: Vec<usize> =
                (0..graph.n()).filter(|&v| inside[v]).collect();
            witness.sort_unstable();
            return Some(witness);
        }
        return None;
    }
    let need = k - chosen;
    if i + need > order.len() {
        return None;
    }
    let optimistic = value + (prefix[i + need] - prefix[i]);
    if !spec.objective.meets(optimistic, p) {
        return None;
    }
    let v = order[i];
    let d_in = graph.neighbors(v).iter().filter(|&&u| inside[u]).count() as i64;
    let delta = spec.alpha2 * Rational::from_integer(graph.degree(v) as i64)
        + (spec.alpha1 - spec.alpha2 * Rational::from_integer(2)) * Rational::from_integer(d_in);
    inside[v] = true;
    if let Some(w) = deg_branch(
        graph,
        spec,
        k,
        p,
        order,
        prefix,
        i + 1,
        chosen + 1,
        value + delta,
        inside,
        nodes,
    ) {
        inside[v] = false;
        return Some(w);
    }
    inside[v] = false;
    deg_branch(
        graph, spec, k, p, order, prefix, i + 1, chosen, value, inside, nodes,
    )
}

/// General solver: degrading rows branch-and-bound, everything else through
/// the cover reduction (non-degrading rows are merge-safe by definition).
pub fn fgpp_alg(inst: &FgppInstance, spec: &ProblemSpec, cfg: &SolverConfig) -> Result<SolveResult> {
    let graph = &inst.graph;
    let (k, p) = (inst.k, inst.p);
    assert!(k <= graph.n(), "budget k = {k} exceeds n = {}", graph.n());
    if spec.classify().degrading {
        return Ok(deg_alg(inst, spec));
    }
    let wec = reduce_to_wec(graph, spec, k, p, u64::MAX)?;
    let mut stats = Stats::new();
    stats.set("family_total", wec.family.len() as u64);
    let rep = cfg.rep_config();
    let shrunk = match decrease(&wec, &rep, cfg.decrease_threshold) {
        Ok(smaller) => smaller,
        Err(_) => {
            stats.add("prune_skipped", 1);
            wec.clone()
        }
    };
    stats.set("family_pruned_total", shrunk.family.len() as u64);
    let sol = solve_wec(&shrunk, &rep, cfg.decrease_threshold);
    stats.merge(&sol.stats);
    Ok(match sol.witness {
        Some(indices) => {
            let mut witness = Vec::with_capacity(k);
            for idx in indices {
                witness.extend_from_slice(&shrunk.family[idx].0);
            }
            SolveResult::accepted(graph, spec, k, p, witness, stats)
        }
        None => SolveResult::rejected(sol.value, stats),
    })
}

/// Exhaustive oracle over all k-subsets.
pub fn brute_force(
    inst: &FgppInstance,
    spec: &ProblemSpec,
    max_work: u64,
) -> Result<SolveResult> {
    let graph = &inst.graph;
    let (k, p) = (inst.k, inst.p);
    let mut stats = Stats::new();
    if k > graph.n() {
        return Ok(SolveResult::rejected(None, stats));
    }
    let scan_cost = choose(graph.n(), k).saturating_mul((graph.m() as u128).max(1));
    if scan_cost > max_work as u128 {
        return Err(Error::Resource(format!(
            "oracle scan needs ~{scan_cost} steps (cap {max_work})"
        )));
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut scanned = 0u64;
    for subset in combinations(graph.n(), k) {
        scanned += 1;
        let value = val(graph, spec, &subset).expect("generated subsets are valid");
        if best
            .as_ref()
            .map_or(true, |(b, _)| spec.objective.better(value, *b))
        {
            best = Some((value, subset));
        }
    }
    stats.set("subsets_scanned", scanned);
    let (value, witness) = best.expect("k <= n yields at least one subset");
    Ok(if spec.objective.meets(value, p) {
        SolveResult::accepted(graph, spec, k, p, witness, stats)
    } else {
        SolveResult::rejected(Some(value), stats)
    })
}

/// Dispatcher. Handles out-of-range and trivial budgets directly, honors a
/// forced algorithm choice, and otherwise routes by parameter regime with
/// cost estimates deciding between a specialized route and the general one.
/// Returns the result together with the executed route's name.
pub fn auto_solve(
    inst: &FgppInstance,
    spec: &ProblemSpec,
    cfg: &SolverConfig,
) -> Result<(SolveResult, &'static str)> {
    let graph = &inst.graph;
    let (k, p) = (inst.k, inst.p);
    if k > graph.n() {
        return Ok((SolveResult::rejected(None, Stats::new()), "direct"));
    }
    let cls = spec.classify();
    let fgpp_label = if cls.degrading { "deg" } else { "fgpp" };
    match cfg.algorithm {
        Algorithm::Fgpp => return Ok((fgpp_alg(inst, spec, cfg)?, fgpp_label)),
        Algorithm::Deg => return Ok((deg_alg(inst, spec), "deg")),
        Algorithm::MaxCut => {
            assert!(
                is_cut_row(spec),
                "maxcut applies only to the (0, 1, max) row"
            );
            return Ok((max_cut_alg(inst, cfg)?, "maxcut"));
        }
        Algorithm::PAlg => return Ok((p_alg(inst, spec, cfg)?, "palg")),
        Algorithm::FastPAlg => return Ok((fast_p_alg(inst, spec, cfg)?, "fastpalg")),
        Algorithm::Oracle => return Ok((brute_force(inst, spec, cfg.max_work)?, "oracle")),
        Algorithm::Auto => {}
    }
    if k == 0 || k == graph.n() {
        return Ok((decide_directly(graph, spec, k, p, Stats::new()), "direct"));
    }
    let per_coloring = (graph.n() + graph.m() + 16) as f64;
    if is_cut_row(spec) {
        let q = strength_from(p, k, graph.n(), cfg.rounding);
        if coloring_route_cost(graph.n(), q, cfg) * per_coloring <= cfg.max_work as f64 {
            return Ok((max_cut_alg(inst, cfg)?, "maxcut"));
        }
    } else if cls.non_degrading_positive_min && spec.alpha1 > Rational::zero() {
        let x = edge_color_strength(spec, k, p.max(Rational::zero()));
        let t = rational_to_clamped(cfg.rounding.apply(x), graph.m());
        if p.is_negative()
            || coloring_route_cost(graph.m(), t, cfg) * per_coloring <= cfg.max_work as f64
        {
            return Ok((fast_p_alg(inst, spec, cfg)?, "fastpalg"));
        }
    }
    if cls.positive_min {
        let q = strength_from(p.max(Rational::zero()) / spec.alpha2, k, graph.n(), cfg.rounding);
        if p.is_negative()
            || coloring_route_cost(graph.n(), q, cfg) * per_coloring <= cfg.max_work as f64
        {
            return Ok((p_alg(inst, spec, cfg)?, "palg"));
        }
    }
    Ok((fgpp_alg(inst, spec, cfg)?, fgpp_label))
}

fn is_cut_row(spec: &ProblemSpec) -> bool {
    spec.alpha1 == Rational::zero()
        && spec.alpha2 == Rational::from_integer(1)
        && spec.objective == Objective::Max
}

/// Estimated coloring-family size for routing decisions; infinite when the
/// domain exceeds the 60-index coloring limit.
fn coloring_route_cost(domain: usize, t: usize, cfg: &SolverConfig) -> f64 {
    if domain > 60 {
        return f64::INFINITY;
    }
    let t = t.min(domain);
    if t == 0 {
        return 1.0;
    }
    let mc = mc_family_size(domain, t, cfg.error_prob) as f64;
    match cfg.us_mode {
        UsMode::Exhaustive => (domain as f64).exp2(),
        UsMode::MonteCarlo => mc,
        UsMode::Verified => {
            let verify = (choose(domain, t) as f64) * mc * (t as f64);
            (domain as f64).exp2().min(mc + verify)
        }
    }
}

fn decide_directly(
    graph: &Graph,
    spec: &ProblemSpec,
    k: usize,
    p: Rational,
    stats: Stats,
) -> SolveResult {
    let witness: Vec<usize> = (0..k).collect();
    let value = val(graph, spec, &witness).expect("prefix subsets are valid");
    if spec.objective.meets(value, p) {
        SolveResult::accepted(graph, spec, k, p, witness, stats)
    } else {
        SolveResult::rejected(Some(value), stats)
    }
}

/// Strength base + k, rounded and clamped to the domain size.
fn strength_from(base: Rational, k: usize, cap: usize, rounding: Rounding) -> usize {
    let rounded = rounding.apply(base);
    rational_to_clamped(rounded + Rational::from_integer(k as i64), cap)
}

fn rational_to_clamped(x: Rational, cap: usize) -> usize {
    if x < Rational::zero() {
        return 0;
    }
    if x > Rational::from_integer(cap as i64) {
        return cap;
    }
    x.to_integer().to_usize().unwrap_or(cap).min(cap)
}

fn red_from_mask(domain: usize, colors: &ColoringFamily, idx: usize) -> BitSet {
    let mask = colors.mask(idx);
    let reds: Vec<usize> = (0..domain).filter(|&d| mask & (1 << d) == 0).collect();
    BitSet::from_indices(domain, &reds)
}

/// Runs `f` over coloring indices and returns the lowest-index acceptance,
/// in parallel when more than one thread is configured.
fn first_accept<F>(len: usize, threads: usize, f: F) -> Option<(usize, Vec<usize>)>
where
    F: Fn(usize) -> Option<Vec<usize>> + Sync,
{
    if threads > 1 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            return pool.install(|| {
                (0..len)
                    .into_par_iter()
                    .find_map_first(|i| f(i).map(|w| (i, w)))
            });
        }
    }
    (0..len).find_map(|i| f(i).map(|w| (i, w)))
}

fn finish_colored(
    graph: &Graph,
    spec: &ProblemSpec,
    k: usize,
    p: Rational,
    found: Option<(usize, Vec<usize>)>,
    family_len: usize,
    mut stats: Stats,
) -> SolveResult {
    match found {
        Some((idx, witness)) => {
            stats.set("colorings_tried", idx as u64 + 1);
            SolveResult::accepted(graph, spec, k, p, witness, stats)
        }
        None => {
            stats.set("colorings_tried", family_len as u64);
            SolveResult::rejected(None, stats)
        }
    }
}
