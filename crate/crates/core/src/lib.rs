//! Exact decision/witness solvers for fixed-cardinality graph partition
//! problems: given a graph, coefficients `alpha1`, `alpha2`, an objective
//! direction, a cardinality `k` and a threshold `p`, decide whether some
//! vertex set `U` with `|U| = k` satisfies
//! `alpha1 * |E(U)| + alpha2 * |E(U, V \ U)| >= p` (maximization) or
//! `<= p` (minimization), and produce a witness set when the answer is yes.
//!
//! The crate provides several routes to the decision:
//!
//! * a brute-force oracle over all `k`-subsets,
//! * a branch-and-bound search for specs where merging never helps,
//! * a reduction through connected-subgraph enumeration to a weighted
//!   exact-cover dynamic program, optionally compressed by representative
//!   families,
//! * color-coding solvers driven by universal set families, for max-cut-type
//!   and nonnegative minimization specs.
//!
//! All randomized components are seeded and replayable: identical inputs and
//! seeds produce identical results, including witnesses.

pub mod bits;
pub mod ensemble;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod problem;
pub mod repfam;
pub mod result;
pub mod separation;
pub mod solvers;
pub mod subsets;
pub mod wec;

pub use error::Error;
pub use graph::Graph;
pub use problem::{
    val, val_star, Classification, EdgeColor, FgppInstance, NodeColor, Objective, ProblemSpec,
    Rational,
};
pub use result::{SolveResult, Stats};
