//! Shared workload builders for the criterion benches.

use hcolor::sample;
use hcolor::{Digraph, Formula};

/// A mid-sized (2,1)-bounded digraph, the solver's home turf.
pub fn bounded_workload(n: usize, seed: u64) -> Digraph {
    sample::random_bounded_digraph(&mut sample::rng(seed), n, 0.7)
}

/// A random 3-SAT style formula with three distinct variables per clause.
pub fn formula_workload(num_vars: usize, num_clauses: usize, seed: u64) -> Formula {
    sample::random_formula(&mut sample::rng(seed), num_vars, num_clauses, true)
}
