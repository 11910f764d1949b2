//! Seeded generators for test corpora: random digraphs (free and degree
//! bounded), random color lists, random formulas, and exhaustive digraph
//! enumerations at small orders. Everything is deterministic given the
//! seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Clause, Formula, Literal};
use crate::consistency::ColorLists;
use crate::digraph::{Digraph, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each ordered pair (loops included when asked) kept with probability
/// `density`.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, density: f64, loops: bool) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if (u != v || loops) && rng.gen_bool(density) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::new(n, &arcs).expect("pairs are enumerated once each")
}

/// Random digraph with max out-degree 2 and max in-degree 1, the shape the
/// bounded solver accepts directly. Pairs are tried in random order and an
/// arc lands only while both endpoints have capacity.
pub fn random_bounded_digraph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Digraph {
    let mut pairs: Vec<(VertexId, VertexId)> =
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut out = vec![0usize; n];
    let mut inn = vec![0usize; n];
    let mut arcs = Vec::new();
    for (u, v) in pairs {
        if out[u] < 2 && inn[v] < 1 && (u != v || (out[u] < 2 && inn[u] < 1)) && rng.gen_bool(density)
        {
            out[u] += 1;
            inn[v] += 1;
            arcs.push((u, v));
        }
    }
    Digraph::new(n, &arcs).expect("capacity bookkeeping rejects duplicates")
}

/// Mostly-full lists with occasional random masks, empty ones included;
/// the solver and the oracle must agree on those too.
pub fn random_lists(rng: &mut ChaCha8Rng, n: usize, palette: usize) -> ColorLists {
    let full = (1u64 << palette) - 1;
    let masks = (0..n)
        .map(|_| if rng.gen_bool(0.8) { full } else { rng.gen_range(0..=full) })
        .collect();
    ColorLists::from_masks(palette, masks)
}

/// Random 3-literal formula. With `distinct_vars` every clause draws three
/// different variables, which keeps random 3-SAT instances from collapsing
/// into the degenerate repeated-literal patterns.
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    num_vars: usize,
    num_clauses: usize,
    distinct_vars: bool,
) -> Formula {
    assert!(num_vars >= if distinct_vars { 3 } else { 1 });
    let mut clauses = Vec::with_capacity(num_clauses);
    for _ in 0..num_clauses {
        let mut vars = [0usize; 3];
        if distinct_vars {
            let mut pool: Vec<usize> = (1..=num_vars).collect();
            pool.shuffle(rng);
            vars.copy_from_slice(&pool[..3]);
        } else {
            for slot in &mut vars {
                *slot = rng.gen_range(1..=num_vars);
            }
        }
        let lits = vars.map(|v| {
            if rng.gen_bool(0.5) {
                Literal::pos(v)
            } else {
                Literal::neg(v)
            }
        });
        clauses.push(Clause(lits));
    }
    Formula::new(num_vars, clauses)
}

/// All digraphs on n vertices, loops included: 2^(n^2) graphs, ascending
/// arc-mask order. Keep n tiny.
pub fn all_digraphs(n: usize) -> Vec<Digraph> {
    let slots: Vec<(VertexId, VertexId)> =
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    enumerate_masks(n, &slots)
}

/// All loopless digraphs on n vertices: 2^(n(n-1)) graphs.
pub fn all_loopless_digraphs(n: usize) -> Vec<Digraph> {
    let slots: Vec<(VertexId, VertexId)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    enumerate_masks(n, &slots)
}

fn enumerate_masks(n: usize, slots: &[(VertexId, VertexId)]) -> Vec<Digraph> {
    assert!(slots.len() <= 20, "enumeration over {} arc slots will not finish", slots.len());
    (0u64..1 << slots.len())
        .map(|mask| {
            let arcs: Vec<_> = slots
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .collect();
            Digraph::new(n, &arcs).expect("mask picks each slot at most once")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::DegreeStats;

    #[test]
    fn generators_are_deterministic() {
        let a = random_digraph(&mut rng(9), 8, 0.3, true);
        let b = random_digraph(&mut rng(9), 8, 0.3, true);
        assert_eq!(a, b);
        let f = random_formula(&mut rng(9), 5, 4, true);
        let g = random_formula(&mut rng(9), 5, 4, true);
        assert_eq!(f, g);
    }

    #[test]
    fn bounded_digraphs_respect_the_bounds() {
        let mut r = rng(11);
        for n in 1..=12 {
            for _ in 0..20 {
                let g = random_bounded_digraph(&mut r, n, 0.6);
                assert!(g.degree_stats().fits(DegreeStats::new(2, 1)), "{:?}", g.arcs());
            }
        }
    }

    #[test]
    fn distinct_vars_formulas_use_three_variables_per_clause() {
        let mut r = rng(13);
        for _ in 0..50 {
            let f = random_formula(&mut r, 6, 8, true);
            for clause in &f.clauses {
                let mut vars: Vec<usize> = clause.0.iter().map(|l| l.var).collect();
                vars.sort_unstable();
                vars.dedup();
                assert_eq!(vars.len(), 3);
            }
        }
    }

    #[test]
    fn exhaustive_counts() {
        assert_eq!(all_digraphs(0).len(), 1);
        assert_eq!(all_digraphs(2).len(), 16);
        assert_eq!(all_loopless_digraphs(3).len(), 64);
        assert!(all_digraphs(2).iter().any(|g| g.has_arc(0, 0)));
        assert!(all_loopless_digraphs(3).iter().all(|g| (0..3).all(|v| !g.has_arc(v, v))));
    }

    #[test]
    fn random_lists_cover_partial_masks() {
        let mut r = rng(17);
        let lists = random_lists(&mut r, 200, 3);
        assert!((0..200).any(|v| lists.mask(v) != 0b111));
        assert!((0..200).filter(|&v| lists.mask(v) == 0b111).count() > 100);
    }
}
