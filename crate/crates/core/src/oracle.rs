//! Exhaustive list-homomorphism search for arbitrary digraph pairs. This is
//! the ground truth the solver, the gadgets, and the reductions are tested
//! against. Enumeration is plain backtracking with optional list
//! propagation; the decision and counting entry points additionally branch
//! smallest-list-first and split the not-yet-pinned residue into
//! independent components, which keeps the large reduction graphs feasible
//! without changing any answer.

use thiserror::Error;

use crate::consistency::{fixpoint, make_arc_consistent, ColorLists};
use crate::digraph::{Digraph, VertexId};
use crate::target::{Color, Coloring, TargetGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Hard ceiling on |V(G)|; raise it deliberately, not by accident.
    pub vertex_cap: usize,
    /// Maintain arc consistency while branching. Off = plain backtracking.
    pub prune: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { vertex_cap: 24, prune: true }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, over the oracle cap of {cap}; raise the cap, set a limit, or use the bounded solver")]
    CapExceeded { n: usize, cap: usize },
    #[error("lists cover {got} vertices, graph has {expected}")]
    ListCountMismatch { expected: usize, got: usize },
    #[error("lists use a {got}-color palette, target has {expected} vertices")]
    PaletteMismatch { expected: usize, got: usize },
}

fn check_inputs(g: &Digraph, h: &TargetGraph, lists: &ColorLists, cfg: &OracleConfig) -> Result<(), OracleError> {
    if g.n() > cfg.vertex_cap {
        return Err(OracleError::CapExceeded { n: g.n(), cap: cfg.vertex_cap });
    }
    if lists.n() != g.n() {
        return Err(OracleError::ListCountMismatch { expected: g.n(), got: lists.n() });
    }
    if lists.palette() != h.n() {
        return Err(OracleError::PaletteMismatch { expected: h.n(), got: lists.palette() });
    }
    Ok(())
}

/// Vertices by descending total degree, ties by id. Good enough to keep the
/// forced parts of a graph early in the branch order.
fn degree_order(g: &Digraph) -> Vec<VertexId> {
    let mut order: Vec<VertexId> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.out_neighbors(v).len() + g.in_neighbors(v).len()), v));
    order
}

/// Depth-first search over `order`; colors ascend at every vertex. The
/// callback sees each full coloring and returns false to stop the search.
fn search(
    g: &Digraph,
    h: &TargetGraph,
    lists: &ColorLists,
    order: &[VertexId],
    prune: bool,
    emit: &mut impl FnMut(Coloring) -> bool,
) {
    if prune {
        let work = make_arc_consistent(g, lists, h);
        if work.any_empty() {
            return;
        }
        mac_static(g, h, &work, order, 0, emit);
    } else {
        let mut partial: Vec<Option<Color>> = vec![None; g.n()];
        plain_node(g, h, lists, order, 0, &mut partial, emit);
    }
}

/// Lists arrive arc-consistent and nonempty; pinning one vertex only
/// disturbs its incident arcs, so propagation reseeds from those. Vertices
/// already down to one color are passed over without re-propagating.
fn mac_static(
    g: &Digraph,
    h: &TargetGraph,
    lists: &ColorLists,
    order: &[VertexId],
    depth: usize,
    emit: &mut impl FnMut(Coloring) -> bool,
) -> bool {
    let mut depth = depth;
    while depth < order.len() && lists.len(order[depth]) == 1 {
        depth += 1;
    }
    if depth == order.len() {
        let f = Coloring((0..g.n()).map(|v| lists.smallest(v).expect("nonempty by induction")).collect());
        return emit(f);
    }
    let v = order[depth];
    let colors: Vec<Color> = lists.colors(v).collect();
    for c in colors {
        let mut child = lists.clone();
        child.pin(v, c);
        fixpoint(g, g.incident_arcs(v).iter().copied(), None, &mut child, h);
        if child.any_empty() {
            continue;
        }
        if !mac_static(g, h, &child, order, depth + 1, emit) {
            return false;
        }
    }
    true
}

/// Weak components of the subgraph induced on `scope` vertices whose lists
/// still hold two or more colors. With arc-consistent lists, every arc into
/// a singleton vertex is already satisfied by each surviving color on the
/// other end, so singletons separate the graph: the components extend, and
/// count, independently.
fn residual_components(g: &Digraph, lists: &ColorLists, scope: &[VertexId]) -> Vec<Vec<VertexId>> {
    let mut active = vec![false; g.n()];
    for &v in scope {
        if lists.len(v) >= 2 {
            active[v] = true;
        }
    }
    let mut seen = vec![false; g.n()];
    let mut components = Vec::new();
    for &start in scope {
        if !active[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for &id in g.incident_arcs(v) {
                let (a, b) = g.arcs()[id];
                let w = if a == v { b } else { a };
                if active[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Smallest list first, ties to the smallest id; callers guarantee every
/// member of `comp` still has at least two colors.
fn tightest_vertex(lists: &ColorLists, comp: &[VertexId]) -> VertexId {
    let mut pick = comp[0];
    let mut best = usize::MAX;
    for &v in comp {
        let len = lists.len(v);
        if len < best {
            best = len;
            pick = v;
            if len == 2 {
                break;
            }
        }
    }
    pick
}

/// Whether one residual component extends to a full coloring of itself.
fn exists_in(g: &Digraph, h: &TargetGraph, lists: &ColorLists, comp: &[VertexId]) -> bool {
    let v = tightest_vertex(lists, comp);
    let colors: Vec<Color> = lists.colors(v).collect();
    for c in colors {
        let mut child = lists.clone();
        child.pin(v, c);
        fixpoint(g, g.incident_arcs(v).iter().copied(), None, &mut child, h);
        if child.any_empty() {
            continue;
        }
        if residual_components(g, &child, comp).iter().all(|sub| exists_in(g, h, &child, sub)) {
            return true;
        }
    }
    false
}

/// Number of extensions of one residual component.
fn count_in(g: &Digraph, h: &TargetGraph, lists: &ColorLists, comp: &[VertexId]) -> u128 {
    let v = tightest_vertex(lists, comp);
    let colors: Vec<Color> = lists.colors(v).collect();
    let mut total: u128 = 0;
    for c in colors {
        let mut child = lists.clone();
        child.pin(v, c);
        fixpoint(g, g.incident_arcs(v).iter().copied(), None, &mut child, h);
        if child.any_empty() {
            continue;
        }
        let mut product: u128 = 1;
        for sub in residual_components(g, &child, comp) {
            product = product.saturating_mul(count_in(g, h, &child, &sub));
            if product == 0 {
                break;
            }
        }
        total = total.saturating_add(product);
    }
    total
}

fn plain_node(
    g: &Digraph,
    h: &TargetGraph,
    lists: &ColorLists,
    order: &[VertexId],
    depth: usize,
    partial: &mut Vec<Option<Color>>,
    emit: &mut impl FnMut(Coloring) -> bool,
) -> bool {
    if depth == order.len() {
        let f = Coloring(partial.iter().map(|c| c.expect("all vertices ordered")).collect());
        return emit(f);
    }
    let v = order[depth];
    'colors: for c in lists.colors(v) {
        for &w in g.out_neighbors(v) {
            if let Some(cw) = partial[w].or(if w == v { Some(c) } else { None }) {
                if !h.has_arc(c, cw) {
                    continue 'colors;
                }
            }
        }
        for &w in g.in_neighbors(v) {
            if w == v {
                continue; // loop already checked above
            }
            if let Some(cw) = partial[w] {
                if !h.has_arc(cw, c) {
                    continue 'colors;
                }
            }
        }
        partial[v] = Some(c);
        let keep_going = plain_node(g, h, lists, order, depth + 1, partial, emit);
        partial[v] = None;
        if !keep_going {
            return false;
        }
    }
    true
}

/// All list homomorphisms g -> h in lexicographic order of the coloring
/// vector, up to `limit` when given.
pub fn enumerate_homomorphisms(
    g: &Digraph,
    h: &TargetGraph,
    lists: &ColorLists,
    limit: Option<usize>,
) -> Result<Vec<Coloring>, OracleError> {
    enumerate_homomorphisms_with(g, h, lists, limit, &OracleConfig::default())
}

pub fn enumerate_homomorphisms_with(
    g: &Digraph,
    h: &TargetGraph,
    lists: &ColorLists,
    limit: Option<usize>,
    cfg: &OracleConfig,
) -> Result<Vec<Coloring>, OracleError> {
    check_inputs(g, h, lists, cfg)?;
    let mut out = Vec::new();
    if limit == Some(0) {
        return Ok(out);
    }
    // identity branch order makes the emission order the lex order
    let order: Vec<VertexId> = (0..g.n()).collect();
    search(g, h, lists, &order, cfg.prune, &mut |f| {
        out.push(f);
        limit.is_none_or(|cap| out.len() < cap)
    });
    Ok(out)
}

pub fn exists_homomorphism(g: &Digraph, h: &TargetGraph, lists: &ColorLists) -> Result<bool, OracleError> {
    exists_homomorphism_with(g, h, lists, &OracleConfig::default())
}

pub fn exists_homomorphism_with(
    g: &Digraph,
    h: &TargetGraph,
    lists: &ColorLists,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    check_inputs(g, h, lists, cfg)?;
    if !cfg.prune {
        let mut found = false;
        search(g, h, lists, &degree_order(g), false, &mut |_| {
            found = true;
            false
        });
        return Ok(found);
    }
    let work = make_arc_consistent(g, lists, h);
    if work.any_empty() {
        return Ok(false);
    }
    let all: Vec<VertexId> = (0..g.n()).collect();
    Ok(residual_components(g, &work, &all).iter().all(|comp| exists_in(g, h, &work, comp)))
}

pub fn count_homomorphisms(g: &Digraph, h: &TargetGraph, lists: &ColorLists) -> Result<u128, OracleError> {
    count_homomorphisms_with(g, h, lists, &OracleConfig::default())
}

pub fn count_homomorphisms_with(
    g: &Digraph,
    h: &TargetGraph,
    lists: &ColorLists,
    cfg: &OracleConfig,
) -> Result<u128, OracleError> {
    check_inputs(g, h, lists, cfg)?;
    if !cfg.prune {
        let mut count: u128 = 0;
        search(g, h, lists, &degree_order(g), false, &mut |_| {
            count += 1;
            true
        });
        return Ok(count);
    }
    let work = make_arc_consistent(g, lists, h);
    if work.any_empty() {
        return Ok(0);
    }
    let all: Vec<VertexId> = (0..g.n()).collect();
    let mut total: u128 = 1;
    for comp in residual_components(g, &work, &all) {
        total = total.saturating_mul(count_in(g, h, &work, &comp));
        if total == 0 {
            break;
        }
    }
    Ok(total)
}
