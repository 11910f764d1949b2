//! Arc consistency over per-vertex color lists. Lists are bitmasks over the
//! target's vertices, so a revise step is a handful of word operations.

use std::collections::VecDeque;

use crate::digraph::{Digraph, VertexId};
use crate::target::{Color, TargetGraph};

/// Per-vertex subsets L(v) of a target's vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorLists {
    palette: usize,
    masks: Vec<u64>,
}

impl ColorLists {
    /// Every vertex gets the full palette {0, .., palette-1}.
    pub fn full(n: usize, palette: usize) -> Self {
        assert!(palette <= 64, "palette capped at 64 colors");
        let all = if palette == 64 { u64::MAX } else { (1u64 << palette) - 1 };
        ColorLists { palette, masks: vec![all; n] }
    }

    pub fn from_masks(palette: usize, masks: Vec<u64>) -> Self {
        assert!(palette <= 64, "palette capped at 64 colors");
        let all = if palette == 64 { u64::MAX } else { (1u64 << palette) - 1 };
        assert!(masks.iter().all(|&m| m & !all == 0), "list member outside the palette");
        ColorLists { palette, masks }
    }

    pub fn n(&self) -> usize {
        self.masks.len()
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn mask(&self, v: VertexId) -> u64 {
        self.masks[v]
    }

    pub fn set_mask(&mut self, v: VertexId, mask: u64) {
        self.masks[v] = mask;
    }

    pub fn contains(&self, v: VertexId, c: Color) -> bool {
        c < self.palette && self.masks[v] >> c & 1 == 1
    }

    /// Shrink L(v) to the singleton {c}.
    pub fn pin(&mut self, v: VertexId, c: Color) {
        assert!(c < self.palette);
        self.masks[v] = 1 << c;
    }

    pub fn remove(&mut self, v: VertexId, c: Color) {
        self.masks[v] &= !(1 << c);
    }

    pub fn is_empty(&self, v: VertexId) -> bool {
        self.masks[v] == 0
    }

    pub fn any_empty(&self) -> bool {
        self.masks.contains(&0)
    }

    pub fn len(&self, v: VertexId) -> usize {
        self.masks[v].count_ones() as usize
    }

    pub fn colors(&self, v: VertexId) -> impl Iterator<Item = Color> + '_ {
        let mask = self.masks[v];
        (0..self.palette).filter(move |c| mask >> c & 1 == 1)
    }

    pub fn smallest(&self, v: VertexId) -> Option<Color> {
        if self.masks[v] == 0 {
            None
        } else {
            Some(self.masks[v].trailing_zeros() as usize)
        }
    }

    /// Pointwise inclusion.
    pub fn subset_of(&self, other: &ColorLists) -> bool {
        self.n() == other.n()
            && self.masks.iter().zip(&other.masks).all(|(&a, &b)| a & !b == 0)
    }
}

/// One two-sided revise pass over the arc (u, v): drop from L(u) every color
/// with no out-neighbor left in L(v), then from L(v) every color with no
/// in-neighbor left in the reduced L(u). Returns whether anything changed.
pub fn revise_arc(u: VertexId, v: VertexId, lists: &mut ColorLists, h: &TargetGraph) -> bool {
    let mut changed = false;
    let head_mask = lists.mask(v);
    let mut tail = 0u64;
    for x in lists.colors(u) {
        if h.out_mask(x) & head_mask != 0 {
            tail |= 1 << x;
        }
    }
    if tail != lists.mask(u) {
        lists.set_mask(u, tail);
        changed = true;
    }
    let tail_mask = lists.mask(u);
    let mut head = 0u64;
    for y in lists.colors(v) {
        if h.in_mask(y) & tail_mask != 0 {
            head |= 1 << y;
        }
    }
    if head != lists.mask(v) {
        lists.set_mask(v, head);
        changed = true;
    }
    changed
}

/// Runs `revise_arc` to fixpoint. `seed` holds the arc ids to process first,
/// in order; when a vertex's list shrinks, its incident arcs re-enter the
/// queue. `allowed` restricts propagation to a subset of arcs (None = all).
pub(crate) fn fixpoint(
    g: &Digraph,
    seed: impl IntoIterator<Item = usize>,
    allowed: Option<&[bool]>,
    lists: &mut ColorLists,
    h: &TargetGraph,
) {
    let permitted = |id: usize| allowed.is_none_or(|a| a[id]);
    let mut queued = vec![false; g.arc_count()];
    let mut queue = VecDeque::new();
    for id in seed {
        if permitted(id) && !queued[id] {
            queued[id] = true;
            queue.push_back(id);
        }
    }
    while let Some(id) = queue.pop_front() {
        queued[id] = false;
        let (u, v) = g.arcs()[id];
        let before_u = lists.mask(u);
        let before_v = lists.mask(v);
        if !revise_arc(u, v, lists, h) {
            continue;
        }
        for (w, before) in [(u, before_u), (v, before_v)] {
            if lists.mask(w) == before {
                continue;
            }
            for &inc in g.incident_arcs(w) {
                if inc != id && permitted(inc) && !queued[inc] {
                    queued[inc] = true;
                    queue.push_back(inc);
                }
            }
        }
    }
}

/// Arc-consistency fixpoint over the whole graph; pure in its inputs.
/// Empty final lists witness unsatisfiability, nonempty ones promise
/// nothing on their own.
pub fn make_arc_consistent(g: &Digraph, lists: &ColorLists, h: &TargetGraph) -> ColorLists {
    assert_eq!(lists.n(), g.n(), "one list per vertex");
    assert_eq!(lists.palette(), h.n(), "lists drawn from the target palette");
    let mut work = lists.clone();
    fixpoint(g, 0..g.arc_count(), None, &mut work, h);
    work
}
