//! Target digraphs and the homomorphism predicate. The three built-in
//! targets A, B, C drive every reduction in this crate; arbitrary targets
//! of up to 64 vertices are accepted everywhere else.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cnf::Semantics;
use crate::consistency::ColorLists;
use crate::digraph::{Digraph, VertexId};

pub type Color = usize;

/// Total mapping V(G) -> V(H), indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Coloring(pub Vec<Color>);

impl Coloring {
    pub fn get(&self, v: VertexId) -> Color {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TargetError {
    #[error("target has {n} vertices; at most 64 are supported")]
    TooLarge { n: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MappingError {
    #[error("coloring covers {got} vertices, graph has {expected}")]
    NotTotal { expected: usize, got: usize },
    #[error("vertex {vertex} maps to color {color}, outside the {palette}-vertex target")]
    ColorOutOfRange { vertex: VertexId, color: Color, palette: usize },
}

/// A digraph H in the target role, with adjacency exposed as bitmasks so
/// list pruning is a couple of word operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetGraph {
    digraph: Digraph,
    name: Option<String>,
    out_masks: Vec<u64>,
    in_masks: Vec<u64>,
}

impl TargetGraph {
    pub fn new(digraph: Digraph, name: Option<String>) -> Result<Self, TargetError> {
        if digraph.n() > 64 {
            return Err(TargetError::TooLarge { n: digraph.n() });
        }
        let mut out_masks = vec![0u64; digraph.n()];
        let mut in_masks = vec![0u64; digraph.n()];
        for &(u, v) in digraph.arcs() {
            out_masks[u] |= 1 << v;
            in_masks[v] |= 1 << u;
        }
        Ok(TargetGraph { digraph, name, out_masks, in_masks })
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn n(&self) -> usize {
        self.digraph.n()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn has_arc(&self, x: Color, y: Color) -> bool {
        self.digraph.has_arc(x, y)
    }

    /// Bitmask of {y : x -> y in H}.
    pub fn out_mask(&self, x: Color) -> u64 {
        self.out_masks[x]
    }

    /// Bitmask of {w : w -> x in H}.
    pub fn in_mask(&self, x: Color) -> u64 {
        self.in_masks[x]
    }

    pub fn reversed(&self) -> TargetGraph {
        TargetGraph::new(self.digraph.reverse(), self.name.clone())
            .expect("reversal preserves the vertex count")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum BuiltinTarget {
    A,
    B,
    C,
}

impl BuiltinTarget {
    pub const ALL: [BuiltinTarget; 3] = [BuiltinTarget::A, BuiltinTarget::B, BuiltinTarget::C];

    /// The SAT semantics each target's reduction encodes.
    pub fn semantics(self) -> Semantics {
        match self {
            BuiltinTarget::A | BuiltinTarget::B => Semantics::OneInThree,
            BuiltinTarget::C => Semantics::ThreeSat,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BuiltinTarget::A => "A",
            BuiltinTarget::B => "B",
            BuiltinTarget::C => "C",
        }
    }
}

impl fmt::Display for BuiltinTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(BuiltinTarget::A),
            "B" | "b" => Ok(BuiltinTarget::B),
            "C" | "c" => Ok(BuiltinTarget::C),
            other => Err(format!("unknown target {other:?}; expected A, B, or C")),
        }
    }
}

/// Arc sets of the three fixed targets. A and B are pinned by the
/// constraint checklists in `checklist` below; the search in this module's
/// tests confirms A is the unique loopless 3-vertex solution and records
/// B's one rival, which the clause-gadget tests then eliminate.
pub const A_ARCS: [(VertexId, VertexId); 4] = [(0, 1), (1, 0), (0, 2), (2, 1)];
pub const B_ARCS: [(VertexId, VertexId); 5] = [(0, 1), (1, 0), (0, 2), (1, 2), (2, 1)];
pub const C_ARCS: [(VertexId, VertexId); 6] = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];

pub fn build_target(which: BuiltinTarget) -> TargetGraph {
    let arcs: &[(VertexId, VertexId)] = match which {
        BuiltinTarget::A => &A_ARCS,
        BuiltinTarget::B => &B_ARCS,
        BuiltinTarget::C => &C_ARCS,
    };
    let d = Digraph::new(3, arcs).expect("fixed arc lists are duplicate-free");
    TargetGraph::new(d, Some(which.name().to_string())).expect("3 vertices fit any mask")
}

/// True iff every arc (u, v) of g maps onto an arc (f(u), f(v)) of h.
pub fn is_homomorphism(g: &Digraph, h: &TargetGraph, f: &Coloring) -> Result<bool, MappingError> {
    if f.len() != g.n() {
        return Err(MappingError::NotTotal { expected: g.n(), got: f.len() });
    }
    for (v, &c) in f.0.iter().enumerate() {
        if c >= h.n() {
            return Err(MappingError::ColorOutOfRange { vertex: v, color: c, palette: h.n() });
        }
    }
    Ok(g.arcs().iter().all(|&(u, v)| h.has_arc(f.get(u), f.get(v))))
}

/// True iff f is total over the lists' vertices and picks from each list.
pub fn respects_lists(f: &Coloring, lists: &ColorLists) -> bool {
    f.len() == lists.n() && f.0.iter().enumerate().all(|(v, &c)| lists.contains(v, c))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::consistency::ColorLists;

    fn digon() -> Digraph {
        Digraph::new(2, &[(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn builtin_arc_sets() {
        let c = build_target(BuiltinTarget::C);
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(c.has_arc(u, v), u != v);
            }
        }
        let a = build_target(BuiltinTarget::A);
        assert_eq!(a.digraph().arc_count(), 4);
        assert!(a.has_arc(0, 1) && a.has_arc(1, 0) && a.has_arc(0, 2) && a.has_arc(2, 1));
        let b = build_target(BuiltinTarget::B);
        assert_eq!(b.digraph().arc_count(), 5);
        assert!(!b.has_arc(2, 0));
    }

    #[test]
    fn a_is_the_unique_checklist_solution() {
        let survivors: Vec<Digraph> = checklist::loopless_three_vertex_digraphs()
            .into_iter()
            .filter(checklist::satisfies_a_checklist)
            .collect();
        assert_eq!(survivors.len(), 1);
        assert_eq!(survivors[0], build_target(BuiltinTarget::A).digraph().clone());
    }

    #[test]
    fn b_checklist_leaves_two_candidates() {
        let mut survivors: Vec<Vec<(VertexId, VertexId)>> = checklist::loopless_three_vertex_digraphs()
            .into_iter()
            .filter(checklist::satisfies_b_checklist)
            .map(|h| {
                let mut arcs = h.arcs().to_vec();
                arcs.sort_unstable();
                arcs
            })
            .collect();
        survivors.sort();
        let mut b = B_ARCS.to_vec();
        b.sort_unstable();
        // the rival drops the 0 -> 1 arc; gadget tests reject it
        let mut rival: Vec<_> = B_ARCS.iter().copied().filter(|&a| a != (0, 1)).collect();
        rival.sort_unstable();
        let mut expected = vec![b, rival];
        expected.sort();
        assert_eq!(survivors, expected);
    }

    #[test]
    fn homomorphism_examples() {
        let c = build_target(BuiltinTarget::C);
        let cg = c.digraph().clone();
        assert_eq!(is_homomorphism(&cg, &c, &Coloring(vec![0, 1, 2])), Ok(true));

        let a = build_target(BuiltinTarget::A);
        assert_eq!(is_homomorphism(&digon(), &a, &Coloring(vec![0, 1])), Ok(true));
        assert_eq!(is_homomorphism(&digon(), &a, &Coloring(vec![0, 0])), Ok(false));
    }

    #[test]
    fn homomorphism_rejects_partial_and_out_of_range() {
        let a = build_target(BuiltinTarget::A);
        assert_eq!(
            is_homomorphism(&digon(), &a, &Coloring(vec![0])),
            Err(MappingError::NotTotal { expected: 2, got: 1 })
        );
        assert_eq!(
            is_homomorphism(&digon(), &a, &Coloring(vec![0, 3])),
            Err(MappingError::ColorOutOfRange { vertex: 1, color: 3, palette: 3 })
        );
    }

    #[test]
    fn list_respect() {
        let full = ColorLists::full(2, 3);
        assert!(respects_lists(&Coloring(vec![2, 1]), &full));
        let mut pinned = full.clone();
        pinned.pin(0, 2);
        pinned.pin(1, 1);
        assert!(respects_lists(&Coloring(vec![2, 1]), &pinned));
        assert!(!respects_lists(&Coloring(vec![1, 1]), &pinned));
        let mut emptied = full.clone();
        emptied.set_mask(0, 0);
        assert!(!respects_lists(&Coloring(vec![0, 0]), &emptied));
        assert!(!respects_lists(&Coloring(vec![0]), &full));
    }

    #[test]
    fn reversal_pairs_with_reversed_inputs() {
        let a = build_target(BuiltinTarget::A);
        let g = Digraph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let f = Coloring(vec![0, 2, 1, 0]);
        // (0,3) must map to an arc: 0 -> 0 is not one, so f fails both ways
        assert_eq!(is_homomorphism(&g, &a, &f), Ok(false));
        assert_eq!(is_homomorphism(&g.reverse(), &a.reversed(), &f), Ok(false));
        let f2 = Coloring(vec![0, 1, 0, 1]);
        assert_eq!(is_homomorphism(&g, &a, &f2), Ok(true));
        assert_eq!(is_homomorphism(&g.reverse(), &a.reversed(), &f2), Ok(true));
    }

    #[test]
    fn target_cap_is_64() {
        assert!(TargetGraph::new(Digraph::empty(64), None).is_ok());
        assert_eq!(
            TargetGraph::new(Digraph::empty(65), None),
            Err(TargetError::TooLarge { n: 65 })
        );
    }
}
