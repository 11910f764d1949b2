//! Digraph H-coloring toolkit built around three fixed 3-vertex targets.
//!
//! Target A (digon plus two forcing arcs) and target B (A plus one arc)
//! have NP-complete coloring problems via 1-in-3-SAT; target C, the
//! symmetric triangle, encodes ordinary 3-colorability and 3-SAT. The
//! crate provides:
//!
//! - [`Digraph`] and [`TargetGraph`]: dense-id digraphs, component
//!   taxonomy, and the built-in targets;
//! - [`make_arc_consistent`] and [`ColorLists`]: AC-3 style list
//!   propagation, deliberately incomplete on its own;
//! - [`solve_bounded`]: polynomial list-coloring for inputs with max
//!   out-degree 2 and max in-degree 1 (or the mirror image);
//! - [`enumerate_homomorphisms`] and friends: an exact oracle for small
//!   instances, the measuring stick everything else is tested against;
//! - [`Formula`] plus DIMACS parsing and [`brute_force_sat`];
//! - the gadget library ([`build_gadget`], [`verify_gadget`],
//!   [`search_gadget`]) and the six SAT reductions ([`reduce`],
//!   [`extract_assignment`], [`extend_assignment`]);
//! - plain text formats for graphs, lists, and DOT export in [`io`].

pub mod bounded;
pub mod cnf;
pub mod consistency;
pub mod digraph;
pub mod gadget;
pub mod io;
pub mod oracle;
pub mod reduction;
pub mod sample;
pub mod target;

pub use bounded::{solve_bounded, solve_cycle_component, solve_tree_component, SolveError};
pub use cnf::{
    brute_force_sat, evaluate, parse_dimacs, to_dimacs, Assignment, Clause, DimacsError,
    EvalError, Formula, Literal, SatError, Semantics,
};
pub use consistency::{make_arc_consistent, revise_arc, ColorLists};
pub use digraph::{
    ComponentShape, DegreeStats, Digraph, DigraphBuilder, DigraphError, VertexId,
};
pub use gadget::{
    build_gadget, builtin_gadgets, interface_behavior, search_gadget, verify_gadget, DegreeAudit,
    Gadget, GadgetKind, GadgetReport, InterfaceBehavior, SlotSlack,
};
pub use io::{
    format_edge_list, format_lists, parse_dot, parse_edge_list, parse_lists, to_dot, FormatError,
};
pub use oracle::{
    count_homomorphisms, count_homomorphisms_with, enumerate_homomorphisms,
    enumerate_homomorphisms_with, exists_homomorphism, exists_homomorphism_with, OracleConfig,
    OracleError,
};
pub use reduction::{
    extend_assignment, extract_assignment, reduce, validate_instance, ClauseMap, ExtendError,
    ExtractError, ReductionInstance, ReductionMeta, ValidationReport, VariableMap, Variant,
};
pub use target::{
    build_target, is_homomorphism, respects_lists, BuiltinTarget, Color, Coloring, MappingError,
    TargetError, TargetGraph, A_ARCS, B_ARCS, C_ARCS,
};
