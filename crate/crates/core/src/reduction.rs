//! Formula-to-digraph reductions: every clause becomes a clause gadget,
//! every variable a variable gadget, and literal occurrences are identified
//! by merging clause-gadget literal vertices onto variable-gadget copies.
//! Six constructions total: targets A, B, C, each unbounded or degree
//! bounded. The meta block records the whole vertex bookkeeping so
//! assignments and colorings translate in both directions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{evaluate, Assignment, Clause, Formula, Literal, Semantics};
use crate::consistency::ColorLists;
use crate::digraph::{DegreeStats, Digraph, DigraphBuilder, VertexId};
use crate::gadget::{build_gadget, k113_chain, verify_gadget, GadgetKind};
use crate::oracle::{enumerate_homomorphisms_with, OracleConfig, OracleError};
use crate::target::{build_target, is_homomorphism, BuiltinTarget, Color, Coloring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Unbounded,
    Bounded,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Unbounded => "unbounded",
            Variant::Bounded => "bounded",
        }
    }
}

/// Where one variable lives in the instance graph. Unbounded constructions
/// keep one copy per polarity; bounded ones keep k = max(1, x, x') copies,
/// consumed left to right by the clauses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableMap {
    pub var: usize,
    pub positive: Vec<VertexId>,
    pub negative: Vec<VertexId>,
}

/// Where one clause lives: `lits` as (variable, polarity) triples,
/// `literal_vertices` the copies carrying them, `internal` the clause
/// gadget's own vertices in builder order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseMap {
    pub index: usize,
    pub lits: [(usize, bool); 3],
    pub literal_vertices: [VertexId; 3],
    pub internal: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMeta {
    pub version: u32,
    pub target: BuiltinTarget,
    pub variant: Variant,
    pub semantics: Semantics,
    pub num_vars: usize,
    pub labels: Vec<String>,
    pub variables: Vec<VariableMap>,
    pub clauses: Vec<ClauseMap>,
    /// Colors forced in every coloring once the basis is normalized; empty
    /// for A and B, the canonical basis triple for C.
    pub pinned: Vec<(VertexId, Color)>,
    /// C only: the directed triangle whose colors name the color classes.
    pub basis: Option<[VertexId; 3]>,
}

impl ReductionMeta {
    /// Rebuilds the formula from the recorded clauses. Meta produced by
    /// `reduce` is always well formed; hand-edited meta may panic here.
    pub fn formula(&self) -> Formula {
        let clauses = self
            .clauses
            .iter()
            .map(|c| Clause([mk_lit(c.lits[0]), mk_lit(c.lits[1]), mk_lit(c.lits[2])]))
            .collect();
        Formula::new(self.num_vars, clauses)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("meta serializes without fallible types")
    }

    pub fn from_json(text: &str) -> Result<ReductionMeta, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn mk_lit((var, positive): (usize, bool)) -> Literal {
    if positive {
        Literal::pos(var)
    } else {
        Literal::neg(var)
    }
}

#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub graph: Digraph,
    pub meta: ReductionMeta,
}

/// Literal color meaning "true" under each target's clause gadget.
fn truth_color(target: BuiltinTarget) -> Color {
    match target {
        BuiltinTarget::A | BuiltinTarget::C => 1,
        BuiltinTarget::B => 0,
    }
}

fn variable_labels(labels: &[String], var: usize) -> Vec<String> {
    labels
        .iter()
        .map(|l| {
            if let Some(rest) = l.strip_prefix("~X") {
                format!("~x{var}{}", label_suffix(rest))
            } else if let Some(rest) = l.strip_prefix('X') {
                format!("x{var}{}", label_suffix(rest))
            } else {
                format!("x{var}.{l}")
            }
        })
        .collect()
}

fn label_suffix(rest: &str) -> String {
    if rest.is_empty() {
        String::new()
    } else {
        format!(".{}", rest.trim_start_matches('.'))
    }
}

fn clause_labels(labels: &[String], index: usize) -> Vec<String> {
    labels.iter().map(|l| format!("cl{}.{l}", index + 1)).collect()
}

pub fn reduce(formula: &Formula, target: BuiltinTarget, bounded: bool) -> ReductionInstance {
    let mut bld = DigraphBuilder::new();
    let counts = formula.occurrence_counts();
    let num_clauses = formula.clauses.len();

    // C constructions carry a basis triangle naming the color classes; the
    // unbounded one hangs every anchor straight off it, the bounded one
    // interposes supply chains so no basis vertex exceeds degree (2, 2)
    let mut basis = None;
    let mut pinned = Vec::new();
    let mut clause_anchor: Vec<VertexId> = Vec::new();
    let mut variable_anchor: Vec<VertexId> = Vec::new();
    if target == BuiltinTarget::C {
        let b0 = bld.vertex("b0");
        let b1 = bld.vertex("b1");
        let b2 = bld.vertex("b2");
        bld.arc(b0, b1);
        bld.arc(b1, b2);
        bld.arc(b2, b0);
        basis = Some([b0, b1, b2]);
        pinned = vec![(b0, 0), (b1, 1), (b2, 2)];
        if bounded {
            // head sits between basis colors 0 and 2, so the whole clause
            // chain's slot class is forced to 1; the variable chain's to 2
            let clen = std::cmp::max(1, num_clauses.saturating_sub(1));
            let (chead, cslots) = k113_chain(&mut bld, "cchain", clen);
            bld.arc(b0, chead);
            bld.arc(chead, b2);
            let vlen = std::cmp::max(1, formula.num_vars.saturating_sub(1));
            let (vhead, vslots) = k113_chain(&mut bld, "vchain", vlen);
            bld.arc(b1, vhead);
            bld.arc(vhead, b0);
            clause_anchor = cslots;
            variable_anchor = vslots;
        } else {
            clause_anchor = vec![b1; num_clauses];
            variable_anchor = vec![b2; formula.num_vars];
        }
    }

    let mut variables = Vec::with_capacity(formula.num_vars);
    for var in 1..=formula.num_vars {
        let (pos_occ, neg_occ) = counts[var - 1];
        let copies = std::cmp::max(1, std::cmp::max(pos_occ, neg_occ));
        let kind = match (target, bounded) {
            (BuiltinTarget::A, false) => GadgetKind::AVariable,
            (BuiltinTarget::A, true) => GadgetKind::BoundedAVariable { copies },
            (BuiltinTarget::B, false) => GadgetKind::BVariable,
            (BuiltinTarget::B, true) => GadgetKind::BoundedBVariable { copies },
            (BuiltinTarget::C, false) => GadgetKind::CVariable,
            (BuiltinTarget::C, true) => GadgetKind::BoundedCVariable { copies },
        };
        let gadget = build_gadget(kind);
        let mut merge = Vec::new();
        if target == BuiltinTarget::C {
            merge.push((gadget.pins[0].0, variable_anchor[var - 1]));
        }
        let map = bld.graft(&gadget.digraph, &variable_labels(&gadget.labels, var), &merge);
        let half = gadget.interface.len() / 2;
        let positive = gadget.interface[..half].iter().map(|&p| map[p]).collect();
        let negative = gadget.interface[half..].iter().map(|&p| map[p]).collect();
        variables.push(VariableMap { var, positive, negative });
    }

    let clause_kind = match target {
        BuiltinTarget::A => GadgetKind::AClause,
        BuiltinTarget::B => GadgetKind::BClause,
        BuiltinTarget::C => GadgetKind::CClause,
    };
    let mut next_pos = vec![0usize; formula.num_vars];
    let mut next_neg = vec![0usize; formula.num_vars];
    let mut clauses = Vec::with_capacity(num_clauses);
    for (index, clause) in formula.clauses.iter().enumerate() {
        let gadget = build_gadget(clause_kind);
        let mut merge = Vec::new();
        let mut literal_vertices = [0 as VertexId; 3];
        for (slot, lit) in clause.0.iter().enumerate() {
            let vm = &variables[lit.var - 1];
            let host = if bounded {
                let counter = if lit.positive {
                    &mut next_pos[lit.var - 1]
                } else {
                    &mut next_neg[lit.var - 1]
                };
                let idx = *counter;
                *counter += 1;
                if lit.positive {
                    vm.positive[idx]
                } else {
                    vm.negative[idx]
                }
            } else if lit.positive {
                vm.positive[0]
            } else {
                vm.negative[0]
            };
            merge.push((gadget.interface[slot], host));
            literal_vertices[slot] = host;
        }
        if target == BuiltinTarget::C {
            merge.push((gadget.pins[0].0, clause_anchor[index]));
        }
        let merged: BTreeSet<VertexId> = merge.iter().map(|&(p, _)| p).collect();
        let map = bld.graft(&gadget.digraph, &clause_labels(&gadget.labels, index), &merge);
        let internal: Vec<VertexId> =
            (0..gadget.digraph.n()).filter(|p| !merged.contains(p)).map(|p| map[p]).collect();
        clauses.push(ClauseMap {
            index,
            lits: [
                (clause.0[0].var, clause.0[0].positive),
                (clause.0[1].var, clause.0[1].positive),
                (clause.0[2].var, clause.0[2].positive),
            ],
            literal_vertices,
            internal,
        });
    }

    let (graph, labels) = bld.finish();
    let meta = ReductionMeta {
        version: 1,
        target,
        variant: if bounded { Variant::Bounded } else { Variant::Unbounded },
        semantics: target.semantics(),
        num_vars: formula.num_vars,
        labels,
        variables,
        clauses,
        pinned,
        basis,
    };
    ReductionInstance { graph, meta }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("coloring covers {got} vertices, instance has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("coloring is not a homomorphism of the instance graph")]
    NotAHomomorphism,
    #[error("variable {var}: literal copies carry incoherent colors")]
    IncoherentCopies { var: usize },
}

/// Reads the truth assignment off a valid coloring: a variable is true iff
/// its positive copies carry the target's truth color, after C colorings
/// are renamed so the basis triangle reads (0, 1, 2).
pub fn extract_assignment(
    instance: &ReductionInstance,
    coloring: &Coloring,
) -> Result<Assignment, ExtractError> {
    let meta = &instance.meta;
    if coloring.len() != instance.graph.n() {
        return Err(ExtractError::WrongLength { expected: instance.graph.n(), got: coloring.len() });
    }
    let h = build_target(meta.target);
    if is_homomorphism(&instance.graph, &h, coloring) != Ok(true) {
        return Err(ExtractError::NotAHomomorphism);
    }
    let perm: [Color; 3] = match meta.basis {
        Some([b0, b1, b2]) => {
            let mut p = [0; 3];
            p[coloring.get(b0)] = 0;
            p[coloring.get(b1)] = 1;
            p[coloring.get(b2)] = 2;
            p
        }
        None => [0, 1, 2],
    };
    let truth = truth_color(meta.target);
    let mut values = Vec::with_capacity(meta.num_vars);
    for vm in &meta.variables {
        let read = |vs: &[VertexId]| -> Option<Color> {
            let set: BTreeSet<Color> = vs.iter().map(|&v| perm[coloring.get(v)]).collect();
            if set.len() == 1 {
                set.into_iter().next()
            } else {
                None
            }
        };
        // the gadgets force all copies coherent and inside {0, 1}; anything
        // else means the coloring belongs to a different graph
        match (read(&vm.positive), read(&vm.negative)) {
            (Some(p), Some(n)) if p <= 1 && n == 1 - p => values.push(p == truth),
            _ => return Err(ExtractError::IncoherentCopies { var: vm.var }),
        }
    }
    Ok(Assignment(values))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtendError {
    #[error("assignment covers {got} variables, formula has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("assignment does not satisfy the formula; no extension is promised")]
    Unsatisfied,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Extends a satisfying assignment to a full coloring: pins the literal
/// copies (and the basis for C) and lets the oracle fill in the gadget
/// interiors. Deterministic: returns the lexicographically smallest
/// coloring compatible with the pins.
pub fn extend_assignment(
    instance: &ReductionInstance,
    assignment: &Assignment,
) -> Result<Coloring, ExtendError> {
    let meta = &instance.meta;
    if assignment.0.len() != meta.num_vars {
        return Err(ExtendError::WrongLength { expected: meta.num_vars, got: assignment.0.len() });
    }
    let formula = meta.formula();
    if evaluate(&formula, assignment, meta.semantics) != Ok(true) {
        return Err(ExtendError::Unsatisfied);
    }
    let h = build_target(meta.target);
    let truth = truth_color(meta.target);
    let mut lists = ColorLists::full(instance.graph.n(), h.n());
    for &(v, c) in &meta.pinned {
        lists.pin(v, c);
    }
    for vm in &meta.variables {
        let lit_color = if assignment.value(vm.var) { truth } else { 1 - truth };
        for &v in &vm.positive {
            lists.pin(v, lit_color);
        }
        for &v in &vm.negative {
            lists.pin(v, 1 - lit_color);
        }
    }
    let cfg = OracleConfig {
        vertex_cap: std::cmp::max(instance.graph.n(), 24),
        ..OracleConfig::default()
    };
    let found = enumerate_homomorphisms_with(&instance.graph, &h, &lists, Some(1), &cfg)?;
    let coloring = found.into_iter().next().expect("satisfying assignments always extend");
    assert_eq!(
        is_homomorphism(&instance.graph, &h, &coloring),
        Ok(true),
        "extension failed re-verification"
    );
    Ok(coloring)
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub degree_stats: DegreeStats,
    pub underlying_max_degree: usize,
    pub degrees_pass: bool,
    pub meta_pass: bool,
    pub gadget_pass: bool,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.degrees_pass && self.meta_pass && self.gadget_pass
    }
}

/// Checks an instance without solving it: degree bounds per variant,
/// meta/graph consistency, and standalone re-verification of the gadget
/// builders the instance drew from.
pub fn validate_instance(instance: &ReductionInstance) -> ValidationReport {
    let g = &instance.graph;
    let meta = &instance.meta;
    let mut notes = Vec::new();
    let degree_stats = g.degree_stats();
    let underlying_max_degree = g.underlying_undirected_max_degree();
    if let Some(v) = (0..g.n()).max_by_key(|&v| g.out_neighbors(v).len()) {
        notes.push(format!(
            "max out-degree {} at vertex {} ({})",
            g.out_neighbors(v).len(),
            v,
            meta.labels.get(v).map(String::as_str).unwrap_or("?")
        ));
    }
    let degrees_pass = match meta.variant {
        Variant::Unbounded => true,
        Variant::Bounded => {
            let fits = degree_stats.fits(DegreeStats::new(2, 2));
            if !fits {
                notes.push(format!(
                    "degree bounds exceeded: max out {} max in {}",
                    degree_stats.max_out, degree_stats.max_in
                ));
            }
            let u_ok = meta.target != BuiltinTarget::C || underlying_max_degree <= 4;
            if !u_ok {
                notes.push(format!(
                    "underlying max degree {underlying_max_degree} exceeds 4"
                ));
            }
            fits && u_ok
        }
    };
    let meta_pass = check_meta(instance, &mut notes);
    let gadget_pass = spot_check_gadgets(instance, &mut notes);
    ValidationReport { degree_stats, underlying_max_degree, degrees_pass, meta_pass, gadget_pass, notes }
}

fn check_meta(instance: &ReductionInstance, notes: &mut Vec<String>) -> bool {
    let g = &instance.graph;
    let meta = &instance.meta;
    let mut ok = true;
    let fail = |notes: &mut Vec<String>, ok: &mut bool, msg: String| {
        *ok = false;
        notes.push(msg);
    };
    if meta.labels.len() != g.n() {
        fail(notes, &mut ok, format!("{} labels for {} vertices", meta.labels.len(), g.n()));
    }
    if meta.variables.len() != meta.num_vars {
        fail(notes, &mut ok, "variable map count differs from num_vars".into());
    }
    let in_range = |v: VertexId| v < g.n();
    for vm in &meta.variables {
        if vm.positive.is_empty() || vm.positive.len() != vm.negative.len() {
            fail(notes, &mut ok, format!("variable {}: lopsided copy lists", vm.var));
        }
        if !vm.positive.iter().chain(&vm.negative).all(|&v| in_range(v)) {
            fail(notes, &mut ok, format!("variable {}: copy vertex out of range", vm.var));
        }
    }
    for cm in &meta.clauses {
        if !cm.literal_vertices.iter().chain(&cm.internal).all(|&v| in_range(v)) {
            fail(notes, &mut ok, format!("clause {}: vertex out of range", cm.index));
            continue;
        }
        for (slot, &(var, positive)) in cm.lits.iter().enumerate() {
            if var == 0 || var > meta.variables.len() {
                fail(notes, &mut ok, format!("clause {}: literal variable out of range", cm.index));
                continue;
            }
            let vm = &meta.variables[var - 1];
            let copies = if positive { &vm.positive } else { &vm.negative };
            if !copies.contains(&cm.literal_vertices[slot]) {
                fail(
                    notes,
                    &mut ok,
                    format!("clause {} slot {slot}: not carried by a copy of variable {var}", cm.index),
                );
            }
        }
        // the identification arcs between literal vertices and the clause
        // interior, in the direction the construction dictates
        let wired = match meta.target {
            BuiltinTarget::A => {
                cm.internal.len() >= 3
                    && (0..3).all(|i| g.has_arc(cm.literal_vertices[i], cm.internal[i]))
            }
            BuiltinTarget::B => {
                cm.internal.len() >= 3
                    && (0..3).all(|i| g.has_arc(cm.internal[i], cm.literal_vertices[i]))
            }
            BuiltinTarget::C => {
                cm.internal.len() >= 5
                    && g.has_arc(cm.literal_vertices[0], cm.internal[0])
                    && g.has_arc(cm.literal_vertices[1], cm.internal[1])
                    && g.has_arc(cm.literal_vertices[2], cm.internal[4])
            }
        };
        if !wired {
            fail(notes, &mut ok, format!("clause {}: literal wiring missing", cm.index));
        }
    }
    match (meta.target, meta.basis) {
        (BuiltinTarget::C, Some([b0, b1, b2])) => {
            let triangle = [b0, b1, b2].iter().all(|&v| in_range(v))
                && g.has_arc(b0, b1)
                && g.has_arc(b1, b2)
                && g.has_arc(b2, b0);
            if !triangle {
                fail(notes, &mut ok, "basis triangle arcs missing".into());
            }
            if meta.pinned != vec![(b0, 0), (b1, 1), (b2, 2)] {
                fail(notes, &mut ok, "pinned colors do not match the basis".into());
            }
        }
        (BuiltinTarget::C, None) => fail(notes, &mut ok, "C instance without a basis".into()),
        (_, None) => {}
        (_, Some(_)) => fail(notes, &mut ok, "basis on a non-C instance".into()),
    }
    ok
}

fn spot_check_gadgets(instance: &ReductionInstance, notes: &mut Vec<String>) -> bool {
    let meta = &instance.meta;
    let bounded = meta.variant == Variant::Bounded;
    let mut kinds: Vec<GadgetKind> = Vec::new();
    if !meta.clauses.is_empty() {
        kinds.push(match meta.target {
            BuiltinTarget::A => GadgetKind::AClause,
            BuiltinTarget::B => GadgetKind::BClause,
            BuiltinTarget::C => GadgetKind::CClause,
        });
    }
    if let Some(copies) = meta.variables.iter().map(|vm| vm.positive.len()).min() {
        kinds.push(match (meta.target, bounded) {
            (BuiltinTarget::A, false) => GadgetKind::AVariable,
            (BuiltinTarget::A, true) => GadgetKind::BoundedAVariable { copies },
            (BuiltinTarget::B, false) => GadgetKind::BVariable,
            (BuiltinTarget::B, true) => GadgetKind::BoundedBVariable { copies },
            (BuiltinTarget::C, false) => GadgetKind::CVariable,
            (BuiltinTarget::C, true) => GadgetKind::BoundedCVariable { copies },
        });
    }
    if meta.target == BuiltinTarget::C && bounded {
        kinds.push(GadgetKind::BasisTriangle);
        kinds.push(GadgetKind::ClauseChain { clauses: std::cmp::min(meta.clauses.len(), 3) });
        kinds.push(GadgetKind::VariableChain { variables: std::cmp::min(meta.num_vars, 3) });
    }
    let mut ok = true;
    for kind in kinds {
        let gadget = build_gadget(kind);
        if gadget.digraph.n() > OracleConfig::default().vertex_cap {
            notes.push(format!("{}: spot check skipped (gadget too large)", kind.name()));
            continue;
        }
        let target = build_target(kind.builtin_target().expect("builtin kinds have targets"));
        match verify_gadget(&gadget, &target) {
            Ok(report) if report.pass => {}
            Ok(report) => {
                ok = false;
                notes.push(format!("{}: behavior check failed", report.name));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("{}: {e}", kind.name()));
            }
        }
    }
    ok
}
