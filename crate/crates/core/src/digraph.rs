//! Directed graphs over dense integer vertex ids, plus the component
//! taxonomy used by the degree-bounded solver.

use std::collections::BTreeSet;

use thiserror::Error;

pub type VertexId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DigraphError {
    #[error("vertex {v} out of range (graph has {n} vertices)")]
    VertexOutOfRange { v: VertexId, n: usize },
    #[error("duplicate arc {u} -> {v}")]
    DuplicateArc { u: VertexId, v: VertexId },
}

/// Immutable digraph. Arcs keep insertion order; arc ids index into that
/// order and stay stable for the lifetime of the graph. Equality compares
/// the vertex count and the arc set, not the insertion order.
#[derive(Debug, Clone)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(VertexId, VertexId)>,
    arc_set: BTreeSet<(VertexId, VertexId)>,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    incident: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, arcs: &[(VertexId, VertexId)]) -> Result<Self, DigraphError> {
        let mut arc_set = BTreeSet::new();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        for (id, &(u, v)) in arcs.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(DigraphError::VertexOutOfRange { v: w, n });
                }
            }
            if !arc_set.insert((u, v)) {
                return Err(DigraphError::DuplicateArc { u, v });
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
            incident[u].push(id);
            if v != u {
                incident[v].push(id);
            }
        }
        Ok(Digraph { n, arcs: arcs.to_vec(), arc_set, out_adj, in_adj, incident })
    }

    pub fn empty(n: usize) -> Self {
        Digraph::new(n, &[]).expect("no arcs, nothing to reject")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.arc_set.contains(&(u, v))
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v]
    }

    /// Arc ids touching `v`, ascending; a loop appears once.
    pub fn incident_arcs(&self, v: VertexId) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree_stats(&self) -> DegreeStats {
        DegreeStats {
            max_out: self.out_adj.iter().map(Vec::len).max().unwrap_or(0),
            max_in: self.in_adj.iter().map(Vec::len).max().unwrap_or(0),
        }
    }

    /// Components of the underlying undirected graph, each sorted
    /// ascending, ordered by smallest member.
    pub fn weak_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for &w in self.out_adj[v].iter().chain(self.in_adj[v].iter()) {
                    if !seen[w] {
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

    /// Shape of one weak component under the given degree bounds.
    /// The arc counts separate the cases: a weak component on k vertices is
    /// a tree iff it has k-1 arcs and carries a unique cycle iff it has k.
    pub fn classify_component(&self, component: &[VertexId], bounds: DegreeStats) -> ComponentShape {
        let mut in_comp = vec![false; self.n];
        for &v in component {
            in_comp[v] = true;
        }
        for &v in component {
            if self.out_adj[v].len() > bounds.max_out || self.in_adj[v].len() > bounds.max_in {
                return ComponentShape::Unsupported;
            }
        }
        let comp_arcs: Vec<usize> = (0..self.arcs.len())
            .filter(|&id| {
                let (u, v) = self.arcs[id];
                in_comp[u] && in_comp[v]
            })
            .collect();
        if comp_arcs.len() + 1 == component.len() {
            return ComponentShape::Tree;
        }
        if comp_arcs.len() != component.len() {
            return ComponentShape::Unsupported;
        }
        match self.unique_directed_cycle(component, &comp_arcs) {
            Some(cycle) => ComponentShape::CycleWithTrees { cycle },
            None => ComponentShape::Unsupported,
        }
    }

    /// Peels degree-1 vertices; what survives must be a single directed
    /// cycle for the component to be solvable. A loop never peels (it holds
    /// two arc ends) and yields a length-1 cycle.
    fn unique_directed_cycle(&self, component: &[VertexId], comp_arcs: &[usize]) -> Option<Vec<VertexId>> {
        let mut arc_alive = vec![true; comp_arcs.len()];
        let mut degree = std::collections::HashMap::new();
        let mut touching: std::collections::HashMap<VertexId, Vec<usize>> = std::collections::HashMap::new();
        for &v in component {
            degree.insert(v, 0usize);
        }
        for (k, &id) in comp_arcs.iter().enumerate() {
            let (u, v) = self.arcs[id];
            *degree.get_mut(&u).unwrap() += 1;
            *degree.get_mut(&v).unwrap() += 1;
            touching.entry(u).or_default().push(k);
            if v != u {
                touching.entry(v).or_default().push(k);
            }
        }
        let mut alive = vec![true; self.n];
        let mut queue: Vec<VertexId> = component.iter().copied().filter(|v| degree[v] == 1).collect();
        while let Some(v) = queue.pop() {
            alive[v] = false;
            for &k in touching.get(&v).into_iter().flatten() {
                if !arc_alive[k] {
                    continue;
                }
                arc_alive[k] = false;
                let (a, b) = self.arcs[comp_arcs[k]];
                let other = if a == v { b } else { a };
                if alive[other] {
                    let d = degree.get_mut(&other).unwrap();
                    *d -= 1;
                    if *d == 1 {
                        queue.push(other);
                    }
                }
            }
        }
        let core: Vec<VertexId> = component.iter().copied().filter(|&v| alive[v]).collect();
        if core.is_empty() {
            return None;
        }
        let mut next = std::collections::HashMap::new();
        let mut in_count = std::collections::HashMap::new();
        for (k, &id) in comp_arcs.iter().enumerate() {
            if !arc_alive[k] {
                continue;
            }
            let (u, v) = self.arcs[id];
            if next.insert(u, v).is_some() {
                return None;
            }
            *in_count.entry(v).or_insert(0usize) += 1;
        }
        for &v in &core {
            if in_count.get(&v) != Some(&1) || !next.contains_key(&v) {
                return None;
            }
        }
        let start = core[0];
        let mut cycle = vec![start];
        let mut cur = next[&start];
        while cur != start {
            cycle.push(cur);
            cur = next[&cur];
            if cycle.len() > core.len() {
                return None;
            }
        }
        if cycle.len() == core.len() {
            Some(cycle)
        } else {
            None
        }
    }

    /// Arc-reversed copy; arc ids line up with the original's.
    pub fn reverse(&self) -> Digraph {
        let flipped: Vec<(VertexId, VertexId)> = self.arcs.iter().map(|&(u, v)| (v, u)).collect();
        Digraph::new(self.n, &flipped).expect("reversing a set of arcs cannot create duplicates")
    }

    /// Max degree of the underlying undirected simple graph: a digon is one
    /// edge, a loop contributes nothing (the check targets loopless
    /// reduction graphs).
    pub fn underlying_undirected_max_degree(&self) -> usize {
        (0..self.n)
            .map(|v| {
                let mut nb: BTreeSet<VertexId> = self.out_adj[v].iter().copied().collect();
                nb.extend(self.in_adj[v].iter().copied());
                nb.remove(&v);
                nb.len()
            })
            .max()
            .unwrap_or(0)
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.arc_set == other.arc_set
    }
}

impl Eq for Digraph {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeStats {
    pub max_out: usize,
    pub max_in: usize,
}

impl DegreeStats {
    pub fn new(max_out: usize, max_in: usize) -> Self {
        DegreeStats { max_out, max_in }
    }

    pub fn swapped(self) -> Self {
        DegreeStats { max_out: self.max_in, max_in: self.max_out }
    }

    pub fn fits(self, bound: DegreeStats) -> bool {
        self.max_out <= bound.max_out && self.max_in <= bound.max_in
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentShape {
    Tree,
    /// The unique directed cycle, rotated to start at its smallest vertex.
    CycleWithTrees { cycle: Vec<VertexId> },
    Unsupported,
}

/// Incremental construction with vertex labels and gadget grafting.
#[derive(Debug, Default, Clone)]
pub struct DigraphBuilder {
    labels: Vec<String>,
    arcs: Vec<(VertexId, VertexId)>,
    arc_set: BTreeSet<(VertexId, VertexId)>,
}

impl DigraphBuilder {
    pub fn new() -> Self {
        DigraphBuilder::default()
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn vertex(&mut self, label: impl Into<String>) -> VertexId {
        self.labels.push(label.into());
        self.labels.len() - 1
    }

    /// Panics on out-of-range endpoints or a duplicate arc; both indicate a
    /// broken construction, never bad user input.
    pub fn arc(&mut self, u: VertexId, v: VertexId) {
        assert!(u < self.n() && v < self.n(), "arc ({u}, {v}) references an unknown vertex");
        assert!(self.arc_set.insert((u, v)), "duplicate arc ({u}, {v})");
        self.arcs.push((u, v));
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.arc_set.contains(&(u, v))
    }

    /// Copies `part` into the graph under construction. Entries of `merge`
    /// map a part vertex onto an existing host vertex (which keeps its
    /// label); all other part vertices become fresh ones labeled from
    /// `part_labels`. Returns the part-id -> host-id map.
    pub fn graft(
        &mut self,
        part: &Digraph,
        part_labels: &[String],
        merge: &[(VertexId, VertexId)],
    ) -> Vec<VertexId> {
        assert_eq!(part_labels.len(), part.n(), "one label per part vertex");
        let mut map: Vec<Option<VertexId>> = vec![None; part.n()];
        for &(pv, host) in merge {
            assert!(pv < part.n(), "merge source {pv} not in part");
            assert!(host < self.n(), "merge target {host} not in host graph");
            assert!(map[pv].is_none(), "part vertex {pv} merged twice");
            map[pv] = Some(host);
        }
        for pv in 0..part.n() {
            if map[pv].is_none() {
                map[pv] = Some(self.vertex(part_labels[pv].clone()));
            }
        }
        let map: Vec<VertexId> = map.into_iter().map(Option::unwrap).collect();
        for &(u, v) in part.arcs() {
            self.arc(map[u], map[v]);
        }
        map
    }

    pub fn finish(self) -> (Digraph, Vec<String>) {
        let g = Digraph::new(self.labels.len(), &self.arcs)
            .expect("builder enforces arc validity on insertion");
        (g, self.labels)
    }
}
