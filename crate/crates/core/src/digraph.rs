//! Oriented digraphs and the niche hypergraph they induce.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::hypergraph::{Hyperedge, Hypergraph, VertexId};

pub type Arc = (VertexId, VertexId);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("self-arc at {0}")]
    SelfArc(VertexId),
    #[error("arc ({tail}, {head}) mentions unknown vertex {vertex}")]
    UnknownVertex { tail: VertexId, head: VertexId, vertex: VertexId },
    #[error("arcs ({0}, {1}) and ({1}, {0}) form a 2-cycle")]
    TwoCycle(VertexId, VertexId),
    #[error("cannot swap {0} with itself")]
    SameVertex(VertexId),
    #[error("vertex {0} is not in the digraph")]
    MissingVertex(VertexId),
}

/// A digraph with no self-arcs and at most one arc between any two
/// vertices.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Digraph {
    vertices: BTreeSet<VertexId>,
    arcs: BTreeSet<Arc>,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph").field("vertices", &self.vertices).field("arcs", &self.arcs).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    In,
    Out,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::In => Side::Out,
            Side::Out => Side::In,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::In => "in",
            Side::Out => "out",
        })
    }
}

impl Digraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        arcs: impl IntoIterator<Item = Arc>,
    ) -> Result<Self, DigraphError> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        let arcs: BTreeSet<Arc> = arcs.into_iter().collect();
        for (t, h) in &arcs {
            if t == h {
                return Err(DigraphError::SelfArc(t.clone()));
            }
            for v in [t, h] {
                if !vertices.contains(v) {
                    return Err(DigraphError::UnknownVertex { tail: t.clone(), head: h.clone(), vertex: v.clone() });
                }
            }
            if arcs.contains(&(h.clone(), t.clone())) {
                let (a, b) = if t < h { (t, h) } else { (h, t) };
                return Err(DigraphError::TwoCycle(a.clone(), b.clone()));
            }
        }
        Ok(Digraph { vertices, arcs })
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn arcs(&self) -> &BTreeSet<Arc> {
        &self.arcs
    }

    pub fn has_arc(&self, tail: &VertexId, head: &VertexId) -> bool {
        self.arcs.contains(&(tail.clone(), head.clone()))
    }

    pub fn in_neighbors(&self, v: &VertexId) -> BTreeSet<VertexId> {
        self.arcs.iter().filter(|(_, h)| h == v).map(|(t, _)| t.clone()).collect()
    }

    pub fn out_neighbors(&self, v: &VertexId) -> BTreeSet<VertexId> {
        self.arcs.iter().filter(|(t, _)| t == v).map(|(_, h)| h.clone()).collect()
    }

    pub fn neighbors(&self, v: &VertexId, side: Side) -> BTreeSet<VertexId> {
        match side {
            Side::In => self.in_neighbors(v),
            Side::Out => self.out_neighbors(v),
        }
    }

    /// In- and out-neighbourhoods of every vertex, in one pass.
    pub fn neighborhoods(&self) -> BTreeMap<VertexId, (BTreeSet<VertexId>, BTreeSet<VertexId>)> {
        let mut map: BTreeMap<VertexId, (BTreeSet<VertexId>, BTreeSet<VertexId>)> =
            self.vertices.iter().map(|v| (v.clone(), Default::default())).collect();
        for (t, h) in &self.arcs {
            map.get_mut(h).expect("arc head is a vertex").0.insert(t.clone());
            map.get_mut(t).expect("arc tail is a vertex").1.insert(h.clone());
        }
        map
    }

    pub fn is_acyclic(&self) -> Acyclicity {
        is_acyclic(self)
    }

    pub fn reverse(&self) -> Digraph {
        reverse(self)
    }
}

/// Either a topological order or a directed cycle whose first vertex is
/// repeated at the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acyclicity {
    Acyclic(Vec<VertexId>),
    Cycle(Vec<VertexId>),
}

impl Acyclicity {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic(_))
    }
}

/// Kahn's algorithm, always taking the smallest available source. On
/// failure, returns a shortest cycle (ties broken lexicographically).
pub fn is_acyclic(d: &Digraph) -> Acyclicity {
    let nbhd = d.neighborhoods();
    let mut indegree: BTreeMap<&VertexId, usize> = nbhd.iter().map(|(v, (i, _))| (v, i.len())).collect();
    let mut ready: BTreeSet<&VertexId> = indegree.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
    let mut order = Vec::with_capacity(d.vertices.len());
    while let Some(v) = ready.pop_first() {
        order.push(v.clone());
        for w in &nbhd[v].1 {
            let k = indegree.get_mut(w).expect("head has an indegree");
            *k -= 1;
            if *k == 0 {
                ready.insert(w);
            }
        }
    }
    if order.len() == d.vertices.len() {
        return Acyclicity::Acyclic(order);
    }
    Acyclicity::Cycle(shortest_cycle(&nbhd))
}

fn shortest_cycle(nbhd: &BTreeMap<VertexId, (BTreeSet<VertexId>, BTreeSet<VertexId>)>) -> Vec<VertexId> {
    let mut best: Option<Vec<VertexId>> = None;
    for start in nbhd.keys() {
        // BFS from start until an arc returns to start.
        let mut prev: BTreeMap<&VertexId, &VertexId> = BTreeMap::new();
        let mut queue = VecDeque::from([start]);
        let mut closing = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for w in &nbhd[v].1 {
                if w == start {
                    closing = Some(v);
                    break 'bfs;
                }
                if !prev.contains_key(w) {
                    prev.insert(w, v);
                    queue.push_back(w);
                }
            }
        }
        let Some(mut v) = closing else { continue };
        let mut path = vec![v.clone()];
        while v != start {
            v = prev[v];
            path.push(v.clone());
        }
        path.reverse();
        let min_at = path.iter().enumerate().min_by_key(|(_, x)| *x).map(|(i, _)| i).unwrap_or(0);
        path.rotate_left(min_at);
        path.push(path[0].clone());
        let better = match &best {
            None => true,
            Some(b) => (path.len(), &path) < (b.len(), b),
        };
        if better {
            best = Some(path);
        }
    }
    best.expect("a digraph without a topological order has a cycle")
}

/// How a niche hyperedge arises.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NicheWitness {
    pub vertex: VertexId,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NicheResult {
    /// Every in- or out-neighbourhood of size at least two. When `simple`
    /// is false this family violates the simplicity invariant and is only
    /// meant for diagnostics.
    pub hypergraph: Hypergraph,
    pub simple: bool,
    /// The first vertex (and side) producing each edge.
    pub witnesses: BTreeMap<Hyperedge, NicheWitness>,
}

pub fn niche_hypergraph(d: &Digraph) -> NicheResult {
    let mut witnesses: BTreeMap<Hyperedge, NicheWitness> = BTreeMap::new();
    for (v, (ins, outs)) in d.neighborhoods() {
        for (side, set) in [(Side::In, ins), (Side::Out, outs)] {
            if set.len() >= 2 {
                witnesses.entry(Hyperedge::new(set)).or_insert_with(|| NicheWitness { vertex: v.clone(), side });
            }
        }
    }
    let edges: BTreeSet<Hyperedge> = witnesses.keys().cloned().collect();
    let simple = !edges.iter().any(|e| edges.iter().any(|f| e != f && e.is_subset(f)));
    NicheResult { hypergraph: Hypergraph::new_unchecked(d.vertices.clone(), edges), simple, witnesses }
}

pub fn reverse(d: &Digraph) -> Digraph {
    Digraph { vertices: d.vertices.clone(), arcs: d.arcs.iter().map(|(t, h)| (h.clone(), t.clone())).collect() }
}

/// Exchanges the in- and out-neighbourhoods of `u` and `x`. An arc between
/// the two is reversed, so the result is `d` relabeled by the transposition
/// of `u` and `x`.
pub fn swap_neighborhoods(d: &Digraph, u: &VertexId, x: &VertexId) -> Result<Digraph, DigraphError> {
    if u == x {
        return Err(DigraphError::SameVertex(u.clone()));
    }
    for v in [u, x] {
        if !d.vertices.contains(v) {
            return Err(DigraphError::MissingVertex(v.clone()));
        }
    }
    let swap = |v: &VertexId| {
        if v == u {
            x.clone()
        } else if v == x {
            u.clone()
        } else {
            v.clone()
        }
    };
    Ok(Digraph { vertices: d.vertices.clone(), arcs: d.arcs.iter().map(|(t, h)| (swap(t), swap(h))).collect() })
}

/// Union of vertex and arc sets. Acyclicity of the result is not implied.
pub fn union(a: &Digraph, b: &Digraph) -> Result<Digraph, DigraphError> {
    if let Some((t, h)) = a.arcs.iter().find(|(t, h)| b.has_arc(h, t)) {
        return Err(DigraphError::TwoCycle(t.clone(), h.clone()));
    }
    Ok(Digraph {
        vertices: a.vertices.union(&b.vertices).cloned().collect(),
        arcs: a.arcs.union(&b.arcs).cloned().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Cyclic(Vec<VertexId>),
    MissingVertices(BTreeSet<VertexId>),
    ExtraVertices(BTreeSet<VertexId>),
    MissingEdge(Hyperedge),
    SpuriousEdge {
        edge: Hyperedge,
        witness: NicheWitness,
    },
    NonSimple,
    /// More than one bud of `edge` has both neighbourhoods nonempty.
    TwoSidedBuds {
        edge: Hyperedge,
        buds: Vec<VertexId>,
    },
}

impl Violation {
    /// Whether this violates the realization condition `NH(D) = H` rather
    /// than acyclicity or the bud condition.
    pub fn is_realization(&self) -> bool {
        !matches!(self, Violation::Cyclic(_) | Violation::TwoSidedBuds { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |vs: &BTreeSet<VertexId>| vs.iter().map(VertexId::as_str).collect::<Vec<_>>().join(",");
        match self {
            Violation::Cyclic(c) => {
                let c: Vec<&str> = c.iter().map(VertexId::as_str).collect();
                write!(f, "directed cycle {}", c.join(" -> "))
            }
            Violation::MissingVertices(vs) => write!(f, "vertices missing from digraph: {}", list(vs)),
            Violation::ExtraVertices(vs) => write!(f, "extra digraph vertices: {}", list(vs)),
            Violation::MissingEdge(e) => write!(f, "edge {e} is not a neighbourhood"),
            Violation::SpuriousEdge { edge, witness } => {
                write!(
                    f,
                    "spurious edge {edge} = N{}({})",
                    if witness.side == Side::In { "-" } else { "+" },
                    witness.vertex
                )
            }
            Violation::NonSimple => f.write_str("neighbourhood family is not simple"),
            Violation::TwoSidedBuds { edge, buds } => {
                let b: Vec<&str> = buds.iter().map(VertexId::as_str).collect();
                write!(f, "edge {edge} has several two-sided buds: {}", b.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GoodnessReport {
    pub violations: Vec<Violation>,
}

impl GoodnessReport {
    pub fn is_good(&self) -> bool {
        self.violations.is_empty()
    }

    /// `NH(D) = H` holds, ignoring acyclicity and the bud condition.
    pub fn realizes(&self) -> bool {
        !self.violations.iter().any(Violation::is_realization)
    }
}

/// Checks that `d` is acyclic, that its niche hypergraph is exactly `h`
/// (same vertex set, same edges), and that every edge of `h` has at most
/// one bud with both neighbourhoods nonempty.
pub fn is_good_digraph(d: &Digraph, h: &Hypergraph) -> GoodnessReport {
    let mut violations = Vec::new();
    if let Acyclicity::Cycle(c) = is_acyclic(d) {
        violations.push(Violation::Cyclic(c));
    }
    let missing: BTreeSet<VertexId> = h.vertices().difference(&d.vertices).cloned().collect();
    if !missing.is_empty() {
        violations.push(Violation::MissingVertices(missing));
    }
    let extra: BTreeSet<VertexId> = d.vertices.difference(h.vertices()).cloned().collect();
    if !extra.is_empty() {
        violations.push(Violation::ExtraVertices(extra));
    }
    let nh = niche_hypergraph(d);
    if !nh.simple {
        violations.push(Violation::NonSimple);
    }
    for e in h.edges() {
        if !nh.hypergraph.contains_edge(e) {
            violations.push(Violation::MissingEdge(e.clone()));
        }
    }
    for (edge, witness) in &nh.witnesses {
        if !h.contains_edge(edge) {
            violations.push(Violation::SpuriousEdge { edge: edge.clone(), witness: witness.clone() });
        }
    }
    let nbhd = d.neighborhoods();
    let degrees = h.degrees();
    for e in h.edges() {
        let buds: Vec<VertexId> = e
            .iter()
            .filter(|v| degrees.get(*v) == Some(&1))
            .filter(|v| nbhd.get(*v).is_some_and(|(i, o)| !i.is_empty() && !o.is_empty()))
            .cloned()
            .collect();
        if buds.len() > 1 {
            violations.push(Violation::TwoSidedBuds { edge: e.clone(), buds });
        }
    }
    GoodnessReport { violations }
}
