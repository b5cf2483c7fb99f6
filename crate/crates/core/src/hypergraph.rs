//! Hypergraphs: representation, validation, structural analysis, class
//! recognition for linear hypertrees of maximum degree two, and generators
//! for the named families (hyperpaths, hypernovas, petal flowers, random
//! members of the class).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name of a vertex. Non-empty, without whitespace or commas.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VertexId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Result<Self, HypergraphError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(HypergraphError::InvalidVertexId(name));
        }
        Ok(VertexId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for VertexId {
    type Error = HypergraphError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        VertexId::new(value)
    }
}

impl From<VertexId> for String {
    fn from(value: VertexId) -> Self {
        value.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A set of vertices. Ordering is lexicographic over the sorted members,
/// which is also the canonical order of edges in serialized files.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hyperedge(BTreeSet<VertexId>);

impl Hyperedge {
    pub fn new(members: impl IntoIterator<Item = VertexId>) -> Self {
        Hyperedge(members.into_iter().collect())
    }

    pub fn members(&self) -> &BTreeSet<VertexId> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.0.contains(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &VertexId> {
        self.0.iter()
    }

    pub fn shared_with<'a>(&'a self, other: &'a Hyperedge) -> impl Iterator<Item = &'a VertexId> {
        self.0.intersection(&other.0)
    }

    pub fn intersects(&self, other: &Hyperedge) -> bool {
        self.shared_with(other).next().is_some()
    }

    pub fn is_subset(&self, other: &Hyperedge) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<VertexId> for Hyperedge {
    fn from_iter<T: IntoIterator<Item = VertexId>>(iter: T) -> Self {
        Hyperedge::new(iter)
    }
}

impl fmt::Display for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(v.as_str())?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("invalid vertex name {0:?}")]
    InvalidVertexId(String),
    #[error("edge {0} has fewer than two vertices")]
    LoopEdge(Hyperedge),
    #[error("edge {edge} mentions unknown vertex {vertex}")]
    UnknownVertex { edge: Hyperedge, vertex: VertexId },
    #[error("edge {edge} is contained in edge {superedge}")]
    NonSimple { edge: Hyperedge, superedge: Hyperedge },
    #[error("edge {0} is not in the hypergraph")]
    UnknownEdge(Hyperedge),
    #[error("hypergraph has no trunk (two twigs sharing one vertex)")]
    NoTrunk,
    #[error("hypergraph is not in the class: {0}")]
    NotInClass(Rejection),
    #[error("bad family spec: {0}")]
    BadSpec(String),
}

/// A simple, loopless hypergraph. Isolated vertices are allowed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Hypergraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<Hyperedge>,
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph").field("vertices", &self.vertices).field("edges", &self.edges).finish()
    }
}

impl Hypergraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = Hyperedge>,
    ) -> Result<Self, HypergraphError> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        let edges: BTreeSet<Hyperedge> = edges.into_iter().collect();
        if let Some(e) = edges.iter().find(|e| e.len() < 2) {
            return Err(HypergraphError::LoopEdge(e.clone()));
        }
        for e in &edges {
            if let Some(v) = e.iter().find(|v| !vertices.contains(*v)) {
                return Err(HypergraphError::UnknownVertex { edge: e.clone(), vertex: v.clone() });
            }
        }
        if let Some((edge, superedge)) = first_containment(&edges) {
            return Err(HypergraphError::NonSimple { edge, superedge });
        }
        Ok(Hypergraph { vertices, edges })
    }

    /// Hypergraph whose vertex set is exactly the union of its edges.
    pub fn from_edges(edges: impl IntoIterator<Item = Hyperedge>) -> Result<Self, HypergraphError> {
        let edges: Vec<Hyperedge> = edges.into_iter().collect();
        let vertices: BTreeSet<VertexId> = edges.iter().flat_map(|e| e.iter().cloned()).collect();
        Hypergraph::new(vertices, edges)
    }

    /// Skips the simplicity check. Used for niche hypergraphs that are
    /// reported for diagnostics even when one neighborhood contains another.
    pub(crate) fn new_unchecked(vertices: BTreeSet<VertexId>, edges: BTreeSet<Hyperedge>) -> Self {
        Hypergraph { vertices, edges }
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Hyperedge> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: &Hyperedge) -> bool {
        self.edges.contains(e)
    }

    pub fn edges_containing<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = &'a Hyperedge> + 'a {
        self.edges.iter().filter(move |e| e.contains(v))
    }

    pub fn degree(&self, v: &VertexId) -> usize {
        self.edges_containing(v).count()
    }

    pub fn degrees(&self) -> BTreeMap<VertexId, usize> {
        let mut deg: BTreeMap<VertexId, usize> = self.vertices.iter().map(|v| (v.clone(), 0)).collect();
        for e in &self.edges {
            for v in e.iter() {
                *deg.get_mut(v).expect("edge member is a vertex") += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().values().copied().max().unwrap_or(0)
    }

    /// Maximum edge size; `None` when there are no edges.
    pub fn rank(&self) -> Option<usize> {
        self.edges.iter().map(Hyperedge::len).max()
    }

    /// Minimum edge size; `None` when there are no edges.
    pub fn anti_rank(&self) -> Option<usize> {
        self.edges.iter().map(Hyperedge::len).min()
    }

    pub fn is_linear(&self) -> bool {
        self.nonlinear_pair().is_none()
    }

    fn nonlinear_pair(&self) -> Option<(Hyperedge, Hyperedge, Vec<VertexId>)> {
        let edges: Vec<&Hyperedge> = self.edges.iter().collect();
        for (i, a) in edges.iter().enumerate() {
            for b in &edges[i + 1..] {
                let shared: Vec<VertexId> = a.shared_with(b).cloned().collect();
                if shared.len() > 1 {
                    return Some(((*a).clone(), (*b).clone(), shared));
                }
            }
        }
        None
    }

    /// Number of other edges meeting `e`.
    pub fn edge_degree(&self, e: &Hyperedge) -> usize {
        self.edges.iter().filter(|f| *f != e && f.intersects(e)).count()
    }

    /// Vertices of degree zero.
    pub fn isolated(&self) -> BTreeSet<VertexId> {
        self.degrees().into_iter().filter(|(_, d)| *d == 0).map(|(v, _)| v).collect()
    }

    /// Connected components as vertex sets, in order of smallest member.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for start in &self.vertices {
            if seen.contains(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v.clone());
                for e in self.edges_containing(v) {
                    for w in e.iter() {
                        if seen.insert(w) {
                            queue.push_back(w);
                        }
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Adds fresh isolated vertices (the `H ∪ I_k` construction).
    pub fn with_isolated(&self, extra: impl IntoIterator<Item = VertexId>) -> Hypergraph {
        let mut h = self.clone();
        h.vertices.extend(extra);
        h
    }

    pub fn report(&self) -> StructureReport {
        let degree = self.degrees();
        let edge_degree: BTreeMap<Hyperedge, usize> =
            self.edges.iter().map(|e| (e.clone(), self.edge_degree(e))).collect();
        let twigs = edge_degree.iter().filter(|(_, d)| **d <= 1).map(|(e, _)| e.clone()).collect();
        let trunks = edge_degree.iter().filter(|(_, d)| **d >= 2).map(|(e, _)| e.clone()).collect();
        let buds = degree.iter().filter(|(_, d)| **d == 1).map(|(v, _)| v.clone()).collect();
        let isolated = degree.iter().filter(|(_, d)| **d == 0).map(|(v, _)| v.clone()).collect();
        StructureReport {
            max_degree: degree.values().copied().max().unwrap_or(0),
            degree,
            rank: self.rank(),
            anti_rank: self.anti_rank(),
            is_linear: self.is_linear(),
            is_connected: self.is_connected(),
            edge_degree,
            twigs,
            trunks,
            buds,
            isolated,
        }
    }

    /// Edge-intersection graph as adjacency lists over the sorted edge list.
    fn line_graph(&self) -> (Vec<&Hyperedge>, Vec<Vec<usize>>) {
        let edges: Vec<&Hyperedge> = self.edges.iter().collect();
        let mut adj = vec![Vec::new(); edges.len()];
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if edges[i].intersects(edges[j]) {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        (edges, adj)
    }

    /// A cycle in the line graph, if any. Returned as the edges along the
    /// cycle, without repeating the first.
    fn line_graph_cycle(&self) -> Option<Vec<Hyperedge>> {
        let (edges, adj) = self.line_graph();
        let mut parent: Vec<Option<usize>> = vec![None; edges.len()];
        let mut visited = vec![false; edges.len()];
        for root in 0..edges.len() {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut stack = vec![root];
            while let Some(i) = stack.pop() {
                for &j in &adj[i] {
                    if Some(j) == parent[i] {
                        continue;
                    }
                    if visited[j] {
                        // Walk both ends up to their common ancestor.
                        let ancestors_i = ancestors(&parent, i);
                        let ancestors_j = ancestors(&parent, j);
                        let common = *ancestors_i.iter().find(|a| ancestors_j.contains(a))?;
                        let mut cycle: Vec<usize> = ancestors_i.iter().copied().take_while(|a| *a != common).collect();
                        cycle.push(common);
                        let tail: Vec<usize> = ancestors_j.iter().copied().take_while(|a| *a != common).collect();
                        cycle.extend(tail.into_iter().rev());
                        return Some(cycle.into_iter().map(|k| edges[k].clone()).collect());
                    }
                    visited[j] = true;
                    parent[j] = Some(i);
                    stack.push(j);
                }
            }
        }
        None
    }

    /// Host tree for a linear hypergraph whose line graph is a tree: each
    /// edge becomes a path starting at the vertex it shares with its parent
    /// in the rooted line graph. Every edge induces a connected subtree.
    ///
    /// Returns `None` when the hypergraph is not linear, has isolated
    /// vertices or its line graph is not a tree.
    pub fn host_tree(&self) -> Option<Vec<(VertexId, VertexId)>> {
        if self.edges.is_empty() || !self.is_linear() || !self.isolated().is_empty() {
            return None;
        }
        let (edges, adj) = self.line_graph();
        let line_edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
        if line_edges + 1 != edges.len() {
            return None;
        }
        let mut entry: Vec<Option<VertexId>> = vec![None; edges.len()];
        entry[0] = edges[0].iter().next().cloned();
        let mut seen = vec![false; edges.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut tree = Vec::new();
        while let Some(i) = queue.pop_front() {
            let start = entry[i].clone().expect("entry assigned before visit");
            let mut prev = start.clone();
            for v in edges[i].iter().filter(|v| **v != start) {
                tree.push((prev.clone(), v.clone()));
                prev = v.clone();
            }
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    entry[j] = edges[i].shared_with(edges[j]).next().cloned();
                    queue.push_back(j);
                }
            }
        }
        if seen.iter().all(|s| *s) {
            Some(tree)
        } else {
            None
        }
    }
}

fn ancestors(parent: &[Option<usize>], mut i: usize) -> Vec<usize> {
    let mut out = vec![i];
    while let Some(p) = parent[i] {
        out.push(p);
        i = p;
    }
    out
}

fn first_containment(edges: &BTreeSet<Hyperedge>) -> Option<(Hyperedge, Hyperedge)> {
    for e in edges {
        for f in edges {
            if e != f && e.is_subset(f) {
                return Some((e.clone(), f.clone()));
            }
        }
    }
    None
}

/// Validates a raw vertex/edge family and reports its structure.
pub fn validate(
    vertices: impl IntoIterator<Item = VertexId>,
    edges: impl IntoIterator<Item = Hyperedge>,
) -> Result<(Hypergraph, StructureReport), HypergraphError> {
    let h = Hypergraph::new(vertices, edges)?;
    let report = h.report();
    Ok((h, report))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub degree: BTreeMap<VertexId, usize>,
    pub max_degree: usize,
    pub rank: Option<usize>,
    pub anti_rank: Option<usize>,
    pub is_linear: bool,
    pub is_connected: bool,
    pub edge_degree: BTreeMap<Hyperedge, usize>,
    /// Edges meeting at most one other edge. A lone edge counts as a twig.
    pub twigs: BTreeSet<Hyperedge>,
    pub trunks: BTreeSet<Hyperedge>,
    pub buds: BTreeSet<VertexId>,
    pub isolated: BTreeSet<VertexId>,
}

/// Why a hypergraph is not a linear hypertree of maximum degree two with
/// all edges of size at least three.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    Disconnected { first: VertexId, second: VertexId },
    IsolatedVertex(VertexId),
    NotLinear { first: Hyperedge, second: Hyperedge, shared: Vec<VertexId> },
    MaxDegree { vertex: Option<VertexId>, degree: usize },
    SmallEdge(Hyperedge),
    TooFewEdges(usize),
    NotHypertree { cycle: Vec<Hyperedge> },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Disconnected { first, second } => {
                write!(f, "disconnected: {first} and {second} lie in different components")
            }
            Rejection::IsolatedVertex(v) => write!(f, "isolated vertex {v}"),
            Rejection::NotLinear { first, second, shared } => {
                write!(f, "not linear: {first} and {second} share {} vertices", shared.len())
            }
            Rejection::MaxDegree { vertex: Some(v), degree } => write!(f, "Δ={degree} at {v}"),
            Rejection::MaxDegree { vertex: None, degree } => write!(f, "Δ={degree}"),
            Rejection::SmallEdge(e) => write!(f, "edge {e} has {} < 3 vertices", e.len()),
            Rejection::TooFewEdges(m) => write!(f, "only {m} edges"),
            Rejection::NotHypertree { cycle } => {
                write!(f, "line graph has a cycle:")?;
                for e in cycle {
                    write!(f, " {e}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    InT,
    NotInT(Rejection),
}

impl Classification {
    pub fn is_in(&self) -> bool {
        matches!(self, Classification::InT)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::InT => f.write_str("IN_T"),
            Classification::NotInT(r) => write!(f, "NOT_IN_T: {r}"),
        }
    }
}

/// Membership in the class of connected linear hypertrees with maximum
/// degree exactly two and every edge of size at least three. The first
/// violated condition is reported with a witness.
pub fn classify_t(h: &Hypergraph) -> Classification {
    let reject = Classification::NotInT;
    let components = h.components();
    if components.len() > 1 {
        let first = components[0].iter().next().cloned().expect("component is nonempty");
        let second = components[1].iter().next().cloned().expect("component is nonempty");
        return reject(Rejection::Disconnected { first, second });
    }
    if let Some(v) = h.isolated().into_iter().next() {
        return reject(Rejection::IsolatedVertex(v));
    }
    if let Some((first, second, shared)) = h.nonlinear_pair() {
        return reject(Rejection::NotLinear { first, second, shared });
    }
    let degrees = h.degrees();
    let max = degrees.values().copied().max().unwrap_or(0);
    if max != 2 {
        let vertex = degrees.iter().find(|(_, d)| **d == max).map(|(v, _)| v.clone());
        return reject(Rejection::MaxDegree { vertex, degree: max });
    }
    if let Some(e) = h.edges.iter().find(|e| e.len() < 3) {
        return reject(Rejection::SmallEdge(e.clone()));
    }
    if h.edge_count() < 2 {
        return reject(Rejection::TooFewEdges(h.edge_count()));
    }
    if let Some(cycle) = h.line_graph_cycle() {
        return reject(Rejection::NotHypertree { cycle });
    }
    Classification::InT
}

/// One trunk together with every twig meeting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub trunk: Hyperedge,
    pub twigs: Vec<Hyperedge>,
    /// Where the trunk meets the rest of the hypertree, when that point is
    /// unique.
    pub attachment: Option<VertexId>,
}

impl Branch {
    pub fn edges(&self) -> impl Iterator<Item = &Hyperedge> {
        std::iter::once(&self.trunk).chain(self.twigs.iter())
    }

    /// The branch as a standalone hypergraph.
    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph::from_edges(self.edges().cloned()).expect("branch edges form a simple hypergraph")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchDecomposition {
    pub branches: Vec<Branch>,
    /// A branch whose removal leaves the hypertree connected. Its
    /// attachment is `None` exactly when it is the whole hypertree.
    pub removable: Branch,
}

impl BranchDecomposition {
    pub fn is_single_branch(&self) -> bool {
        self.removable.attachment.is_none()
    }
}

/// Splits a member of the class into branches and picks a removable one:
/// the trunk chosen is the smallest twig of the hypergraph left after
/// deleting every twig.
pub fn branch_decomposition(h: &Hypergraph) -> Result<BranchDecomposition, HypergraphError> {
    if let Classification::NotInT(r) = classify_t(h) {
        return Err(HypergraphError::NotInClass(r));
    }
    let report = h.report();
    if report.trunks.is_empty() {
        return Err(HypergraphError::NoTrunk);
    }
    let trunk_neighbours =
        |e: &Hyperedge| -> Vec<&Hyperedge> { report.trunks.iter().filter(|f| *f != e && f.intersects(e)).collect() };
    let branches: Vec<Branch> = report
        .trunks
        .iter()
        .map(|trunk| {
            let twigs = report.twigs.iter().filter(|t| t.intersects(trunk)).cloned().collect();
            let neighbours = trunk_neighbours(trunk);
            let attachment = match neighbours.as_slice() {
                [f] => f.shared_with(trunk).next().cloned(),
                _ => None,
            };
            Branch { trunk: trunk.clone(), twigs, attachment }
        })
        .collect();

    let removable = if branches.len() == 1 {
        branches[0].clone()
    } else {
        let leaf = branches
            .iter()
            .find(|b| trunk_neighbours(&b.trunk).len() == 1)
            .expect("the trunks of a hypertree form a tree with a leaf");
        assert!(!leaf.twigs.is_empty(), "a trunk that is a leaf among trunks must meet a twig");
        leaf.clone()
    };
    Ok(BranchDecomposition { branches, removable })
}

/// Deletes the branch's edges and every vertex left uncovered by the
/// deletion. Vertices that were already isolated are kept.
pub fn remove_branch(h: &Hypergraph, branch: &Branch) -> Result<Hypergraph, HypergraphError> {
    let removed: BTreeSet<&Hyperedge> = branch.edges().collect();
    if let Some(e) = removed.iter().find(|e| !h.contains_edge(e)) {
        return Err(HypergraphError::UnknownEdge((*e).clone()));
    }
    let edges: BTreeSet<Hyperedge> = h.edges.iter().filter(|e| !removed.contains(e)).cloned().collect();
    let covered: BTreeSet<&VertexId> = edges.iter().flat_map(|e| e.iter()).collect();
    let was_isolated = h.isolated();
    let vertices: BTreeSet<VertexId> =
        h.vertices.iter().filter(|v| covered.contains(v) || was_isolated.contains(*v)).cloned().collect();
    Ok(Hypergraph { vertices, edges })
}

/// Named hypergraph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    /// `edges` edges of `size` vertices, consecutive ones sharing one vertex.
    Hyperpath { edges: usize, size: usize },
    /// `edges` edges of `size` vertices sharing exactly one common center.
    Hypernova { edges: usize, size: usize },
    /// The petal flower with maximum degree `degree` and uniform `size`.
    Flower { degree: usize, size: usize },
    /// A random member of the class on `edges` edges.
    RandomT { edges: usize, min_size: usize, max_size: usize, seed: u64 },
}

impl FamilySpec {
    pub fn check(&self) -> Result<(), HypergraphError> {
        let bad = |msg: String| Err(HypergraphError::BadSpec(msg));
        match *self {
            FamilySpec::Hyperpath { edges, size } if edges < 1 || size < 2 => {
                bad(format!("hyperpath needs k >= 1 and r >= 2, got k={edges}, r={size}"))
            }
            FamilySpec::Hypernova { edges, size } if edges < 1 || size < 2 => {
                bad(format!("hypernova needs m >= 1 and r >= 2, got m={edges}, r={size}"))
            }
            FamilySpec::Flower { degree, size } if size < 3 || degree < 3 || degree > 2 * size => {
                bad(format!("flower needs r >= 3 and 3 <= s <= 2r, got s={degree}, r={size}"))
            }
            FamilySpec::RandomT { edges, min_size, max_size, .. } if edges < 2 || min_size < 3 || min_size > max_size => bad(format!(
                "random member needs at least 2 edges and 3 <= min size <= max size, got {edges} edges, sizes {min_size}..={max_size}"
            )),
            _ => Ok(()),
        }
    }
}

pub fn generate(spec: &FamilySpec) -> Result<Hypergraph, HypergraphError> {
    spec.check()?;
    match *spec {
        FamilySpec::Hyperpath { edges, size } => Ok(hyperpath(edges, size)),
        FamilySpec::Hypernova { edges, size } => Ok(hypernova(edges, size)),
        FamilySpec::Flower { degree, size } => Ok(FlowerLayout::new(size, degree)?.hypergraph()),
        FamilySpec::RandomT { edges, min_size, max_size, seed } => Ok(random_t(edges, min_size, max_size, seed)),
    }
}

fn width(max: usize) -> usize {
    max.to_string().len()
}

fn named(name: String) -> VertexId {
    VertexId::new(name).expect("generated names are valid")
}

fn hyperpath(k: usize, r: usize) -> Hypergraph {
    let last = k * (r - 1);
    let w = width(last);
    let v = |i: usize| named(format!("v{i:0w$}"));
    let edges = (0..k).map(|j| (j * (r - 1)..=j * (r - 1) + r - 1).map(v).collect());
    Hypergraph::from_edges(edges).expect("hyperpath is simple")
}

fn hypernova(m: usize, r: usize) -> Hypergraph {
    let (wi, wj) = (width(m), width(r - 1));
    let center = named("x".to_string());
    let edges = (1..=m)
        .map(|i| std::iter::once(center.clone()).chain((1..r).map(|j| named(format!("p{i:0wi$}_{j:0wj$}")))).collect());
    Hypergraph::from_edges(edges).expect("hypernova is simple")
}

/// The petal flower with every role named: a hypernova of `s - 1` petals
/// centered at `a`, a five-edge hyperpath whose first vertex is `a`, and an
/// extra edge whose first vertex is the second vertex of the second path
/// edge. All edges have `r` vertices and `a` has degree `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowerLayout {
    pub size: usize,
    pub degree: usize,
    pub center: VertexId,
    /// Five path edges, each listed in path order; the last vertex of one
    /// is the first vertex of the next.
    pub path: Vec<Vec<VertexId>>,
    /// `s - 1` petals, each starting with the center.
    pub petals: Vec<Vec<VertexId>>,
    /// The extra edge, starting with the vertex shared with the path.
    pub extra: Vec<VertexId>,
}

impl FlowerLayout {
    pub fn new(r: usize, s: usize) -> Result<Self, HypergraphError> {
        FamilySpec::Flower { degree: s, size: r }.check()?;
        let center = named("a".to_string());
        let wu = width(r);
        let u = |j: usize| named(format!("u{j:0wu$}"));
        let wp = width(5 * (r - 1));
        let path_vertex = |idx: usize| match idx {
            0 => center.clone(),
            _ if idx == r => u(1),
            _ => named(format!("p{idx:0wp$}")),
        };
        let path = (0..5).map(|i| (i * (r - 1)..=i * (r - 1) + r - 1).map(path_vertex).collect()).collect();
        let (wi, wj) = (width(s - 1), width(r));
        let petals = (1..s)
            .map(|i| {
                std::iter::once(center.clone()).chain((2..=r).map(|j| named(format!("w{i:0wi$}_{j:0wj$}")))).collect()
            })
            .collect();
        let extra = (1..=r).map(u).collect();
        Ok(FlowerLayout { size: r, degree: s, center, path, petals, extra })
    }

    pub fn hypergraph(&self) -> Hypergraph {
        let edges = self
            .path
            .iter()
            .chain(self.petals.iter())
            .chain(std::iter::once(&self.extra))
            .map(|e| e.iter().cloned().collect::<Hyperedge>());
        Hypergraph::from_edges(edges).expect("petal flower is simple")
    }
}

/// Uniform random labeled tree on `n` nodes via a Prüfer sequence, as an
/// edge list.
pub(crate) fn random_tree(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut tree = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n).find(|&i| degree[i] == 1).expect("a leaf always exists");
        tree.push((leaf.min(c), leaf.max(c)));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
    tree.push((rest[0], rest[1]));
    tree
}

fn random_t(b: usize, min_size: usize, max_size: usize, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree(b, &mut rng);
    let mut tree_degree = vec![0usize; b];
    for &(x, y) in &tree {
        tree_degree[x] += 1;
        tree_degree[y] += 1;
    }
    // Vertex ids: tree adjacencies first, then fresh buds.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); b];
    for (id, &(x, y)) in tree.iter().enumerate() {
        members[x].push(id);
        members[y].push(id);
    }
    let mut next = tree.len();
    for (node, m) in members.iter_mut().enumerate() {
        let size = rng.gen_range(min_size..=max_size).max(3).max(tree_degree[node]);
        while m.len() < size {
            m.push(next);
            next += 1;
        }
    }
    let w = width(next.saturating_sub(1));
    let edges = members.iter().map(|m| m.iter().map(|&i| named(format!("v{i:0w$}"))).collect::<Hyperedge>());
    Hypergraph::from_edges(edges).expect("random tree hypergraph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VertexId {
        VertexId::new(s).unwrap()
    }

    fn e(names: &[&str]) -> Hyperedge {
        names.iter().map(|s| v(s)).collect()
    }

    #[test]
    fn vertex_names_are_checked() {
        assert!(VertexId::new("").is_err());
        assert!(VertexId::new("a b").is_err());
        assert!(VertexId::new("a,b").is_err());
        assert!(VertexId::new("a_1").is_ok());
    }

    #[test]
    fn two_triples_report() {
        let h = Hypergraph::from_edges([e(&["a", "b", "c"]), e(&["c", "d", "e"])]).unwrap();
        let r = h.report();
        assert!(r.is_linear);
        assert!(r.is_connected);
        assert_eq!(r.max_degree, 2);
        assert_eq!(r.degree[&v("c")], 2);
        assert_eq!((r.rank, r.anti_rank), (Some(3), Some(3)));
        assert_eq!(r.twigs.len(), 2);
        assert!(r.trunks.is_empty());
        assert_eq!(r.buds, ["a", "b", "d", "e"].iter().map(|s| v(s)).collect());
        assert!(r.isolated.is_empty());
    }

    #[test]
    fn single_edge_is_a_twig_of_degree_zero() {
        let h = Hypergraph::from_edges([e(&["a", "b", "c"])]).unwrap();
        let r = h.report();
        assert_eq!(r.max_degree, 1);
        assert_eq!(r.edge_degree[&e(&["a", "b", "c"])], 0);
        assert_eq!(r.twigs.len(), 1);
        assert_eq!((r.rank, r.anti_rank), (Some(3), Some(3)));
    }

    #[test]
    fn rank_absent_without_edges() {
        let h = Hypergraph::new([v("a")], []).unwrap();
        let r = h.report();
        assert_eq!((r.rank, r.anti_rank), (None, None));
        assert_eq!(r.isolated.len(), 1);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            Hypergraph::from_edges([e(&["a", "b"]), e(&["a", "b", "c"])]),
            Err(HypergraphError::NonSimple { .. })
        ));
        assert!(matches!(Hypergraph::from_edges([e(&["a"])]), Err(HypergraphError::LoopEdge(_))));
        assert!(matches!(
            Hypergraph::new([v("a"), v("b")], [e(&["a", "b", "c"])]),
            Err(HypergraphError::UnknownVertex { vertex, .. }) if vertex == v("c")
        ));
    }

    #[test]
    fn classification_reasons() {
        let path = generate(&FamilySpec::Hyperpath { edges: 3, size: 3 }).unwrap();
        assert_eq!(classify_t(&path), Classification::InT);

        let nova = generate(&FamilySpec::Hypernova { edges: 3, size: 3 }).unwrap();
        assert_eq!(classify_t(&nova), Classification::NotInT(Rejection::MaxDegree { vertex: Some(v("x")), degree: 3 }));

        let flower = generate(&FamilySpec::Flower { degree: 6, size: 6 }).unwrap();
        assert_eq!(
            classify_t(&flower),
            Classification::NotInT(Rejection::MaxDegree { vertex: Some(v("a")), degree: 6 })
        );

        let single = Hypergraph::from_edges([e(&["a", "b", "c"])]).unwrap();
        assert!(matches!(classify_t(&single), Classification::NotInT(Rejection::MaxDegree { degree: 1, .. })));

        let small = Hypergraph::from_edges([e(&["a", "b"]), e(&["b", "c", "d"])]).unwrap();
        assert_eq!(classify_t(&small), Classification::NotInT(Rejection::SmallEdge(e(&["a", "b"]))));

        let with_isolated = path.with_isolated([v("zz")]);
        assert!(matches!(classify_t(&with_isolated), Classification::NotInT(Rejection::Disconnected { .. })));

        let nonlinear = Hypergraph::from_edges([e(&["a", "b", "c"]), e(&["b", "c", "d"])]).unwrap();
        assert!(matches!(classify_t(&nonlinear), Classification::NotInT(Rejection::NotLinear { .. })));
    }

    #[test]
    fn hypercycle_is_not_a_hypertree() {
        let h = Hypergraph::from_edges([e(&["a", "b", "c"]), e(&["c", "d", "e"]), e(&["e", "f", "a"])]).unwrap();
        match classify_t(&h) {
            Classification::NotInT(Rejection::NotHypertree { cycle }) => assert_eq!(cycle.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(h.host_tree().is_none());
    }

    #[test]
    fn decomposition_of_short_paths() {
        let p3 = generate(&FamilySpec::Hyperpath { edges: 3, size: 3 }).unwrap();
        let d = branch_decomposition(&p3).unwrap();
        assert!(d.is_single_branch());
        assert_eq!(d.branches.len(), 1);
        assert_eq!(d.removable.trunk, e(&["v2", "v3", "v4"]));
        assert_eq!(d.removable.twigs, vec![e(&["v0", "v1", "v2"]), e(&["v4", "v5", "v6"])]);

        let p4 = generate(&FamilySpec::Hyperpath { edges: 4, size: 3 }).unwrap();
        let d = branch_decomposition(&p4).unwrap();
        assert_eq!(d.removable.trunk, e(&["v2", "v3", "v4"]));
        assert_eq!(d.removable.twigs, vec![e(&["v0", "v1", "v2"])]);
        assert_eq!(d.removable.attachment, Some(v("v4")));
        let rest = remove_branch(&p4, &d.removable).unwrap();
        assert_eq!(rest, Hypergraph::from_edges([e(&["v4", "v5", "v6"]), e(&["v6", "v7", "v8"])]).unwrap());
        assert!(rest.is_connected());

        let two = Hypergraph::from_edges([e(&["a", "b", "c"]), e(&["c", "d", "e"])]).unwrap();
        assert_eq!(branch_decomposition(&two), Err(HypergraphError::NoTrunk));
    }

    #[test]
    fn remove_branch_errors_and_full_removal() {
        let p3 = generate(&FamilySpec::Hyperpath { edges: 3, size: 3 }).unwrap();
        let d = branch_decomposition(&p3).unwrap();
        assert_eq!(remove_branch(&p3, &d.removable).unwrap(), Hypergraph::default());
        let stranger = Branch { trunk: e(&["x", "y", "z"]), twigs: vec![], attachment: None };
        assert_eq!(remove_branch(&p3, &stranger), Err(HypergraphError::UnknownEdge(e(&["x", "y", "z"]))));
    }

    #[test]
    fn generators() {
        let single = generate(&FamilySpec::Hyperpath { edges: 1, size: 3 }).unwrap();
        assert_eq!(single.edge_count(), 1);
        assert_eq!(single.vertex_count(), 3);

        let star = generate(&FamilySpec::Hypernova { edges: 3, size: 2 }).unwrap();
        assert_eq!(star.vertex_count(), 4);
        assert_eq!(star.degree(&v("x")), 3);

        let f6 = generate(&FamilySpec::Flower { degree: 6, size: 6 }).unwrap();
        assert_eq!(f6.vertex_count(), 5 * 5 + (5 * 5 + 1) + 5);
        assert_eq!(f6.max_degree(), 6);
        assert_eq!(f6.degree(&v("a")), 6);
        assert!(f6.is_linear());
        assert_eq!((f6.rank(), f6.anti_rank()), (Some(6), Some(6)));

        assert!(matches!(generate(&FamilySpec::Flower { degree: 7, size: 3 }), Err(HypergraphError::BadSpec(_))));
        assert!(matches!(
            generate(&FamilySpec::RandomT { edges: 4, min_size: 2, max_size: 4, seed: 0 }),
            Err(HypergraphError::BadSpec(_))
        ));
    }

    #[test]
    fn flower_identifications() {
        let layout = FlowerLayout::new(4, 5).unwrap();
        assert_eq!(layout.path[0][0], layout.center);
        assert_eq!(layout.path[1][1], layout.extra[0]);
        for i in 0..4 {
            assert_eq!(layout.path[i][3], layout.path[i + 1][0]);
        }
        assert_eq!(layout.petals.len(), 4);
        assert!(layout.petals.iter().all(|p| p[0] == layout.center && p.len() == 4));
    }

    #[test]
    fn prufer_trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..20 {
            let t = random_tree(n, &mut rng);
            assert_eq!(t.len(), n - 1);
            let h = Hypergraph::from_edges(t.iter().map(|&(a, b)| e(&[&format!("n{a}"), &format!("n{b}")]))).unwrap();
            assert!(h.is_connected());
            assert_eq!(h.vertex_count(), n);
        }
    }
}
