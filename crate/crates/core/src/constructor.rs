//! Constructions of acyclic digraphs realizing hypergraphs as niche
//! hypergraphs.
//!
//! [`construct_good_digraph`] builds, for every connected linear hypertree
//! of maximum degree two whose edges have at least three vertices, an
//! acyclic digraph on exactly the same vertex set whose niche hypergraph is
//! the hypertree. It recurses on branches: a removable branch is split off,
//! both halves are realized, the shared vertex is made one-sided in each by
//! reversal and neighbourhood swaps, and the halves are merged.
//!
//! [`flower_digraph`] realizes the petal flowers, whose maximum degree
//! ranges over `3..=2r`.
//!
//! Every construction is checked with [`is_good_digraph`] before it is
//! returned, and failures carry the trace recorded so far.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{
    is_acyclic, is_good_digraph, niche_hypergraph, reverse, swap_neighborhoods, union, Arc, Digraph, DigraphError,
    Side, Violation,
};
use crate::hypergraph::{
    branch_decomposition, classify_t, remove_branch, Branch, Classification, FlowerLayout, Hyperedge, Hypergraph,
    HypergraphError, Rejection, VertexId,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("not in the class: {0}")]
    NotInT(Rejection),
    #[error("branch has {twigs} twig(s); the base construction needs at least two")]
    DegenerateBranch { twigs: usize },
    #[error("edge {0} has fewer than three vertices")]
    TooSmall(Hyperedge),
    #[error("twig {twig} does not meet trunk {trunk} in exactly one vertex")]
    TwigMismatch { trunk: Hyperedge, twig: Hyperedge },
    #[error("edges {e} and {f} do not meet exactly in {shared}")]
    SharedVertexMismatch { e: Hyperedge, f: Hyperedge, shared: VertexId },
    #[error("{vertex} is not a bud of the hypergraph")]
    NotABud { vertex: VertexId },
    #[error("no bud of {edge} other than {vertex} has an empty side")]
    NoSwapPartner { vertex: VertexId, edge: Hyperedge, trace: ConstructionTrace },
    #[error("{stage}: verification failed: {}", list(.violations))]
    VerificationFailed { stage: String, violations: Vec<Violation>, trace: ConstructionTrace },
    #[error("malformed trace: {0}")]
    BadTrace(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

fn list(vs: &[Violation]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A twig of a base branch with its three distinguished vertices: the one
/// shared with the trunk, the second, and the last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwigRoles {
    pub edge: Hyperedge,
    pub first: VertexId,
    pub second: VertexId,
    pub last: VertexId,
}

/// Role assignment for the single-branch construction. Twigs are in
/// construction order `e_1, ..., e_l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchLayout {
    pub trunk: Hyperedge,
    pub twigs: Vec<TwigRoles>,
}

impl BranchLayout {
    /// Twigs are ordered by edge; within a twig the second vertex is the
    /// smallest vertex off the trunk and the last is the next smallest.
    pub fn from_branch(branch: &Branch) -> Result<Self, ConstructError> {
        Self::from_branch_avoiding(branch, &BTreeSet::new())
    }

    /// Like [`BranchLayout::from_branch`], but keeps `protected` vertices
    /// out of the last-vertex role of twigs `e_1, ..., e_{l-2}`, the only
    /// buds the construction leaves with both neighbourhoods nonempty.
    /// Twigs with no unprotected vertex off the trunk are moved to the two
    /// final positions; within each group twigs stay in edge order.
    pub fn from_branch_avoiding(branch: &Branch, protected: &BTreeSet<VertexId>) -> Result<Self, ConstructError> {
        if branch.twigs.len() < 2 {
            return Err(ConstructError::DegenerateBranch { twigs: branch.twigs.len() });
        }
        if let Some(e) = branch.edges().find(|e| e.len() < 3) {
            return Err(ConstructError::TooSmall(e.clone()));
        }
        let free = |v: &VertexId| !protected.contains(v);
        let mut roles = Vec::with_capacity(branch.twigs.len());
        for t in &branch.twigs {
            let shared: Vec<&VertexId> = t.shared_with(&branch.trunk).collect();
            let [first] = shared.as_slice() else {
                return Err(ConstructError::TwigMismatch { trunk: branch.trunk.clone(), twig: t.clone() });
            };
            let off: Vec<&VertexId> = t.iter().filter(|v| v != first).collect();
            let second = off.iter().find(|c| off.iter().any(|o| o != *c && free(o))).unwrap_or(&off[0]);
            let last = off
                .iter()
                .filter(|o| *o != second)
                .find(|o| free(o))
                .or_else(|| off.iter().find(|o| *o != second))
                .expect("twig has three vertices");
            roles.push(TwigRoles {
                edge: t.clone(),
                first: (*first).clone(),
                second: (*second).clone(),
                last: (*last).clone(),
            });
        }
        roles.sort_by(|a, b| (protected.contains(&a.last), &a.edge).cmp(&(protected.contains(&b.last), &b.edge)));
        Ok(BranchLayout { trunk: branch.trunk.clone(), twigs: roles })
    }

    /// The four arc families of the single-branch construction:
    /// `e_1`'s second vertex points at the whole trunk, `e_1`'s first
    /// vertex points at `e_l`, `e_1` points at `e_l`'s first vertex, and
    /// each middle twig `e_i` points at the last vertex of `e_{i-1}`.
    pub fn digraph(&self) -> Result<Digraph, ConstructError> {
        let l = self.twigs.len();
        if l < 2 {
            return Err(ConstructError::DegenerateBranch { twigs: l });
        }
        let first = &self.twigs[0];
        let last = &self.twigs[l - 1];
        let mut arcs: BTreeSet<Arc> = BTreeSet::new();
        arcs.extend(self.trunk.iter().map(|v| (first.second.clone(), v.clone())));
        arcs.extend(last.edge.iter().map(|v| (first.first.clone(), v.clone())));
        arcs.extend(first.edge.iter().map(|v| (v.clone(), last.first.clone())));
        for i in 1..l - 1 {
            let head = &self.twigs[i - 1].last;
            arcs.extend(self.twigs[i].edge.iter().map(|v| (v.clone(), head.clone())));
        }
        let vertices = self.trunk.iter().chain(self.twigs.iter().flat_map(|t| t.edge.iter())).cloned();
        Ok(Digraph::new(vertices, arcs)?)
    }

    fn hypergraph(&self) -> Hypergraph {
        Hypergraph::from_edges(std::iter::once(self.trunk.clone()).chain(self.twigs.iter().map(|t| t.edge.clone())))
            .expect("branch is simple")
    }
}

/// Role assignment for two edges meeting in one vertex: `source` is a
/// vertex of `e` other than the shared one, `sink` a vertex of `f` other
/// than the shared one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoEdgeLayout {
    pub e: Hyperedge,
    pub f: Hyperedge,
    pub shared: VertexId,
    pub source: VertexId,
    pub sink: VertexId,
}

impl TwoEdgeLayout {
    pub fn new(e: &Hyperedge, f: &Hyperedge, shared: &VertexId) -> Result<Self, ConstructError> {
        for g in [e, f] {
            if g.len() < 3 {
                return Err(ConstructError::TooSmall(g.clone()));
            }
        }
        let meet: Vec<&VertexId> = e.shared_with(f).collect();
        if meet != [shared] {
            return Err(ConstructError::SharedVertexMismatch { e: e.clone(), f: f.clone(), shared: shared.clone() });
        }
        let source = e.iter().find(|v| *v != shared).expect("edge has other vertices").clone();
        let sink = f.iter().find(|v| *v != shared).expect("edge has other vertices").clone();
        Ok(TwoEdgeLayout { e: e.clone(), f: f.clone(), shared: shared.clone(), source, sink })
    }

    /// `N⁻(sink) = e` and `N⁺(source) = f`; no other neighbourhood has two
    /// vertices.
    pub fn digraph(&self) -> Result<Digraph, ConstructError> {
        let mut arcs: BTreeSet<Arc> = self.e.iter().map(|w| (w.clone(), self.sink.clone())).collect();
        arcs.extend(self.f.iter().filter(|w| **w != self.sink).map(|w| (self.source.clone(), w.clone())));
        arcs.insert((self.source.clone(), self.sink.clone()));
        let vertices = self.e.iter().chain(self.f.iter()).cloned();
        Ok(Digraph::new(vertices, arcs)?)
    }
}

/// Which of the two pending digraphs a trace step acts on: the one for the
/// hypertree left after removing a branch, or the one for the branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Remainder,
    Branch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceStep {
    BaseBranch { layout: BranchLayout },
    TwoEdge { layout: TwoEdgeLayout },
    RemoveBranch { trunk: Hyperedge, twigs: Vec<Hyperedge>, attachment: VertexId },
    Reverse { part: Part },
    Swap { part: Part, u: VertexId, x: VertexId },
    Merge { attachment: VertexId },
}

/// Ordered log of a recursive construction. Replaying it with
/// [`ConstructionTrace::replay`] rebuilds the digraph.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstructionTrace {
    pub steps: Vec<TraceStep>,
}

impl fmt::Display for ConstructionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} steps", self.steps.len())
    }
}

impl ConstructionTrace {
    /// Stack machine: base steps push a digraph, reversal and swap steps
    /// rewrite one of the top two, merges pop two and push their union.
    pub fn replay(&self) -> Result<Digraph, ConstructError> {
        let bad = |msg: &str| ConstructError::BadTrace(msg.to_string());
        let mut stack: Vec<Digraph> = Vec::new();
        for step in &self.steps {
            match step {
                TraceStep::BaseBranch { layout } => stack.push(layout.digraph()?),
                TraceStep::TwoEdge { layout } => stack.push(layout.digraph()?),
                TraceStep::RemoveBranch { .. } => {}
                TraceStep::Reverse { part } => {
                    let d = part_mut(&mut stack, *part).ok_or_else(|| bad("reverse on empty stack"))?;
                    *d = reverse(d);
                }
                TraceStep::Swap { part, u, x } => {
                    let d = part_mut(&mut stack, *part).ok_or_else(|| bad("swap on empty stack"))?;
                    *d = swap_neighborhoods(d, u, x)?;
                }
                TraceStep::Merge { .. } => {
                    let b = stack.pop().ok_or_else(|| bad("merge without branch"))?;
                    let a = stack.pop().ok_or_else(|| bad("merge without remainder"))?;
                    stack.push(union(&a, &b)?);
                }
            }
        }
        match (stack.pop(), stack.is_empty()) {
            (Some(d), true) => Ok(d),
            _ => Err(bad("trace does not reduce to one digraph")),
        }
    }
}

fn part_mut(stack: &mut [Digraph], part: Part) -> Option<&mut Digraph> {
    let n = stack.len();
    match part {
        Part::Branch => stack.last_mut(),
        Part::Remainder if n >= 2 => stack.get_mut(n - 2),
        Part::Remainder => None,
    }
}

fn verified(d: Digraph, h: &Hypergraph, stage: &str, trace: &ConstructionTrace) -> Result<Digraph, ConstructError> {
    let report = is_good_digraph(&d, h);
    if report.is_good() {
        Ok(d)
    } else {
        Err(ConstructError::VerificationFailed {
            stage: stage.to_string(),
            violations: report.violations,
            trace: trace.clone(),
        })
    }
}

/// The single-branch construction for a trunk with at least two twigs.
pub fn base_branch_digraph(branch: &Branch) -> Result<Digraph, ConstructError> {
    let layout = BranchLayout::from_branch(branch)?;
    let d = layout.digraph()?;
    verified(d, &layout.hypergraph(), "base branch", &ConstructionTrace::default())
}

/// The construction for two edges of size at least three meeting in
/// `shared`.
pub fn two_edge_digraph(e: &Hyperedge, f: &Hyperedge, shared: &VertexId) -> Result<Digraph, ConstructError> {
    let layout = TwoEdgeLayout::new(e, f, shared)?;
    let d = layout.digraph()?;
    let h = Hypergraph::from_edges([e.clone(), f.clone()])?;
    verified(d, &h, "two edges", &ConstructionTrace::default())
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum SideAction {
    Reverse,
    Swap(VertexId),
}

/// Turns a good digraph of `h` into one where the `side` neighbourhood of
/// the bud `u` is empty, by reversal and, if needed, by swapping `u` with
/// another bud of its edge.
pub fn free_side(d: &Digraph, h: &Hypergraph, u: &VertexId, side: Side) -> Result<Digraph, ConstructError> {
    let (out, _) = free_side_logged(d, h, u, side, &BTreeSet::new(), &ConstructionTrace::default())?;
    Ok(out)
}

/// Swap partners outside `protected` are preferred.
fn free_side_logged(
    d: &Digraph,
    h: &Hypergraph,
    u: &VertexId,
    side: Side,
    protected: &BTreeSet<VertexId>,
    trace: &ConstructionTrace,
) -> Result<(Digraph, Vec<SideAction>), ConstructError> {
    let mut edges = h.edges_containing(u);
    let (Some(edge), None) = (edges.next(), edges.next()) else {
        return Err(ConstructError::NotABud { vertex: u.clone() });
    };
    if d.neighbors(u, side).is_empty() {
        return Ok((d.clone(), Vec::new()));
    }
    let (out, actions) = if d.neighbors(u, side.opposite()).is_empty() {
        (reverse(d), vec![SideAction::Reverse])
    } else {
        let partners: Vec<&VertexId> = edge
            .iter()
            .filter(|x| *x != u && h.degree(x) == 1)
            .filter(|x| d.in_neighbors(x).is_empty() || d.out_neighbors(x).is_empty())
            .collect();
        let partner = partners.iter().find(|x| !protected.contains(**x)).or(partners.first());
        let Some(x) = partner.map(|x| (*x).clone()) else {
            return Err(ConstructError::NoSwapPartner { vertex: u.clone(), edge: edge.clone(), trace: trace.clone() });
        };
        let mut actions = Vec::new();
        let mut current = d.clone();
        if !current.neighbors(&x, side).is_empty() {
            current = reverse(&current);
            actions.push(SideAction::Reverse);
        }
        actions.push(SideAction::Swap(x.clone()));
        (swap_neighborhoods(&current, u, &x)?, actions)
    };
    debug_assert!(out.neighbors(u, side).is_empty());
    Ok((verified(out, h, "free side", trace)?, actions))
}

/// Realizes a member of the class with zero added vertices, returning the
/// digraph and the trace of the recursion.
pub fn construct_good_digraph(h: &Hypergraph) -> Result<(Digraph, ConstructionTrace), ConstructError> {
    if let Classification::NotInT(r) = classify_t(h) {
        return Err(ConstructError::NotInT(r));
    }
    // Degree-two vertices are where pieces get merged back together. Inside
    // a piece they are buds, and none of them may be left as the two-sided
    // bud of its edge: at its merge it must be one-sided in both halves.
    let joints: BTreeSet<VertexId> = h.degrees().into_iter().filter(|(_, d)| *d == 2).map(|(v, _)| v).collect();
    let mut builder = Builder { joints, trace: ConstructionTrace::default() };
    let d = builder.build(h)?;
    let trace = builder.trace;
    if !is_acyclic(&d).is_acyclic() || d.vertices() != h.vertices() {
        let violations = is_good_digraph(&d, h).violations;
        return Err(ConstructError::VerificationFailed { stage: "final".into(), violations, trace });
    }
    let d = verified(d, h, "final", &trace)?;
    Ok((d, trace))
}

struct Builder {
    joints: BTreeSet<VertexId>,
    trace: ConstructionTrace,
}

impl Builder {
    fn build(&mut self, h: &Hypergraph) -> Result<Digraph, ConstructError> {
        let decomposition = match branch_decomposition(h) {
            Err(HypergraphError::NoTrunk) => {
                let mut edges = h.edges().iter();
                let (e, f) = (edges.next().expect("two edges"), edges.next().expect("two edges"));
                let shared = e.shared_with(f).next().expect("edges meet").clone();
                let layout = TwoEdgeLayout::new(e, f, &shared)?;
                let d = layout.digraph()?;
                self.trace.steps.push(TraceStep::TwoEdge { layout });
                return verified(d, h, "two edges", &self.trace);
            }
            other => other?,
        };
        let branch = decomposition.removable;
        let Some(u) = branch.attachment.clone() else {
            let layout = BranchLayout::from_branch_avoiding(&branch, &self.joints)?;
            let d = layout.digraph()?;
            self.trace.steps.push(TraceStep::BaseBranch { layout });
            return verified(d, h, "base branch", &self.trace);
        };

        self.trace.steps.push(TraceStep::RemoveBranch {
            trunk: branch.trunk.clone(),
            twigs: branch.twigs.clone(),
            attachment: u.clone(),
        });
        let remainder = remove_branch(h, &branch)?;
        let standalone = branch.to_hypergraph();
        let d_rest = self.build(&remainder)?;
        let d_branch = self.build(&standalone)?;

        let (d_rest, actions) = free_side_logged(&d_rest, &remainder, &u, Side::Out, &self.joints, &self.trace)?;
        log_actions(&mut self.trace, Part::Remainder, &u, actions);
        let (d_branch, actions) = free_side_logged(&d_branch, &standalone, &u, Side::In, &self.joints, &self.trace)?;
        log_actions(&mut self.trace, Part::Branch, &u, actions);

        let merged = union(&d_rest, &d_branch)?;
        self.trace.steps.push(TraceStep::Merge { attachment: u });
        verified(merged, h, "merge", &self.trace)
    }
}

fn log_actions(trace: &mut ConstructionTrace, part: Part, u: &VertexId, actions: Vec<SideAction>) {
    for a in actions {
        trace.steps.push(match a {
            SideAction::Reverse => TraceStep::Reverse { part },
            SideAction::Swap(x) => TraceStep::Swap { part, u: u.clone(), x },
        });
    }
}

/// The petal flower with maximum degree `s` and uniform edge size `r`
/// together with a digraph realizing it.
///
/// For `s <= r` the extra vertices `v_5^2, ..., v_5^s` of the last path
/// edge point at the petals. Above `r`, petals `f_r, ..., f_{s-1}` instead
/// point at `u_1, ..., u_{s-r}` of the extra edge.
pub fn flower_digraph(r: usize, s: usize) -> Result<(Hypergraph, Digraph), ConstructError> {
    let layout = FlowerLayout::new(r, s)?;
    let h = layout.hypergraph();
    let p = &layout.path;
    let a = &layout.center;
    let mut arcs: BTreeSet<Arc> = BTreeSet::new();
    let mut point_at = |tail: &VertexId, edge: &[VertexId]| arcs.extend(edge.iter().map(|v| (tail.clone(), v.clone())));
    point_at(&p[4][0], &p[0]);
    point_at(&p[2][0], &p[3]);
    point_at(a, &layout.extra);
    let direct = s.min(r);
    for i in 2..=direct {
        point_at(&p[4][i - 1], &layout.petals[i - 2]);
    }
    let mut point_from =
        |edge: &[VertexId], head: &VertexId| arcs.extend(edge.iter().map(|v| (v.clone(), head.clone())));
    point_from(&p[1], &p[3][0]);
    point_from(&p[2], &p[3][1]);
    point_from(&p[4], a);
    for i in 1..=s.saturating_sub(r) {
        point_from(&layout.petals[r - 2 + i], &layout.extra[i - 1]);
    }
    let d = Digraph::new(h.vertices().iter().cloned(), arcs)?;
    // The bud condition is not part of the flower claim.
    let violations: Vec<Violation> = is_good_digraph(&d, &h)
        .violations
        .into_iter()
        .filter(|v| !matches!(v, Violation::TwoSidedBuds { .. }))
        .collect();
    if !violations.is_empty() {
        return Err(ConstructError::VerificationFailed {
            stage: "flower".into(),
            violations,
            trace: ConstructionTrace::default(),
        });
    }
    Ok((h, d))
}

/// Fails with a vertex of degree above twice the rank, the bound every
/// hypergraph with finite niche number obeys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NecessaryCheck {
    Pass,
    Fail { vertex: VertexId, degree: usize, rank: usize },
}

pub fn necessary_check(h: &Hypergraph) -> NecessaryCheck {
    let Some(rank) = h.rank() else {
        return NecessaryCheck::Pass;
    };
    match h.degrees().into_iter().filter(|(_, d)| *d > 2 * rank).max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0))) {
        Some((vertex, degree)) => NecessaryCheck::Fail { vertex, degree, rank },
        None => NecessaryCheck::Pass,
    }
}

/// Checks the realization claim of a digraph without the bud condition:
/// acyclic, same vertex set, niche hypergraph equal to `h` and simple.
pub fn realizes_exactly(d: &Digraph, h: &Hypergraph) -> bool {
    let nh = niche_hypergraph(d);
    is_acyclic(d).is_acyclic() && nh.simple && nh.hypergraph == *h
}
