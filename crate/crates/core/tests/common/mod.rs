//! Brute-force reference implementations shared by the integration tests.
//! They work on vertex indices and bitmasks and share no code with the
//! library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use niche_core::{Digraph, Hypergraph, VertexId};

/// Every orientation of the complete graph on `n` vertices where each pair
/// is absent, forward or backward.
pub fn orientations(n: usize) -> impl Iterator<Item = Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = 3u64.pow(pairs.len() as u32);
    (0..total).map(move |mut code| {
        let mut arcs = Vec::new();
        for &(i, j) in &pairs {
            match code % 3 {
                1 => arcs.push((i, j)),
                2 => arcs.push((j, i)),
                _ => {}
            }
            code /= 3;
        }
        arcs
    })
}

/// Depth-first search for a directed cycle.
pub fn acyclic(n: usize, arcs: &[(usize, usize)]) -> bool {
    fn visit(v: usize, out: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &w in &out[v] {
            if state[w] == 1 || (state[w] == 0 && !visit(w, out, state)) {
                return false;
            }
        }
        state[v] = 2;
        true
    }
    let mut out = vec![Vec::new(); n];
    for &(t, h) in arcs {
        out[t].push(h);
    }
    let mut state = vec![0u8; n];
    (0..n).all(|v| state[v] != 0 || visit(v, &out, &mut state))
}

/// In- and out-neighbourhoods of size at least two, as bitmasks.
pub fn niche_masks(n: usize, arcs: &[(usize, usize)]) -> BTreeSet<u32> {
    assert!(n <= 32);
    let mut ins = vec![0u32; n];
    let mut outs = vec![0u32; n];
    for &(t, h) in arcs {
        outs[t] |= 1 << h;
        ins[h] |= 1 << t;
    }
    ins.into_iter().chain(outs).filter(|m| m.count_ones() >= 2).collect()
}

pub fn naive_dag_count(n: usize) -> u64 {
    orientations(n).filter(|arcs| acyclic(n, arcs)).count() as u64
}

/// Whether some acyclic digraph on `H` plus `k` isolated vertices has
/// exactly `H`'s edges as niche hypergraph.
pub fn naive_realizable(h: &Hypergraph, k: usize) -> bool {
    let names: Vec<&VertexId> = h.vertices().iter().collect();
    let n = names.len() + k;
    let target: BTreeSet<u32> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |m, v| m | 1 << names.iter().position(|w| *w == v).unwrap()))
        .collect();
    orientations(n).any(|arcs| acyclic(n, &arcs) && niche_masks(n, &arcs) == target)
}

pub fn to_indexed(d: &Digraph) -> (Vec<VertexId>, Vec<(usize, usize)>) {
    let names: Vec<VertexId> = d.vertices().iter().cloned().collect();
    let pos = |v: &VertexId| names.iter().position(|w| w == v).unwrap();
    let arcs = d.arcs().iter().map(|(t, h)| (pos(t), pos(h))).collect();
    (names, arcs)
}

/// The niche hypergraph's edges recomputed from scratch, as vertex sets.
pub fn naive_niche_edges(d: &Digraph) -> BTreeSet<BTreeSet<VertexId>> {
    let (names, arcs) = to_indexed(d);
    let mut ins = vec![BTreeSet::new(); names.len()];
    let mut outs = vec![BTreeSet::new(); names.len()];
    for &(t, h) in &arcs {
        ins[h].insert(names[t].clone());
        outs[t].insert(names[h].clone());
    }
    ins.into_iter().chain(outs).filter(|s| s.len() >= 2).collect()
}

pub fn edge_sets(h: &Hypergraph) -> BTreeSet<BTreeSet<VertexId>> {
    h.edges().iter().map(|e| e.members().clone()).collect()
}

pub fn v(name: &str) -> VertexId {
    VertexId::new(name).unwrap()
}

pub fn hypergraph(vertices: &[&str], edges: &[&[&str]]) -> Hypergraph {
    Hypergraph::new(vertices.iter().map(|s| v(s)), edges.iter().map(|e| e.iter().map(|s| v(s)).collect())).unwrap()
}
