mod common;

use std::collections::{BTreeMap, BTreeSet};

use niche_core::constructor::{realizes_exactly, NecessaryCheck};
use niche_core::digraph::Violation;
use niche_core::hypergraph::branch_decomposition;
use niche_core::io::{
    digraph_to_json, hypergraph_to_json, parse_digraph, parse_hypergraph, parse_trace, trace_to_json,
};
use niche_core::{
    classify_t, construct_good_digraph, flower_digraph, generate, is_good_digraph, necessary_check, FamilySpec,
    Hypergraph, VertexId,
};
use proptest::prelude::*;

use common::{acyclic, edge_sets, naive_niche_edges, to_indexed, v};

fn random_t() -> impl Strategy<Value = Hypergraph> {
    (2usize..=16, 3usize..=6, 0usize..=3, any::<u64>()).prop_map(|(edges, min_size, extra, seed)| {
        generate(&FamilySpec::RandomT { edges, min_size, max_size: min_size + extra, seed }).unwrap()
    })
}

fn connected(vertices: &BTreeSet<VertexId>, edges: &[(VertexId, VertexId)]) -> bool {
    let Some(start) = vertices.iter().next() else { return true };
    let mut seen = BTreeSet::from([start.clone()]);
    let mut stack = vec![start.clone()];
    while let Some(x) = stack.pop() {
        for (a, b) in edges {
            let next = if *a == x {
                b
            } else if *b == x {
                a
            } else {
                continue;
            };
            if vertices.contains(next) && seen.insert(next.clone()) {
                stack.push(next.clone());
            }
        }
    }
    seen.len() == vertices.len()
}

/// Each vertex has both neighbourhoods nonempty; at most one such bud per
/// edge.
fn two_sided_buds_per_edge(h: &Hypergraph, d: &niche_core::Digraph) -> usize {
    h.edges()
        .iter()
        .map(|e| {
            e.iter()
                .filter(|x| h.degree(x) == 1)
                .filter(|x| !d.in_neighbors(x).is_empty() && !d.out_neighbors(x).is_empty())
                .count()
        })
        .max()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_members_are_realized(h in random_t()) {
        prop_assert!(classify_t(&h).is_in());
        let (d, trace) = construct_good_digraph(&h).unwrap();
        prop_assert_eq!(d.vertices(), h.vertices());
        let (names, arcs) = to_indexed(&d);
        prop_assert!(acyclic(names.len(), &arcs));
        prop_assert_eq!(naive_niche_edges(&d), edge_sets(&h));
        prop_assert!(two_sided_buds_per_edge(&h, &d) <= 1);
        prop_assert!(is_good_digraph(&d, &h).is_good());
        prop_assert_eq!(&trace.replay().unwrap(), &d);
        prop_assert_eq!(&parse_trace(&trace_to_json(&trace)).unwrap(), &trace);
    }

    #[test]
    fn host_tree_witness(h in random_t()) {
        let tree = h.host_tree().unwrap();
        prop_assert_eq!(tree.len() + 1, h.vertex_count());
        prop_assert!(connected(h.vertices(), &tree));
        for e in h.edges() {
            let inside: Vec<_> = tree.iter().filter(|(a, b)| e.contains(a) && e.contains(b)).cloned().collect();
            prop_assert!(connected(e.members(), &inside));
        }
    }

    #[test]
    fn files_round_trip(h in random_t()) {
        let text = hypergraph_to_json(&h);
        prop_assert_eq!(&parse_hypergraph(&text).unwrap(), &h);
        let (d, _) = construct_good_digraph(&h).unwrap();
        let dtext = digraph_to_json(&d);
        prop_assert_eq!(&parse_digraph(&dtext).unwrap(), &d);
        let nh = niche_core::niche_hypergraph(&d);
        prop_assert!(nh.simple);
        prop_assert_eq!(hypergraph_to_json(&nh.hypergraph), text);
    }

    #[test]
    fn removable_branch_has_one_trunk_neighbour(h in random_t()) {
        match branch_decomposition(&h) {
            Ok(dec) => {
                let b = &dec.removable;
                prop_assert!(!b.twigs.is_empty());
                for t in &b.twigs {
                    prop_assert_eq!(t.shared_with(&b.trunk).count(), 1);
                    prop_assert!(h.edge_degree(t) <= 1 || dec.is_single_branch());
                }
                if let Some(u) = &b.attachment {
                    prop_assert!(b.trunk.contains(u));
                    prop_assert_eq!(h.degree(u), 2);
                }
            }
            Err(_) => prop_assert_eq!(h.edge_count(), 2),
        }
    }
}

#[test]
fn every_flower_in_range_is_realized() {
    for r in 3..=6 {
        for s in 3..=2 * r {
            let (h, d) = flower_digraph(r, s).unwrap();
            assert!(realizes_exactly(&d, &h), "r={r} s={s}");
            assert_eq!(naive_niche_edges(&d), edge_sets(&h));
            assert_eq!(d.vertices(), h.vertices());
            assert_eq!(h.max_degree(), s);
            assert!(h.is_linear());
            assert!(h.edges().iter().all(|e| e.len() == r));
            assert_eq!(h.degree(&v("a")), s);
            let report = is_good_digraph(&d, &h);
            assert!(report.violations.iter().all(|x| matches!(x, Violation::TwoSidedBuds { .. })));
            assert_eq!(necessary_check(&h), NecessaryCheck::Pass);
        }
    }
}

#[test]
fn flower_vertex_count() {
    // Hypernova with s-1 petals, a five-edge path and the extra edge, with
    // two vertices identified.
    for (r, s) in [(6, 6), (3, 3), (4, 8)] {
        let h = generate(&FamilySpec::Flower { degree: s, size: r }).unwrap();
        assert_eq!(h.vertex_count(), (s - 1) * (r - 1) + 1 + (5 * (r - 1) + 1) + r - 2);
        let degrees: BTreeMap<usize, usize> = h.degrees().values().fold(BTreeMap::new(), |mut m, d| {
            *m.entry(*d).or_default() += 1;
            m
        });
        assert_eq!(degrees.keys().max(), Some(&s));
    }
}
