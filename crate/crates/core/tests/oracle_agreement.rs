mod common;

use niche_core::oracle::{count_dags, Outcome};
use niche_core::{is_acyclic, niche_number_upto, realizes, Hyperedge, Hypergraph, NicheNumber, SearchBudget};
use proptest::prelude::*;

use common::{edge_sets, naive_dag_count, naive_niche_edges, naive_realizable, v};

#[test]
fn dag_counts_agree_with_orientation_sweep() {
    for n in 0..=5 {
        assert_eq!(count_dags(n), naive_dag_count(n), "n={n}");
    }
}

/// Simple hypergraphs on `n` vertices: the inclusion-maximal members of a
/// random family of subsets with at least two elements.
fn small_hypergraphs(n: usize) -> impl Strategy<Value = Hypergraph> {
    let subsets: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() >= 2).collect();
    proptest::sample::subsequence(subsets.clone(), 0..=4).prop_map(move |family| {
        let maximal = family.iter().filter(|&&m| !family.iter().any(|&o| o != m && o & m == m));
        let edges: Vec<Hyperedge> =
            maximal.map(|&m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| v(&format!("x{i}"))).collect()).collect();
        Hypergraph::new((0..n).map(|i| v(&format!("x{i}"))), edges).unwrap()
    })
}

fn check_against_naive(h: &Hypergraph, k: usize) -> Result<(), TestCaseError> {
    let result = realizes(h, k, &SearchBudget::default()).unwrap();
    let expected = naive_realizable(h, k);
    match result.outcome {
        Outcome::Realizable { digraph, .. } => {
            prop_assert!(expected);
            prop_assert!(is_acyclic(&digraph).is_acyclic());
            prop_assert_eq!(digraph.vertices().len(), h.vertex_count() + k);
            prop_assert_eq!(naive_niche_edges(&digraph), edge_sets(h));
        }
        Outcome::NotRealizable { .. } => prop_assert!(!expected),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 150, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn realizability_agrees_on_four_vertices(h in small_hypergraphs(4), k in 0usize..=1) {
        check_against_naive(&h, k)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn realizability_agrees_on_five_vertices(h in small_hypergraphs(5)) {
        check_against_naive(&h, 0)?;
    }
}

#[test]
fn single_triple_and_star() {
    let triple = Hypergraph::from_edges([["a", "b", "c"].iter().map(|s| v(s)).collect()]).unwrap();
    assert!(!naive_realizable(&triple, 0));
    assert!(naive_realizable(&triple, 1));
    assert!(matches!(niche_number_upto(&triple, 2, &SearchBudget::default()), Ok(NicheNumber::Exact { k: 1, .. })));

    let star = Hypergraph::from_edges(["a", "b", "c"].iter().map(|s| [v("x"), v(s)].into_iter().collect())).unwrap();
    assert!(!naive_realizable(&star, 0));
    assert!(!naive_realizable(&star, 1));
    assert_eq!(niche_number_upto(&star, 1, &SearchBudget::default()), Ok(NicheNumber::LowerBound(2)));
}

#[test]
fn two_triples_under_every_labeling() {
    let names: Vec<String> = (0..5).map(|i| format!("y{i}")).collect();
    let mut seen = std::collections::BTreeSet::new();
    for center in 0..5 {
        for mask in 0u32..32 {
            let rest: Vec<usize> = (0..5).filter(|&i| i != center).collect();
            let left: Vec<usize> = rest.iter().copied().filter(|i| mask >> i & 1 == 1).collect();
            if left.len() != 2 {
                continue;
            }
            let right: Vec<usize> = rest.iter().copied().filter(|i| mask >> i & 1 == 0).collect();
            let edge = |side: &[usize]| -> Hyperedge { side.iter().chain([&center]).map(|&i| v(&names[i])).collect() };
            let h = Hypergraph::from_edges([edge(&left), edge(&right)]).unwrap();
            if !seen.insert(edge_sets(&h)) {
                continue;
            }
            match niche_number_upto(&h, 0, &SearchBudget::default()).unwrap() {
                NicheNumber::Exact { k: 0, witness } => assert_eq!(naive_niche_edges(&witness), edge_sets(&h)),
                other => panic!("{h:?}: {other:?}"),
            }
        }
    }
    assert_eq!(seen.len(), 15);
}
