use std::collections::BTreeSet;

use msa::msl::{
    analyze_loops, check_context_constraints, cyclic_components, detect_closed_loops,
    detect_partial_drift, ClosedLoop, ContextRule, LoopAnalysis, ResponsibilityEdge,
    ResponsibilityGraph, RulePredicate, Severity, SpeakerId,
};
use msa::{Transcript, TurnRole};
use proptest::prelude::*;

fn sid(i: usize) -> SpeakerId {
    SpeakerId::new(format!("n{i}")).unwrap()
}

fn build(n: usize, edges: &[(usize, usize)]) -> ResponsibilityGraph {
    let mut g = ResponsibilityGraph::new().with_nodes((0..n).map(sid));
    for &(a, b) in edges {
        g.push_transfer(ResponsibilityEdge::new(sid(a), sid(b)))
            .unwrap();
    }
    g
}

fn graphs() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=8).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..=16)))
}

/// Reachability by repeated relaxation over an adjacency matrix.
fn closure_oracle(n: usize, edges: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| reach[i][j])
        .collect()
}

fn index(s: &SpeakerId) -> usize {
    s.as_str()[1..].parse().unwrap()
}

proptest! {
    #[test]
    fn closure_matches_matrix_oracle((n, edges) in graphs()) {
        let g = build(n, &edges);
        let got: BTreeSet<(usize, usize)> =
            g.transitive_closure().iter().map(|(a, b)| (index(a), index(b))).collect();
        prop_assert_eq!(got, closure_oracle(n, &edges));
    }

    #[test]
    fn every_loop_is_a_closed_sequence((n, edges) in graphs()) {
        let g = build(n, &edges);
        let loops = detect_closed_loops(&g).unwrap();
        for l in &loops {
            prop_assert!(g.is_closed_loop_sequence(&l.speakers));
            let distinct: BTreeSet<_> = l.speakers.iter().collect();
            prop_assert_eq!(distinct.len(), l.len());
            prop_assert_eq!(l, &ClosedLoop::canonical(l.speakers.clone()));
        }
        let sorted: Vec<_> = loops.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        prop_assert_eq!(loops, sorted);
    }

    #[test]
    fn analysis_independent_of_insertion_order(
        (n, edges) in graphs(),
        seed in any::<u64>(),
    ) {
        let mut shuffled = edges.clone();
        let len = shuffled.len();
        if len > 1 {
            let mut s = seed;
            for i in (1..len).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
        }
        let a = build(n, &edges);
        let b = build(n, &shuffled);
        prop_assert_eq!(detect_closed_loops(&a).unwrap(), detect_closed_loops(&b).unwrap());
        prop_assert_eq!(detect_partial_drift(&a), detect_partial_drift(&b));
        prop_assert_eq!(a.transitive_closure(), b.transitive_closure());
    }

    #[test]
    fn loop_members_are_exactly_cyclic_component_members((n, edges) in graphs()) {
        let g = build(n, &edges);
        let in_loops: BTreeSet<SpeakerId> =
            detect_closed_loops(&g).unwrap().into_iter().flat_map(|l| l.speakers).collect();
        let in_components: BTreeSet<SpeakerId> =
            cyclic_components(&g).into_iter().flatten().collect();
        prop_assert_eq!(in_loops, in_components);
    }

    #[test]
    fn drift_nodes_have_no_outgoing_edge((n, edges) in graphs()) {
        let g = build(n, &edges);
        for v in 0..n {
            let sinks = detect_partial_drift(&g);
            prop_assert_eq!(sinks.contains(&sid(v)), !edges.iter().any(|&(a, _)| a == v));
        }
    }

    #[test]
    fn json_exchange_round_trips((n, edges) in graphs()) {
        let g = build(n, &edges);
        let back = ResponsibilityGraph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(&back, &g);
    }

    #[test]
    fn constraint_evaluations_are_n_times_m(n in 1usize..40, m in 0usize..5) {
        let mut t = Transcript::new();
        for i in 0..n {
            t.push(sid(i % 3), format!("turn {i} about responsibility"), TurnRole::User, None).unwrap();
        }
        let rules: Vec<ContextRule> = (0..m)
            .map(|k| ContextRule {
                rule_id: format!("r{k}"),
                predicate: RulePredicate::KeywordPresence { keywords: vec![format!("{k}")] },
                severity: Severity::Warn,
            })
            .collect();
        let report = check_context_constraints(&t, &rules);
        prop_assert_eq!(report.evaluations, (n * m) as u64);
        prop_assert!(report.findings.len() <= n * m);
    }
}

#[test]
fn triangle_and_self_retention() {
    let g = build(4, &[(0, 1), (1, 2), (2, 0), (3, 3), (1, 0)]);
    let loops = detect_closed_loops(&g).unwrap();
    let names: Vec<Vec<&str>> = loops
        .iter()
        .map(|l| l.speakers.iter().map(SpeakerId::as_str).collect())
        .collect();
    assert_eq!(
        names,
        vec![vec!["n0", "n1"], vec!["n0", "n1", "n2"], vec!["n3"]]
    );
    assert!(loops[2].is_self_retention());
    assert!(detect_partial_drift(&g).is_empty());
}

#[test]
fn large_graph_falls_back_to_components() {
    let n = 10_001;
    let mut g = ResponsibilityGraph::new();
    for i in 0..n {
        g.push_transfer(ResponsibilityEdge::new(sid(i), sid((i + 1) % n)))
            .unwrap();
    }
    assert!(detect_closed_loops(&g).is_err());
    match analyze_loops(&g) {
        LoopAnalysis::Components { components } => {
            assert_eq!(components.len(), 1);
            assert_eq!(components[0].len(), n);
        }
        other => panic!("expected components, got {other:?}"),
    }
}

#[test]
fn strict_graph_rejects_unknown_speaker() {
    let g = ResponsibilityGraph::strict().with_nodes([sid(0)]);
    assert!(g
        .add_transfer(ResponsibilityEdge::new(sid(0), sid(1)))
        .is_err());
}
