//! Closed responsibility loops and partial drift.
//!
//! Loops are elementary directed cycles, found with Johnson's circuit search
//! restricted to strongly connected components. Parallel edges collapse and
//! a self-transfer `R(x, x)` is a loop of length one.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::{GraphError, ResponsibilityGraph, SpeakerId};

/// Node limit for exhaustive loop enumeration.
pub const EXHAUSTIVE_NODE_LIMIT: usize = 10_000;

/// A cycle in canonical rotation: lexicographically smallest speaker first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClosedLoop {
    pub speakers: Vec<SpeakerId>,
}

impl ClosedLoop {
    /// Rotates a cycle so the smallest id comes first.
    pub fn canonical(mut speakers: Vec<SpeakerId>) -> Self {
        if let Some(min_at) = speakers
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
        {
            speakers.rotate_left(min_at);
        }
        ClosedLoop { speakers }
    }

    pub fn len(&self) -> usize {
        self.speakers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.speakers.is_empty()
    }

    /// `R(x, x)`: a speaker retaining its own responsibility.
    pub fn is_self_retention(&self) -> bool {
        self.speakers.len() == 1
    }
}

/// Result of [`analyze_loops`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum LoopAnalysis {
    Exhaustive {
        loops: Vec<ClosedLoop>,
    },
    /// Graph above the node limit: only components that contain a cycle.
    Components {
        components: Vec<Vec<SpeakerId>>,
    },
}

/// Every elementary cycle, canonically rotated, sorted and de-duplicated.
///
/// Refuses graphs above [`EXHAUSTIVE_NODE_LIMIT`] nodes.
pub fn detect_closed_loops(graph: &ResponsibilityGraph) -> Result<Vec<ClosedLoop>, GraphError> {
    if graph.node_count() > EXHAUSTIVE_NODE_LIMIT {
        return Err(GraphError::TooLarge {
            nodes: graph.node_count(),
            limit: EXHAUSTIVE_NODE_LIMIT,
        });
    }
    // Work in lexicographic node order so the minimal index is the minimal id.
    let mut order: Vec<usize> = (0..graph.node_count()).collect();
    order.sort_by(|&a, &b| graph.node_at(a).cmp(graph.node_at(b)));
    let mut rank = vec![0; order.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let by_index = graph.adjacency();
    let mut adj = vec![Vec::new(); order.len()];
    for (i, succ) in by_index.into_iter().enumerate() {
        adj[rank[i]] = succ.into_iter().map(|j| rank[j]).collect();
    }

    let loops: BTreeSet<ClosedLoop> = elementary_cycles(&adj)
        .into_iter()
        .map(|c| {
            ClosedLoop::canonical(
                c.into_iter()
                    .map(|r| graph.node_at(order[r]).clone())
                    .collect(),
            )
        })
        .collect();
    Ok(loops.into_iter().collect())
}

/// Exhaustive loops when the graph is small enough, cyclic components otherwise.
pub fn analyze_loops(graph: &ResponsibilityGraph) -> LoopAnalysis {
    match detect_closed_loops(graph) {
        Ok(loops) => LoopAnalysis::Exhaustive { loops },
        Err(_) => LoopAnalysis::Components {
            components: cyclic_components(graph),
        },
    }
}

/// Strongly connected components that contain at least one cycle
/// (size > 1, or a single node with a self-transfer). Each component is
/// sorted; components are sorted by their first member.
pub fn cyclic_components(graph: &ResponsibilityGraph) -> Vec<Vec<SpeakerId>> {
    let adj = graph.adjacency();
    let all = vec![true; adj.len()];
    let mut out: Vec<Vec<SpeakerId>> = strongly_connected(&adj, &all)
        .into_iter()
        .filter(|c| c.len() > 1 || adj[c[0]].contains(&c[0]))
        .map(|c| {
            let mut ids: Vec<SpeakerId> = c.into_iter().map(|i| graph.node_at(i).clone()).collect();
            ids.sort();
            ids
        })
        .collect();
    out.sort();
    out
}

/// Speakers with no outgoing transfer.
pub fn detect_partial_drift(graph: &ResponsibilityGraph) -> BTreeSet<SpeakerId> {
    graph
        .nodes()
        .filter(|id| graph.out_degree(id) == Some(0))
        .cloned()
        .collect()
}

/// Iterative Tarjan over the nodes enabled in `allowed`.
fn strongly_connected(adj: &[Vec<usize>], allowed: &[bool]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next_index = 0;

    for root in 0..n {
        if !allowed[root] || index[root] != UNVISITED {
            continue;
        }
        // (node, position in its successor list)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if !allowed[w] {
                    continue;
                }
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack holds the component");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                components.push(comp);
            }
        }
    }
    components
}

/// Johnson's elementary circuit search. Self-loops are reported directly;
/// the remaining search runs per non-trivial strongly connected component,
/// removing each start node once its circuits are exhausted.
fn elementary_cycles(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut cycles: Vec<Vec<usize>> = (0..n)
        .filter(|&v| adj[v].contains(&v))
        .map(|v| vec![v])
        .collect();
    let sub: Vec<Vec<usize>> = adj
        .iter()
        .enumerate()
        .map(|(v, s)| s.iter().copied().filter(|&w| w != v).collect())
        .collect();

    let mut pending: Vec<Vec<usize>> = strongly_connected(&sub, &vec![true; n])
        .into_iter()
        .filter(|c| c.len() > 1)
        .collect();
    let mut in_scc = vec![false; n];

    while let Some(mut scc) = pending.pop() {
        scc.sort_unstable();
        let start = scc[0];
        for &v in &scc {
            in_scc[v] = true;
        }
        let succ = |v: usize, in_scc: &[bool]| -> Vec<usize> {
            sub[v].iter().copied().filter(|&w| in_scc[w]).collect()
        };

        let mut path = vec![start];
        let mut blocked: HashSet<usize> = HashSet::from([start]);
        let mut closed: HashSet<usize> = HashSet::new();
        let mut b_sets: HashMap<usize, HashSet<usize>> = HashMap::new();
        let mut frames: Vec<(usize, Vec<usize>)> = vec![(start, succ(start, &in_scc))];

        while let Some((this, nbrs)) = frames.last_mut() {
            let this = *this;
            if let Some(next) = nbrs.pop() {
                if next == start {
                    cycles.push(path.clone());
                    closed.extend(path.iter().copied());
                } else if !blocked.contains(&next) {
                    path.push(next);
                    closed.remove(&next);
                    blocked.insert(next);
                    frames.push((next, succ(next, &in_scc)));
                    continue;
                }
            }
            if frames.last().is_some_and(|(_, n)| n.is_empty()) {
                if closed.contains(&this) {
                    unblock(this, &mut blocked, &mut b_sets);
                } else {
                    for w in succ(this, &in_scc) {
                        b_sets.entry(w).or_default().insert(this);
                    }
                }
                frames.pop();
                path.pop();
            }
        }

        for &v in &scc {
            in_scc[v] = false;
        }
        let mut rest = vec![false; n];
        for &v in &scc[1..] {
            rest[v] = true;
        }
        pending.extend(
            strongly_connected(&sub, &rest)
                .into_iter()
                .filter(|c| c.len() > 1),
        );
    }
    cycles
}

fn unblock(node: usize, blocked: &mut HashSet<usize>, b_sets: &mut HashMap<usize, HashSet<usize>>) {
    let mut stack = vec![node];
    while let Some(v) = stack.pop() {
        if blocked.remove(&v) {
            if let Some(set) = b_sets.get_mut(&v) {
                stack.extend(set.drain());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msl::ResponsibilityEdge;

    fn graph(edges: &[(&str, &str)]) -> ResponsibilityGraph {
        let mut g = ResponsibilityGraph::new();
        for (f, t) in edges {
            g.push_transfer(ResponsibilityEdge::new(
                SpeakerId::new(*f).unwrap(),
                SpeakerId::new(*t).unwrap(),
            ))
            .unwrap();
        }
        g
    }

    fn names(loops: &[ClosedLoop]) -> Vec<Vec<&str>> {
        loops
            .iter()
            .map(|l| l.speakers.iter().map(SpeakerId::as_str).collect())
            .collect()
    }

    #[test]
    fn triangle() {
        let loops = detect_closed_loops(&graph(&[("a", "b"), ("b", "c"), ("c", "a")])).unwrap();
        assert_eq!(names(&loops), vec![vec!["a", "b", "c"]]);
    }

    #[test]
    fn canonical_rotation_independent_of_insertion() {
        let loops = detect_closed_loops(&graph(&[("c", "a"), ("b", "c"), ("a", "b")])).unwrap();
        assert_eq!(names(&loops), vec![vec!["a", "b", "c"]]);
    }

    #[test]
    fn acyclic() {
        assert!(detect_closed_loops(&graph(&[("a", "b"), ("b", "c")]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn self_retention() {
        let loops = detect_closed_loops(&graph(&[("a", "a")])).unwrap();
        assert_eq!(names(&loops), vec![vec!["a"]]);
        assert!(loops[0].is_self_retention());
    }

    #[test]
    fn overlapping_cycles() {
        // a<->b, b<->c, a->c: cycles [a,b], [b,c], [a,c,b]
        let g = graph(&[
            ("a", "b"),
            ("b", "a"),
            ("b", "c"),
            ("c", "b"),
            ("a", "c"),
            ("a", "b"),
        ]);
        let loops = detect_closed_loops(&g).unwrap();
        assert_eq!(
            names(&loops),
            vec![vec!["a", "b"], vec!["a", "c", "b"], vec!["b", "c"]]
        );
    }

    #[test]
    fn complete_graph_on_four_nodes() {
        let ids = ["a", "b", "c", "d"];
        let mut edges = Vec::new();
        for x in ids {
            for y in ids {
                if x != y {
                    edges.push((x, y));
                }
            }
        }
        // 6 two-cycles + 8 three-cycles + 6 four-cycles
        assert_eq!(detect_closed_loops(&graph(&edges)).unwrap().len(), 20);
    }

    #[test]
    fn partial_drift() {
        let d = detect_partial_drift(&graph(&[("a", "b"), ("b", "c")]));
        assert_eq!(d.into_iter().map(String::from).collect::<Vec<_>>(), ["c"]);
        assert!(detect_partial_drift(&graph(&[("a", "b"), ("b", "a")])).is_empty());
        let lonely = ResponsibilityGraph::new().with_nodes([SpeakerId::new("a").unwrap()]);
        assert_eq!(detect_partial_drift(&lonely).len(), 1);
    }

    #[test]
    fn components_fallback() {
        let g = graph(&[("a", "b"), ("b", "a"), ("b", "c"), ("d", "d")]);
        let comps = cyclic_components(&g);
        let comps: Vec<Vec<&str>> = comps
            .iter()
            .map(|c| c.iter().map(SpeakerId::as_str).collect())
            .collect();
        assert_eq!(comps, vec![vec!["a", "b"], vec!["d"]]);
    }

    #[test]
    fn too_large_for_exhaustive_mode() {
        let ids = (0..=EXHAUSTIVE_NODE_LIMIT).map(|i| SpeakerId::new(format!("s{i}")).unwrap());
        let mut g = ResponsibilityGraph::new().with_nodes(ids);
        g.push_transfer(ResponsibilityEdge::new(
            SpeakerId::new("s0").unwrap(),
            SpeakerId::new("s1").unwrap(),
        ))
        .unwrap();
        g.push_transfer(ResponsibilityEdge::new(
            SpeakerId::new("s1").unwrap(),
            SpeakerId::new("s0").unwrap(),
        ))
        .unwrap();
        assert!(matches!(
            detect_closed_loops(&g),
            Err(GraphError::TooLarge { .. })
        ));
        match analyze_loops(&g) {
            LoopAnalysis::Components { components } => assert_eq!(components.len(), 1),
            other => panic!("expected components, got {other:?}"),
        }
    }

    #[test]
    fn long_chain_cycle_no_stack_overflow() {
        let n = 5_000;
        let mut g = ResponsibilityGraph::new();
        for i in 0..n {
            g.push_transfer(ResponsibilityEdge::new(
                SpeakerId::new(format!("n{i:05}")).unwrap(),
                SpeakerId::new(format!("n{:05}", (i + 1) % n)).unwrap(),
            ))
            .unwrap();
        }
        let loops = detect_closed_loops(&g).unwrap();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].len(), n);
    }
}
