use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use super::GraphError;

/// A speaker identity: a non-empty token compared by exact string equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SpeakerId(String);

impl SpeakerId {
    pub fn new(id: impl Into<String>) -> Result<Self, GraphError> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(GraphError::InvalidSpeakerId(id));
        }
        Ok(SpeakerId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for SpeakerId {
    type Error = GraphError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        SpeakerId::new(s)
    }
}

impl From<SpeakerId> for String {
    fn from(id: SpeakerId) -> String {
        id.0
    }
}

impl fmt::Display for SpeakerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One responsibility transfer `R(from, to)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResponsibilityEdge {
    pub from: SpeakerId,
    pub to: SpeakerId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utterance_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl ResponsibilityEdge {
    pub fn new(from: SpeakerId, to: SpeakerId) -> Self {
        Self {
            from,
            to,
            utterance_index: None,
            label: None,
        }
    }

    pub fn at(mut self, utterance_index: usize) -> Self {
        self.utterance_index = Some(utterance_index);
        self
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// Directed multigraph of responsibility transfers over speakers.
///
/// Nodes and edges keep insertion order. `add_transfer` is O(1) amortized;
/// the graph counts its own elementary operations so callers can check the
/// linear tracking bound.
#[derive(Debug, Clone)]
pub struct ResponsibilityGraph {
    nodes: IndexSet<SpeakerId>,
    edges: Vec<ResponsibilityEdge>,
    out_degree: Vec<usize>,
    auto_register: bool,
    ops: u64,
}

impl Default for ResponsibilityGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl PartialEq for ResponsibilityGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for ResponsibilityGraph {}

impl ResponsibilityGraph {
    /// Empty graph that registers unknown endpoints on insert.
    pub fn new() -> Self {
        Self {
            nodes: IndexSet::new(),
            edges: Vec::new(),
            out_degree: Vec::new(),
            auto_register: true,
            ops: 0,
        }
    }

    /// Empty graph that rejects edges whose endpoints were not registered.
    pub fn strict() -> Self {
        Self {
            auto_register: false,
            ..Self::new()
        }
    }

    pub fn with_nodes<I: IntoIterator<Item = SpeakerId>>(mut self, nodes: I) -> Self {
        for n in nodes {
            self.register(n);
        }
        self
    }

    pub fn auto_register(&self) -> bool {
        self.auto_register
    }

    /// Registers a speaker, returning its node index.
    pub fn register(&mut self, id: SpeakerId) -> usize {
        self.ops += 1;
        let (idx, inserted) = self.nodes.insert_full(id);
        if inserted {
            self.out_degree.push(0);
        }
        idx
    }

    /// Value-style insert: consumes the graph and returns it with the edge appended.
    pub fn add_transfer(mut self, edge: ResponsibilityEdge) -> Result<Self, GraphError> {
        self.push_transfer(edge)?;
        Ok(self)
    }

    /// In-place insert for single-writer builders.
    pub fn push_transfer(&mut self, edge: ResponsibilityEdge) -> Result<(), GraphError> {
        let from = self.endpoint(&edge.from)?;
        self.endpoint(&edge.to)?;
        self.out_degree[from] += 1;
        self.edges.push(edge);
        self.ops += 2;
        Ok(())
    }

    fn endpoint(&mut self, id: &SpeakerId) -> Result<usize, GraphError> {
        self.ops += 1;
        match self.nodes.get_index_of(id) {
            Some(i) => Ok(i),
            None if self.auto_register => Ok(self.register(id.clone())),
            None => Err(GraphError::UnknownSpeaker(id.to_string())),
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &SpeakerId> {
        self.nodes.iter()
    }

    pub fn edges(&self) -> &[ResponsibilityEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, id: &SpeakerId) -> bool {
        self.nodes.contains(id)
    }

    pub fn out_degree(&self, id: &SpeakerId) -> Option<usize> {
        self.nodes.get_index_of(id).map(|i| self.out_degree[i])
    }

    /// Elementary operations performed by inserts so far.
    pub fn op_count(&self) -> u64 {
        self.ops
    }

    pub fn has_edge(&self, from: &SpeakerId, to: &SpeakerId) -> bool {
        self.edges.iter().any(|e| &e.from == from && &e.to == to)
    }

    pub(crate) fn node_at(&self, i: usize) -> &SpeakerId {
        &self.nodes[i]
    }

    /// Deduplicated successor lists by node index, parallel edges collapsed.
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![BTreeSet::new(); self.nodes.len()];
        for e in &self.edges {
            // endpoints are registered on insert
            let f = self.nodes.get_index_of(&e.from).expect("registered");
            let t = self.nodes.get_index_of(&e.to).expect("registered");
            adj[f].insert(t);
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Checks that `sequence` is a closed loop: every consecutive pair and
    /// the wrap-around pair are transfers in the graph.
    pub fn is_closed_loop_sequence(&self, sequence: &[SpeakerId]) -> bool {
        if sequence.is_empty() {
            return false;
        }
        let pairs: HashSet<(&SpeakerId, &SpeakerId)> =
            self.edges.iter().map(|e| (&e.from, &e.to)).collect();
        (0..sequence.len()).all(|i| {
            let next = &sequence[(i + 1) % sequence.len()];
            pairs.contains(&(&sequence[i], next))
        })
    }

    /// All pairs `(x, y)` with `y` reachable from `x` by one or more transfers.
    /// Not applied implicitly by any other operation.
    pub fn transitive_closure(&self) -> BTreeSet<(SpeakerId, SpeakerId)> {
        let adj = self.adjacency();
        let mut out = BTreeSet::new();
        for start in 0..adj.len() {
            let mut seen = vec![false; adj.len()];
            let mut queue: VecDeque<usize> = adj[start].iter().copied().collect();
            while let Some(v) = queue.pop_front() {
                if std::mem::replace(&mut seen[v], true) {
                    continue;
                }
                out.insert((self.nodes[start].clone(), self.nodes[v].clone()));
                queue.extend(adj[v].iter().copied().filter(|&w| !seen[w]));
            }
        }
        out
    }

    pub fn to_exchange(&self) -> GraphExchange {
        GraphExchange {
            nodes: self.nodes.iter().cloned().collect(),
            edges: self.edges.clone(),
        }
    }

    /// Builds a graph from the exchange format; edge endpoints must be listed in `nodes`.
    pub fn from_exchange(ex: GraphExchange) -> Result<Self, GraphError> {
        let mut g = ResponsibilityGraph::strict().with_nodes(ex.nodes);
        for e in ex.edges {
            g.push_transfer(e)?;
        }
        g.auto_register = true;
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let ex: GraphExchange =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::from_exchange(ex)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_exchange()).expect("graph serializes")
    }
}

/// JSON exchange shape: `{"nodes": [...], "edges": [{"from", "to", "utterance_index"?, "label"?}]}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExchange {
    #[serde(default)]
    pub nodes: Vec<SpeakerId>,
    #[serde(default)]
    pub edges: Vec<ResponsibilityEdge>,
}
