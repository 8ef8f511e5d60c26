//! Minimal speaker logic: responsibility transfers `R(x, y)` between
//! speakers, closed responsibility loops, partial drift, and contextual
//! constraints over utterances.
//!
//! ```
//! use msa::msl::{detect_closed_loops, detect_partial_drift, ResponsibilityEdge, ResponsibilityGraph, SpeakerId};
//!
//! let id = |s: &str| SpeakerId::new(s).unwrap();
//! let graph = ResponsibilityGraph::new()
//!     .add_transfer(ResponsibilityEdge::new(id("a"), id("b"))).unwrap()
//!     .add_transfer(ResponsibilityEdge::new(id("b"), id("a"))).unwrap()
//!     .add_transfer(ResponsibilityEdge::new(id("b"), id("c"))).unwrap();
//!
//! assert_eq!(detect_closed_loops(&graph).unwrap().len(), 1);
//! assert!(detect_partial_drift(&graph).contains(&id("c")));
//! ```

mod constraints;
mod graph;
mod loops;

use thiserror::Error;

pub use constraints::{
    check_context_constraints, rules_from_json, ConstraintReport, ContextRule, RuleFinding,
    RulePredicate, Severity,
};
pub use graph::{GraphExchange, ResponsibilityEdge, ResponsibilityGraph, SpeakerId};
pub use loops::{
    analyze_loops, cyclic_components, detect_closed_loops, detect_partial_drift, ClosedLoop,
    LoopAnalysis, EXHAUSTIVE_NODE_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown speaker {0:?}")]
    UnknownSpeaker(String),
    #[error("invalid speaker id {0:?}: must be a non-empty token")]
    InvalidSpeakerId(String),
    #[error("graph has {nodes} nodes; exhaustive loop enumeration is limited to {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("malformed graph JSON: {0}")]
    Json(String),
}
