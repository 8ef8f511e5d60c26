//! The speaker architecture runtime: role assignment and transition
//! monitoring, commitment tracking, context drift detection with
//! realignment, and the per-turn pipeline around a pluggable model client.

mod commitments;
mod integrity;
mod llm;
mod pipeline;
mod roles;

use thiserror::Error;

pub use commitments::{
    update_commitments, AbandonmentFlag, ChainState, Commitment, CommitmentStatus, PatternSet,
    StatusChange, DEFAULT_ABANDONMENT_TURNS,
};
pub use integrity::{
    detect_drift, generate_realignment, DriftDetector, DriftReport, Tokenization,
    DEFAULT_DRIFT_THRESHOLD,
};
pub use llm::{
    LlmClient, LlmError, RemoteClient, RemoteConfig, StubClient, ENV_BASE_URL, ENV_MODEL,
    ENV_RETRIES, ENV_TIMEOUT_MS, ENV_TOKEN,
};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineResult};
pub use roles::{
    assign_role, monitor_role_transition, PragmaticRole, RoleAssignment, RoleCue, RolePolicy,
    RoleRule, TransitionVerdict,
};

use crate::gcode::GCodeError;
use crate::msl::GraphError;
use crate::transcript::TranscriptError;

#[derive(Debug, Error)]
pub enum DialogueError {
    #[error("context is empty")]
    EmptyContext,
    #[error("utterance has no tokens")]
    EmptyUtterance,
    #[error("commitment {id}: {from:?} cannot become {to:?}")]
    InvalidTransition {
        id: String,
        from: CommitmentStatus,
        to: CommitmentStatus,
    },
    #[error("unknown commitment {0}")]
    UnknownCommitment(String),
    #[error("commitment {0}: transfers need a target speaker")]
    TransferNeedsTarget(String),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    GCode(#[from] GCodeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Transcript(#[from] TranscriptError),
}
