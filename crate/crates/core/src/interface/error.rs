use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dialogue::{DialogueError, LlmError};
use crate::gcode::GCodeError;
use crate::msl::GraphError;
use crate::scoring::ScoringError;
use crate::transcript::TranscriptError;

#[derive(Debug, Error)]
pub enum InterfaceError {
    #[error(transparent)]
    GCode(#[from] GCodeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Transcript(#[from] TranscriptError),
    #[error(transparent)]
    Dialogue(#[from] DialogueError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("fixture {file} is corrupt: expected sha256 {expected}, found {actual}")]
    CorruptFixture {
        file: String,
        expected: String,
        actual: String,
    },
    #[error("fixture {0} is missing")]
    MissingFixture(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl InterfaceError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        InterfaceError::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            InterfaceError::GCode(e) => e.code(),
            InterfaceError::Graph(GraphError::UnknownSpeaker(_)) => "UnknownSpeaker",
            InterfaceError::Graph(GraphError::InvalidSpeakerId(_)) => "InvalidSpeakerId",
            InterfaceError::Graph(GraphError::TooLarge { .. }) => "TooLarge",
            InterfaceError::Graph(GraphError::Json(_)) => "MalformedJson",
            InterfaceError::Transcript(TranscriptError::Io(_)) => "Io",
            InterfaceError::Transcript(_) => "MalformedTranscript",
            InterfaceError::Dialogue(DialogueError::EmptyContext) => "EmptyContext",
            InterfaceError::Dialogue(DialogueError::EmptyUtterance) => "EmptyUtterance",
            InterfaceError::Dialogue(DialogueError::GCode(e)) => e.code(),
            InterfaceError::Dialogue(DialogueError::Llm(_)) | InterfaceError::Llm(_) => {
                "LlmUnavailable"
            }
            InterfaceError::Dialogue(_) => "DialogueError",
            InterfaceError::Scoring(ScoringError::RangeViolation { .. }) => "RangeViolation",
            InterfaceError::Scoring(ScoringError::TooFewTurns(_)) => "TooFewTurns",
            InterfaceError::Scoring(ScoringError::DegenerateVariance) => "DegenerateVariance",
            InterfaceError::Scoring(_) => "InvalidStatistics",
            InterfaceError::Json(_) => "MalformedJson",
            InterfaceError::Invalid(_) => "InvalidRequest",
            InterfaceError::Config(_) => "InvalidConfig",
            InterfaceError::CorruptFixture { .. } => "CorruptFixture",
            InterfaceError::MissingFixture(_) => "MissingFixture",
            InterfaceError::Io { .. } => "Io",
        }
    }

    /// True for errors caused by bad input rather than the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            InterfaceError::Transcript(TranscriptError::Io(_))
                | InterfaceError::Dialogue(DialogueError::Llm(_))
                | InterfaceError::Dialogue(DialogueError::Transcript(TranscriptError::Io(_)))
                | InterfaceError::Llm(_)
                | InterfaceError::CorruptFixture { .. }
                | InterfaceError::MissingFixture(_)
                | InterfaceError::Io { .. }
        )
    }

    /// Process exit code: 2 for validation errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.is_validation() {
            2
        } else {
            1
        }
    }

    pub fn body(&self) -> ErrorBody {
        let detail = match self {
            InterfaceError::GCode(GCodeError::UnknownValue { dimension, value }) => {
                Some(serde_json::json!({"dimension": dimension.key(), "value": value}))
            }
            InterfaceError::Scoring(ScoringError::RangeViolation {
                metric,
                position,
                value,
                max,
            }) => Some(serde_json::json!({
                "metric": metric, "position": position, "value": value, "max": max
            })),
            _ => None,
        };
        ErrorBody {
            code: self.code().to_string(),
            message: self.to_string(),
            detail,
        }
    }
}

/// Structured error body: `{"code": ..., "message": ..., "detail": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcode::parse_tag_list;

    #[test]
    fn codes_and_exit() {
        let e: InterfaceError = parse_tag_list(["#T_BANANA"]).unwrap_err().into();
        assert_eq!(e.code(), "UnknownValue");
        assert_eq!(e.exit_code(), 2);
        let body = e.body();
        assert_eq!(body.detail.unwrap()["value"], "BANANA");

        let e: InterfaceError = LlmError::Config("x".into()).into();
        assert_eq!(e.exit_code(), 1);
        let e = InterfaceError::io("x", std::io::Error::other("boom"));
        assert_eq!(e.exit_code(), 1);
    }
}
