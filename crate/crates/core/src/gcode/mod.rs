//! The G-code pragmatic control language.
//!
//! Tags have the surface form `#<PREFIX>_<VALUE>` with prefixes `T`, `P`,
//! `C`, `CTX`, `L` and `E` for tone, position, closure, context alignment,
//! logical flow and affective tension. Values come from a closed registry
//! bundled as `data/registry.json`.
//!
//! ```
//! use msa::gcode::{build_prompt_directives, parse_tag_list};
//!
//! let config = parse_tag_list(["#T_SOFTASSERT", "#ctx_merge"]).unwrap();
//! assert_eq!(
//!     build_prompt_directives(&config).as_str(),
//!     "[TONE=SOFTASSERT] [CONTEXT_ALIGNMENT=MERGE]"
//! );
//! ```

mod config;
mod directives;
mod inference;
mod registry;
mod tag;

use thiserror::Error;

pub use config::{
    parse_config_object, parse_config_object_with, parse_tag_list, parse_tag_list_with,
    SpeakerModuleConfig,
};
pub use directives::{build_prompt_directives, DirectiveString};
pub use inference::{infer_tags, InferenceRule, InferenceRules, TextPredicate};
pub use registry::{Dimension, Registry};
pub use tag::{parse_tag, parse_tag_with, GCodeTag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GCodeError {
    #[error("unknown tag prefix {0:?}")]
    UnknownPrefix(String),
    #[error("value {value:?} is not registered for {dimension}")]
    UnknownValue { dimension: Dimension, value: String },
    #[error("malformed tag token {0:?}")]
    MalformedToken(String),
    #[error("dimension {0} configured twice")]
    DuplicateDimension(Dimension),
    #[error("unknown configuration key {0:?}")]
    UnknownKey(String),
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("invalid registry: {0}")]
    InvalidRegistry(String),
    #[error("invalid inference rule: {0}")]
    InvalidRule(String),
    #[error("context is empty")]
    EmptyContext,
}

impl GCodeError {
    /// Stable error code used in structured error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            GCodeError::UnknownPrefix(_) => "UnknownPrefix",
            GCodeError::UnknownValue { .. } => "UnknownValue",
            GCodeError::MalformedToken(_) => "MalformedToken",
            GCodeError::DuplicateDimension(_) => "DuplicateDimension",
            GCodeError::UnknownKey(_) => "UnknownKey",
            GCodeError::MalformedJson(_) => "MalformedJson",
            GCodeError::InvalidRegistry(_) => "InvalidRegistry",
            GCodeError::InvalidRule(_) => "InvalidRule",
            GCodeError::EmptyContext => "EmptyContext",
        }
    }
}
