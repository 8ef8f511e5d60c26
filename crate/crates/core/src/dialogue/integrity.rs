use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::DialogueError;
use crate::text::{normalized_tokens, raw_tokens};

/// Overlap threshold of the reference detector.
pub const DEFAULT_DRIFT_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tokenization {
    /// Lowercase, strip punctuation, split on whitespace.
    #[default]
    Normalized,
    /// Plain whitespace split, byte-compatible with the reference detector.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub turn_index: usize,
    pub overlap_ratio: f64,
    pub drifted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realignment: Option<String>,
}

/// Context drift detector: `|unique(prev) ∩ unique(curr)| / |tokens(curr)|`
/// below the threshold (strictly) is drift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftDetector {
    pub threshold: f64,
    #[serde(default)]
    pub tokenization: Tokenization,
}

impl Default for DriftDetector {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_DRIFT_THRESHOLD,
            tokenization: Tokenization::Normalized,
        }
    }
}

impl DriftDetector {
    pub fn new(threshold: f64) -> Self {
        Self {
            threshold,
            ..Self::default()
        }
    }

    pub fn raw(mut self) -> Self {
        self.tokenization = Tokenization::Raw;
        self
    }

    fn tokens(&self, text: &str) -> Vec<String> {
        match self.tokenization {
            Tokenization::Normalized => normalized_tokens(text),
            Tokenization::Raw => raw_tokens(text),
        }
    }

    pub fn overlap_ratio(&self, prev: &str, curr: &str) -> Result<f64, DialogueError> {
        let curr_tokens = self.tokens(curr);
        if curr_tokens.is_empty() {
            return Err(DialogueError::EmptyUtterance);
        }
        let prev_set: HashSet<String> = self.tokens(prev).into_iter().collect();
        let curr_set: HashSet<&String> = curr_tokens.iter().collect();
        let shared = curr_set.iter().filter(|t| prev_set.contains(**t)).count();
        Ok(shared as f64 / curr_tokens.len() as f64)
    }

    /// Checks `curr` against `prev`. The report carries `turn_index` 0;
    /// callers that know the position set it.
    pub fn check(&self, prev: &str, curr: &str) -> Result<DriftReport, DialogueError> {
        let overlap_ratio = self.overlap_ratio(prev, curr)?;
        Ok(DriftReport {
            turn_index: 0,
            overlap_ratio,
            drifted: overlap_ratio < self.threshold,
            realignment: None,
        })
    }
}

pub fn detect_drift(
    prev_text: &str,
    curr_text: &str,
    threshold: f64,
) -> Result<DriftReport, DialogueError> {
    DriftDetector::new(threshold).check(prev_text, curr_text)
}

/// Realignment request appended to the directive stream. The text is
/// inserted verbatim.
pub fn generate_realignment(last_user_text: &str) -> String {
    format!("(please confirm first: '{last_user_text}')")
}
