//! Dialogue transcripts and their JSONL exchange format.
//!
//! One turn per line:
//!
//! ```text
//! {"speaker":"Speaker","text":"I care for him.","turn_role":"user","index":0}
//! {"speaker":"LLM","text":"Then what drives your care?","turn_role":"assistant","function_role":"CLARIFIER","index":1}
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dialogue::PragmaticRole;
use crate::msl::SpeakerId;

#[derive(Debug, Error)]
pub enum TranscriptError {
    #[error("line {line}: {source}")]
    Jsonl {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("turn {index} has empty text")]
    EmptyText { index: usize },
    #[error("turn indices must be consecutive: expected {expected}, found {found}")]
    NonConsecutiveIndex { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Turn-taking role, as used by the alternation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TurnRole {
    User,
    Assistant,
    System,
}

impl TurnRole {
    pub fn as_str(self) -> &'static str {
        match self {
            TurnRole::User => "user",
            TurnRole::Assistant => "assistant",
            TurnRole::System => "system",
        }
    }
}

impl fmt::Display for TurnRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogueTurn {
    pub speaker: SpeakerId,
    pub text: String,
    pub turn_role: TurnRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function_role: Option<PragmaticRole>,
    pub index: usize,
}

/// An ordered, consecutively indexed sequence of turns.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    turns: Vec<DialogueTurn>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a transcript from pre-indexed turns, checking the index and
    /// non-empty text invariants.
    pub fn from_turns(turns: Vec<DialogueTurn>) -> Result<Self, TranscriptError> {
        for (expected, turn) in turns.iter().enumerate() {
            if turn.index != expected {
                return Err(TranscriptError::NonConsecutiveIndex {
                    expected,
                    found: turn.index,
                });
            }
            if turn.text.trim().is_empty() {
                return Err(TranscriptError::EmptyText { index: turn.index });
            }
        }
        Ok(Self {
            turns,
            metadata: BTreeMap::new(),
        })
    }

    /// Appends a turn, assigning the next index.
    pub fn push(
        &mut self,
        speaker: SpeakerId,
        text: impl Into<String>,
        turn_role: TurnRole,
        function_role: Option<PragmaticRole>,
    ) -> Result<&DialogueTurn, TranscriptError> {
        let index = self.turns.len();
        let text = text.into();
        if text.trim().is_empty() {
            return Err(TranscriptError::EmptyText { index });
        }
        self.turns.push(DialogueTurn {
            speaker,
            text,
            turn_role,
            function_role,
            index,
        });
        Ok(&self.turns[index])
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn turns(&self) -> &[DialogueTurn] {
        &self.turns
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    pub fn last(&self) -> Option<&DialogueTurn> {
        self.turns.last()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DialogueTurn> {
        self.turns.iter()
    }

    pub fn from_jsonl_str(text: &str) -> Result<Self, TranscriptError> {
        Self::from_jsonl_reader(text.as_bytes())
    }

    /// Reads JSONL, skipping blank lines.
    pub fn from_jsonl_reader(reader: impl BufRead) -> Result<Self, TranscriptError> {
        let mut turns = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let turn: DialogueTurn =
                serde_json::from_str(&line).map_err(|source| TranscriptError::Jsonl {
                    line: i + 1,
                    source,
                })?;
            turns.push(turn);
        }
        Self::from_turns(turns)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for turn in &self.turns {
            // DialogueTurn contains only strings and enums, serialization cannot fail.
            out.push_str(&serde_json::to_string(turn).expect("turn serializes"));
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a Transcript {
    type Item = &'a DialogueTurn;
    type IntoIter = std::slice::Iter<'a, DialogueTurn>;

    fn into_iter(self) -> Self::IntoIter {
        self.turns.iter()
    }
}
