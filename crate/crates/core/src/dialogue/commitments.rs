//! Commitment tracking (the responsibility node manager).
//!
//! Commitment patterns follow the reference tracker: a turn containing any
//! pattern becomes one commitment, de-duplicated by normalized text. Transfer
//! phrases hand the speaker's latest open commitment to the most recent other
//! speaker and record the transfer as a graph edge.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::DialogueError;
use crate::msl::{GraphExchange, ResponsibilityEdge, ResponsibilityGraph, SpeakerId};
use crate::text::{contains_phrase, content_words};
use crate::transcript::{DialogueTurn, Transcript};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommitmentStatus {
    Active,
    Updated,
    Transferred,
    Closed,
    Abandoned,
}

impl CommitmentStatus {
    /// Whether `self -> next` is a legal lifecycle step. Nothing returns to
    /// `active`; `closed` and `abandoned` are terminal.
    pub fn can_become(self, next: CommitmentStatus) -> bool {
        use CommitmentStatus::*;
        match self {
            Active | Updated => matches!(next, Updated | Transferred | Closed | Abandoned),
            Transferred => matches!(next, Closed | Abandoned),
            Closed | Abandoned => false,
        }
    }

    pub fn is_open(self) -> bool {
        matches!(self, CommitmentStatus::Active | CommitmentStatus::Updated)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusChange {
    pub status: CommitmentStatus,
    pub turn: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SpeakerId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commitment {
    pub id: String,
    pub holder: SpeakerId,
    pub text: String,
    pub status: CommitmentStatus,
    pub created_at: usize,
    pub history: Vec<StatusChange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transferred_to: Option<SpeakerId>,
}

/// Commitment and transfer phrase lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSet {
    /// Raw substrings, checked in order.
    pub commitment: Vec<String>,
    /// Matched on token boundaries, ignoring case and punctuation.
    pub transfer: Vec<String>,
    #[serde(default)]
    pub case_insensitive: bool,
}

impl Default for PatternSet {
    fn default() -> Self {
        PatternSet {
            commitment: vec!["I will".into(), "will".into(), "should".into()],
            transfer: vec![
                "I'll leave that to".into(),
                "I will leave that to".into(),
                "I leave that to you".into(),
                "I'll leave it to".into(),
                "over to you".into(),
            ],
            case_insensitive: false,
        }
    }
}

impl PatternSet {
    /// Number of commitment patterns found in `text`.
    pub fn commitment_hits(&self, text: &str) -> usize {
        if self.case_insensitive {
            let lower = text.to_lowercase();
            self.commitment
                .iter()
                .filter(|p| lower.contains(&p.to_lowercase()))
                .count()
        } else {
            self.commitment
                .iter()
                .filter(|p| text.contains(p.as_str()))
                .count()
        }
    }

    pub fn is_commitment(&self, text: &str) -> bool {
        self.commitment_hits(text) > 0
    }

    pub fn is_transfer(&self, text: &str) -> bool {
        self.transfer.iter().any(|p| contains_phrase(text, p))
    }
}

fn dedup_key(text: &str) -> String {
    text.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// Live commitments plus the derived transfer graph.
#[derive(Debug, Clone, Default)]
pub struct ChainState {
    commitments: Vec<Commitment>,
    graph: ResponsibilityGraph,
    seen_text: HashSet<String>,
    ingested: HashSet<usize>,
    open_by_holder: HashMap<SpeakerId, Vec<usize>>,
    recent_speakers: [Option<SpeakerId>; 2],
    ops: u64,
}

impl PartialEq for ChainState {
    fn eq(&self, other: &Self) -> bool {
        self.commitments == other.commitments && self.graph == other.graph
    }
}

impl Eq for ChainState {}

impl ChainState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn commitments(&self) -> &[Commitment] {
        &self.commitments
    }

    pub fn graph(&self) -> &ResponsibilityGraph {
        &self.graph
    }

    pub fn get(&self, id: &str) -> Option<&Commitment> {
        self.commitments.iter().find(|c| c.id == id)
    }

    pub fn len(&self) -> usize {
        self.commitments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.commitments.is_empty()
    }

    /// Elementary operations spent in `ingest` so far (graph inserts included).
    pub fn op_count(&self) -> u64 {
        self.ops + self.graph.op_count()
    }

    /// Processes one turn. Re-ingesting a turn index is a no-op.
    pub fn ingest(&mut self, turn: &DialogueTurn, patterns: &PatternSet) {
        self.ops += 1;
        if !self.ingested.insert(turn.index) {
            return;
        }
        let speaker = turn.speaker.clone();
        let other = match &self.recent_speakers {
            [Some(a), _] if *a != speaker => Some(a.clone()),
            [_, Some(b)] if *b != speaker => Some(b.clone()),
            _ => None,
        };
        self.ops += 1;
        if !self.graph.contains(&speaker) {
            self.graph.register(speaker.clone());
        }

        if patterns.is_transfer(&turn.text) {
            self.ops += 1;
            if let Some(target) = other {
                if let Some(idx) = self.latest_open(&speaker) {
                    self.apply_transfer(idx, target, turn.index);
                }
            }
        }

        self.ops += 1;
        if patterns.is_commitment(&turn.text) && self.seen_text.insert(dedup_key(&turn.text)) {
            let idx = self.commitments.len();
            self.commitments.push(Commitment {
                id: format!("c{}", idx + 1),
                holder: speaker.clone(),
                text: turn.text.clone(),
                status: CommitmentStatus::Active,
                created_at: turn.index,
                history: vec![StatusChange {
                    status: CommitmentStatus::Active,
                    turn: turn.index,
                    target: None,
                }],
                transferred_to: None,
            });
            self.open_by_holder
                .entry(speaker.clone())
                .or_default()
                .push(idx);
            self.ops += 2;
        }

        self.ops += 1;
        if self.recent_speakers[0].as_ref() != Some(&speaker) {
            let prev = self.recent_speakers[0].replace(speaker);
            self.recent_speakers[1] = prev;
        }
    }

    /// Most recent open commitment held by `holder`; closed entries are
    /// popped lazily so the amortized cost stays constant.
    fn latest_open(&mut self, holder: &SpeakerId) -> Option<usize> {
        let stack = self.open_by_holder.get_mut(holder)?;
        while let Some(&idx) = stack.last() {
            self.ops += 1;
            if self.commitments[idx].status.is_open() && &self.commitments[idx].holder == holder {
                return Some(idx);
            }
            stack.pop();
        }
        None
    }

    fn apply_transfer(&mut self, idx: usize, target: SpeakerId, turn: usize) {
        let c = &mut self.commitments[idx];
        c.status = CommitmentStatus::Transferred;
        c.transferred_to = Some(target.clone());
        c.history.push(StatusChange {
            status: CommitmentStatus::Transferred,
            turn,
            target: Some(target.clone()),
        });
        let edge = ResponsibilityEdge::new(c.holder.clone(), target)
            .at(turn)
            .labelled(c.id.clone());
        // auto-registering graph, cannot fail
        self.graph
            .push_transfer(edge)
            .expect("auto-registering graph");
    }

    /// Explicit transfer of a commitment to `target`.
    pub fn transfer(
        &mut self,
        id: &str,
        target: SpeakerId,
        turn: usize,
    ) -> Result<(), DialogueError> {
        let idx = self.index_of(id)?;
        self.check_transition(idx, CommitmentStatus::Transferred)?;
        self.apply_transfer(idx, target, turn);
        Ok(())
    }

    /// Manual status change (`updated`, `closed`, `abandoned`). Transfers go
    /// through [`ChainState::transfer`] since they need a target.
    pub fn set_status(
        &mut self,
        id: &str,
        status: CommitmentStatus,
        turn: usize,
    ) -> Result<(), DialogueError> {
        let idx = self.index_of(id)?;
        if status == CommitmentStatus::Transferred {
            return Err(DialogueError::TransferNeedsTarget(id.to_string()));
        }
        self.check_transition(idx, status)?;
        let c = &mut self.commitments[idx];
        c.status = status;
        c.history.push(StatusChange {
            status,
            turn,
            target: None,
        });
        Ok(())
    }

    fn index_of(&self, id: &str) -> Result<usize, DialogueError> {
        self.commitments
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| DialogueError::UnknownCommitment(id.to_string()))
    }

    fn check_transition(&self, idx: usize, to: CommitmentStatus) -> Result<(), DialogueError> {
        let from = self.commitments[idx].status;
        if from.can_become(to) {
            Ok(())
        } else {
            Err(DialogueError::InvalidTransition {
                id: self.commitments[idx].id.clone(),
                from,
                to,
            })
        }
    }

    /// Open commitments whose holder spoke at least `k` times since last
    /// referring to them (sharing a content word). Reporting only.
    pub fn abandonment_report(&self, transcript: &Transcript, k: usize) -> Vec<AbandonmentFlag> {
        let mut flags = Vec::new();
        for c in self.commitments.iter().filter(|c| c.status.is_open()) {
            let anchors: HashSet<String> = content_words(&c.text).into_iter().collect();
            let mut silent = 0;
            for turn in transcript
                .iter()
                .filter(|t| t.index > c.created_at && t.speaker == c.holder)
            {
                if content_words(&turn.text)
                    .iter()
                    .any(|w| anchors.contains(w))
                {
                    silent = 0;
                } else {
                    silent += 1;
                }
            }
            if silent >= k {
                flags.push(AbandonmentFlag {
                    commitment_id: c.id.clone(),
                    holder: c.holder.clone(),
                    silent_turns: silent,
                });
            }
        }
        flags
    }
}

/// Default number of unreferenced holder turns before a commitment is
/// reported as silently abandoned.
pub const DEFAULT_ABANDONMENT_TURNS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbandonmentFlag {
    pub commitment_id: String,
    pub holder: SpeakerId,
    pub silent_turns: usize,
}

/// Pure form: returns the state after ingesting `turn`.
pub fn update_commitments(
    mut state: ChainState,
    turn: &DialogueTurn,
    patterns: &PatternSet,
) -> ChainState {
    state.ingest(turn, patterns);
    state
}

#[derive(Serialize)]
struct ChainStateView<'a> {
    commitments: &'a [Commitment],
    graph: GraphExchange,
}

impl Serialize for ChainState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ChainStateView {
            commitments: &self.commitments,
            graph: self.graph.to_exchange(),
        }
        .serialize(serializer)
    }
}
