//! Contextual constraints: every utterance is checked against every rule.
//!
//! Rules file: JSON array of
//!
//! ```json
//! [{"rule_id": "on-topic", "severity": "violation",
//!   "predicate": {"kind": "topic_anchor_presence", "anchors": ["responsib"]}}]
//! ```

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::text::{normalized_tokens, padded};
use crate::transcript::Transcript;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warn,
    Violation,
}

/// The closed set of rule predicates. A predicate is *satisfied* by an
/// utterance; unsatisfied predicates produce findings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RulePredicate {
    /// At least one keyword occurs (whole tokens, case-insensitive).
    KeywordPresence { keywords: Vec<String> },
    /// No keyword occurs.
    KeywordAbsence { keywords: Vec<String> },
    /// Share of utterance tokens unseen in the previous `window` utterances is
    /// at most `max`. The first utterance always satisfies it.
    MaxNewTokenRatio { max: f64, window: usize },
    /// Some token of the utterance starts with one of the anchors.
    TopicAnchorPresence { anchors: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextRule {
    pub rule_id: String,
    pub predicate: RulePredicate,
    pub severity: Severity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleFinding {
    pub rule_id: String,
    pub utterance_index: usize,
    pub severity: Severity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintReport {
    pub findings: Vec<RuleFinding>,
    /// Predicate evaluations performed; always `utterances × rules`.
    pub evaluations: u64,
}

struct Utterance {
    padded: String,
    tokens: Vec<String>,
    token_set: HashSet<String>,
}

impl RulePredicate {
    fn satisfied(&self, at: usize, utterances: &[Utterance]) -> bool {
        let u = &utterances[at];
        match self {
            RulePredicate::KeywordPresence { keywords } => {
                keywords.iter().any(|k| u.padded.contains(&padded(k)))
            }
            RulePredicate::KeywordAbsence { keywords } => {
                !keywords.iter().any(|k| u.padded.contains(&padded(k)))
            }
            RulePredicate::MaxNewTokenRatio { max, window } => {
                if at == 0 || u.tokens.is_empty() || *window == 0 {
                    return true;
                }
                let lo = at.saturating_sub(*window);
                let new = u
                    .tokens
                    .iter()
                    .filter(|t| !utterances[lo..at].iter().any(|p| p.token_set.contains(*t)))
                    .count();
                (new as f64 / u.tokens.len() as f64) <= *max
            }
            RulePredicate::TopicAnchorPresence { anchors } => anchors.iter().any(|a| {
                let a = a.to_lowercase();
                u.tokens.iter().any(|t| t.starts_with(&a))
            }),
        }
    }
}

/// Evaluates each rule against each utterance exactly once. Findings are
/// ordered by utterance index, then rule position.
pub fn check_context_constraints(
    transcript: &Transcript,
    rules: &[ContextRule],
) -> ConstraintReport {
    let utterances: Vec<Utterance> = transcript
        .iter()
        .map(|t| {
            let tokens = normalized_tokens(&t.text);
            Utterance {
                padded: padded(&t.text),
                token_set: tokens.iter().cloned().collect(),
                tokens,
            }
        })
        .collect();

    let mut findings = Vec::new();
    let mut evaluations = 0u64;
    for (i, turn) in transcript.iter().enumerate() {
        for rule in rules {
            evaluations += 1;
            if !rule.predicate.satisfied(i, &utterances) {
                findings.push(RuleFinding {
                    rule_id: rule.rule_id.clone(),
                    utterance_index: turn.index,
                    severity: rule.severity,
                });
            }
        }
    }
    ConstraintReport {
        findings,
        evaluations,
    }
}

pub fn rules_from_json(text: &str) -> Result<Vec<ContextRule>, serde_json::Error> {
    serde_json::from_str(text)
}
