use std::fmt;

use serde::{Deserialize, Serialize};

use crate::text::contains_phrase;
use crate::transcript::{Transcript, TurnRole};

/// Pragmatic function of a turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PragmaticRole {
    InformationProvider,
    ContextConfirmer,
    ResponsibilityAcceptor,
    ResponsibilityDelegator,
    Clarifier,
    ConceptualBuilder,
    Challenger,
    Evader,
}

impl PragmaticRole {
    pub const ALL: [PragmaticRole; 8] = [
        PragmaticRole::InformationProvider,
        PragmaticRole::ContextConfirmer,
        PragmaticRole::ResponsibilityAcceptor,
        PragmaticRole::ResponsibilityDelegator,
        PragmaticRole::Clarifier,
        PragmaticRole::ConceptualBuilder,
        PragmaticRole::Challenger,
        PragmaticRole::Evader,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PragmaticRole::InformationProvider => "INFORMATION_PROVIDER",
            PragmaticRole::ContextConfirmer => "CONTEXT_CONFIRMER",
            PragmaticRole::ResponsibilityAcceptor => "RESPONSIBILITY_ACCEPTOR",
            PragmaticRole::ResponsibilityDelegator => "RESPONSIBILITY_DELEGATOR",
            PragmaticRole::Clarifier => "CLARIFIER",
            PragmaticRole::ConceptualBuilder => "CONCEPTUAL_BUILDER",
            PragmaticRole::Challenger => "CHALLENGER",
            PragmaticRole::Evader => "EVADER",
        }
    }
}

impl fmt::Display for PragmaticRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RoleCue {
    /// Raw substring, e.g. `?`.
    ContainsChar { arg: String },
    /// Any of the phrases, matched on token boundaries ignoring case and punctuation.
    Phrase { phrases: Vec<String> },
}

impl RoleCue {
    fn matches(&self, text: &str) -> bool {
        match self {
            RoleCue::ContainsChar { arg } => text.contains(arg.as_str()),
            RoleCue::Phrase { phrases } => phrases.iter().any(|p| contains_phrase(text, p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleRule {
    pub when: RoleCue,
    pub role: PragmaticRole,
}

/// Declarative keyword policy: first matching rule wins, else `fallback`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RolePolicy {
    pub rules: Vec<RoleRule>,
    pub fallback: PragmaticRole,
}

fn phrases(list: &[&str]) -> RoleCue {
    RoleCue::Phrase {
        phrases: list.iter().map(|s| s.to_string()).collect(),
    }
}

impl Default for RolePolicy {
    fn default() -> Self {
        RolePolicy {
            rules: vec![
                RoleRule {
                    when: RoleCue::ContainsChar { arg: "?".into() },
                    role: PragmaticRole::Clarifier,
                },
                RoleRule {
                    when: phrases(&[
                        "leave that to you",
                        "leave it to you",
                        "over to you",
                        "up to you",
                    ]),
                    role: PragmaticRole::ResponsibilityDelegator,
                },
                RoleRule {
                    when: phrases(&[
                        "I will",
                        "I'll",
                        "I shall",
                        "I promise",
                        "I am going to",
                        "I'm going to",
                        "I take",
                        "I can handle",
                        "let me",
                    ]),
                    role: PragmaticRole::ResponsibilityAcceptor,
                },
                RoleRule {
                    when: phrases(&[
                        "you should",
                        "you need to",
                        "you must",
                        "please",
                        "make sure you",
                    ]),
                    role: PragmaticRole::ResponsibilityDelegator,
                },
            ],
            fallback: PragmaticRole::InformationProvider,
        }
    }
}

impl RolePolicy {
    /// Role suggested by a single utterance.
    pub fn classify(&self, text: &str) -> PragmaticRole {
        self.rules
            .iter()
            .find(|r| r.when.matches(text))
            .map_or(self.fallback, |r| r.role)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleAssignment {
    pub turn_role: TurnRole,
    pub function_role: PragmaticRole,
}

/// Next speaker's roles. Turn role alternates (after `user` comes
/// `assistant`, otherwise `user`; an empty context counts as `system`).
/// The function role is the policy's reading of the final turn.
pub fn assign_role(context: &Transcript, policy: &RolePolicy) -> RoleAssignment {
    let last_role = context.last().map_or(TurnRole::System, |t| t.turn_role);
    let turn_role = if last_role == TurnRole::User {
        TurnRole::Assistant
    } else {
        TurnRole::User
    };
    let function_role = context
        .last()
        .map_or(policy.fallback, |t| policy.classify(&t.text));
    RoleAssignment {
        turn_role,
        function_role,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransitionVerdict {
    Smooth,
    Flagged,
}

/// A role change is flagged unless it comes with a structural cause.
pub fn monitor_role_transition(
    prev: PragmaticRole,
    next: PragmaticRole,
    cause: Option<&str>,
) -> TransitionVerdict {
    let caused = cause.is_some_and(|c| !c.trim().is_empty());
    if prev != next && !caused {
        TransitionVerdict::Flagged
    } else {
        TransitionVerdict::Smooth
    }
}
