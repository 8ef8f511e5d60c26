//! Rule-based tag inference from dialogue context.
//!
//! Rules file: an ordered JSON array of
//! `{"predicate": "contains_char" | "ends_with", "arg": "?", "dimension": "tone", "value": "NEUTRAL"}`.
//! Rules run in file order against the final turn; later matches override earlier ones.

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use super::{Dimension, GCodeError, GCodeTag, Registry, SpeakerModuleConfig};
use crate::transcript::Transcript;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TextPredicate {
    ContainsChar,
    EndsWith,
}

impl TextPredicate {
    fn matches(self, text: &str, arg: &str) -> bool {
        match self {
            TextPredicate::ContainsChar => text.contains(arg),
            TextPredicate::EndsWith => text.trim_end().ends_with(arg),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InferenceRule {
    pub predicate: TextPredicate,
    pub arg: String,
    pub dimension: Dimension,
    pub value: String,
}

/// An ordered list of validated predicate → override rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceRules {
    rules: Vec<(InferenceRule, GCodeTag)>,
}

const BUILTIN_RULES: &str = include_str!("../../data/inference_rules.json");

static BUILTIN: LazyLock<InferenceRules> = LazyLock::new(|| {
    InferenceRules::from_json(BUILTIN_RULES, Registry::builtin())
        .expect("bundled inference rules are well-formed")
});

impl InferenceRules {
    /// Bundled rule set: a `?` in the final turn sets TONE to NEUTRAL.
    pub fn builtin() -> &'static InferenceRules {
        &BUILTIN
    }

    pub fn new(rules: Vec<InferenceRule>, registry: &Registry) -> Result<Self, GCodeError> {
        let rules = rules
            .into_iter()
            .map(|r| {
                if r.arg.is_empty() {
                    return Err(GCodeError::InvalidRule("empty predicate argument".into()));
                }
                let tag = GCodeTag::new(r.dimension, &r.value, registry)?;
                Ok((r, tag))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { rules })
    }

    pub fn from_json(text: &str, registry: &Registry) -> Result<Self, GCodeError> {
        let rules: Vec<InferenceRule> =
            serde_json::from_str(text).map_err(|e| GCodeError::InvalidRule(e.to_string()))?;
        Self::new(rules, registry)
    }

    /// Built-in rules with a different tone for interrogative turns.
    pub fn with_interrogative_tone(value: &str, registry: &Registry) -> Result<Self, GCodeError> {
        Self::new(
            vec![InferenceRule {
                predicate: TextPredicate::ContainsChar,
                arg: "?".into(),
                dimension: Dimension::Tone,
                value: value.into(),
            }],
            registry,
        )
    }

    pub fn rules(&self) -> impl Iterator<Item = &InferenceRule> {
        self.rules.iter().map(|(r, _)| r)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Returns `prev` with overrides from every rule whose predicate holds on
/// the final turn. Never removes a dimension.
pub fn infer_tags(
    context: &Transcript,
    prev: &SpeakerModuleConfig,
    rules: &InferenceRules,
) -> Result<SpeakerModuleConfig, GCodeError> {
    let last = context.last().ok_or(GCodeError::EmptyContext)?;
    let mut tags = prev.clone();
    for (rule, tag) in &rules.rules {
        if rule.predicate.matches(&last.text, &rule.arg) {
            tags.set(tag.clone());
        }
    }
    Ok(tags)
}
