use std::fmt;

use serde::{Deserialize, Serialize};

use super::ScoringError;

/// The three 9-point structural metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    PragmaticConsistency,
    ResponsibilityChain,
    ContextStability,
}

impl Metric {
    pub const ALL: [Metric; 3] = [
        Metric::PragmaticConsistency,
        Metric::ResponsibilityChain,
        Metric::ContextStability,
    ];

    pub fn title(self) -> &'static str {
        match self {
            Metric::PragmaticConsistency => "Pragmatic Consistency",
            Metric::ResponsibilityChain => "Responsibility Chain",
            Metric::ContextStability => "Context Stability",
        }
    }

    /// Sub-dimension labels in table order.
    pub fn sub_labels(self) -> [&'static str; 4] {
        match self {
            Metric::PragmaticConsistency => [
                "P1 Tone",
                "P2 Role Stability",
                "P3 Syntax Coherence",
                "P4 Discursive Clarity",
            ],
            Metric::ResponsibilityChain => [
                "R1 Attribution",
                "R2 Continuity",
                "R3 Legitimate Shift",
                "R4 Closure",
            ],
            Metric::ContextStability => [
                "C1 Thematic Stability",
                "C2 Mirroring",
                "C3 Repair",
                "C4 Presupposition",
            ],
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.title())
    }
}

/// Maximum per sub-dimension: three 0–2 items and a 0–3 item.
pub const SUB_MAX: [u8; 4] = [2, 2, 2, 3];

/// Rubric sub-scores: `{"pragmatic": [p1..p4], "responsibility": [r1..r4], "context": [c1..c4]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SubScores {
    pub pragmatic: [u8; 4],
    pub responsibility: [u8; 4],
    pub context: [u8; 4],
}

impl SubScores {
    pub fn metric(&self, which: Metric) -> [u8; 4] {
        match which {
            Metric::PragmaticConsistency => self.pragmatic,
            Metric::ResponsibilityChain => self.responsibility,
            Metric::ContextStability => self.context,
        }
    }

    pub fn validate(&self) -> Result<(), ScoringError> {
        for metric in Metric::ALL {
            for (position, (&value, &max)) in
                self.metric(metric).iter().zip(SUB_MAX.iter()).enumerate()
            {
                if value > max {
                    return Err(ScoringError::RangeViolation {
                        metric,
                        position: position + 1,
                        value,
                        max,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn totals(&self) -> Result<Totals, ScoringError> {
        Ok(Totals {
            pragmatic_consistency: total_metric(self, Metric::PragmaticConsistency)?,
            responsibility_chain: total_metric(self, Metric::ResponsibilityChain)?,
            context_stability: total_metric(self, Metric::ContextStability)?,
        })
    }
}

/// Sum of the four sub-dimension scores of one metric (0–9).
pub fn total_metric(sub: &SubScores, which: Metric) -> Result<u8, ScoringError> {
    let scores = sub.metric(which);
    for (position, (&value, &max)) in scores.iter().zip(SUB_MAX.iter()).enumerate() {
        if value > max {
            return Err(ScoringError::RangeViolation {
                metric: which,
                position: position + 1,
                value,
                max,
            });
        }
    }
    Ok(scores.iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Totals {
    pub pragmatic_consistency: u8,
    pub responsibility_chain: u8,
    pub context_stability: u8,
}

impl Totals {
    pub fn get(&self, which: Metric) -> u8 {
        match which {
            Metric::PragmaticConsistency => self.pragmatic_consistency,
            Metric::ResponsibilityChain => self.responsibility_chain,
            Metric::ContextStability => self.context_stability,
        }
    }

    /// `"9/8/8"`
    pub fn slash(&self) -> String {
        format!(
            "{}/{}/{}",
            self.pragmatic_consistency, self.responsibility_chain, self.context_stability
        )
    }
}

/// Total-score guide bands, applied uniformly to all three metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    /// 9
    Full,
    /// 6–8
    Mostly,
    /// 0–5
    Weak,
}

impl Band {
    pub fn of(total: u8) -> Band {
        match total {
            9.. => Band::Full,
            6..=8 => Band::Mostly,
            _ => Band::Weak,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Band::Full => "fully consistent",
            Band::Mostly => "mostly stable, minor gaps",
            Band::Weak => "fragmented or broken",
        }
    }
}
