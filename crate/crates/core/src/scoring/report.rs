use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::annotate::{auto_annotate, focal_roles, Confidence, RubricRules};
use super::heuristic::{heuristic_score_with, HeuristicScores};
use super::rubric::{Metric, SubScores, Totals, SUB_MAX};
use super::shift::{role_shift_rate, shift_percent};
use super::ScoringError;
use crate::dialogue::{PatternSet, RolePolicy};
use crate::transcript::Transcript;

/// Human sub-score annotation of one dialogue, optionally with the
/// speaker's per-turn role labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseAnnotation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(flatten)]
    pub scores: SubScores,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roles: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreCard {
    pub subscores: SubScores,
    pub totals: Totals,
    /// `None` when fewer than two role labels are available.
    pub shift_rate: Option<f64>,
    pub shift_rate_percent: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<Confidence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heuristic: Option<HeuristicScores>,
}

impl ScoreCard {
    pub fn from_subscores<T: PartialEq>(
        subscores: SubScores,
        roles: Option<&[T]>,
    ) -> Result<Self, ScoringError> {
        let totals = subscores.totals()?;
        let shift_rate = roles.and_then(|r| role_shift_rate(r).ok());
        Ok(ScoreCard {
            subscores,
            totals,
            shift_rate,
            shift_rate_percent: shift_rate.map(shift_percent),
            confidence: None,
            heuristic: None,
        })
    }

    pub fn from_annotation(case: &CaseAnnotation) -> Result<Self, ScoringError> {
        ScoreCard::from_subscores(case.scores, case.roles.as_deref())
    }

    pub fn with_heuristic(mut self, h: HeuristicScores) -> Self {
        self.heuristic = Some(h);
        self
    }

    /// Plain-text table: one row per sub-dimension, grouped under the metric
    /// totals, followed by the shift rate.
    pub fn render_table(&self, title: &str) -> String {
        let mut out = String::new();
        if !title.is_empty() {
            let _ = writeln!(out, "{title}");
        }
        let _ = writeln!(out, "{:<30}{:>7}", "Dimension", "Score");
        for metric in Metric::ALL {
            let _ = writeln!(
                out,
                "{:<30}{:>7}",
                metric.title(),
                format!("{}/9", self.totals.get(metric))
            );
            let scores = self.subscores.metric(metric);
            for ((label, score), max) in metric.sub_labels().iter().zip(scores).zip(SUB_MAX) {
                let _ = writeln!(out, "  {:<28}{:>7}", label, format!("{score}/{max}"));
            }
        }
        let shift = match self.shift_rate_percent {
            Some(p) => format!("{p}%"),
            None => "n/a".to_string(),
        };
        let _ = writeln!(out, "{:<30}{:>7}", "Speaker Role Shift Rate", shift);
        if let Some(h) = &self.heuristic {
            let _ = writeln!(
                out,
                "{:<30}{:>7}",
                "Heuristic (role/resp/context)",
                format!(
                    "{}/{}/{}",
                    h.role_continuity, h.responsibility_trace, h.context_integrity
                )
            );
        }
        out
    }
}

/// Automatic score card for a transcript: keyword pre-annotation, the
/// focal speaker's role shift rate and the reference heuristic.
pub fn score_transcript(
    dialog: &Transcript,
    rubric: &RubricRules,
    policy: &RolePolicy,
    patterns: &PatternSet,
) -> ScoreCard {
    let annotation = auto_annotate(dialog, rubric, policy);
    let roles = focal_roles(dialog, policy);
    let mut card = ScoreCard::from_subscores(annotation.subscores, Some(&roles))
        .expect("auto annotation stays in range");
    card.confidence = Some(annotation.confidence);
    card.heuristic = Some(heuristic_score_with(dialog, patterns));
    card
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annotation_round_trip() {
        let text = r#"{"case":"case4","pragmatic":[1,1,1,1],"responsibility":[1,0,1,1],"context":[0,0,0,2],"roles":["declarant","challenger","evader","humorist","humorist"]}"#;
        let case: CaseAnnotation = serde_json::from_str(text).unwrap();
        let card = ScoreCard::from_annotation(&case).unwrap();
        assert_eq!(card.totals.slash(), "4/3/2");
        assert_eq!(card.shift_rate_percent, Some(75));
        assert_eq!(serde_json::to_string(&case).unwrap(), text);
    }

    #[test]
    fn table_layout() {
        let case = CaseAnnotation {
            case: None,
            scores: SubScores {
                pragmatic: [2, 2, 2, 3],
                responsibility: [2, 2, 1, 3],
                context: [2, 2, 1, 3],
            },
            roles: Some(vec!["declarant".into(); 5]),
        };
        let table = ScoreCard::from_annotation(&case)
            .unwrap()
            .render_table("Case 1");
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 1 + 1 + 15 + 1);
        assert!(lines[2].starts_with("Pragmatic Consistency") && lines[2].ends_with("9/9"));
        assert!(lines[7].starts_with("Responsibility Chain") && lines[7].ends_with("8/9"));
        assert!(lines.last().unwrap().ends_with("0%"));
    }

    #[test]
    fn missing_roles() {
        let card = ScoreCard::from_subscores::<String>(SubScores::default(), None).unwrap();
        assert_eq!(card.shift_rate, None);
        assert!(card.render_table("").ends_with("n/a\n"));
    }

    #[test]
    fn out_of_range_is_rejected() {
        let bad = SubScores {
            responsibility: [0, 0, 0, 9],
            ..SubScores::default()
        };
        assert!(ScoreCard::from_subscores::<String>(bad, None).is_err());
    }
}
