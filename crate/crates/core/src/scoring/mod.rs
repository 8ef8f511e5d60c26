//! Structural scoring: the 12-item rubric and its three 9-point totals,
//! speaker role shift rate, the reference heuristic mapping, keyword
//! pre-annotation and group statistics.
//!
//! ```
//! use msa::scoring::{total_metric, Metric, SubScores};
//!
//! let s = SubScores {
//!     pragmatic: [2, 2, 2, 3],
//!     responsibility: [2, 2, 1, 3],
//!     context: [2, 2, 1, 3],
//! };
//! assert_eq!(total_metric(&s, Metric::ResponsibilityChain).unwrap(), 8);
//! ```

mod annotate;
mod heuristic;
mod report;
mod rubric;
mod shift;
mod stats;

use thiserror::Error;

pub use annotate::{
    auto_annotate, focal_roles, focal_speaker, Annotation, Confidence, RubricRules,
};
pub use heuristic::{heuristic_score, heuristic_score_with, HeuristicScores};
pub use report::{score_transcript, CaseAnnotation, ScoreCard};
pub use rubric::{total_metric, Band, Metric, SubScores, Totals, SUB_MAX};
pub use shift::{count_shifts, role_shift_rate, shift_percent};
pub use stats::{
    mean_confidence_interval, two_sample_t, z_critical, ConfidenceInterval, GroupStats,
    TTestResult, TTestVariant,
};

#[derive(Debug, Error)]
pub enum ScoringError {
    #[error("{metric} item {position} is {value}, above its maximum {max}")]
    RangeViolation {
        metric: Metric,
        position: usize,
        value: u8,
        max: u8,
    },
    #[error("need at least 2 turns for a shift rate, got {0}")]
    TooFewTurns(usize),
    #[error("both groups have zero variance")]
    DegenerateVariance,
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("confidence level must be in (0, 1), got {0}")]
    InvalidLevel(f64),
}
