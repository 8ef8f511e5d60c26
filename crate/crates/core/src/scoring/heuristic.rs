use serde::{Deserialize, Serialize};

use crate::dialogue::PatternSet;
use crate::transcript::Transcript;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicScores {
    pub role_continuity: u8,
    pub responsibility_trace: u8,
    pub context_integrity: u8,
}

/// Reference 1–9 mapping:
///
/// * role continuity: 9 if every consecutive pair of turns changes speaker, else 5;
/// * responsibility trace: 9 for three or more committing turns, 7 for two, else 5;
/// * context integrity: `max(1, 9 - 2 * short_turns)` where a short turn has
///   fewer than three whitespace tokens.
pub fn heuristic_score(dialog: &Transcript) -> HeuristicScores {
    heuristic_score_with(dialog, &PatternSet::default())
}

pub fn heuristic_score_with(dialog: &Transcript, patterns: &PatternSet) -> HeuristicScores {
    let turns = dialog.turns();
    let alternates = turns.windows(2).all(|w| w[0].speaker != w[1].speaker);
    let commits = turns
        .iter()
        .filter(|t| patterns.is_commitment(&t.text))
        .count();
    let short = turns
        .iter()
        .filter(|t| t.text.split_whitespace().count() < 3)
        .count();
    HeuristicScores {
        role_continuity: if alternates { 9 } else { 5 },
        responsibility_trace: match commits {
            3.. => 9,
            2 => 7,
            _ => 5,
        },
        context_integrity: 9usize.saturating_sub(2 * short).max(1) as u8,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msl::SpeakerId;
    use crate::transcript::TurnRole;

    fn dialog(turns: &[(&str, &str)]) -> Transcript {
        let mut t = Transcript::new();
        for (who, text) in turns {
            t.push(SpeakerId::new(*who).unwrap(), *text, TurnRole::User, None)
                .unwrap();
        }
        t
    }

    #[test]
    fn all_nines() {
        let d = dialog(&[
            ("a", "I will write the report"),
            ("b", "you should include the figures"),
            ("a", "the figures will be ready soon"),
            ("b", "great, thanks for that"),
        ]);
        assert_eq!(
            heuristic_score(&d),
            HeuristicScores {
                role_continuity: 9,
                responsibility_trace: 9,
                context_integrity: 9
            }
        );
    }

    #[test]
    fn same_speaker_twice() {
        let d = dialog(&[("a", "one two three"), ("a", "four five six")]);
        assert_eq!(heuristic_score(&d).role_continuity, 5);
    }

    #[test]
    fn commitment_mapping() {
        let two = dialog(&[("a", "we should go now"), ("b", "it will rain soon")]);
        assert_eq!(heuristic_score(&two).responsibility_trace, 7);
        let one = dialog(&[("a", "we should go now"), ("b", "sure thing then")]);
        assert_eq!(heuristic_score(&one).responsibility_trace, 5);
        let none = dialog(&[("a", "nothing here at all")]);
        assert_eq!(heuristic_score(&none).responsibility_trace, 5);
    }

    #[test]
    fn context_floor() {
        let d = dialog(&[
            ("a", "ok"),
            ("b", "yes"),
            ("a", "no"),
            ("b", "fine"),
            ("a", "hmm"),
        ]);
        assert_eq!(heuristic_score(&d).context_integrity, 1);
        let d = dialog(&[("a", "ok"), ("b", "a longer turn here")]);
        assert_eq!(heuristic_score(&d).context_integrity, 7);
    }
}
