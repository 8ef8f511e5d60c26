use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::rubric::SubScores;
use crate::dialogue::{PragmaticRole, RolePolicy};
use crate::msl::SpeakerId;
use crate::text::{contains_phrase, content_words, normalized_tokens};
use crate::transcript::{DialogueTurn, Transcript, TurnRole};

/// Marker phrase lists used by [`auto_annotate`]. All lists match on token
/// boundaries, ignoring case and punctuation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RubricRules {
    /// Casual or joking register (P1, P4).
    pub tone_break: Vec<String>,
    /// Hedges and fillers that blur the register (P4).
    pub register_blend: Vec<String>,
    /// First-person or explicit attribution of a stance or duty (R1).
    pub attribution: Vec<String>,
    /// Back-references to earlier turns (R2).
    pub continuity: Vec<String>,
    /// Explicit hand-offs of responsibility (R3).
    pub handoff: Vec<String>,
    /// Deflection and topic dumping (R3, R4).
    pub evasion: Vec<String>,
    /// Echoing the other speaker's framing (C2).
    pub mirroring: Vec<String>,
    /// Clarification and topic repair (C3).
    pub repair: Vec<String>,
}

fn list(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Default for RubricRules {
    fn default() -> Self {
        RubricRules {
            tone_break: list(&["lol", "haha", "lmao", "jk", "meme", "omg"]),
            register_blend: list(&[
                "i mean",
                "kind of",
                "sort of",
                "i guess",
                "i dunno",
                "or something",
                "whatever",
                "lol",
                "you know",
            ]),
            attribution: list(&[
                "I believe",
                "I think",
                "I care",
                "I stay",
                "I will",
                "I'll",
                "I take",
                "I know",
                "I choose",
                "I can",
                "can I",
                "I want",
                "I don't",
                "I refuse",
                "I promise",
                "you should",
                "you promised",
                "you said",
                "no one is",
            ]),
            continuity: list(&[
                "as you said",
                "as I said",
                "like I said",
                "earlier",
                "you promised",
                "still",
                "again",
                "returning to",
                "back to",
            ]),
            handoff: list(&[
                "leave that to you",
                "leave it to you",
                "over to you",
                "up to you",
                "your turn",
                "your call",
            ]),
            evasion: list(&[
                "i dunno",
                "whatever",
                "lets talk about",
                "let's talk about",
                "or something",
                "who knows",
                "never mind",
                "who cares",
            ]),
            mirroring: list(&[
                "i see your point",
                "as you put it",
                "in other words",
                "you mean",
                "so you",
                "hold as in",
                "as in",
            ]),
            repair: list(&[
                "what i meant",
                "let me clarify",
                "to clarify",
                "i mean to say",
                "off topic",
                "back to",
                "to be clear",
            ]),
        }
    }
}

fn hits(text: &str, phrases: &[String]) -> usize {
    phrases.iter().filter(|p| contains_phrase(text, p)).count()
}

/// Per-sub-dimension confidence in `[0, 1]`, same layout as [`SubScores`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Confidence {
    pub pragmatic: [f64; 4],
    pub responsibility: [f64; 4],
    pub context: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub subscores: SubScores,
    pub confidence: Confidence,
}

// marker-based items are weak evidence; lexical-overlap items a bit better
const MARKER_SEEN: f64 = 0.5;
const MARKER_ABSENT: f64 = 0.3;
const LEXICAL: f64 = 0.6;

fn marker_conf(found: bool) -> f64 {
    if found {
        MARKER_SEEN
    } else {
        MARKER_ABSENT
    }
}

/// Speaker whose turns the rubric follows: the first `user` turn's speaker,
/// else whoever spoke first.
pub fn focal_speaker(dialog: &Transcript) -> Option<&SpeakerId> {
    dialog
        .iter()
        .find(|t| t.turn_role == TurnRole::User)
        .or_else(|| dialog.turns().first())
        .map(|t| &t.speaker)
}

/// Pragmatic roles of the focal speaker's turns, using the recorded
/// function role when present and `policy` otherwise.
pub fn focal_roles(dialog: &Transcript, policy: &RolePolicy) -> Vec<PragmaticRole> {
    let Some(focal) = focal_speaker(dialog) else {
        return Vec::new();
    };
    dialog
        .iter()
        .filter(|t| &t.speaker == focal)
        .map(|t| t.function_role.unwrap_or_else(|| policy.classify(&t.text)))
        .collect()
}

fn words(turn: &DialogueTurn) -> BTreeSet<String> {
    content_words(&turn.text).into_iter().collect()
}

fn shares(a: &BTreeSet<String>, b: &BTreeSet<String>) -> bool {
    a.intersection(b).next().is_some()
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Keyword and lexical-overlap approximation of the 12 rubric items.
///
/// This is a rough pre-annotation for a human rater, not a replacement;
/// every item carries a confidence.
pub fn auto_annotate(dialog: &Transcript, rules: &RubricRules, policy: &RolePolicy) -> Annotation {
    let turns = dialog.turns();
    let texts: Vec<&str> = turns.iter().map(|t| t.text.as_str()).collect();
    let bags: Vec<BTreeSet<String>> = turns.iter().map(words).collect();
    let pairs = turns.len().saturating_sub(1);

    // P1: casual breaks in register
    let tone_breaks = texts
        .iter()
        .filter(|t| hits(t, &rules.tone_break) > 0)
        .count();
    let p1 = match tone_breaks {
        0 => 2,
        1 => 1,
        _ => 0,
    };

    // P2: role stability of the focal speaker
    let roles = focal_roles(dialog, policy);
    let shift = super::shift::role_shift_rate(&roles).unwrap_or(0.0);
    let p2 = if shift <= 0.34 {
        2
    } else if shift <= 0.67 {
        1
    } else {
        0
    };

    // P3: fragments
    let fragments = texts
        .iter()
        .filter(|t| normalized_tokens(t).len() < 3)
        .count();
    let frag_ratio = ratio(fragments, turns.len());
    let p3 = if fragments == 0 {
        2
    } else if frag_ratio <= 0.2 {
        1
    } else {
        0
    };

    // P4: register blending
    let blends: usize = texts.iter().map(|t| hits(t, &rules.register_blend)).sum();
    let p4 = match blends {
        0 => 3,
        1 => 2,
        2 | 3 => 1,
        _ => 0,
    };

    // R1: explicit attribution
    let attributions: usize = texts.iter().map(|t| hits(t, &rules.attribution)).sum();
    let r1 = attributions.min(2) as u8;

    // R2: continuity, by marker or by a speaker reusing its own earlier words
    let continuity: usize = texts.iter().map(|t| hits(t, &rules.continuity)).sum();
    let mut self_links = 0;
    let mut self_pairs = 0;
    for (i, turn) in turns.iter().enumerate() {
        if let Some(j) = (0..i).rev().find(|&j| turns[j].speaker == turn.speaker) {
            self_pairs += 1;
            if shares(&bags[i], &bags[j]) {
                self_links += 1;
            }
        }
    }
    let self_link_ratio = ratio(self_links, self_pairs);
    let r2 = (continuity.min(1) + usize::from(self_link_ratio >= 0.3)).min(2) as u8;

    // R3: hand-offs versus evasions
    let handoffs: usize = texts.iter().map(|t| hits(t, &rules.handoff)).sum();
    let evasions: usize = texts.iter().map(|t| hits(t, &rules.evasion)).sum();
    let r3 = if evasions > 0 {
        0
    } else if handoffs > 0 {
        2
    } else {
        1
    };

    // R4: how the dialogue ends
    let r4 = match texts.last() {
        None => 0,
        Some(last) if hits(last, &rules.evasion) > 0 => 1,
        Some(last) if hits(last, &rules.attribution) > 0 => 3,
        Some(last) if last.contains('?') => 1,
        Some(_) => 2,
    };

    // C1: topic overlap between consecutive turns
    let linked = (1..turns.len())
        .filter(|&i| shares(&bags[i], &bags[i - 1]))
        .count();
    let topic = ratio(linked, pairs);
    let c1 = if topic >= 0.5 {
        2
    } else if topic >= 0.2 {
        1
    } else {
        0
    };

    // C2: reuse of the other speaker's latest words, plus explicit mirroring
    let mut mirror_pairs = 0;
    let mut mirrored = 0;
    for (i, turn) in turns.iter().enumerate() {
        if let Some(j) = (0..i).rev().find(|&j| turns[j].speaker != turn.speaker) {
            mirror_pairs += 1;
            if shares(&bags[i], &bags[j]) {
                mirrored += 1;
            }
        }
    }
    let mirror_ratio = ratio(mirrored, mirror_pairs);
    let mirror_markers: usize = texts.iter().map(|t| hits(t, &rules.mirroring)).sum();
    let c2_base: u8 = if mirror_ratio >= 0.5 {
        2
    } else if mirror_ratio >= 0.2 {
        1
    } else {
        0
    };
    let c2 = (c2_base + u8::from(mirror_markers > 0)).min(2);

    // C3: repair attempts and whether they held
    let repairs: usize = texts.iter().map(|t| hits(t, &rules.repair)).sum();
    let c3 = match (repairs > 0, c1) {
        (true, 1..) => 2,
        (true, 0) => 1,
        (false, 2) => 1,
        _ => 0,
    };

    // C4: shared ground across speakers
    let mut by_speaker: Vec<(&SpeakerId, BTreeSet<String>)> = Vec::new();
    for (turn, bag) in turns.iter().zip(&bags) {
        match by_speaker.iter_mut().find(|(s, _)| *s == &turn.speaker) {
            Some((_, acc)) => acc.extend(bag.iter().cloned()),
            None => by_speaker.push((&turn.speaker, bag.clone())),
        }
    }
    let mut shared: BTreeSet<&String> = BTreeSet::new();
    for (i, (_, a)) in by_speaker.iter().enumerate() {
        for (_, b) in &by_speaker[i + 1..] {
            shared.extend(a.intersection(b));
        }
    }
    let c4 = match shared.len() {
        0 => 0,
        1 => 1,
        2 | 3 => 2,
        _ => 3,
    };

    Annotation {
        subscores: SubScores {
            pragmatic: [p1, p2, p3, p4],
            responsibility: [r1, r2, r3, r4],
            context: [c1, c2, c3, c4],
        },
        confidence: Confidence {
            pragmatic: [
                marker_conf(tone_breaks > 0),
                if roles.len() >= 2 {
                    LEXICAL
                } else {
                    MARKER_ABSENT
                },
                LEXICAL,
                marker_conf(blends > 0),
            ],
            responsibility: [
                marker_conf(attributions > 0),
                if self_pairs > 0 {
                    LEXICAL
                } else {
                    marker_conf(continuity > 0)
                },
                marker_conf(handoffs + evasions > 0),
                MARKER_ABSENT,
            ],
            context: [
                if pairs > 0 { LEXICAL } else { MARKER_ABSENT },
                if mirror_pairs > 0 {
                    LEXICAL
                } else {
                    MARKER_ABSENT
                },
                marker_conf(repairs > 0),
                LEXICAL,
            ],
        },
    }
}
