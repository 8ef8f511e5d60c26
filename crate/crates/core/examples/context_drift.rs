// Overlap-based drift detection and contextual rule checking.

use msa::dialogue::{detect_drift, generate_realignment, DriftDetector};
use msa::msl::{check_context_constraints, rules_from_json, SpeakerId};
use msa::{Transcript, TurnRole};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        ("alpha beta gamma", "alpha one two three four"),
        ("the budget review", "the budget review"),
        ("the budget review", "penguins swim in cold water"),
    ];
    for (prev, curr) in pairs {
        let r = detect_drift(prev, curr, 0.2)?;
        println!("{:.2} drifted={:<5} {curr:?}", r.overlap_ratio, r.drifted);
        if r.drifted {
            println!("  {}", generate_realignment(prev));
        }
    }
    let raw = DriftDetector::new(0.2)
        .raw()
        .check("Budget, please.", "budget please")?;
    println!("raw tokens keep punctuation: {:.2}", raw.overlap_ratio);

    let rules = rules_from_json(
        r#"[{"rule_id": "on-topic", "severity": "violation",
             "predicate": {"kind": "topic_anchor_presence", "anchors": ["budget"]}},
            {"rule_id": "novelty", "severity": "warn",
             "predicate": {"kind": "max_new_token_ratio", "max": 0.6, "window": 2}}]"#,
    )?;
    let mut t = Transcript::new();
    let who = SpeakerId::new("a")?;
    for text in [
        "the budget is late",
        "budget approval needs a signature",
        "penguins are great swimmers",
    ] {
        t.push(who.clone(), text, TurnRole::User, None)?;
    }
    let report = check_context_constraints(&t, &rules);
    println!("{} evaluations", report.evaluations);
    for f in report.findings {
        println!(
            "  turn {} {} ({:?})",
            f.utterance_index, f.rule_id, f.severity
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
