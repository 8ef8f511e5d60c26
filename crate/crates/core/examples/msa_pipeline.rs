// One full pipeline step: infer tags, assign roles, check drift, generate.

use msa::dialogue::{run_pipeline, PipelineConfig, StubClient};
use msa::gcode::parse_tag_list;
use msa::msl::SpeakerId;
use msa::{Transcript, TurnRole};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let mut t = Transcript::new();
    t.push(
        SpeakerId::new("user")?,
        "Who owns the quarterly budget review?",
        TurnRole::User,
        None,
    )?;
    t.push(
        SpeakerId::new("model")?,
        "I will coordinate the budget review with finance.",
        TurnRole::Assistant,
        None,
    )?;
    t.push(
        SpeakerId::new("user")?,
        "Can you confirm the review deadline?",
        TurnRole::User,
        None,
    )?;

    let tags = parse_tag_list(["#T_HIGHASSERT", "#P_SELFREF", "#C_LOOP"])?;
    let result = run_pipeline(&t, &tags, &StubClient, &PipelineConfig::default())?;
    println!("tags:       {:?}", result.tags.to_tag_list());
    println!("directives: {}", result.directives);
    println!(
        "reply:      {} ({:?})",
        result.reply.text, result.reply.turn_role
    );
    println!("drift:      {}", result.drift_flag);
    println!("commitments: {}", result.chain.len());
    println!("totals:     {}", result.scorecard.totals.slash());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
