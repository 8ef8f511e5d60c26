// Track commitments through a dialogue, including a handoff.

use msa::dialogue::{ChainState, CommitmentStatus, PatternSet, DEFAULT_ABANDONMENT_TURNS};
use msa::msl::SpeakerId;
use msa::{Transcript, TurnRole};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let (ana, ben) = (SpeakerId::new("ana")?, SpeakerId::new("ben")?);
    let mut t = Transcript::new();
    t.push(
        ana.clone(),
        "I will draft the migration plan",
        TurnRole::User,
        None,
    )?;
    t.push(
        ben.clone(),
        "You should include a rollback step",
        TurnRole::Assistant,
        None,
    )?;
    t.push(
        ana.clone(),
        "Actually I'll leave that to you",
        TurnRole::User,
        None,
    )?;
    t.push(
        ben.clone(),
        "Fine, the plan is mine now",
        TurnRole::Assistant,
        None,
    )?;

    let patterns = PatternSet::default();
    let mut chain = ChainState::new();
    for turn in t.iter() {
        chain.ingest(turn, &patterns);
    }
    for c in chain.commitments() {
        println!(
            "{} {:<4} {:?} {:?}",
            c.id,
            c.holder.as_str(),
            c.status,
            c.text
        );
    }
    let first = chain.commitments()[0].id.clone();
    chain.set_status(&first, CommitmentStatus::Closed, 4)?;
    if let Err(e) = chain.set_status(&first, CommitmentStatus::Updated, 5) {
        println!("rejected: {e}");
    }
    println!("transfer edges: {}", chain.graph().edge_count());
    println!(
        "silent: {:?}",
        chain.abandonment_report(&t, DEFAULT_ABANDONMENT_TURNS)
    );
    println!("ops: {}", chain.op_count());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
