// Seeded multi-speaker simulation with the deterministic stub model.

use msa::dialogue::StubClient;
use msa::interface::{simulate, write_output, MultiSpeakerTask};

const TASK: &str = r#"{
  "speaker_A": {"tone": "NEUTRAL", "position": "DETACH", "closure": "SINK", "logical_flow": "SCATTER", "context_alignment": "STANDALONE", "affective_tension": "FLAT"},
  "speaker_B": {"tone": "HIGHASSERT", "position": "SELFREF", "closure": "CUT", "logical_flow": "PIVOT", "context_alignment": "MERGE", "affective_tension": "TIGHT"},
  "task": "Simulate a debate on whether traditional examination systems should be abolished."
}"#;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let task = MultiSpeakerTask::from_json(TASK)?;
    let first = simulate(&task, 4, 7, &StubClient)?;
    let again = simulate(&task, 4, 7, &StubClient)?;
    assert_eq!(first.to_jsonl(), again.to_jsonl());
    for turn in first.iter() {
        println!("{:>10}: {}", turn.speaker.as_str(), turn.text);
    }
    let dir = tempfile::tempdir()?;
    let path = write_output(dir.path(), &task, &first, Some(0))?;
    println!(
        "wrote {}",
        path.file_name().unwrap_or_default().to_string_lossy()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
