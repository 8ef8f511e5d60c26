// Score the four bundled case studies from their rubric sub-scores.

use msa::interface::load_fixtures;
use msa::scoring::{heuristic_score, ScoreCard};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    for fixture in load_fixtures()? {
        let card = ScoreCard::from_annotation(&fixture.annotation)?
            .with_heuristic(heuristic_score(&fixture.transcript));
        print!("{}", card.render_table(&fixture.name));
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
