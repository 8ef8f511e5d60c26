// Build a responsibility graph and look for closed loops and drift.

use msa::msl::{
    analyze_loops, detect_closed_loops, detect_partial_drift, ResponsibilityEdge,
    ResponsibilityGraph, SpeakerId,
};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let id = |s: &str| SpeakerId::new(s);
    let graph = ResponsibilityGraph::new()
        .with_nodes([id("observer")?])
        .add_transfer(ResponsibilityEdge::new(id("alice")?, id("bob")?).at(0))?
        .add_transfer(ResponsibilityEdge::new(id("bob")?, id("carol")?).at(1))?
        .add_transfer(ResponsibilityEdge::new(id("carol")?, id("alice")?).at(2))?
        .add_transfer(ResponsibilityEdge::new(id("dave")?, id("dave")?).labelled("keeps it"))?
        .add_transfer(ResponsibilityEdge::new(id("dave")?, id("erin")?))?;

    for l in detect_closed_loops(&graph)? {
        let names: Vec<&str> = l.speakers.iter().map(SpeakerId::as_str).collect();
        let kind = if l.is_self_retention() {
            "self-retention"
        } else {
            "loop"
        };
        println!("{kind:<15} {}", names.join(" -> "));
    }
    let drift: Vec<String> = detect_partial_drift(&graph)
        .into_iter()
        .map(String::from)
        .collect();
    println!("drift: {}", drift.join(", "));
    println!("reachable pairs: {}", graph.transitive_closure().len());
    println!("{}", serde_json::to_string(&analyze_loops(&graph))?);
    println!("{}", graph.to_json());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
