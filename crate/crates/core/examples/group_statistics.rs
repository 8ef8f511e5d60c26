// Two-sample t tests and mean confidence intervals from summary statistics.

use msa::scoring::{mean_confidence_interval, two_sample_t, GroupStats, TTestVariant};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let experimental = GroupStats::new(1102, 7.8, 0.57)?;
    let control = GroupStats::new(373, 6.4, 0.24)?;
    for variant in [TTestVariant::Pooled, TTestVariant::Welch] {
        let t = two_sample_t(&experimental, &control, variant)?;
        println!(
            "{variant:?}: t = {:.4}, df = {:.2}, p = {:.3e}",
            t.t, t.df, t.p_value
        );
    }
    let printed = 44.64;
    let pooled = two_sample_t(&experimental, &control, TTestVariant::Pooled)?;
    println!("printed t {printed} differs by {:+.4}", pooled.t - printed);
    for (name, g) in [("experimental", &experimental), ("control", &control)] {
        let ci = mean_confidence_interval(g, 0.95)?;
        println!("{name:<13} 95% CI [{:.3}, {:.3}]", ci.lower, ci.upper);
    }
    let raw = GroupStats::from_samples(&[7.1, 7.9, 8.4, 6.8, 7.7])?;
    println!(
        "from samples: n={} mean={:.2} sd={:.3}",
        raw.n(),
        raw.mean(),
        raw.sd()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
