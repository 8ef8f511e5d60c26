// Parse a speaker module in both JSON shapes and compile it to directives.

use msa::gcode::{
    build_prompt_directives, parse_config_object, parse_tag, parse_tag_list, Registry,
};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let registry = Registry::builtin();
    println!("{} registered values", registry.len());
    for (dimension, value) in registry.entries() {
        println!("  #{}_{value:<12} {}", dimension.prefix(), dimension.key());
    }

    let listed = parse_tag_list([
        "#T_SOFTASSERT",
        "#P_SELFREF",
        "#C_LOOP",
        "#CTX_MERGE",
        "#L_CASCADE",
        "#E_TIGHT",
    ])?;
    let keyed = parse_config_object(
        r#"{"speaker_module": {"tone": "softassert", "position": "SELFREF", "closure": "LOOP",
            "context_alignment": "MERGE", "logical_flow": "CASCADE", "affective_tension": "TIGHT"}}"#,
    )?;
    assert_eq!(listed, keyed);
    println!("directives: {}", build_prompt_directives(&listed));

    for bad in ["#T_BANANA", "#Q_NEUTRAL", "T_NEUTRAL"] {
        let err = parse_tag(bad).unwrap_err();
        println!("{bad:<12} -> [{}] {err}", err.code());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
