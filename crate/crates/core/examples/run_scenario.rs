//! Load a TOML scenario and run it in-process, printing the table. Defaults
//! to the bundled Franson scenario.
//!
//! `cargo run --example run_scenario -- crates/core/examples/scenarios/hom.toml`

use std::path::PathBuf;

use pdc_coherence::cli::{run, ScenarioConfig};
use pdc_coherence::Result;

fn main() -> Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenarios/bound.toml")));
    let config = ScenarioConfig::load(&path)?;
    let report = run(&config, None)?;
    print!("{}", report.table());
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}
