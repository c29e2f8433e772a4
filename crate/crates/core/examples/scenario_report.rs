//! Load a scenario config, run it and print the report.
//!
//! cargo run --example scenario_report -- scenarios/s4_two_observers.json summary-text

use std::path::PathBuf;

use blackbox::harness::{load_config, render_report, run_scenario, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/s6_landauer_ledger.json")
    });
    let format: Format = args.next().as_deref().unwrap_or("summary-text").parse()?;
    let cfg = load_config(&path)?;
    let report = run_scenario(&cfg)?;
    print!("{}", String::from_utf8(render_report(&report, format))?);
    Ok(())
}
