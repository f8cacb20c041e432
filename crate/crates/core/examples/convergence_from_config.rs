//! Runs a JSON RunConfig (default: examples/configs/y2_numeric.json) and
//! prints the CSV and summary, as `fkd converge` does.

use faber_krahn::harness::{run_convergence, RunConfig};

fn main() -> faber_krahn::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/y2_numeric.json").into());
    let mut config = RunConfig::from_json(&std::fs::read_to_string(path)?)?;
    config.output = None;
    let mut out = std::io::stdout();
    let report = run_convergence(&config, Some(&mut out))?;
    println!("{}", serde_json::to_string_pretty(&report.summary)?);
    Ok(())
}
