//! Drive the verification harness as a library: run two cheap suites with
//! a reduced configuration and print the Markdown report.

use levynet::report::{run_suite, RunConfig};
use levynet::Result;

fn main() -> Result<()> {
    let cfg = RunConfig {
        coalescence_runs: 2_000,
        slice_samples: 1_000,
        ..RunConfig::default()
    };
    for suite in ["coalescence", "slices"] {
        let report = run_suite(suite, &cfg)?;
        print!("{}", report.to_markdown());
        println!(
            "suite '{suite}' {}",
            if report.all_passed() { "passed" } else { "FAILED" }
        );
    }
    Ok(())
}
