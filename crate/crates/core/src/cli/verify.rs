use super::{CmdResult, Failure, ParamArgs, REFERENCE_PARAMS};
use crate::verify::run_checks;
use clap::Args;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Parameters under test; defaults to {pi/5, pi, 1/2}.
    #[command(flatten)]
    params: ParamArgs,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(a: &VerifyArgs) -> CmdResult {
    let p = a.params.resolve(Some(REFERENCE_PARAMS))?;
    let report = run_checks(&p)?;
    for w in report.gate.warnings() {
        log::warn!("outside discrete-time bounds: {w}");
    }
    let json = serde_json::to_string_pretty(&report)?;
    println!("{json}");
    if let Some(path) = &a.out {
        std::fs::write(path, format!("{json}\n"))?;
    }
    if !report.all_passed {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Failure::Check(failed.join(", ")));
    }
    Ok(())
}
