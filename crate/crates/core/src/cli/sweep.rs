use super::output::Outputs;
use super::{CmdResult, Failure};
use crate::io;
use crate::plot::{self, Series};
use crate::sweep::{advised_size, pareto_frontier, run_sweep, GridSpec, SweepRecord};
use clap::Args;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Smallest w0; defaults to pi/64.
    #[arg(long, allow_negative_numbers = true)]
    omega0_min: Option<f64>,
    /// Largest w0; defaults to pi 2^(-1/4).
    #[arg(long, allow_negative_numbers = true)]
    omega0_max: Option<f64>,
    /// Log-spaced w0 values.
    #[arg(long, default_value_t = 24)]
    n_omega0: usize,
    /// Cutoffs per w0, log-spaced in w_c / w0 up to pi.
    #[arg(long, default_value_t = 16)]
    n_cutoff: usize,
    /// Lambda values sit at the midpoints of equal cells of (min, max).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    lambda_max: f64,
    /// Number of lambda cells.
    #[arg(long, default_value_t = 10)]
    n_lambda: usize,
    /// Read the w0 bounds as multiples of pi.
    #[arg(long)]
    pi_units: bool,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Also render SVG charts.
    #[arg(long)]
    plot: bool,
}

#[derive(Serialize)]
struct Advisory {
    records: usize,
    frontier_size: usize,
    flagged: usize,
    /// Largest advised transform size over records that fit.
    max_advised_n_fft: Option<usize>,
    frontier_max_lambda: f64,
    min_delay_spread: SweepRecord,
}

pub fn run(a: &SweepArgs) -> CmdResult {
    let unit = if a.pi_units { PI } else { 1.0 };
    let defaults = GridSpec::default();
    let spec = GridSpec {
        omega0_min: a.omega0_min.map_or(defaults.omega0_min, |v| v * unit),
        omega0_max: a.omega0_max.map_or(defaults.omega0_max, |v| v * unit),
        n_omega0: a.n_omega0,
        n_cutoff: a.n_cutoff,
        lambda_min: a.lambda_min,
        lambda_max: a.lambda_max,
        n_lambda: a.n_lambda,
    };
    let grid = spec.build()?;
    let config = serde_json::to_string(&spec)?;
    let records = run_sweep(&grid)?;
    let result = pareto_frontier(&records)?;

    let min_delay_spread = *records
        .iter()
        .min_by(|x, y| x.delay_spread.total_cmp(&y.delay_spread))
        .ok_or_else(|| Failure::Usage("empty grid".into()))?;
    let advisory = Advisory {
        records: records.len(),
        frontier_size: result.frontier.len(),
        flagged: records.iter().filter(|r| r.flagged).count(),
        max_advised_n_fft: records
            .iter()
            .filter(|r| !r.flagged)
            .filter_map(|r| advised_size(r.delay_spread))
            .max(),
        frontier_max_lambda: result.frontier_records().map(|r| r.params.lambda()).fold(0.0, f64::max),
        min_delay_spread,
    };

    let mut out = Outputs::new(&a.out)?;
    let mut w = out.create("sweep.csv")?;
    io::write_sweep_csv(&mut w, &config, &result, false)?;
    w.flush()?;
    let mut w = out.create("frontier.csv")?;
    io::write_sweep_csv(&mut w, &config, &result, true)?;
    w.flush()?;
    out.json("advisory.json", &advisory)?;

    if a.plot {
        let all: Vec<(f64, f64)> = records.iter().map(|r| (r.delay_spread, r.bandwidth)).collect();
        let front: Vec<(f64, f64)> = result
            .frontier_records()
            .map(|r| (r.delay_spread, r.bandwidth))
            .collect();
        plot::scatter_plot(
            &out.path("frontier.svg"),
            "Bandwidth against delay spread",
            "delay spread (samples)",
            "bandwidth (rad/sample)",
            &all,
            &front,
        )?;

        // per-lambda curves over the critically sampled family
        let mut spread: BTreeMap<u64, Vec<(f64, f64)>> = BTreeMap::new();
        let mut osc: BTreeMap<u64, Vec<(f64, f64)>> = BTreeMap::new();
        for r in records.iter().filter(|r| r.params.omega_c() == PI) {
            let ratio = r.params.omega_c() / r.params.omega0();
            spread
                .entry(r.params.lambda().to_bits())
                .or_default()
                .push((ratio, r.delay_spread));
            osc.entry(r.params.omega0().to_bits())
                .or_default()
                .push((r.params.lambda(), r.oscillations));
        }
        let labels: Vec<String> = spread
            .keys()
            .map(|k| format!("lambda {:.3}", f64::from_bits(*k)))
            .collect();
        let series: Vec<Series> = spread
            .values()
            .zip(&labels)
            .map(|(pts, l)| Series {
                label: l,
                points: pts.clone(),
            })
            .collect();
        plot::line_plot(
            &out.path("delay_spread.svg"),
            "Delay spread at w_c = pi",
            "w_c / w0",
            "delay spread (samples)",
            &series,
        )?;
        let labels: Vec<String> = osc.keys().map(|k| format!("w0 {:.3}", f64::from_bits(*k))).collect();
        let series: Vec<Series> = osc
            .values()
            .zip(&labels)
            .step_by(4)
            .map(|(pts, l)| Series {
                label: l,
                points: pts.clone(),
            })
            .collect();
        plot::line_plot(
            &out.path("oscillations.svg"),
            "Oscillations within the delay spread",
            "lambda",
            "cycles",
            &series,
        )?;
    }
    out.keep();
    Ok(())
}
