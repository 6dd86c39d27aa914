use super::output::Outputs;
use super::{CmdResult, ParamArgs};
use crate::chirplet::{modern_to_classic, spectrum_to_time, synth_spectrum, ChirpletParams, ClassicAltesParams};
use crate::io;
use crate::plot::{self, Series};
use crate::properties::{analytic_admissibility, analytic_energy, diagnose, WaveletDiagnostics};
use crate::sweep::{discrete_time_gate, GateVerdict};
use clap::Args;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Transform size, a power of two.
    #[arg(long, default_value_t = 4096)]
    nfft: usize,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Also render SVG plots.
    #[arg(long)]
    plot: bool,
}

#[derive(Serialize)]
struct SynthConfig {
    params: ChirpletParams,
    n_fft: usize,
}

#[derive(Serialize)]
struct Summary {
    params: ChirpletParams,
    classic: ClassicAltesParams,
    kappa_c: f64,
    bandwidth: f64,
    lower_cutoff: f64,
    intrinsic_k: f64,
    energy: f64,
    admissibility_constant: f64,
    /// `None` with `diagnostics_error` set when the waveform does not fit `n_fft`.
    diagnostics: Option<WaveletDiagnostics>,
    diagnostics_error: Option<String>,
    gate: GateVerdict,
}

pub fn run(a: &SynthArgs) -> CmdResult {
    let p = a.params.resolve(None)?;
    let spectrum = synth_spectrum(&p, a.nfft)?;
    let signal = spectrum_to_time(&spectrum);
    let config = serde_json::to_string(&SynthConfig {
        params: p,
        n_fft: a.nfft,
    })?;
    let (diagnostics, diagnostics_error) = match diagnose(&p, a.nfft) {
        Ok(d) => (Some(d), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let summary = Summary {
        params: p,
        classic: modern_to_classic(&p)?,
        kappa_c: p.kappa_c(),
        bandwidth: p.bandwidth(),
        lower_cutoff: p.lower_cutoff(),
        intrinsic_k: p.intrinsic_k(),
        energy: analytic_energy(&p),
        admissibility_constant: analytic_admissibility(&p),
        diagnostics,
        diagnostics_error,
        gate: discrete_time_gate(&p),
    };
    for w in summary.gate.warnings() {
        log::warn!("outside discrete-time bounds: {w}");
    }

    let mut out = Outputs::new(&a.out)?;
    let mut w = out.create("spectrum.csv")?;
    io::write_spectrum_csv(&mut w, &config, &spectrum)?;
    w.flush()?;
    let mut w = out.create("signal.bin")?;
    io::write_signal_binary(&mut w, &signal)?;
    w.flush()?;
    let mut w = out.create("signal.csv")?;
    io::write_signal_csv(&mut w, &config, &signal)?;
    w.flush()?;
    out.json("summary.json", &summary)?;

    if a.plot {
        let mag: Vec<(f64, f64)> = spectrum
            .values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, v)| (spectrum.frequency(i), 20.0 * v.norm().log10()))
            .collect();
        let phase: Vec<(f64, f64)> = spectrum
            .values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, v)| (spectrum.frequency(i), v.arg()))
            .collect();
        let n = signal.len();
        let peak = signal.peak_index().unwrap_or(0);
        let centered = signal.rotated(peak, n / 2);
        let env: Vec<(f64, f64)> = centered
            .samples
            .iter()
            .enumerate()
            .map(|(i, v)| (i as f64 - (n / 2) as f64, v.norm()))
            .collect();
        let re: Vec<(f64, f64)> = centered
            .samples
            .iter()
            .enumerate()
            .map(|(i, v)| (i as f64 - (n / 2) as f64, v.re))
            .collect();
        plot::line_plot(
            &out.path("magnitude.svg"),
            "Log-magnitude frequency response",
            "w (rad/sample)",
            "dB",
            &[Series {
                label: "|U|",
                points: mag,
            }],
        )?;
        plot::line_plot(
            &out.path("phase.svg"),
            "Phase response",
            "w (rad/sample)",
            "rad",
            &[Series {
                label: "arg U",
                points: phase,
            }],
        )?;
        plot::line_plot(
            &out.path("envelope.svg"),
            "Time series about the envelope peak",
            "samples from peak",
            "amplitude",
            &[
                Series {
                    label: "real",
                    points: re,
                },
                Series {
                    label: "envelope",
                    points: env,
                },
            ],
        )?;
    }
    out.keep();
    Ok(())
}
