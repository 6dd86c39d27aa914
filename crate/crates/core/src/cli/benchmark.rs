use super::output::Outputs;
use super::{CmdResult, Failure, ParamArgs, REFERENCE_PARAMS};
use crate::chirplet::ChirpletParams;
use crate::detect::{
    default_min_len, extract_ridges, mean_r_squared, score_detections, stft_tone_ridge, DetectionReport, ToneRidge,
    LINK_WINDOW,
};
use crate::io;
use crate::plot::{self, Series};
use crate::synth::{default_benchmark, make_benchmark, BenchmarkSpec, RNG_ALGORITHM};
use crate::transform::{hct, morlet_cwt, stft, MORLET_WIDTH_RATIO};
use clap::Args;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Benchmark description as JSON; defaults to the built-in three-chirp scene.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Overrides the spec's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the spec's SNR.
    #[arg(long, allow_negative_numbers = true)]
    snr_db: Option<f64>,
    /// Analyzing chirplet; defaults to {pi/5, pi, 1/2}.
    #[command(flatten)]
    params: ParamArgs,
    /// Smallest HCT scale; scales are linearly spaced.
    #[arg(long, default_value_t = 0.6)]
    scale_min: f64,
    /// Largest HCT scale.
    #[arg(long, default_value_t = 1.6)]
    scale_max: f64,
    /// Number of scales.
    #[arg(long, default_value_t = 32)]
    n_scales: usize,
    /// Morlet center frequency in rad/sample.
    #[arg(long, default_value_t = 0.9 * PI)]
    morlet_center: f64,
    /// Morlet scales are the HCT scales times this factor.
    #[arg(long, default_value_t = 10.0)]
    morlet_scale_factor: f64,
    /// STFT window length, a power of two.
    #[arg(long, default_value_t = 128)]
    stft_window: usize,
    /// Defaults to half the window.
    #[arg(long)]
    stft_hop: Option<usize>,
    /// Center match tolerance in samples.
    #[arg(long, default_value_t = 16)]
    tol: usize,
    /// Ridges kept per scalogram, strongest first.
    #[arg(long, default_value_t = 3)]
    max_ridges: usize,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Also render SVG heatmaps.
    #[arg(long)]
    plot: bool,
}

#[derive(Serialize)]
struct BenchmarkConfig<'a> {
    spec: &'a BenchmarkSpec,
    rng: &'static str,
    hct_params: ChirpletParams,
    hct_scales: &'a [f64],
    morlet_center: f64,
    morlet_width_ratio: f64,
    morlet_scales: &'a [f64],
    stft_window: usize,
    stft_hop: usize,
    ridge_link_window: usize,
    ridge_min_len: usize,
    max_ridges: usize,
    tol: usize,
}

#[derive(Serialize)]
struct Report {
    hct: DetectionReport,
    morlet: DetectionReport,
    hct_mean_r_squared: f64,
    morlet_mean_r_squared: f64,
    stft_tone: ToneRidge,
    /// Every chirp found by the HCT with no false alarms, and the tone visible in the STFT.
    passed: bool,
}

fn load_spec(a: &BenchmarkArgs) -> Result<BenchmarkSpec, Failure> {
    let mut spec = match &a.spec {
        None => default_benchmark(),
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| {
                Failure::Usage(format!(
                    "{}: line {}, column {}: {e}",
                    path.display(),
                    e.line(),
                    e.column()
                ))
            })?
        }
    };
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    if let Some(snr) = a.snr_db {
        spec.snr_db = Some(snr);
    }
    Ok(spec)
}

pub fn run(a: &BenchmarkArgs) -> CmdResult {
    let spec = load_spec(a)?;
    let p = a.params.resolve(Some(REFERENCE_PARAMS))?;
    if a.n_scales < 2 || !(a.scale_min > 0.0 && a.scale_min < a.scale_max) {
        return Err(Failure::Usage(
            "need --n-scales >= 2 and 0 < --scale-min < --scale-max".into(),
        ));
    }
    let scales: Vec<f64> = (0..a.n_scales)
        .map(|i| a.scale_min + (a.scale_max - a.scale_min) * i as f64 / (a.n_scales - 1) as f64)
        .collect();
    let morlet_scales: Vec<f64> = scales.iter().map(|s| s * a.morlet_scale_factor).collect();
    let hop = a.stft_hop.unwrap_or(a.stft_window / 2);

    let (signal, truth) = make_benchmark(&spec)?;
    let sg = stft(&signal, a.stft_window, hop)?;
    let hct_sc = hct(&signal, &p, &scales)?;
    let morlet_sc = morlet_cwt(&signal, a.morlet_center, &morlet_scales)?;
    let min_len = default_min_len(&hct_sc);
    let hct_ridges = extract_ridges(&hct_sc, a.max_ridges, min_len)?;
    let morlet_ridges = extract_ridges(&morlet_sc, a.max_ridges, min_len)?;
    let hct_report = score_detections(&hct_ridges, &truth, a.tol)?;
    let tone = stft_tone_ridge(&sg, spec.tone_freq)?;
    let report = Report {
        morlet: score_detections(&morlet_ridges, &truth, a.tol)?,
        hct_mean_r_squared: mean_r_squared(&hct_ridges),
        morlet_mean_r_squared: mean_r_squared(&morlet_ridges),
        stft_tone: tone,
        passed: hct_report.misses == 0 && hct_report.false_alarms == 0 && tone.present,
        hct: hct_report,
    };

    let config = serde_json::to_string(&BenchmarkConfig {
        spec: &spec,
        rng: RNG_ALGORITHM,
        hct_params: p,
        hct_scales: &scales,
        morlet_center: a.morlet_center,
        morlet_width_ratio: MORLET_WIDTH_RATIO,
        morlet_scales: &morlet_scales,
        stft_window: a.stft_window,
        stft_hop: hop,
        ridge_link_window: LINK_WINDOW,
        ridge_min_len: min_len,
        max_ridges: a.max_ridges,
        tol: a.tol,
    })?;

    let mut out = Outputs::new(&a.out)?;
    let mut w = out.create("signal.bin")?;
    io::write_signal_binary(&mut w, &signal)?;
    w.flush()?;
    let mut w = out.create("signal.csv")?;
    io::write_signal_csv(&mut w, &config, &signal)?;
    w.flush()?;
    out.json("ground_truth.json", &truth)?;
    let mut w = out.create("stft.csv")?;
    io::write_spectrogram_csv(&mut w, &config, &sg)?;
    w.flush()?;
    let mut w = out.create("morlet.csv")?;
    io::write_scalogram_csv(&mut w, &config, &morlet_sc)?;
    w.flush()?;
    let mut w = out.create("hct.csv")?;
    io::write_scalogram_csv(&mut w, &config, &hct_sc)?;
    w.flush()?;
    let mut w = out.create("ridges_hct.csv")?;
    io::write_ridges_csv(&mut w, &config, &hct_ridges)?;
    w.flush()?;
    let mut w = out.create("ridges_morlet.csv")?;
    io::write_ridges_csv(&mut w, &config, &morlet_ridges)?;
    w.flush()?;
    out.json("detection_report.json", &report)?;

    if a.plot {
        let re: Vec<(f64, f64)> = signal
            .samples
            .iter()
            .enumerate()
            .map(|(i, v)| (i as f64, v.re))
            .collect();
        let env: Vec<(f64, f64)> = truth
            .clean_signal
            .samples
            .iter()
            .enumerate()
            .map(|(i, v)| (i as f64, v.norm()))
            .collect();
        plot::line_plot(
            &out.path("signal.svg"),
            "Benchmark signal",
            "sample",
            "amplitude",
            &[
                Series {
                    label: "noisy (real)",
                    points: re,
                },
                Series {
                    label: "clean envelope",
                    points: env,
                },
            ],
        )?;
        // bins above Nyquist hold no energy for analytic input
        plot::heatmap(
            &out.path("stft.svg"),
            "STFT log-magnitude",
            "frame",
            "bin",
            &sg.magnitudes[..=a.stft_window / 2],
            -60.0,
        )?;
        plot::heatmap(
            &out.path("morlet.svg"),
            "Morlet CWT log-magnitude",
            "shift",
            "scale index",
            &morlet_sc.magnitudes(),
            -40.0,
        )?;
        plot::heatmap(
            &out.path("hct.svg"),
            "HCT log-magnitude",
            "shift",
            "scale index",
            &hct_sc.magnitudes(),
            -40.0,
        )?;
    }
    out.keep();
    if !report.passed {
        return Err(Failure::Check(format!(
            "HCT found {} of {} chirps with {} false alarms; tone ridge {}",
            report.hct.hits,
            truth.chirp_centers.len(),
            report.hct.false_alarms,
            if report.stft_tone.present { "present" } else { "absent" }
        )));
    }
    Ok(())
}
