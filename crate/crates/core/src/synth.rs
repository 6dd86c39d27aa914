//! Ground-truthed test signals: placed log-periodic chirps, a tone and calibrated noise.

use crate::chirplet::{synth_time, AnalyticSignal, ChirpletParams};
use crate::error::{AltesError, Result};
use crate::properties::fitted_waveform;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Identifier of the noise generator, recorded in output configs for replay.
pub const RNG_ALGORITHM: &str = "chacha20";

/// Placed chirps are synthesized on at least this many samples so their tails survive.
const MIN_PLACEMENT_N_FFT: usize = 1024;

/// Seed of [`default_benchmark`].
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacedChirp {
    pub params: ChirpletParams,
    /// Sample index of the envelope peak.
    pub center: usize,
    /// Amplitude applied to the unit-energy chirp.
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSpec {
    pub chirps: Vec<PlacedChirp>,
    pub tone_freq: f64,
    #[serde(default = "default_tone_amplitude")]
    pub tone_amplitude: f64,
    /// `None` leaves the signal noiseless.
    pub snr_db: Option<f64>,
    pub total_len: usize,
    pub seed: u64,
}

fn default_tone_amplitude() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub chirp_centers: Vec<usize>,
    pub clean_signal: AnalyticSignal,
}

/// Unit-energy chirplet with its envelope peak rotated to sample `n_fft / 2`.
pub fn make_lp_chirp(p: &ChirpletParams, n_fft: usize) -> Result<AnalyticSignal> {
    let sig = synth_time(p, n_fft)?;
    let peak = sig
        .peak_index()
        .ok_or_else(|| AltesError::Empty("chirp has no samples".into()))?;
    let mut out = sig.rotated(peak, n_fft / 2);
    let norm = out.energy().sqrt();
    for v in out.samples.iter_mut() {
        *v /= norm;
    }
    Ok(out)
}

impl BenchmarkSpec {
    pub fn validate(&self) -> Result<()> {
        if self.total_len == 0 {
            return Err(AltesError::InvalidLength("total length must be positive".into()));
        }
        for (i, c) in self.chirps.iter().enumerate() {
            if c.center >= self.total_len {
                return Err(AltesError::InvalidParameter(format!(
                    "chirp {i} center {} lies outside the {}-sample record",
                    c.center, self.total_len
                )));
            }
            if !c.amplitude.is_finite() {
                return Err(AltesError::InvalidParameter(format!(
                    "chirp {i} amplitude is not finite"
                )));
            }
        }
        if !(self.tone_freq.is_finite() && self.tone_amplitude.is_finite()) {
            return Err(AltesError::InvalidParameter("tone must be finite".into()));
        }
        if matches!(self.snr_db, Some(s) if !s.is_finite()) {
            return Err(AltesError::InvalidParameter("snr_db must be finite".into()));
        }
        Ok(())
    }
}

/// Sums the placed chirps and the tone, then adds complex white Gaussian noise scaled so
/// the realized SNR against the clean power equals `snr_db`.
pub fn make_benchmark(spec: &BenchmarkSpec) -> Result<(AnalyticSignal, GroundTruth)> {
    spec.validate()?;
    let n = spec.total_len;
    let mut clean = vec![Complex64::new(0.0, 0.0); n];
    for (i, c) in spec.chirps.iter().enumerate() {
        let fit = fitted_waveform(&c.params)?;
        if fit.localization.delay_spread >= n as f64 {
            return Err(AltesError::InvalidLength(format!(
                "chirp {i} spans {:.0} samples, longer than the {n}-sample record",
                fit.localization.delay_spread
            )));
        }
        let m = fit.n_fft.max(MIN_PLACEMENT_N_FFT);
        let chirp = make_lp_chirp(&c.params, m)?;
        let offset = c.center as i64 - (m / 2) as i64;
        for (j, v) in chirp.samples.iter().enumerate() {
            let idx = offset + j as i64;
            if (0..n as i64).contains(&idx) {
                clean[idx as usize] += v * c.amplitude;
            }
        }
    }
    for (i, v) in clean.iter_mut().enumerate() {
        *v += Complex64::from_polar(spec.tone_amplitude, spec.tone_freq * i as f64);
    }
    let clean = AnalyticSignal::new(clean);

    let mut noisy = clean.clone();
    if let Some(snr_db) = spec.snr_db {
        let clean_power = clean.power();
        if clean_power == 0.0 {
            return Err(AltesError::InvalidParameter(
                "cannot calibrate noise against a silent clean signal".into(),
            ));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
        let noise: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) / 2f64.sqrt()
            })
            .collect();
        let noise_power = noise.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        let gain = (clean_power / 10f64.powf(snr_db / 10.0) / noise_power).sqrt();
        for (s, w) in noisy.samples.iter_mut().zip(&noise) {
            *s += w * gain;
        }
    }
    let truth = GroundTruth {
        chirp_centers: spec.chirps.iter().map(|c| c.center).collect(),
        clean_signal: clean,
    };
    Ok((noisy, truth))
}

/// Three chirps inside the discrete-time bounds at distinct chirp rates, a tone at `pi/3` and 0 dB noise
/// over 4096 samples.
pub fn default_benchmark() -> BenchmarkSpec {
    let chirp = |w0: f64, lambda: f64, center: usize| PlacedChirp {
        params: ChirpletParams::new(w0, PI, lambda).expect("valid default chirp"),
        center,
        amplitude: 10.0,
    };
    BenchmarkSpec {
        chirps: vec![
            chirp(PI / 6.0, 0.35, 700),
            chirp(PI / 5.0, 0.5, 2000),
            chirp(PI / 7.0, 0.65, 3300),
        ],
        tone_freq: PI / 3.0,
        tone_amplitude: 0.5,
        snr_db: Some(0.0),
        total_len: 4096,
        seed: DEFAULT_SEED,
    }
}

/// Realized `10 log10(P_clean / P_noise)` of a noisy signal against its clean part.
pub fn measured_snr_db(noisy: &AnalyticSignal, clean: &AnalyticSignal) -> f64 {
    let noise: f64 = noisy
        .samples
        .iter()
        .zip(&clean.samples)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let signal: f64 = clean.samples.iter().map(|v| v.norm_sqr()).sum();
    10.0 * (signal / noise).log10()
}
