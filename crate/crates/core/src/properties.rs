//! Closed-form wavelet properties and threshold-based localization measurements.

use crate::chirplet::{synth_spectrum, AnalyticSignal, ChirpletParams, Spectrum};
use crate::error::{AltesError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative slack when testing `|x| >= threshold`, so that samples sitting exactly
/// on the cutoff (e.g. `w_c = pi` on the Nyquist bin) count as inside.
const LEVEL_SLACK: f64 = 1e-9;

/// Absolute tolerance for the vanishing-moment probe.
pub const VANISHING_TOLERANCE: f64 = 1e-8;

/// Decades probed by the vanishing-moment check: `w = 10^-1 ... 10^-40`.
const PROBE_DECADES: i32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeLocalization {
    pub tau_minus: f64,
    pub tau_plus: f64,
    pub tau_peak: f64,
    pub delay_spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveletDiagnostics {
    pub energy: f64,
    pub admissibility_constant: f64,
    pub bandwidth_measured: f64,
    pub oscillation_count: f64,
    pub vanishing_moment_order_verified: usize,
}

/// `(1 / 2pi) * integral |U|^2 dw = w0 / sqrt(8 pi kappa_c) * exp(1 / (8 kappa_c))`.
pub fn analytic_energy(p: &ChirpletParams) -> f64 {
    let kc = p.kappa_c();
    p.omega0() / (8.0 * PI * kc).sqrt() * (1.0 / (8.0 * kc)).exp()
}

/// `integral |U|^2 / w dw = sqrt(pi / (2 kappa_c))`; independent of the chirp rate.
pub fn analytic_admissibility(p: &ChirpletParams) -> f64 {
    (PI / (2.0 * p.kappa_c())).sqrt()
}

/// The two terms of `integral |U| (1 + w^alpha) dw`, returned as natural logs.
pub fn regularity_log_terms(p: &ChirpletParams, alpha: f64) -> (f64, f64) {
    let kc = p.kappa_c();
    let lw0 = p.omega0().ln();
    let base = 0.5 * (PI / kc).ln();
    let log_i1 = lw0 + base + 1.0 / (4.0 * kc);
    let log_i2 = (alpha + 1.0) * lw0 + base + (1.0 + alpha) * (1.0 + alpha) / (4.0 * kc);
    (log_i1, log_i2)
}

pub fn regularity_integral(p: &ChirpletParams, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(AltesError::InvalidParameter(format!(
            "regularity order must be finite and non-negative, got {alpha}"
        )));
    }
    let (a, b) = regularity_log_terms(p, alpha);
    let hi = a.max(b);
    Ok((hi + ((a - hi).exp() + (b - hi).exp()).ln()).exp())
}

/// `integral_0^inf f(w) dw` by the trapezoid rule in `ln w` over `w0 exp(+-sqrt(80 / kappa_c))`,
/// where `|U|^2` has fallen below `e^-80`. Independent of the closed forms above.
pub fn log_grid_quadrature<F: Fn(f64) -> f64>(p: &ChirpletParams, f: F) -> f64 {
    let half_width = (80.0 / p.kappa_c()).sqrt();
    let (a, b) = (p.omega0().ln() - half_width, p.omega0().ln() + half_width);
    let n = 1 << 16;
    let h = (b - a) / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let w = (a + i as f64 * h).exp();
        let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += weight * f(w) * w;
    }
    acc * h
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central `m`-th difference with step `h`, second order accurate.
fn central_difference<F: Fn(f64) -> Complex64>(f: &F, x: f64, m: usize, h: f64) -> Complex64 {
    let half = m as f64 / 2.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=m {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += f(x + (half - k as f64) * h) * (sign * binomial(m, k));
    }
    // repeated division: h^m underflows for small abscissae and high orders
    (0..m).fold(acc, |a, _| a / h)
}

/// Richardson-extrapolated `d^m U / dw^m` at each probe abscissa `10^-1 ... 10^-40`.
///
/// The stencil stays on `w > 0`, so the one-sided definition of `U` is never
/// straddled.
pub fn derivative_estimates_near_origin<F: Fn(f64) -> Complex64>(response: &F, order: usize) -> Vec<(f64, f64)> {
    (1..=PROBE_DECADES)
        .map(|d| {
            let w = 10f64.powi(-d);
            let est = if order == 0 {
                response(w)
            } else {
                let h = w / (order as f64 + 2.0);
                let coarse = central_difference(response, w, order, h);
                let fine = central_difference(response, w, order, h / 2.0);
                (fine * 4.0 - coarse) / 3.0
            };
            (w, est.norm())
        })
        .collect()
}

/// Largest `M <= max_order` such that every order `0..=M` has a vanishing
/// derivative estimate at the origin; 0 when even order 0 fails.
pub fn vanishing_moments_check_with<F: Fn(f64) -> Complex64>(response: &F, max_order: usize) -> Result<usize> {
    if max_order > 12 {
        return Err(AltesError::InvalidParameter(format!(
            "vanishing moment probe supports orders up to 12, got {max_order}"
        )));
    }
    let mut verified = 0;
    for m in 0..=max_order {
        let limit = derivative_estimates_near_origin(response, m)
            .last()
            .map(|&(_, v)| v)
            .unwrap_or(f64::INFINITY);
        if !(limit < VANISHING_TOLERANCE) {
            break;
        }
        verified = m;
    }
    Ok(verified)
}

pub fn vanishing_moments_check(p: &ChirpletParams, max_order: usize) -> Result<usize> {
    vanishing_moments_check_with(&|w| p.response(w), max_order)
}

fn log_fraction(inner: f64, outer: f64, threshold: f64) -> f64 {
    // position of the threshold between inner (>= th) and outer (< th), linear in log-magnitude
    if outer <= 0.0 {
        return 0.0;
    }
    let (li, lo, lt) = (inner.ln(), outer.ln(), threshold.ln());
    if li == lo {
        return 0.0;
    }
    ((li - lt) / (li - lo)).clamp(0.0, 1.0)
}

/// Outermost crossings of `threshold` on a sampled magnitude curve, as
/// fractional indices, plus the outermost inside samples.
fn outer_crossings(mag: &[f64], threshold: f64) -> Option<(f64, f64, usize, usize)> {
    let peak = mag.iter().cloned().fold(0.0f64, f64::max);
    if !(peak > 0.0) {
        return None;
    }
    let th = threshold.min(peak);
    let inside = |v: f64| v >= th * (1.0 - LEVEL_SLACK);
    let lo = mag.iter().position(|&v| inside(v))?;
    let hi = mag.iter().rposition(|&v| inside(v))?;
    let left = if lo == 0 {
        0.0
    } else {
        lo as f64 - log_fraction(mag[lo], mag[lo - 1], th)
    };
    let right = if hi + 1 == mag.len() {
        hi as f64
    } else {
        hi as f64 + log_fraction(mag[hi], mag[hi + 1], th)
    };
    Some((left, right, lo, hi))
}

/// Measured `-K_c` bandwidth of a one-sided spectrum, `w+ - w-`.
pub fn measure_bandwidth(s: &Spectrum, kc_level: f64) -> Result<f64> {
    if s.values.len() < 2 {
        return Err(AltesError::Empty("spectrum has fewer than two bins".into()));
    }
    if !(kc_level > 0.0 && kc_level <= 1.0) {
        return Err(AltesError::InvalidParameter(format!(
            "cutoff level must lie in (0, 1], got {kc_level}"
        )));
    }
    let mag: Vec<f64> = s.values.iter().map(|v| v.norm()).collect();
    let peak = mag.iter().cloned().fold(0.0f64, f64::max);
    let (left, right, _, hi) = outer_crossings(&mag, kc_level)
        .ok_or_else(|| AltesError::Localization("spectrum is identically zero".into()))?;
    let th = kc_level.min(peak);
    if hi + 1 == mag.len() && mag[hi] > th * (1.0 + LEVEL_SLACK) {
        return Err(AltesError::Localization(format!(
            "magnitude still above the {kc_level} level at Nyquist"
        )));
    }
    Ok((right - left) * s.domega)
}

/// Envelope window found by [`measure_delay_spread`], in the re-centered frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct EnvelopeWindow {
    pub lo: usize,
    pub hi: usize,
    pub len: usize,
}

impl EnvelopeWindow {
    pub fn fits_with_guard(&self, guard: usize) -> bool {
        self.lo >= guard && self.hi + guard < self.len
    }
}

pub(crate) fn localize(sig: &AnalyticSignal, kc_level: f64) -> Result<(TimeLocalization, EnvelopeWindow)> {
    if !(kc_level > 0.0 && kc_level <= 1.0) {
        return Err(AltesError::InvalidParameter(format!(
            "cutoff level must lie in (0, 1], got {kc_level}"
        )));
    }
    let n = sig.len();
    let peak = sig
        .peak_index()
        .ok_or_else(|| AltesError::Empty("signal has no samples".into()))?;
    if sig.samples[peak].norm() == 0.0 {
        return Err(AltesError::Empty("signal is identically zero".into()));
    }
    let center = n / 2;
    let env: Vec<f64> = (0..n)
        .map(|i| sig.samples[(i + peak + n - center) % n].norm())
        .collect();
    let threshold = kc_level * sig.samples[peak].norm();
    let (left, right, lo, hi) =
        outer_crossings(&env, threshold).ok_or_else(|| AltesError::Empty("signal is identically zero".into()))?;
    let dt = sig.dt;
    let loc = TimeLocalization {
        tau_minus: (peak as f64 - (center as f64 - left)) * dt,
        tau_plus: (peak as f64 + (right - center as f64)) * dt,
        tau_peak: peak as f64 * dt,
        delay_spread: (right - left) * dt,
    };
    Ok((loc, EnvelopeWindow { lo, hi, len: n }))
}

/// `-K_c` delay spread of the envelope after circular re-centering on its peak.
pub fn measure_delay_spread(sig: &AnalyticSignal, kc_level: f64) -> Result<TimeLocalization> {
    localize(sig, kc_level).map(|(loc, _)| loc)
}

/// Interpolation factor applied before unwrapping phase; keeps per-step phase
/// increments well inside `(-pi, pi]` even where the instantaneous frequency nears Nyquist.
const OSCILLATION_OVERSAMPLE: usize = 8;

/// Band-limited (zero-padded DFT) interpolation by `factor`. The Nyquist bin is kept on
/// the positive side, as befits an analytic signal.
fn upsample(samples: &[Complex64], factor: usize) -> Vec<Complex64> {
    let n = samples.len();
    let mut spec = samples.to_vec();
    crate::fft::forward(&mut spec);
    let mut wide = vec![Complex64::new(0.0, 0.0); n * factor];
    let positive = n / 2 + 1;
    wide[..positive].copy_from_slice(&spec[..positive]);
    let negative = n - positive;
    wide[n * factor - negative..].copy_from_slice(&spec[positive..]);
    crate::fft::inverse(&mut wide);
    for v in wide.iter_mut() {
        *v *= factor as f64;
    }
    wide
}

/// Total unwrapped phase advance across the delay-spread window, in cycles.
pub fn count_oscillations(sig: &AnalyticSignal, loc: &TimeLocalization) -> Result<f64> {
    if sig.is_empty() {
        return Err(AltesError::Empty("signal has no samples".into()));
    }
    let first = (loc.tau_minus / sig.dt).ceil() as i64;
    let last = (loc.tau_plus / sig.dt).floor() as i64;
    if last - first + 1 < 4 {
        return Err(AltesError::Localization(format!(
            "oscillation window holds {} samples, need at least 4",
            (last - first + 1).max(0)
        )));
    }
    let f = OSCILLATION_OVERSAMPLE as i64;
    let fine = upsample(&sig.samples, OSCILLATION_OVERSAMPLE);
    let n = fine.len() as i64;
    let at = |i: i64| fine[i.rem_euclid(n) as usize];
    let start = (loc.tau_minus / sig.dt * f as f64).ceil() as i64;
    let end = (loc.tau_plus / sig.dt * f as f64).floor() as i64;
    let total: f64 = (start..end).map(|i| (at(i + 1) * at(i).conj()).arg()).sum();
    Ok(total.abs() / (2.0 * PI))
}

/// Smallest transform size tried by [`fitted_waveform`].
pub const MIN_FIT_N_FFT: usize = 256;

/// Largest transform size tried by [`fitted_waveform`].
pub const MAX_FIT_N_FFT: usize = 1 << 16;

/// Samples required between the envelope window and the ends of the re-centered frame.
pub const FIT_GUARD: usize = 4;

/// A synthesized chirplet at the smallest transform size that holds its envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedWaveform {
    pub signal: AnalyticSignal,
    pub localization: TimeLocalization,
    pub n_fft: usize,
    /// False when even [`MAX_FIT_N_FFT`] could not hold the envelope with guard samples.
    pub fits: bool,
}

/// Doubles the transform size from [`MIN_FIT_N_FFT`] until the `-K_c` envelope window
/// sits inside the frame with [`FIT_GUARD`] samples to spare.
pub fn fitted_waveform(p: &ChirpletParams) -> Result<FittedWaveform> {
    let mut n_fft = MIN_FIT_N_FFT;
    loop {
        let signal = crate::chirplet::synth_time(p, n_fft)?;
        let (localization, window) = localize(&signal, p.kc_level())?;
        let fits = window.fits_with_guard(FIT_GUARD);
        if fits || n_fft >= MAX_FIT_N_FFT {
            return Ok(FittedWaveform {
                signal,
                localization,
                n_fft,
                fits,
            });
        }
        n_fft *= 2;
    }
}

/// Full property sheet for one parameter set at transform size `n_fft`.
pub fn diagnose(p: &ChirpletParams, n_fft: usize) -> Result<WaveletDiagnostics> {
    let spectrum = synth_spectrum(p, n_fft)?;
    let bandwidth_measured = measure_bandwidth(&spectrum, p.kc_level())?;
    let sig = crate::chirplet::spectrum_to_time(&spectrum);
    let loc = measure_delay_spread(&sig, p.kc_level())?;
    Ok(WaveletDiagnostics {
        energy: analytic_energy(p),
        admissibility_constant: analytic_admissibility(p),
        bandwidth_measured,
        oscillation_count: count_oscillations(&sig, &loc)?,
        vanishing_moment_order_verified: vanishing_moments_check(p, 12)?,
    })
}
