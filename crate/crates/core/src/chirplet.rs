//! Altes chirplet parameterizations and waveform synthesis.
//!
//! The chirplet is specified in the frequency domain as
//!
//! ```text
//! U(w) = exp(-kappa_c * ln^2(w / w0)) * exp(j * 2pi * ln(w) / ln(lambda)),  w > 0
//! U(w) = 0,                                                                w <= 0
//! ```
//!
//! where `kappa_c = -ln(K_c) / ln^2(w_c / w0)` ties the magnitude roll-off to
//! the cutoff level `K_c` reached at the upper cutoff `w_c`. The classic
//! `{A, nu, k, c}` form is kept for interop with older parameter tables.

use crate::error::{invalid, AltesError, Result};
use crate::fft;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// -40 dB.
pub const DEFAULT_KC_LEVEL: f64 = 0.01;

/// Classic `{A, nu, k, c}` parameter set with unit passband gain imposed on `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicAltesParams {
    pub nu: f64,
    pub k: f64,
    pub c: f64,
    pub a_gain: f64,
}

impl ClassicAltesParams {
    pub fn new(nu: f64, k: f64, c: f64) -> Result<Self> {
        if !nu.is_finite() || !k.is_finite() || !c.is_finite() {
            return invalid("classic parameters must be finite");
        }
        if k <= 1.0 {
            return invalid(format!("k must exceed 1, got {k}"));
        }
        if c == 0.0 {
            return invalid("c must be non-zero");
        }
        Ok(Self {
            nu,
            k,
            c,
            a_gain: k.powf(-nu * nu / 2.0),
        })
    }

    /// Evaluates the classic closed form `A w^nu exp(-ln^2 w / (2 ln k)) exp(j 2pi c ln w / ln k)`.
    pub fn response(&self, omega: f64) -> Complex64 {
        if omega <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let lk = self.k.ln();
        let lw = omega.ln();
        let log_mag = self.a_gain.ln() + self.nu * lw - 0.5 * lw * lw / lk;
        Complex64::from_polar(log_mag.exp(), 2.0 * PI * self.c * lw / lk)
    }
}

/// The `{w0, w_c, lambda}` triplet with its cutoff level `K_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChirpletParams", into = "RawChirpletParams")]
pub struct ChirpletParams {
    omega0: f64,
    omega_c: f64,
    lambda: f64,
    kc_level: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChirpletParams {
    omega0: f64,
    omega_c: f64,
    lambda: f64,
    #[serde(default = "default_kc")]
    kc_level: f64,
}

fn default_kc() -> f64 {
    DEFAULT_KC_LEVEL
}

impl TryFrom<RawChirpletParams> for ChirpletParams {
    type Error = AltesError;
    fn try_from(r: RawChirpletParams) -> Result<Self> {
        ChirpletParams::with_level(r.omega0, r.omega_c, r.lambda, r.kc_level)
    }
}

impl From<ChirpletParams> for RawChirpletParams {
    fn from(p: ChirpletParams) -> Self {
        RawChirpletParams {
            omega0: p.omega0,
            omega_c: p.omega_c,
            lambda: p.lambda,
            kc_level: p.kc_level,
        }
    }
}

impl ChirpletParams {
    /// Center frequency, upper cutoff and chirp rate at the default -40 dB level.
    pub fn new(omega0: f64, omega_c: f64, lambda: f64) -> Result<Self> {
        Self::with_level(omega0, omega_c, lambda, DEFAULT_KC_LEVEL)
    }

    pub fn with_level(omega0: f64, omega_c: f64, lambda: f64, kc_level: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return invalid(format!("omega0 must be positive and finite, got {omega0}"));
        }
        if !(omega_c.is_finite() && omega_c > omega0) {
            return invalid(format!("omega_c must exceed omega0 ({omega0}), got {omega_c}"));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return invalid(format!("lambda must be positive and finite, got {lambda}"));
        }
        if lambda == 1.0 {
            return Err(AltesError::SingularChirpRate);
        }
        if !(kc_level > 0.0 && kc_level < 1.0) {
            return invalid(format!("cutoff level must lie in (0, 1), got {kc_level}"));
        }
        Ok(Self {
            omega0,
            omega_c,
            lambda,
            kc_level,
        })
    }

    /// Builds the triplet from a center frequency and a bandwidth instead of a cutoff.
    pub fn from_bandwidth(omega0: f64, bandwidth: f64, lambda: f64) -> Result<Self> {
        Self::new(omega0, bandwidth_to_cutoff(omega0, bandwidth)?, lambda)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kc_level(&self) -> f64 {
        self.kc_level
    }

    pub fn kappa_c(&self) -> f64 {
        let r = (self.omega_c / self.omega0).ln();
        -self.kc_level.ln() / (r * r)
    }

    pub fn lower_cutoff(&self) -> f64 {
        self.omega0 * self.omega0 / self.omega_c
    }

    pub fn bandwidth(&self) -> f64 {
        self.omega0 * (self.omega_c / self.omega0 - self.omega0 / self.omega_c)
    }

    /// Intrinsic dilation constant `k = exp(1 / (2 kappa_c))`.
    pub fn intrinsic_k(&self) -> f64 {
        (1.0 / (2.0 * self.kappa_c())).exp()
    }

    /// Same magnitude, chirp rate inverted. Time-reverses and conjugates the waveform.
    pub fn reciprocal(&self) -> Self {
        Self {
            lambda: 1.0 / self.lambda,
            ..*self
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::with_level(self.omega0, self.omega_c, lambda, self.kc_level)
    }

    /// Log-magnitude `-kappa_c ln^2(w / w0)` for `w > 0`.
    pub fn log_magnitude(&self, omega: f64) -> f64 {
        let x = (omega / self.omega0).ln();
        -self.kappa_c() * x * x
    }

    /// Closed-form frequency response; identically zero for `w <= 0`.
    pub fn response(&self, omega: f64) -> Complex64 {
        if omega <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let phase = 2.0 * PI * omega.ln() / self.lambda.ln();
        Complex64::from_polar(self.log_magnitude(omega).exp(), phase)
    }
}

/// Uniformly sampled one-sided spectrum on `[0, pi]`, `n_fft / 2 + 1` bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    pub domega: f64,
    pub n_fft: usize,
}

impl Spectrum {
    pub fn frequency(&self, i: usize) -> f64 {
        i as f64 * self.domega
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| self.frequency(i))
    }

    /// `(1 / 2pi) * sum |U|^2 * domega`, the discrete counterpart of the energy integral.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.domega / (2.0 * PI)
    }

    /// Full-length DFT buffer: one-sided values followed by zeros on `(pi, 2pi)`.
    pub fn padded(&self) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n_fft];
        buf[..self.values.len()].copy_from_slice(&self.values);
        buf
    }
}

/// Complex analytic time series with sampling interval `dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSignal {
    pub samples: Vec<Complex64>,
    pub dt: f64,
}

impl AnalyticSignal {
    pub fn new(samples: Vec<Complex64>) -> Self {
        Self { samples, dt: 1.0 }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dt
    }

    pub fn power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    pub fn envelope(&self) -> Vec<f64> {
        self.samples.iter().map(|v| v.norm()).collect()
    }

    /// Index of the largest envelope sample (first one on ties).
    pub fn peak_index(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in self.samples.iter().enumerate() {
            let m = v.norm_sqr();
            if best.is_none_or(|(_, b)| m > b) {
                best = Some((i, m));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Circular rotation so that sample `from` lands at index `to`.
    pub fn rotated(&self, from: usize, to: usize) -> Self {
        let n = self.samples.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, v) in self.samples.iter().enumerate() {
            out[(i + to + n - from % n) % n] = *v;
        }
        Self {
            samples: out,
            dt: self.dt,
        }
    }
}

pub fn classic_to_modern(p: &ClassicAltesParams, kc_level: f64) -> Result<ChirpletParams> {
    let p = ClassicAltesParams::new(p.nu, p.k, p.c)?;
    if !(kc_level > 0.0 && kc_level < 1.0) {
        return invalid(format!("cutoff level must lie in (0, 1), got {kc_level}"));
    }
    let lk = p.k.ln();
    let omega0 = p.k.powf(p.nu);
    let kappa_c = 1.0 / (2.0 * lk);
    let lambda = (lk / p.c).exp();
    let omega_c = omega0 * (-kc_level.ln() / kappa_c).sqrt().exp();
    ChirpletParams::with_level(omega0, omega_c, lambda, kc_level)
}

pub fn modern_to_classic(p: &ChirpletParams) -> Result<ClassicAltesParams> {
    if p.lambda == 1.0 {
        return Err(AltesError::SingularChirpRate);
    }
    let kappa_c = p.kappa_c();
    let nu = 2.0 * kappa_c * p.omega0.ln();
    let k = (1.0 / (2.0 * kappa_c)).exp();
    let c = k.ln() / p.lambda.ln();
    ClassicAltesParams::new(nu, k, c)
}

/// Positive root of `w_c^2 - B w_c - w0^2 = 0`.
pub fn bandwidth_to_cutoff(omega0: f64, b: f64) -> Result<f64> {
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return invalid(format!("omega0 must be positive, got {omega0}"));
    }
    if !(b > 0.0 && b.is_finite()) {
        return invalid(format!("bandwidth must be positive, got {b}"));
    }
    // Rationalized form avoids cancellation when b << omega0.
    let disc = (b * b + 4.0 * omega0 * omega0).sqrt();
    Ok(2.0 * omega0 * omega0 / (disc - b))
}

pub fn magnitude_response(p: &ChirpletParams, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(AltesError::Domain(omega));
    }
    Ok(p.log_magnitude(omega))
}

pub(crate) fn check_n_fft(n_fft: usize) -> Result<()> {
    if n_fft < 8 || !n_fft.is_power_of_two() {
        return Err(AltesError::InvalidLength(format!(
            "transform size must be a power of two >= 8, got {n_fft}"
        )));
    }
    Ok(())
}

pub fn synth_spectrum(p: &ChirpletParams, n_fft: usize) -> Result<Spectrum> {
    check_n_fft(n_fft)?;
    let half = n_fft / 2;
    let domega = PI / half as f64;
    let mut values = Vec::with_capacity(half + 1);
    values.push(Complex64::new(0.0, 0.0));
    values.extend((1..=half).map(|i| p.response(i as f64 * domega)));
    Ok(Spectrum { values, domega, n_fft })
}

/// Inverse DFT of the zero-padded one-sided spectrum, unit sampling interval.
pub fn synth_time(p: &ChirpletParams, n_fft: usize) -> Result<AnalyticSignal> {
    let spectrum = synth_spectrum(p, n_fft)?;
    Ok(spectrum_to_time(&spectrum))
}

pub fn spectrum_to_time(spectrum: &Spectrum) -> AnalyticSignal {
    let mut buf = spectrum.padded();
    fft::inverse(&mut buf);
    AnalyticSignal::new(buf)
}

/// Constant `C(n)` in `w^n U(w) = C(n) U(w / k^n)` for the intrinsic `k`.
///
/// The phase factor is `exp(+j 2pi n c)`: shifting `ln w` by `-n ln k` moves the
/// phase `2pi c ln w / ln k` by `-2pi n c`, which `C(n)` has to undo.
pub fn homogeneity_constant(p: &ChirpletParams, n: f64) -> Result<Complex64> {
    let classic = modern_to_classic(p)?;
    let mag = classic.k.powf(n * classic.nu + n * n / 2.0);
    Ok(Complex64::from_polar(mag, 2.0 * PI * n * classic.c))
}
