use super::cwt::{cwt_row, signal_spectrum, AltesWavelet, SpectralWavelet};
use super::Scalogram;
use crate::chirplet::{AnalyticSignal, ChirpletParams};
use crate::error::{AltesError, Result};
use crate::fft;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Outcome of replacing direct transform rows by `g(m)` times a base row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleLawReport {
    pub base_scale: f64,
    pub multipliers: Vec<f64>,
    /// Per multiplier: `max_b |g(m) C(a,b) - C(ma,b)| / max_b |C(ma,b)|`.
    pub relative_errors: Vec<f64>,
    /// Same measure for the omega-weighted integral against the direct row at `base_scale`.
    pub base_integral_error: f64,
}

/// `g(a) = a^(1 + 2 kappa_c ln w0) * exp(j 2pi ln a / ln lambda)`.
pub fn scale_factor(p: &ChirpletParams, a: f64) -> Complex64 {
    let modulus = a.powf(1.0 + 2.0 * p.kappa_c() * p.omega0().ln());
    Complex64::from_polar(modulus, 2.0 * PI * a.ln() / p.lambda().ln())
}

fn relative_error(fast: &[Complex64], direct: &[Complex64]) -> f64 {
    let scale = direct.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let diff = fast.iter().zip(direct).map(|(f, d)| (f - d).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / scale
    }
}

/// Builds rows at `m * base_scale` as `g(m)` times the direct row at `base_scale`, and
/// measures each against the direct transform. Scalogram rows are sorted by scale; the
/// report keeps the caller's multiplier order.
pub fn scale_law_fast_path(
    signal: &AnalyticSignal,
    p: &ChirpletParams,
    base_scale: f64,
    multipliers: &[f64],
) -> Result<(Scalogram, ScaleLawReport)> {
    if !(base_scale > 0.0 && base_scale.is_finite()) {
        return Err(AltesError::InvalidParameter(format!(
            "base scale must be positive, got {base_scale}"
        )));
    }
    if multipliers.is_empty() {
        return Err(AltesError::Empty("no multipliers requested".into()));
    }
    if multipliers.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
        return Err(AltesError::InvalidParameter("multipliers must be positive".into()));
    }
    let wavelet = AltesWavelet::centered(*p)?;
    let spectrum = signal_spectrum(signal)?;
    let n = spectrum.len();
    let base_row = cwt_row(&spectrum, &wavelet, base_scale)?;

    let mut weighted: Vec<Complex64> = spectrum
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let w = fft::bin_frequency(k, n);
            s * w * wavelet.response(w).conj()
        })
        .collect();
    fft::inverse(&mut weighted);
    let g_base = scale_factor(p, base_scale);
    let integral_row: Vec<Complex64> = weighted.iter().map(|v| g_base * v).collect();
    let base_integral_error = relative_error(&integral_row, &base_row);

    let rows = multipliers
        .par_iter()
        .map(|&m| {
            let g = scale_factor(p, m);
            let fast: Vec<Complex64> = base_row.iter().map(|c| g * c).collect();
            let direct = if m == 1.0 {
                base_row.clone()
            } else {
                cwt_row(&spectrum, &wavelet, m * base_scale)?
            };
            Ok((m * base_scale, relative_error(&fast, &direct), fast))
        })
        .collect::<Result<Vec<_>>>()?;
    let relative_errors = rows.iter().map(|r| r.1).collect();

    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].0.total_cmp(&rows[b].0));
    if order.windows(2).any(|w| rows[w[0]].0 == rows[w[1]].0) {
        return Err(AltesError::InvalidParameter("multipliers must be distinct".into()));
    }
    let scalogram = Scalogram {
        scales: order.iter().map(|&i| rows[i].0).collect(),
        coefficients: order.iter().map(|&i| rows[i].2.clone()).collect(),
        shifts: (0..n).map(|i| i as f64 * signal.dt).collect(),
        wavelet_id: wavelet.id(),
    };
    Ok((
        scalogram,
        ScaleLawReport {
            base_scale,
            multipliers: multipliers.to_vec(),
            relative_errors,
            base_integral_error,
        },
    ))
}
