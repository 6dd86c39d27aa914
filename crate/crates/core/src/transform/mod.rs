//! Continuous wavelet transforms evaluated in the frequency domain, plus an STFT baseline.
//!
//! Every scale row is one inverse FFT of `S(w) * conj(Psi(a w))`, so the shift axis
//! enumerates all sample positions. `Psi(a w)` is always re-evaluated from the
//! wavelet's closed form rather than resampled.

mod cwt;
mod scale_law;
mod stft;

pub use cwt::{
    cwt_frequency_domain, hct, morlet_cwt, AltesWavelet, MorletWavelet, SpectralWavelet, MORLET_WIDTH_RATIO,
};
pub use scale_law::{scale_factor, scale_law_fast_path, ScaleLawReport};
pub use stft::{hamming, stft, Spectrogram};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveletId {
    Altes,
    Morlet,
}

/// Complex coefficients, one row per scale, one column per shift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scalogram {
    pub coefficients: Vec<Vec<Complex64>>,
    pub scales: Vec<f64>,
    pub shifts: Vec<f64>,
    pub wavelet_id: WaveletId,
}

impl Scalogram {
    pub fn n_scales(&self) -> usize {
        self.scales.len()
    }

    pub fn n_shifts(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty() || self.shifts.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<Vec<f64>> {
        self.coefficients
            .iter()
            .map(|row| row.iter().map(|c| c.norm()).collect())
            .collect()
    }

    /// `(scale index, shift index, |C|)` of the largest coefficient.
    pub fn global_max(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, row) in self.coefficients.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let m = c.norm();
                if best.is_none_or(|(_, _, b)| m > b) {
                    best = Some((i, j, m));
                }
            }
        }
        best
    }
}
