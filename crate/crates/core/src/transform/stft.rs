use crate::chirplet::AnalyticSignal;
use crate::error::{AltesError, Result};
use crate::fft;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Magnitude spectrogram, indexed `[bin][frame]`. Bin `k` is frequency `2 pi k / window_len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrogram {
    pub magnitudes: Vec<Vec<f64>>,
    pub frame_hop: usize,
    pub window_len: usize,
}

impl Spectrogram {
    pub fn n_frames(&self) -> usize {
        self.magnitudes.first().map_or(0, Vec::len)
    }

    /// Sample index of the middle of frame `f`.
    pub fn frame_center(&self, f: usize) -> usize {
        f * self.frame_hop + self.window_len / 2
    }
}

/// Symmetric Hamming window.
pub fn hamming(len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    let denom = (len - 1) as f64;
    (0..len)
        .map(|i| 0.54 - 0.46 * (2.0 * PI * i as f64 / denom).cos())
        .collect()
}

pub fn stft(signal: &AnalyticSignal, window_len: usize, hop: usize) -> Result<Spectrogram> {
    if window_len < 2 || !window_len.is_power_of_two() {
        return Err(AltesError::InvalidLength(format!(
            "window length must be a power of two, got {window_len}"
        )));
    }
    if hop == 0 || hop > window_len {
        return Err(AltesError::InvalidParameter(format!(
            "hop must lie in 1..={window_len}, got {hop}"
        )));
    }
    if signal.len() < window_len {
        return Err(AltesError::InvalidLength(format!(
            "signal of {} samples is shorter than the {window_len}-sample window",
            signal.len()
        )));
    }
    let window = hamming(window_len);
    let n_frames = (signal.len() - window_len) / hop + 1;
    let mut magnitudes = vec![vec![0.0; n_frames]; window_len];
    let mut buf = vec![Complex64::new(0.0, 0.0); window_len];
    for f in 0..n_frames {
        let start = f * hop;
        for (i, v) in buf.iter_mut().enumerate() {
            *v = signal.samples[start + i] * window[i];
        }
        fft::forward(&mut buf);
        for (row, v) in magnitudes.iter_mut().zip(&buf) {
            row[f] = v.norm();
        }
    }
    Ok(Spectrogram {
        magnitudes,
        frame_hop: hop,
        window_len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tone_lands_on_expected_bin() {
        let w = PI / 3.0;
        let sig = AnalyticSignal::new((0..1024).map(|i| Complex64::from_polar(1.0, w * i as f64)).collect());
        let sg = stft(&sig, 128, 64).unwrap();
        let expected = (128.0 * w / (2.0 * PI)).round() as usize;
        assert_eq!(expected, 21);
        for f in 0..sg.n_frames() {
            let best = (0..128)
                .max_by(|&a, &b| sg.magnitudes[a][f].total_cmp(&sg.magnitudes[b][f]))
                .unwrap();
            assert_eq!(best, expected);
        }
    }

    #[test]
    fn impulse_gives_flat_frame() {
        let mut sig = AnalyticSignal::zeros(256);
        sig.samples[64 + 40] = Complex64::new(1.0, 0.0);
        let sg = stft(&sig, 128, 64).unwrap();
        let level = hamming(128)[40];
        for k in 0..128 {
            assert!((sg.magnitudes[k][1] - level).abs() < 1e-12);
        }
    }

    #[test]
    fn parseval_per_frame() {
        let sig = AnalyticSignal::new(
            (0..512)
                .map(|i| Complex64::new((0.37 * i as f64).sin(), (0.011 * (i * i) as f64).cos()))
                .collect(),
        );
        let sg = stft(&sig, 64, 32).unwrap();
        let window = hamming(64);
        for f in 0..sg.n_frames() {
            let time: f64 = (0..64).map(|i| (sig.samples[f * 32 + i] * window[i]).norm_sqr()).sum();
            let freq: f64 = (0..64).map(|k| sg.magnitudes[k][f].powi(2)).sum::<f64>() / 64.0;
            assert!((time - freq).abs() <= 1e-10 * time);
        }
    }

    #[test]
    fn input_validation() {
        let sig = AnalyticSignal::zeros(100);
        assert!(stft(&sig, 128, 64).is_err());
        assert!(stft(&sig, 48, 16).is_err());
        assert!(stft(&sig, 64, 0).is_err());
        assert!(stft(&sig, 64, 65).is_err());
        let sg = stft(&sig, 64, 32).unwrap();
        assert_eq!(sg.n_frames(), 2);
        assert!(sg.magnitudes.iter().flatten().all(|m| *m == 0.0));
    }
}
