use super::{Scalogram, WaveletId};
use crate::chirplet::{AnalyticSignal, ChirpletParams, DEFAULT_KC_LEVEL};
use crate::error::{AltesError, Result};
use crate::fft;
use crate::properties::{analytic_energy, fitted_waveform};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Gaussian width of the Morlet spectrum relative to its center frequency. Places the
/// -40 dB points one octave-width apart, `w_m (sqrt 2 - 1 / sqrt 2)`.
pub const MORLET_WIDTH_RATIO: f64 = 0.116_497_650_446_164_03;

/// A mother wavelet known through its closed-form frequency response.
pub trait SpectralWavelet: Sync {
    fn response(&self, omega: f64) -> Complex64;

    /// Lower and upper frequencies bounding the -40 dB support of the mother wavelet.
    fn support(&self) -> (f64, f64);

    fn id(&self) -> WaveletId;
}

/// Altes chirplet as a mother wavelet, optionally unit-energy and peak-centered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AltesWavelet {
    params: ChirpletParams,
    gain: f64,
    delay: f64,
}

impl AltesWavelet {
    /// The bare chirplet `U(w)`: unit passband gain, envelope peak wherever it falls.
    pub fn raw(params: ChirpletParams) -> Self {
        Self {
            params,
            gain: 1.0,
            delay: 0.0,
        }
    }

    /// Unit energy with the envelope peak moved to `t = 0`.
    pub fn centered(params: ChirpletParams) -> Result<Self> {
        let fit = fitted_waveform(&params)?;
        let n = fit.n_fft as f64;
        let peak = fit.localization.tau_peak;
        let delay = if peak > n / 2.0 { peak - n } else { peak };
        Ok(Self {
            params,
            gain: 1.0 / analytic_energy(&params).sqrt(),
            delay,
        })
    }

    pub fn params(&self) -> &ChirpletParams {
        &self.params
    }

    /// Envelope-peak time of the un-centered chirplet, in samples.
    pub fn delay(&self) -> f64 {
        self.delay
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }
}

impl SpectralWavelet for AltesWavelet {
    fn response(&self, omega: f64) -> Complex64 {
        if omega <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let shift = Complex64::from_polar(self.gain, omega * self.delay);
        self.params.response(omega) * shift
    }

    fn support(&self) -> (f64, f64) {
        (self.params.lower_cutoff(), self.params.omega_c())
    }

    fn id(&self) -> WaveletId {
        WaveletId::Altes
    }
}

/// Analytic complex Morlet: a one-sided Gaussian bump at `center`, unit energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorletWavelet {
    center: f64,
    width: f64,
    gain: f64,
}

impl MorletWavelet {
    pub fn new(center: f64) -> Result<Self> {
        if !(center > 0.0 && center < PI) {
            return Err(AltesError::InvalidParameter(format!(
                "Morlet center frequency must lie in (0, pi), got {center}"
            )));
        }
        let width = MORLET_WIDTH_RATIO * center;
        // (1/2pi) int_0^inf exp(-(w - c)^2 / width^2) dw; erf(c / width) = 1 to double precision
        let energy = width * PI.sqrt() / (2.0 * PI);
        Ok(Self {
            center,
            width,
            gain: 1.0 / energy.sqrt(),
        })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }
}

impl SpectralWavelet for MorletWavelet {
    fn response(&self, omega: f64) -> Complex64 {
        if omega <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let x = (omega - self.center) / self.width;
        Complex64::new(self.gain * (-0.5 * x * x).exp(), 0.0)
    }

    fn support(&self) -> (f64, f64) {
        let half = self.width * (-2.0 * DEFAULT_KC_LEVEL.ln()).sqrt();
        ((self.center - half).max(0.0), self.center + half)
    }

    fn id(&self) -> WaveletId {
        WaveletId::Morlet
    }
}

fn check_scales(scales: &[f64]) -> Result<()> {
    if scales.is_empty() {
        return Err(AltesError::Empty("no scales requested".into()));
    }
    if scales.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
        return Err(AltesError::InvalidParameter(
            "scales must be positive and finite".into(),
        ));
    }
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(AltesError::InvalidParameter(
            "scales must be strictly increasing".into(),
        ));
    }
    Ok(())
}

pub(crate) fn signal_spectrum(signal: &AnalyticSignal) -> Result<Vec<Complex64>> {
    let n = signal.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(AltesError::InvalidLength(format!(
            "signal length must be a power of two, got {n}"
        )));
    }
    let mut buf = signal.samples.clone();
    fft::forward(&mut buf);
    Ok(buf)
}

/// One scale row from a precomputed signal spectrum.
pub(crate) fn cwt_row<W: SpectralWavelet + ?Sized>(
    spectrum: &[Complex64],
    wavelet: &W,
    scale: f64,
) -> Result<Vec<Complex64>> {
    let n = spectrum.len();
    let first_bin = 2.0 * PI / n as f64;
    if wavelet.support().1 / scale < first_bin {
        return Err(AltesError::DegenerateScale { scale });
    }
    let root = scale.sqrt();
    let mut buf: Vec<Complex64> = spectrum
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let w = fft::bin_frequency(k, n);
            s * wavelet.response(scale * w).conj()
        })
        .collect();
    fft::inverse(&mut buf);
    for v in buf.iter_mut() {
        *v *= root;
    }
    Ok(buf)
}

/// `C(a, b) = sqrt(a) / 2pi * integral S(w) conj(Psi(a w)) exp(j w b) dw` for every
/// sample shift `b`. Rows are computed in parallel and assembled in scale order.
pub fn cwt_frequency_domain<W: SpectralWavelet + ?Sized>(
    signal: &AnalyticSignal,
    wavelet: &W,
    scales: &[f64],
) -> Result<Scalogram> {
    check_scales(scales)?;
    let spectrum = signal_spectrum(signal)?;
    let coefficients = scales
        .par_iter()
        .map(|&a| cwt_row(&spectrum, wavelet, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(Scalogram {
        coefficients,
        scales: scales.to_vec(),
        shifts: (0..signal.len()).map(|i| i as f64 * signal.dt).collect(),
        wavelet_id: wavelet.id(),
    })
}

/// Hyperbolic chirplet transform: unit-energy Altes chirplet, peak-centered at zero shift.
pub fn hct(signal: &AnalyticSignal, p: &ChirpletParams, scales: &[f64]) -> Result<Scalogram> {
    let verdict = crate::sweep::discrete_time_gate(p);
    for warning in verdict.warnings() {
        log::warn!("analyzing chirplet outside discrete-time bounds: {warning}");
    }
    let wavelet = AltesWavelet::centered(*p)?;
    cwt_frequency_domain(signal, &wavelet, scales)
}

pub fn morlet_cwt(signal: &AnalyticSignal, center_freq: f64, scales: &[f64]) -> Result<Scalogram> {
    let wavelet = MorletWavelet::new(center_freq)?;
    cwt_frequency_domain(signal, &wavelet, scales)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chirplet::synth_time;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn reference() -> ChirpletParams {
        ChirpletParams::new(PI / 5.0, PI, 0.5).unwrap()
    }

    #[test]
    fn morlet_width_ratio_gives_one_octave() {
        let expected = (2f64.sqrt() - 1.0 / 2f64.sqrt()) / (2.0 * (2.0 * 100f64.ln()).sqrt());
        assert!((MORLET_WIDTH_RATIO - expected).abs() < 1e-15);
        let m = MorletWavelet::new(1.0).unwrap();
        let (lo, hi) = m.support();
        assert!((hi - lo - (2f64.sqrt() - 1.0 / 2f64.sqrt())).abs() < 1e-12);
        let x = (hi - 1.0) / m.width();
        assert!(((-0.5 * x * x).exp() - 0.01).abs() < 1e-12);
        assert!(MorletWavelet::new(PI).is_err());
    }

    #[test]
    fn unit_energy_normalizations() {
        for w in [
            &AltesWavelet::centered(reference()).unwrap() as &dyn SpectralWavelet,
            &MorletWavelet::new(1.0).unwrap(),
        ] {
            let n = 1 << 14;
            let dw = 2.0 * PI / n as f64;
            let e: f64 = (1..=n / 2).map(|k| w.response(k as f64 * dw).norm_sqr()).sum::<f64>() * dw / (2.0 * PI);
            assert!((e - 1.0).abs() < 1e-4, "{e}");
        }
    }

    #[test]
    fn autocorrelation_peak_at_zero_shift() {
        let p = reference();
        let sig = synth_time(&p, 512).unwrap();
        let sc = cwt_frequency_domain(&sig, &AltesWavelet::raw(p), &[1.0]).unwrap();
        let (_, j, m) = sc.global_max().unwrap();
        assert_eq!(j, 0);
        assert!((m - sig.energy()).abs() < 1e-10 * sig.energy());
    }

    #[test]
    fn linear_in_the_signal() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let n = 256;
        let mut draw = || {
            AnalyticSignal::new(
                (0..n)
                    .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                    .collect(),
            )
        };
        let (x, y) = (draw(), draw());
        let (alpha, beta) = (Complex64::new(0.7, -1.2), Complex64::new(-0.3, 0.4));
        let mix = AnalyticSignal::new(
            x.samples
                .iter()
                .zip(&y.samples)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        );
        let scales = [0.8, 1.0, 1.5];
        let w = AltesWavelet::centered(reference()).unwrap();
        let (cx, cy, cm) = (
            cwt_frequency_domain(&x, &w, &scales).unwrap(),
            cwt_frequency_domain(&y, &w, &scales).unwrap(),
            cwt_frequency_domain(&mix, &w, &scales).unwrap(),
        );
        let peak = cm.global_max().unwrap().2;
        for i in 0..scales.len() {
            for j in 0..n {
                let lin = alpha * cx.coefficients[i][j] + beta * cy.coefficients[i][j];
                assert!((lin - cm.coefficients[i][j]).norm() <= 1e-10 * peak);
            }
        }
    }

    #[test]
    fn circular_shift_covariance() {
        let p = reference();
        let sig = synth_time(&p, 256).unwrap();
        let shifted = sig.rotated(0, 17);
        let scales = [0.7, 1.3];
        let a = hct(&sig, &p, &scales).unwrap();
        let b = hct(&shifted, &p, &scales).unwrap();
        for i in 0..2 {
            for j in 0..256 {
                let d = (a.coefficients[i][j] - b.coefficients[i][(j + 17) % 256]).norm();
                assert!(d < 1e-12);
            }
        }
    }

    #[test]
    fn zero_signal_gives_zero_scalogram() {
        let sc = hct(&AnalyticSignal::zeros(128), &reference(), &[1.0, 2.0]).unwrap();
        assert!(sc.coefficients.iter().flatten().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn degenerate_and_invalid_scales() {
        let sig = AnalyticSignal::zeros(64);
        let w = AltesWavelet::raw(reference());
        assert!(matches!(
            cwt_frequency_domain(&sig, &w, &[1e4]),
            Err(AltesError::DegenerateScale { .. })
        ));
        assert!(cwt_frequency_domain(&sig, &w, &[2.0, 1.0]).is_err());
        assert!(cwt_frequency_domain(&sig, &w, &[]).is_err());
        assert!(cwt_frequency_domain(&AnalyticSignal::zeros(60), &w, &[1.0]).is_err());
    }

    #[test]
    fn morlet_tone_scale_relation() {
        let n = 1024;
        let tone = 0.6;
        let sig = AnalyticSignal::new((0..n).map(|i| Complex64::from_polar(1.0, tone * i as f64)).collect());
        let center = 0.9 * PI;
        let scales: Vec<f64> = (0..60).map(|i| 2.0 + 0.05 * i as f64).collect();
        let sc = morlet_cwt(&sig, center, &scales).unwrap();
        let mags = sc.magnitudes();
        let best = (0..scales.len())
            .max_by(|&a, &b| mags[a][n / 2].partial_cmp(&mags[b][n / 2]).unwrap())
            .unwrap();
        assert!((scales[best] - center / tone).abs() <= 0.05);
    }

    #[test]
    fn matched_chirplet_beats_morlet() {
        let p = reference();
        let chirp = synth_time(&p, 512).unwrap();
        let peak_to_mean = |sc: &Scalogram| {
            let mags = sc.magnitudes();
            let row = &mags[0];
            let mean = row.iter().sum::<f64>() / row.len() as f64;
            row.iter().cloned().fold(0.0, f64::max) / mean
        };
        let altes = hct(&chirp, &p, &[1.0]).unwrap();
        let morlet = morlet_cwt(&chirp, 0.9 * PI, &[10.0]).unwrap();
        assert!(peak_to_mean(&altes) > peak_to_mean(&morlet));
    }

    #[test]
    fn white_noise_response_tracks_wavelet_energy() {
        // E|C(a,b)|^2 = sigma^2 * (discrete energy of the dilated wavelet) for white noise
        let n = 1024;
        let w = AltesWavelet::centered(reference()).unwrap();
        let scales = [0.7, 1.0, 1.6];
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let normal = rand_distr::StandardNormal;
        let mut acc = [0.0; 3];
        let draws = 100;
        for _ in 0..draws {
            let sig = AnalyticSignal::new(
                (0..n)
                    .map(|_| {
                        let re: f64 = rng.sample(normal);
                        let im: f64 = rng.sample(normal);
                        Complex64::new(re, im) / 2f64.sqrt()
                    })
                    .collect(),
            );
            let sc = cwt_frequency_domain(&sig, &w, &scales).unwrap();
            for (i, row) in sc.coefficients.iter().enumerate() {
                acc[i] += row.iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
            }
        }
        for (i, &a) in scales.iter().enumerate() {
            let dw = 2.0 * PI / n as f64;
            let energy: f64 = (1..=n / 2)
                .map(|k| w.response(a * k as f64 * dw).norm_sqr())
                .sum::<f64>()
                * a
                / n as f64;
            let mean = acc[i] / draws as f64;
            assert!((mean - energy).abs() < 0.05 * energy, "{mean} vs {energy}");
        }
    }
}
