//! Thin wrapper over `rustfft` with a per-thread planner cache.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Unnormalized forward DFT, in place.
pub fn forward(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    plan(buf.len(), false).process(buf);
}

/// Inverse DFT including the `1/N` factor, in place.
pub fn inverse(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    plan(buf.len(), true).process(buf);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Angular frequency of DFT bin `k` for a length-`n` transform with unit
/// sampling, mapped to `(-pi, pi]`.
pub fn bin_frequency(k: usize, n: usize) -> f64 {
    let w = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
    if k > n / 2 {
        w - 2.0 * std::f64::consts::PI
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_inverse_identity() {
        let orig: Vec<Complex64> = (0..16)
            .map(|i| Complex64::new(i as f64, (i * i) as f64 * 0.1))
            .collect();
        let mut buf = orig.clone();
        forward(&mut buf);
        inverse(&mut buf);
        for (a, b) in buf.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn nyquist_bin_is_positive() {
        assert_eq!(bin_frequency(4, 8), std::f64::consts::PI);
        assert!(bin_frequency(5, 8) < 0.0);
    }
}
