//! Numerical invariant suite for one parameter set.

use crate::chirplet::{
    classic_to_modern, homogeneity_constant, modern_to_classic, spectrum_to_time, synth_spectrum, synth_time,
    ChirpletParams,
};
use crate::error::Result;
use crate::properties::{
    analytic_admissibility, analytic_energy, fitted_waveform, log_grid_quadrature, regularity_integral,
    vanishing_moments_check,
};
use crate::sweep::{discrete_time_gate, GateVerdict};
use crate::transform::{scale_law_fast_path, ScaleLawReport};
use serde::{Deserialize, Serialize};

/// Exponents at which the homogeneous identity is checked.
pub const HOMOGENEITY_ORDERS: [f64; 5] = [1.0, 2.0, 3.0, 0.5, -1.0];

/// Orders of vanishing moments required of every parameter set.
pub const REQUIRED_VANISHING_ORDER: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// The measured error (or count) compared against `tolerance`.
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub params: ChirpletParams,
    pub gate: GateVerdict,
    pub checks: Vec<Check>,
    /// Reported without a verdict: the scale law is only expected to hold approximately.
    pub scale_law: ScaleLawReport,
    pub all_passed: bool,
}

fn below(name: &str, value: f64, tolerance: f64) -> Check {
    Check {
        name: name.into(),
        passed: value.is_finite() && value < tolerance,
        value,
        tolerance,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Worst pointwise relative error of `w^n U(w) = C(n) U(w / k^n)` over the passband.
pub fn homogeneity_error(p: &ChirpletParams, orders: &[f64]) -> Result<f64> {
    let k = p.intrinsic_k();
    let (lo, hi) = (p.lower_cutoff().ln(), p.omega_c().ln());
    let mut worst: f64 = 0.0;
    for &n in orders {
        let c = homogeneity_constant(p, n)?;
        for i in 0..=200 {
            let w = (lo + (hi - lo) * i as f64 / 200.0).exp();
            let lhs = p.response(w) * w.powf(n);
            let rhs = c * p.response(w / k.powf(n));
            worst = worst.max((lhs - rhs).norm() / lhs.norm());
        }
    }
    Ok(worst)
}

/// Worst `|u_{1/lambda}[n] - conj(u_lambda[-n])|` relative to the peak magnitude.
pub fn reciprocity_error(p: &ChirpletParams, n_fft: usize) -> Result<f64> {
    let a = synth_time(p, n_fft)?;
    let b = synth_time(&p.reciprocal(), n_fft)?;
    let peak = a.samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let worst = (0..n_fft)
        .map(|i| (b.samples[i] - a.samples[(n_fft - i) % n_fft].conj()).norm())
        .fold(0.0, f64::max);
    Ok(worst / peak)
}

pub fn run_checks(p: &ChirpletParams) -> Result<VerifyReport> {
    let mut checks = Vec::new();

    let energy_q = log_grid_quadrature(p, |w| p.response(w).norm_sqr()) / (2.0 * std::f64::consts::PI);
    checks.push(below("energy_closed_form", rel(analytic_energy(p), energy_q), 1e-6));
    let adm_q = log_grid_quadrature(p, |w| p.response(w).norm_sqr() / w);
    checks.push(below(
        "admissibility_closed_form",
        rel(analytic_admissibility(p), adm_q),
        1e-6,
    ));
    let reg_q = log_grid_quadrature(p, |w| p.response(w).norm() * (1.0 + w));
    checks.push(below(
        "regularity_closed_form",
        rel(regularity_integral(p, 1.0)?, reg_q),
        1e-6,
    ));

    let order = vanishing_moments_check(p, REQUIRED_VANISHING_ORDER)?;
    checks.push(Check {
        name: "vanishing_moments".into(),
        passed: order >= REQUIRED_VANISHING_ORDER,
        value: order as f64,
        tolerance: REQUIRED_VANISHING_ORDER as f64,
    });

    checks.push(below(
        "homogeneous_identity",
        homogeneity_error(p, &HOMOGENEITY_ORDERS)?,
        1e-9,
    ));

    let fit = fitted_waveform(p)?;
    let spectrum = synth_spectrum(p, fit.n_fft)?;
    let time = spectrum_to_time(&spectrum);
    checks.push(below("parseval", rel(time.energy(), spectrum.energy()), 1e-10));
    checks.push(below("lambda_reciprocity", reciprocity_error(p, fit.n_fft)?, 1e-10));

    let back = classic_to_modern(&modern_to_classic(p)?, p.kc_level())?;
    let round_trip = [
        rel(back.omega0(), p.omega0()),
        rel(back.omega_c(), p.omega_c()),
        rel(back.lambda(), p.lambda()),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    checks.push(below("classic_round_trip", round_trip, 1e-10));

    let k = p.intrinsic_k();
    let (_, scale_law) = scale_law_fast_path(&fit.signal, p, 1.0, &[1.0, 1.0 / k, k, 0.5, 2.0])?;

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        params: *p,
        gate: discrete_time_gate(p),
        checks,
        scale_law,
        all_passed,
    })
}
