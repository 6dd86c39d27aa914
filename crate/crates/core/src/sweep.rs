//! Parameter-grid studies: time/frequency localization trade-off, transform sizing and
//! discrete-time parameter bounds.

use crate::chirplet::{synth_spectrum, ChirpletParams};
use crate::error::{AltesError, Result};
use crate::properties::{count_oscillations, fitted_waveform, measure_bandwidth, MAX_FIT_N_FFT};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// Grids larger than this are refused rather than left to run for hours.
pub const MAX_GRID_POINTS: usize = 100_000;

/// Bandwidth is measured on at least this many bins so the frequency step stays fine.
const BANDWIDTH_N_FFT: usize = 8192;

/// Relative tolerance for treating `w_c` as sitting on Nyquist.
const NYQUIST_TOLERANCE: f64 = 1e-3;

/// Axes of a parameter sweep. Cutoffs are stored as fractions `t` in `(0, 1]` so that
/// `w_c = w0 (pi / w0)^t` always lies in `(w0, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub omega0: Vec<f64>,
    pub cutoff_fractions: Vec<f64>,
    pub lambda: Vec<f64>,
}

/// Knobs for building a [`SweepGrid`] from ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub omega0_min: f64,
    pub omega0_max: f64,
    pub n_omega0: usize,
    pub n_cutoff: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub n_lambda: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            omega0_min: PI / 64.0,
            omega0_max: PI * 2f64.powf(-0.25),
            n_omega0: 24,
            n_cutoff: 16,
            lambda_min: 0.0,
            lambda_max: 1.0,
            n_lambda: 10,
        }
    }
}

impl GridSpec {
    pub fn n_points(&self) -> usize {
        self.n_omega0
            .saturating_mul(self.n_cutoff)
            .saturating_mul(self.n_lambda)
    }

    /// `w0` log-spaced over `[omega0_min, omega0_max]`, cutoff fractions `1/n ... 1`, and
    /// `lambda` at the midpoints of `n_lambda` equal cells of `(lambda_min, lambda_max)`.
    pub fn build(&self) -> Result<SweepGrid> {
        if self.n_points() == 0 {
            return Err(AltesError::Empty("sweep grid has no points".into()));
        }
        if self.n_points() > MAX_GRID_POINTS {
            return Err(AltesError::InvalidParameter(format!(
                "sweep grid has {} points, limit is {MAX_GRID_POINTS}; reduce the per-axis counts",
                self.n_points()
            )));
        }
        if !(self.omega0_min > 0.0 && self.omega0_min <= self.omega0_max && self.omega0_max < PI) {
            return Err(AltesError::InvalidParameter(format!(
                "w0 range must satisfy 0 < min <= max < pi, got [{}, {}]",
                self.omega0_min, self.omega0_max
            )));
        }
        if !(self.lambda_min >= 0.0 && self.lambda_min < self.lambda_max && self.lambda_max <= 1.0) {
            return Err(AltesError::InvalidParameter(format!(
                "lambda range must satisfy 0 <= min < max <= 1, got ({}, {})",
                self.lambda_min, self.lambda_max
            )));
        }
        let omega0 = if self.n_omega0 == 1 {
            vec![self.omega0_min]
        } else {
            let span = (self.omega0_max / self.omega0_min).ln();
            (0..self.n_omega0)
                .map(|i| self.omega0_min * (span * i as f64 / (self.n_omega0 - 1) as f64).exp())
                .collect()
        };
        let cutoff_fractions = (1..=self.n_cutoff).map(|j| j as f64 / self.n_cutoff as f64).collect();
        let step = (self.lambda_max - self.lambda_min) / self.n_lambda as f64;
        let lambda = (0..self.n_lambda)
            .map(|l| self.lambda_min + (l as f64 + 0.5) * step)
            .collect();
        Ok(SweepGrid {
            omega0,
            cutoff_fractions,
            lambda,
        })
    }
}

impl SweepGrid {
    pub fn len(&self) -> usize {
        self.omega0.len() * self.cutoff_fractions.len() * self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parameter sets in grid order (`w0` outermost, `lambda` innermost).
    pub fn points(&self) -> Result<Vec<ChirpletParams>> {
        let mut out = Vec::with_capacity(self.len());
        for &w0 in &self.omega0 {
            for &t in &self.cutoff_fractions {
                let wc = if t >= 1.0 { PI } else { w0 * (PI / w0).powf(t) };
                for &lambda in &self.lambda {
                    out.push(ChirpletParams::new(w0, wc, lambda)?);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub params: ChirpletParams,
    pub bandwidth: f64,
    pub delay_spread: f64,
    pub oscillations: f64,
    pub n_fft_used: usize,
    /// The envelope did not fit even the largest permitted transform.
    pub flagged: bool,
}

/// Measures one parameter set at the smallest transform size that holds it.
pub fn measure_record(p: &ChirpletParams) -> Result<SweepRecord> {
    let fit = fitted_waveform(p)?;
    let spectrum = synth_spectrum(p, fit.n_fft.max(BANDWIDTH_N_FFT))?;
    Ok(SweepRecord {
        params: *p,
        bandwidth: measure_bandwidth(&spectrum, p.kc_level())?,
        delay_spread: fit.localization.delay_spread,
        oscillations: count_oscillations(&fit.signal, &fit.localization)?,
        n_fft_used: fit.n_fft,
        flagged: !fit.fits,
    })
}

/// One record per grid point, in grid order.
pub fn run_sweep(grid: &SweepGrid) -> Result<Vec<SweepRecord>> {
    if grid.is_empty() {
        return Err(AltesError::Empty("sweep grid has no points".into()));
    }
    if grid.len() > MAX_GRID_POINTS {
        return Err(AltesError::InvalidParameter(format!(
            "sweep grid has {} points, limit is {MAX_GRID_POINTS}",
            grid.len()
        )));
    }
    let points = grid.points()?;
    let records: Vec<SweepRecord> = points.par_iter().map(measure_record).collect::<Result<_>>()?;
    let flagged = records.iter().filter(|r| r.flagged).count();
    if flagged > 0 {
        log::warn!("{flagged} sweep records exceed the {MAX_FIT_N_FFT}-point transform limit");
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierResult {
    pub records: Vec<SweepRecord>,
    /// Indices into `records` of the Pareto-minimal members, in record order.
    pub frontier: Vec<usize>,
}

impl FrontierResult {
    pub fn frontier_records(&self) -> impl Iterator<Item = &SweepRecord> {
        self.frontier.iter().map(move |&i| &self.records[i])
    }

    pub fn on_frontier(&self) -> Vec<bool> {
        let mut mask = vec![false; self.records.len()];
        for &i in &self.frontier {
            mask[i] = true;
        }
        mask
    }
}

/// Pareto-minimal set under `(delay_spread, bandwidth)`. Exact duplicates are all kept.
pub fn pareto_frontier(records: &[SweepRecord]) -> Result<FrontierResult> {
    if records.is_empty() {
        return Err(AltesError::Empty("no records to rank".into()));
    }
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (&records[a], &records[b]);
        ra.delay_spread
            .total_cmp(&rb.delay_spread)
            .then(ra.bandwidth.total_cmp(&rb.bandwidth))
    });
    let mut frontier = Vec::new();
    // smallest bandwidth among records with strictly smaller delay spread
    let mut best = f64::INFINITY;
    let mut start = 0;
    while start < order.len() {
        let spread = records[order[start]].delay_spread;
        let mut end = start;
        while end < order.len() && records[order[end]].delay_spread == spread {
            end += 1;
        }
        let group_min = records[order[start]].bandwidth;
        if group_min < best {
            frontier.extend(
                order[start..end]
                    .iter()
                    .copied()
                    .filter(|&i| records[i].bandwidth == group_min),
            );
            best = group_min;
        }
        start = end;
    }
    frontier.sort_unstable();
    Ok(FrontierResult {
        records: records.to_vec(),
        frontier,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    WidebandChirping,
    CriticalSampling,
    BoundedOscillations,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::WidebandChirping => "wideband chirping (w0 < pi/4)",
            Bound::CriticalSampling => "critical sampling (w_c = pi)",
            Bound::BoundedOscillations => "bounded oscillations (1/4 < lambda < 3/4 or 4/3 < lambda < 4)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateStatus {
    Pass,
    Warn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound: Bound,
    pub status: GateStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateVerdict {
    pub checks: Vec<BoundCheck>,
}

impl GateVerdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == GateStatus::Pass)
    }

    pub fn status(&self, bound: Bound) -> Option<GateStatus> {
        self.checks.iter().find(|c| c.bound == bound).map(|c| c.status)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| c.status == GateStatus::Warn)
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.bound, self.detail)
    }
}

/// Advisory check of the discrete-time parameter bounds. Never rejects.
pub fn discrete_time_gate(p: &ChirpletParams) -> GateVerdict {
    let status = |ok: bool| if ok { GateStatus::Pass } else { GateStatus::Warn };
    let (w0, wc, lambda) = (p.omega0(), p.omega_c(), p.lambda());
    let oscillation_ok = (lambda > 0.25 && lambda < 0.75) || (lambda > 4.0 / 3.0 && lambda < 4.0);
    GateVerdict {
        checks: vec![
            BoundCheck {
                bound: Bound::WidebandChirping,
                status: status(w0 < PI / 4.0),
                detail: format!("w0 = {w0}"),
            },
            BoundCheck {
                bound: Bound::CriticalSampling,
                status: status((wc - PI).abs() <= NYQUIST_TOLERANCE * PI),
                detail: format!("w_c = {wc}"),
            },
            BoundCheck {
                bound: Bound::BoundedOscillations,
                status: status(oscillation_ok),
                detail: format!("lambda = {lambda}"),
            },
        ],
    }
}

/// Smallest power of two holding a delay spread, if it is within the permitted maximum.
pub fn advised_size(delay_spread: f64) -> Option<usize> {
    let size = (delay_spread.ceil().max(1.0) as usize).next_power_of_two();
    (size <= MAX_FIT_N_FFT).then_some(size)
}

/// Smallest power of two holding the measured `-K_c` delay spread.
pub fn fft_size_advisor(p: &ChirpletParams) -> Result<usize> {
    let fit = fitted_waveform(p)?;
    let too_large = AltesError::TransformTooLarge {
        max_n_fft: MAX_FIT_N_FFT,
    };
    if !fit.fits {
        return Err(too_large);
    }
    advised_size(fit.localization.delay_spread).ok_or(too_large)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(delay_spread: f64, bandwidth: f64) -> SweepRecord {
        SweepRecord {
            params: ChirpletParams::new(0.5, PI, 0.5).unwrap(),
            bandwidth,
            delay_spread,
            oscillations: 1.0,
            n_fft_used: 256,
            flagged: false,
        }
    }

    fn brute_force(records: &[SweepRecord]) -> Vec<usize> {
        (0..records.len())
            .filter(|&i| {
                let r = &records[i];
                !records.iter().any(|o| {
                    o.delay_spread <= r.delay_spread
                        && o.bandwidth <= r.bandwidth
                        && (o.delay_spread < r.delay_spread || o.bandwidth < r.bandwidth)
                })
            })
            .collect()
    }

    #[test]
    fn default_grid_axes() {
        let g = GridSpec::default().build().unwrap();
        assert_eq!((g.omega0.len(), g.cutoff_fractions.len(), g.lambda.len()), (24, 16, 10));
        assert!(g.omega0.iter().any(|w| (w - PI / 2.0).abs() < 1e-12));
        assert!((g.omega0[0] - PI / 64.0).abs() < 1e-15);
        assert!((g.lambda[0] - 0.05).abs() < 1e-15 && (g.lambda[9] - 0.95).abs() < 1e-12);
        let pts = g.points().unwrap();
        assert_eq!(pts.len(), 3840);
        assert!(pts.iter().all(|p| p.omega_c() > p.omega0() && p.omega_c() <= PI));
    }

    #[test]
    fn grid_refusals() {
        let empty = GridSpec {
            n_lambda: 0,
            ..GridSpec::default()
        };
        assert!(empty.build().is_err());
        let huge = GridSpec {
            n_omega0: 100,
            n_cutoff: 100,
            n_lambda: 11,
            ..GridSpec::default()
        };
        assert!(huge.build().unwrap_err().to_string().contains("limit"));
    }

    #[test]
    fn frontier_small_cases() {
        let single = pareto_frontier(&[record(3.0, 1.0)]).unwrap();
        assert_eq!(single.frontier, vec![0]);
        let pair = pareto_frontier(&[record(3.0, 1.0), record(1.0, 3.0)]).unwrap();
        assert_eq!(pair.frontier, vec![0, 1]);
        let ties = pareto_frontier(&[record(2.0, 2.0), record(2.0, 2.0), record(2.0, 3.0)]).unwrap();
        assert_eq!(ties.frontier, vec![0, 1]);
        assert!(pareto_frontier(&[]).is_err());
    }

    #[test]
    fn frontier_matches_quadratic_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(5);
        for _ in 0..50 {
            let recs: Vec<SweepRecord> = (0..60)
                .map(|_| record(rng.gen_range(0..20) as f64, rng.gen_range(0..20) as f64))
                .collect();
            assert_eq!(pareto_frontier(&recs).unwrap().frontier, brute_force(&recs));
        }
    }

    #[test]
    fn gate_verdicts() {
        assert!(discrete_time_gate(&ChirpletParams::new(PI / 5.0, PI, 0.5).unwrap()).passed());
        let fast = discrete_time_gate(&ChirpletParams::new(PI / 5.0, PI, 0.9).unwrap());
        assert_eq!(fast.status(Bound::BoundedOscillations), Some(GateStatus::Warn));
        let reciprocal = discrete_time_gate(&ChirpletParams::new(PI / 5.0, PI, 2.0).unwrap());
        assert!(reciprocal.passed());
        let high = discrete_time_gate(&ChirpletParams::new(2.0, PI * (1.0 + 2e-6), 0.5).unwrap());
        assert_eq!(high.status(Bound::WidebandChirping), Some(GateStatus::Warn));
        assert_eq!(high.status(Bound::CriticalSampling), Some(GateStatus::Pass));
        let low = discrete_time_gate(&ChirpletParams::new(0.2, 2.0, 0.5).unwrap());
        assert_eq!(low.status(Bound::CriticalSampling), Some(GateStatus::Warn));
    }

    #[test]
    fn advisor_reference_case() {
        let p = ChirpletParams::new(PI / 10.0, PI, 0.75).unwrap();
        assert_eq!(fft_size_advisor(&p).unwrap(), 512);
        let narrow = ChirpletParams::new(PI / 2.0, PI, 0.05).unwrap();
        assert!(fft_size_advisor(&narrow).unwrap() <= 256);
    }

    #[test]
    fn record_fields_are_finite() {
        let p = ChirpletParams::new(PI / 5.0, PI, 0.5).unwrap();
        let r = measure_record(&p).unwrap();
        for v in [r.bandwidth, r.delay_spread, r.oscillations] {
            assert!(v.is_finite() && v > 0.0);
        }
        assert!(!r.flagged);
        let step = 2.0 * PI / BANDWIDTH_N_FFT as f64;
        assert!((r.bandwidth - p.bandwidth()).abs() < 2.0 * step, "{}", r.bandwidth);
    }

    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        for (rank, &i) in idx.iter().enumerate() {
            r[i] = rank as f64;
        }
        r
    }

    #[test]
    fn wideband_delay_spread_tracks_bandwidth_ratio() {
        // Spearman correlation over w_c / w0 in [4, 64] at w_c = pi
        for lambda in [0.3, 0.5, 0.7] {
            let ratios: Vec<f64> = (0..13).map(|i| 4.0 * 2f64.powf(i as f64 / 3.0)).collect();
            let spreads: Vec<f64> = ratios
                .iter()
                .map(|r| {
                    measure_record(&ChirpletParams::new(PI / r, PI, lambda).unwrap())
                        .unwrap()
                        .delay_spread
                })
                .collect();
            let (a, b) = (ranks(&ratios), ranks(&spreads));
            let n = a.len() as f64;
            let d2: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum();
            let rho = 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
            assert!(rho > 0.95, "lambda {lambda}: rho {rho}, spreads {spreads:?}");
        }
    }

    #[test]
    fn oscillations_increase_with_lambda_on_the_wideband_family() {
        // narrower bands (w0 > pi/2) carry too little chirp for the count to resolve
        let grid = GridSpec {
            n_cutoff: 1,
            ..GridSpec::default()
        }
        .build()
        .unwrap();
        for &w0 in grid.omega0.iter().filter(|&&w| w <= PI / 2.0) {
            let counts: Vec<f64> = grid
                .lambda
                .iter()
                .map(|&l| {
                    measure_record(&ChirpletParams::new(w0, PI, l).unwrap())
                        .unwrap()
                        .oscillations
                })
                .collect();
            assert!(counts.windows(2).all(|w| w[1] > w[0]), "w0 {w0}: {counts:?}");
        }
    }
}
