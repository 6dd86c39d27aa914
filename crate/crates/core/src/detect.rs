//! Ridge following on scalograms and scoring of chirp-center detections.

use crate::error::{AltesError, Result};
use crate::synth::GroundTruth;
use crate::transform::{Scalogram, Spectrogram};
use serde::{Deserialize, Serialize};

/// Maximum shift change between linked maxima on adjacent scale rows.
pub const LINK_WINDOW: usize = 2;

/// Maxima at or below this fraction of the global peak are ignored (the -40 dB level).
pub const FLOOR_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RidgePoint {
    pub scale_index: usize,
    pub shift_index: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ridge {
    pub points: Vec<RidgePoint>,
    /// Least-squares fit of shift index against scale index.
    pub line_fit: LineFit,
}

impl Ridge {
    pub fn strength(&self) -> f64 {
        self.points.iter().map(|p| p.magnitude).sum()
    }

    /// Magnitude-weighted mean shift index.
    pub fn center_estimate(&self) -> f64 {
        let total = self.strength();
        if total == 0.0 {
            return 0.0;
        }
        self.points
            .iter()
            .map(|p| p.magnitude * p.shift_index as f64)
            .sum::<f64>()
            / total
    }
}

fn fit_line(points: &[RidgePoint]) -> LineFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.scale_index as f64).sum::<f64>() / n;
    let my = points.iter().map(|p| p.shift_index as f64).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let (dx, dy) = (p.scale_index as f64 - mx, p.shift_index as f64 - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let resid: f64 = points
            .iter()
            .map(|p| {
                let e = p.shift_index as f64 - (intercept + slope * p.scale_index as f64);
                e * e
            })
            .sum();
        (1.0 - resid / syy).clamp(0.0, 1.0)
    };
    LineFit {
        slope,
        intercept,
        r_squared,
    }
}

/// Interior local maxima of one row, strongest first (ties broken by position).
fn row_maxima(row: &[f64], floor: f64) -> Vec<usize> {
    let mut peaks: Vec<usize> = (1..row.len().saturating_sub(1))
        .filter(|&j| row[j] > floor && row[j] > row[j - 1] && row[j] >= row[j + 1])
        .collect();
    peaks.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
    peaks
}

/// Greedy ridge following. Row maxima, strongest first, extend the nearest chain that
/// ended on the previous row within [`LINK_WINDOW`] shifts; otherwise they start a new
/// chain. Chains shorter than `min_len` are dropped and the `max_ridges` strongest kept.
pub fn extract_ridges(sc: &Scalogram, max_ridges: usize, min_len: usize) -> Result<Vec<Ridge>> {
    if sc.is_empty() {
        return Err(AltesError::Empty("scalogram has no coefficients".into()));
    }
    let mags = sc.magnitudes();
    let peak = mags.iter().flatten().cloned().fold(0.0, f64::max);
    let floor = peak * FLOOR_FRACTION;
    let mut finished: Vec<Vec<RidgePoint>> = Vec::new();
    let mut active: Vec<Vec<RidgePoint>> = Vec::new();
    for (i, row) in mags.iter().enumerate() {
        let mut claimed = vec![false; active.len()];
        let mut next: Vec<Vec<RidgePoint>> = Vec::new();
        let mut fresh: Vec<Vec<RidgePoint>> = Vec::new();
        for j in row_maxima(row, floor) {
            let point = RidgePoint {
                scale_index: i,
                shift_index: j,
                magnitude: row[j],
            };
            let best = active
                .iter()
                .enumerate()
                .filter(|(c, _)| !claimed[*c])
                .map(|(c, chain)| (chain.last().unwrap().shift_index.abs_diff(j), c))
                .filter(|(d, _)| *d <= LINK_WINDOW)
                .min();
            match best {
                Some((_, c)) => {
                    claimed[c] = true;
                    active[c].push(point);
                }
                None => fresh.push(vec![point]),
            }
        }
        for (c, chain) in active.into_iter().enumerate() {
            if claimed[c] {
                next.push(chain);
            } else {
                finished.push(chain);
            }
        }
        next.extend(fresh);
        active = next;
    }
    finished.extend(active);

    let mut ridges: Vec<Ridge> = finished
        .into_iter()
        .filter(|c| c.len() >= min_len.max(1))
        .map(|points| Ridge {
            line_fit: fit_line(&points),
            points,
        })
        .collect();
    ridges.sort_by(|a, b| {
        b.strength()
            .total_cmp(&a.strength())
            .then(a.points[0].scale_index.cmp(&b.points[0].scale_index))
            .then(a.points[0].shift_index.cmp(&b.points[0].shift_index))
    });
    ridges.truncate(max_ridges);
    Ok(ridges)
}

/// Default minimum ridge length: one third of the scale axis.
pub fn default_min_len(sc: &Scalogram) -> usize {
    (sc.n_scales() / 3).max(1)
}

/// Mean `r_squared` over ridges; an empty set scores 0.
pub fn mean_r_squared(ridges: &[Ridge]) -> f64 {
    if ridges.is_empty() {
        return 0.0;
    }
    ridges.iter().map(|r| r.line_fit.r_squared).sum::<f64>() / ridges.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub center: usize,
    pub ridge: Ridge,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub detection: usize,
    pub truth: usize,
    pub error: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub detections: Vec<Detection>,
    pub matched: Vec<MatchedPair>,
    pub hits: usize,
    pub misses: usize,
    pub false_alarms: usize,
    /// `None` when nothing matched.
    pub mean_abs_error: Option<f64>,
}

/// One-to-one matching of ridge centers to true centers, closest pairs first, within `tol`.
/// Detections are ordered by `(center, score)` so the result ignores input order.
pub fn score_detections(ridges: &[Ridge], truth: &GroundTruth, tol: usize) -> Result<DetectionReport> {
    if tol == 0 {
        return Err(AltesError::InvalidParameter("match tolerance must be positive".into()));
    }
    let mut detections: Vec<Detection> = ridges
        .iter()
        .map(|r| Detection {
            center: r.center_estimate().round() as usize,
            score: r.strength(),
            ridge: r.clone(),
        })
        .collect();
    detections.sort_by(|a, b| {
        a.center
            .cmp(&b.center)
            .then(b.score.total_cmp(&a.score))
            .then(a.ridge.line_fit.slope.total_cmp(&b.ridge.line_fit.slope))
    });

    let mut candidates: Vec<MatchedPair> = Vec::new();
    for (d, det) in detections.iter().enumerate() {
        for (t, &center) in truth.chirp_centers.iter().enumerate() {
            let error = det.center.abs_diff(center);
            if error <= tol {
                candidates.push(MatchedPair {
                    detection: d,
                    truth: t,
                    error,
                });
            }
        }
    }
    candidates.sort_by_key(|p| (p.error, p.truth, p.detection));
    let mut used_d = vec![false; detections.len()];
    let mut used_t = vec![false; truth.chirp_centers.len()];
    let mut matched = Vec::new();
    for p in candidates {
        if !used_d[p.detection] && !used_t[p.truth] {
            used_d[p.detection] = true;
            used_t[p.truth] = true;
            matched.push(p);
        }
    }
    matched.sort_by_key(|p| p.truth);
    let hits = matched.len();
    let mean_abs_error = if hits == 0 {
        None
    } else {
        Some(matched.iter().map(|p| p.error as f64).sum::<f64>() / hits as f64)
    };
    Ok(DetectionReport {
        hits,
        misses: truth.chirp_centers.len() - hits,
        false_alarms: detections.len() - hits,
        detections,
        matched,
        mean_abs_error,
    })
}

/// How clearly a stationary tone shows up as a horizontal STFT ridge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToneRidge {
    pub expected_bin: usize,
    /// Peak bin of the frame-averaged magnitude spectrum.
    pub mean_peak_bin: usize,
    /// Frames whose strongest bin is the expected one.
    pub frames_on_bin: usize,
    pub n_frames: usize,
    /// The averaged spectrum peaks on the tone bin and so do at least half of the frames.
    pub present: bool,
}

pub fn stft_tone_ridge(sg: &Spectrogram, tone_freq: f64) -> Result<ToneRidge> {
    let n_frames = sg.n_frames();
    if n_frames == 0 {
        return Err(AltesError::Empty("spectrogram has no frames".into()));
    }
    let bins = sg.window_len;
    let expected_bin =
        ((bins as f64 * tone_freq / (2.0 * std::f64::consts::PI)).round() as i64).rem_euclid(bins as i64) as usize;
    let argmax = |values: &mut dyn Iterator<Item = (usize, f64)>| {
        values
            .fold(
                (0, f64::NEG_INFINITY),
                |best, (k, v)| if v > best.1 { (k, v) } else { best },
            )
            .0
    };
    let mean_peak_bin = argmax(&mut (0..bins).map(|k| (k, sg.magnitudes[k].iter().sum::<f64>())));
    let frames_on_bin = (0..n_frames)
        .filter(|&f| argmax(&mut (0..bins).map(|k| (k, sg.magnitudes[k][f]))) == expected_bin)
        .count();
    Ok(ToneRidge {
        expected_bin,
        mean_peak_bin,
        frames_on_bin,
        n_frames,
        present: mean_peak_bin == expected_bin && 2 * frames_on_bin >= n_frames,
    })
}
