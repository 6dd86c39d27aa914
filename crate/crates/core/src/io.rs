//! File formats: the binary signal container and CSV tables with a config comment line.
//!
//! Binary layout (little-endian): 8-byte magic `ALTESSIG`, `u32` version, `u32` reserved,
//! `u64` sample count, `f64` sampling interval, then interleaved `f64` real/imaginary pairs.

use crate::chirplet::{AnalyticSignal, Spectrum};
use crate::detect::Ridge;
use crate::error::{AltesError, Result};
use crate::sweep::FrontierResult;
use crate::transform::{Scalogram, Spectrogram};
use num_complex::Complex64;
use std::io::{Read, Write};

pub const SIGNAL_MAGIC: &[u8; 8] = b"ALTESSIG";
pub const SIGNAL_VERSION: u32 = 1;
pub const SIGNAL_HEADER_LEN: usize = 32;

pub fn write_signal_binary<W: Write>(mut w: W, sig: &AnalyticSignal) -> Result<()> {
    let mut header = Vec::with_capacity(SIGNAL_HEADER_LEN);
    header.extend_from_slice(SIGNAL_MAGIC);
    header.extend_from_slice(&SIGNAL_VERSION.to_le_bytes());
    header.extend_from_slice(&0u32.to_le_bytes());
    header.extend_from_slice(&(sig.len() as u64).to_le_bytes());
    header.extend_from_slice(&sig.dt.to_le_bytes());
    w.write_all(&header)?;
    let mut body = Vec::with_capacity(sig.len() * 16);
    for v in &sig.samples {
        body.extend_from_slice(&v.re.to_le_bytes());
        body.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&body)?;
    Ok(())
}

pub fn read_signal_binary<R: Read>(mut r: R) -> Result<AnalyticSignal> {
    let mut header = [0u8; SIGNAL_HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|_| AltesError::Format("truncated signal header".into()))?;
    if &header[..8] != SIGNAL_MAGIC {
        return Err(AltesError::Format("not an ALTESSIG file".into()));
    }
    let u32_at = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap());
    let version = u32_at(8);
    if version != SIGNAL_VERSION {
        return Err(AltesError::Format(format!("unsupported signal version {version}")));
    }
    let len = u64::from_le_bytes(header[16..24].try_into().unwrap()) as usize;
    let dt = f64::from_le_bytes(header[24..32].try_into().unwrap());
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() != len.saturating_mul(16) {
        return Err(AltesError::Format(format!(
            "header declares {len} samples but body holds {} bytes",
            body.len()
        )));
    }
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().unwrap());
    let samples = body
        .chunks_exact(16)
        .map(|c| Complex64::new(f(&c[..8]), f(&c[8..])))
        .collect();
    Ok(AnalyticSignal { samples, dt })
}

/// Writes `# config: <json>` followed by a header row and the records.
pub fn write_table<W: Write, I, R>(mut w: W, config: &str, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    writeln!(w, "# config: {config}")?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header)?;
    for row in rows {
        csv.write_record(row)?;
    }
    csv.flush()?;
    Ok(())
}

fn num(v: f64) -> String {
    format!("{v}")
}

pub fn write_signal_csv<W: Write>(w: W, config: &str, sig: &AnalyticSignal) -> Result<()> {
    write_table(
        w,
        config,
        &["index", "real", "imag"],
        sig.samples
            .iter()
            .enumerate()
            .map(|(i, v)| vec![i.to_string(), num(v.re), num(v.im)]),
    )
}

/// Reads a signal CSV written by [`write_signal_csv`]; `#` lines are skipped.
pub fn read_signal_csv<R: Read>(r: R) -> Result<AnalyticSignal> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let mut samples = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| AltesError::Format(format!("bad value in row {}", line + 1)))
        };
        samples.push(Complex64::new(field(1)?, field(2)?));
    }
    Ok(AnalyticSignal::new(samples))
}

pub fn write_spectrum_csv<W: Write>(w: W, config: &str, s: &Spectrum) -> Result<()> {
    write_table(
        w,
        config,
        &["omega", "real", "imag", "magnitude_db", "phase"],
        s.values.iter().enumerate().map(|(i, v)| {
            let db = if v.norm() > 0.0 {
                20.0 * v.norm().log10()
            } else {
                f64::NEG_INFINITY
            };
            vec![num(s.frequency(i)), num(v.re), num(v.im), num(db), num(v.arg())]
        }),
    )
}

pub fn write_scalogram_csv<W: Write>(w: W, config: &str, sc: &Scalogram) -> Result<()> {
    let rows = sc.coefficients.iter().enumerate().flat_map(|(i, row)| {
        row.iter().enumerate().map(move |(j, c)| {
            vec![
                num(sc.scales[i]),
                num(sc.shifts[j]),
                num(c.re),
                num(c.im),
                num(c.norm()),
            ]
        })
    });
    write_table(w, config, &["scale", "shift", "real", "imag", "magnitude"], rows)
}

pub fn write_spectrogram_csv<W: Write>(w: W, config: &str, sg: &Spectrogram) -> Result<()> {
    let rows = sg.magnitudes.iter().enumerate().flat_map(|(k, row)| {
        row.iter()
            .enumerate()
            .map(move |(f, m)| vec![k.to_string(), f.to_string(), num(*m)])
    });
    write_table(w, config, &["bin", "frame", "magnitude"], rows)
}

pub fn write_ridges_csv<W: Write>(w: W, config: &str, ridges: &[Ridge]) -> Result<()> {
    let rows = ridges.iter().enumerate().flat_map(|(r, ridge)| {
        ridge.points.iter().map(move |p| {
            vec![
                r.to_string(),
                p.scale_index.to_string(),
                p.shift_index.to_string(),
                num(p.magnitude),
            ]
        })
    });
    write_table(w, config, &["ridge", "scale_index", "shift_index", "magnitude"], rows)
}

/// Sweep records with frontier membership; `flagged` marks envelopes that outgrew the
/// largest permitted transform.
pub fn write_sweep_csv<W: Write>(w: W, config: &str, result: &FrontierResult, frontier_only: bool) -> Result<()> {
    let mask = result.on_frontier();
    let rows = result
        .records
        .iter()
        .zip(mask)
        .filter(|(_, on)| !frontier_only || *on)
        .map(|(r, on)| {
            vec![
                num(r.params.omega0()),
                num(r.params.omega_c()),
                num(r.params.lambda()),
                num(r.bandwidth),
                num(r.delay_spread),
                num(r.oscillations),
                r.n_fft_used.to_string(),
                on.to_string(),
                r.flagged.to_string(),
            ]
        });
    write_table(
        w,
        config,
        &[
            "omega0",
            "omega_c",
            "lambda",
            "bandwidth",
            "delay_spread",
            "oscillations",
            "n_fft",
            "on_frontier",
            "flagged",
        ],
        rows,
    )
}
