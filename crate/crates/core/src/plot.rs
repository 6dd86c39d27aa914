//! SVG renderings of the numeric outputs. Plots are conveniences; CSV and JSON stay authoritative.

use crate::error::{AltesError, Result};
use plotters::prelude::*;
use std::path::Path;

const SIZE: (u32, u32) = (900, 560);

/// Columns beyond this are decimated by taking the per-block maximum.
const MAX_HEATMAP_COLUMNS: usize = 512;

fn plot_err<E: std::fmt::Display>(e: E) -> AltesError {
    AltesError::Format(format!("plot rendering failed: {e}"))
}

fn bounds<'a, I: Iterator<Item = &'a f64>>(values: I) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
}

pub fn line_plot(path: &Path, title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<()> {
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let xs = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| &p.0)));
    let ys = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| &p.1)));
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(xs.0..xs.1, ys.0..ys.1)
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(plot_err)?;
    for (i, s) in series.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        let pts: Vec<(f64, f64)> = s.points.iter().copied().filter(|p| p.1.is_finite()).collect();
        chart
            .draw_series(LineSeries::new(pts, color.stroke_width(1)))
            .map_err(plot_err)?
            .label(s.label)
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color));
    }
    if series.len() > 1 {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(plot_err)?;
    }
    root.present().map_err(plot_err)
}

/// Scatter of all points with a highlighted subset drawn on top.
pub fn scatter_plot(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    points: &[(f64, f64)],
    highlighted: &[(f64, f64)],
) -> Result<()> {
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let xs = bounds(points.iter().map(|p| &p.0));
    let ys = bounds(points.iter().map(|p| &p.1));
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(xs.0..xs.1, ys.0..ys.1)
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(plot_err)?;
    chart
        .draw_series(points.iter().map(|&p| Circle::new(p, 2, BLUE.mix(0.4).filled())))
        .map_err(plot_err)?;
    chart
        .draw_series(highlighted.iter().map(|&p| Circle::new(p, 3, RED.filled())))
        .map_err(plot_err)?;
    root.present().map_err(plot_err)
}

/// Log-magnitude image of `grid[row][col]`, rows on the vertical axis, `floor_db` below peak clipped.
pub fn heatmap(path: &Path, title: &str, x_label: &str, y_label: &str, grid: &[Vec<f64>], floor_db: f64) -> Result<()> {
    let rows = grid.len();
    let cols = grid.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(AltesError::Empty("nothing to plot".into()));
    }
    let block = cols.div_ceil(MAX_HEATMAP_COLUMNS);
    let out_cols = cols.div_ceil(block);
    let peak = grid.iter().flatten().cloned().fold(0.0, f64::max);
    let db = |v: f64| {
        if peak > 0.0 && v > 0.0 {
            (20.0 * (v / peak).log10()).max(floor_db)
        } else {
            floor_db
        }
    };
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(0..cols, 0..rows)
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .disable_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(plot_err)?;
    let cells = (0..rows).flat_map(|r| {
        (0..out_cols).map(move |c| {
            let lo = c * block;
            let hi = (lo + block).min(cols);
            let v = grid[r][lo..hi].iter().cloned().fold(0.0, f64::max);
            let t = 1.0 - db(v) / floor_db;
            Rectangle::new([(lo, r), (hi, r + 1)], ViridisRGB::get_color(t).filled())
        })
    });
    chart.draw_series(cells).map_err(plot_err)?;
    root.present().map_err(plot_err)
}
