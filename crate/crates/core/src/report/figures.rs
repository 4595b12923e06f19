use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::svg::{hex, nice_ticks, ramp, tick_label, Scale, Svg, PALETTE};
use super::{PieceRecord, ReportError};
use crate::ingest::PitchClass;
use crate::scalar::Real;
use crate::stats::{QuadraticFit, RegressionResult};
use crate::transitions::{Decimals, StochasticMatrix};

const CELL: f64 = 44.0;

/// Fill colour of a heat-map cell: linear from the lightest shade at `min` to the darkest at `max`.
pub fn cell_color(p: f64, min: f64, max: f64) -> (u8, u8, u8) {
    let t = if max > min { (p - min) / (max - min) } else { 0.0 };
    ramp(t)
}

pub fn heatmap_svg<T: Real>(m: &StochasticMatrix<T>) -> Result<String, ReportError> {
    if let Some(&pc) = PitchClass::ALL.iter().find(|&&pc| !m.is_defined(pc)) {
        return Err(ReportError::UndefinedRow(pc));
    }
    let (min, max) = m.range().map(|(a, b)| (a.to_f64_lossy(), b.to_f64_lossy())).expect("all rows defined");
    let left = 70.0;
    let top = 60.0;
    let grid = CELL * 12.0;
    let legend_x = left + grid + 30.0;
    let mut svg = Svg::new(legend_x + 90.0, top + grid + 60.0);

    svg.text((left + legend_x + 90.0) / 2.0, 28.0, 16.0, "middle", None, "title", "Two-note transition probabilities");
    for (i, from) in PitchClass::ALL.iter().enumerate() {
        let y = top + i as f64 * CELL;
        svg.text(left - 8.0, y + CELL / 2.0 + 4.0, 12.0, "end", None, "row-label", from.name());
        svg.text(left + i as f64 * CELL + CELL / 2.0, top - 8.0, 12.0, "middle", None, "col-label", from.name());
        let row = m.row(*from).expect("checked");
        for (j, to) in PitchClass::ALL.iter().enumerate() {
            let p = row[j].to_f64_lossy();
            let color = cell_color(p, min, max);
            let x = left + j as f64 * CELL;
            svg.rect(
                x,
                y,
                CELL,
                CELL,
                &hex(color),
                &format!(r#" class="cell" data-from="{}" data-to="{}" data-p="{p}""#, from.name(), to.name()),
            );
            let ink = if luminance(color) < 110.0 { "#ffffff" } else { "#000000" };
            svg.raw(&format!(
                r#"<text x="{:.2}" y="{:.2}" font-size="9" text-anchor="middle" fill="{ink}">{p:.4}</text>"#,
                x + CELL / 2.0,
                y + CELL / 2.0 + 3.0
            ));
        }
    }
    svg.text(left + grid / 2.0, top + grid + 30.0, 13.0, "middle", None, "x-label", "Second note");
    svg.text(22.0, top + grid / 2.0, 13.0, "middle", Some(-90.0), "y-label", "First note");

    // Legend: vertical ramp, max at the top.
    let steps = 50;
    let bar_h = grid / steps as f64;
    for k in 0..steps {
        let t = 1.0 - k as f64 / (steps - 1) as f64;
        svg.rect(legend_x, top + k as f64 * bar_h, 18.0, bar_h + 0.5, &hex(ramp(t)), r#" class="legend""#);
    }
    svg.text(legend_x + 24.0, top + 10.0, 11.0, "start", None, "legend-max", &format!("{max:.4}"));
    svg.text(legend_x + 24.0, top + grid, 11.0, "start", None, "legend-min", &format!("{min:.4}"));
    Ok(svg.finish())
}

pub(crate) fn luminance((r, g, b): (u8, u8, u8)) -> f64 {
    0.2126 * r as f64 + 0.7152 * g as f64 + 0.0722 * b as f64
}

/// Writes the SVG heat map and a full-precision CSV of the same grid.
pub fn emit_heatmap<T: Real>(m: &StochasticMatrix<T>, svg_path: &Path, csv_path: &Path) -> Result<(), ReportError> {
    let svg = heatmap_svg(m)?;
    let mut buf = Vec::new();
    m.write_csv(&mut buf, Decimals::Full)?;
    write_file(csv_path, &buf)?;
    write_file(svg_path, svg.as_bytes())
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    fs::write(path, bytes).map_err(|e| ReportError::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScatterMode {
    Regression,
    ByComposer,
}

/// Curve overlaid on a scatter plot, in plotted coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fit {
    Line { slope: f64, intercept: f64 },
    Quadratic { c0: f64, c1: f64, c2: f64 },
}

impl Fit {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Fit::Line { slope, intercept } => intercept + slope * x,
            Fit::Quadratic { c0, c1, c2 } => c0 + x * (c1 + x * c2),
        }
    }
}

impl<T: Real> From<&RegressionResult<T>> for Fit {
    fn from(r: &RegressionResult<T>) -> Self {
        Fit::Line { slope: r.slope.to_f64_lossy(), intercept: r.intercept.to_f64_lossy() }
    }
}

impl<T: Real> From<&QuadraticFit<T>> for Fit {
    fn from(q: &QuadraticFit<T>) -> Self {
        Fit::Quadratic { c0: q.c0.to_f64_lossy(), c1: q.c1.to_f64_lossy(), c2: q.c2.to_f64_lossy() }
    }
}

#[derive(Debug, Clone)]
pub struct ScatterOptions {
    pub mode: ScatterMode,
    pub fit: Option<Fit>,
    /// Plot originality on x and popularity on y.
    pub swap_axes: bool,
    pub title: String,
}

impl ScatterOptions {
    pub fn new(mode: ScatterMode) -> Self {
        let title = match mode {
            ScatterMode::Regression => "Melodic originality and popularity",
            ScatterMode::ByComposer => "Melodic originality and popularity by composer",
        };
        ScatterOptions { mode, fit: None, swap_axes: false, title: title.to_string() }
    }

    pub fn with_fit(mut self, fit: Fit) -> Self {
        self.fit = Some(fit);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPoint {
    pub file_name: String,
    pub composer: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendEntry {
    pub label: String,
    pub color: String,
}

/// Data-space content of a scatter figure, before rendering.
#[derive(Debug, Clone)]
pub struct ScatterPlot {
    pub points: Vec<ScatterPoint>,
    pub legend: Vec<LegendEntry>,
    /// Sampled fit curve in data coordinates; empty without a fit.
    pub fit_path: Vec<(f64, f64)>,
    pub x_label: String,
    pub y_label: String,
    pub options: ScatterOptions,
}

const POPULARITY_LABEL: &str = "Popularity (search results)";
const ORIGINALITY_LABEL: &str = "Melodic originality";
const FIT_COLOR: &str = "#d62728";
const POINT_COLOR: &str = "#1f77b4";

impl ScatterPlot {
    pub fn build(records: &[PieceRecord], options: ScatterOptions) -> Result<Self, ReportError> {
        let missing: Vec<String> = records
            .iter()
            .filter(|r| r.originality.is_none() || r.popularity.is_none())
            .map(|r| r.file_name.clone())
            .collect();
        if !missing.is_empty() {
            return Err(ReportError::MissingFields(missing));
        }
        let points: Vec<ScatterPoint> = records
            .iter()
            .map(|r| {
                let (o, p) = (r.originality.unwrap(), r.popularity.unwrap() as f64);
                let (x, y) = if options.swap_axes { (o, p) } else { (p, o) };
                ScatterPoint { file_name: r.file_name.clone(), composer: r.composer.clone(), x, y }
            })
            .collect();
        let (x_label, y_label) = if options.swap_axes {
            (ORIGINALITY_LABEL, POPULARITY_LABEL)
        } else {
            (POPULARITY_LABEL, ORIGINALITY_LABEL)
        };

        let legend = match options.mode {
            ScatterMode::ByComposer => composer_colors(&points)
                .into_iter()
                .map(|(label, color)| LegendEntry { label, color: color.to_string() })
                .collect(),
            ScatterMode::Regression => {
                let mut v = vec![LegendEntry { label: "Pieces".into(), color: POINT_COLOR.into() }];
                if options.fit.is_some() {
                    v.push(LegendEntry { label: "Least-squares fit".into(), color: FIT_COLOR.into() });
                }
                v
            }
        };

        let fit_path = match (&options.fit, x_range(&points)) {
            (Some(fit), Some((lo, hi))) => {
                let samples = match fit {
                    Fit::Line { .. } => 2,
                    Fit::Quadratic { .. } => 64,
                };
                (0..samples)
                    .map(|k| {
                        let x = if k == samples - 1 { hi } else { lo + (hi - lo) * k as f64 / (samples - 1) as f64 };
                        (x, fit.eval(x))
                    })
                    .collect()
            }
            _ => Vec::new(),
        };

        Ok(ScatterPlot { points, legend, fit_path, x_label: x_label.into(), y_label: y_label.into(), options })
    }

    /// First and last point of the overlaid curve.
    pub fn fit_endpoints(&self) -> Option<((f64, f64), (f64, f64))> {
        Some((*self.fit_path.first()?, *self.fit_path.last()?))
    }

    pub fn to_svg(&self) -> String {
        let (left, right, top, bottom) = (80.0, 190.0, 50.0, 60.0);
        let (pw, ph) = (560.0, 400.0);
        let mut svg = Svg::new(left + pw + right, top + ph + bottom);

        let ys = self.points.iter().map(|p| p.y).chain(self.fit_path.iter().map(|p| p.1));
        let (xlo, xhi) = x_range(&self.points).unwrap_or((0.0, 1.0));
        let (ylo, yhi) = min_max(ys).unwrap_or((0.0, 1.0));
        let sx = Scale::padded(xlo, xhi, left, left + pw);
        let sy = Scale::padded(ylo, yhi, top + ph, top);

        svg.text(left + pw / 2.0, 28.0, 16.0, "middle", None, "title", &self.options.title);
        axes(&mut svg, &sx, &sy, left, top, pw, ph);
        svg.text(left + pw / 2.0, top + ph + 45.0, 13.0, "middle", None, "x-label", &self.x_label);
        svg.text(24.0, top + ph / 2.0, 13.0, "middle", Some(-90.0), "y-label", &self.y_label);

        let colors = composer_colors(&self.points);
        for p in &self.points {
            let color = match self.options.mode {
                ScatterMode::ByComposer => colors[&p.composer],
                ScatterMode::Regression => POINT_COLOR,
            };
            svg.circle(sx.map(p.x), sy.map(p.y), 3.5, color, r#" class="point" fill-opacity="0.8""#);
        }
        if !self.fit_path.is_empty() {
            let pts: Vec<(f64, f64)> = self.fit_path.iter().map(|&(x, y)| (sx.map(x), sy.map(y))).collect();
            svg.polyline(&pts, FIT_COLOR, 2.0, "fit");
        }

        let lx = left + pw + 20.0;
        for (k, entry) in self.legend.iter().enumerate() {
            let y = top + 10.0 + k as f64 * 20.0;
            svg.raw(r#"<g class="legend-entry">"#);
            svg.rect(lx, y - 9.0, 12.0, 12.0, &entry.color, "");
            svg.text(lx + 18.0, y + 1.0, 12.0, "start", None, "legend-label", &entry.label);
            svg.raw("</g>");
        }
        svg.finish()
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn x_range(points: &[ScatterPoint]) -> Option<(f64, f64)> {
    min_max(points.iter().map(|p| p.x))
}

fn composer_colors(points: &[ScatterPoint]) -> BTreeMap<String, &'static str> {
    let mut names: Vec<&str> = points.iter().map(|p| p.composer.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    names.into_iter().enumerate().map(|(i, c)| (c.to_string(), PALETTE[i % PALETTE.len()])).collect()
}

fn axes(svg: &mut Svg, sx: &Scale, sy: &Scale, left: f64, top: f64, pw: f64, ph: f64) {
    svg.line(left, top + ph, left + pw, top + ph, "#000000", 1.0);
    svg.line(left, top, left, top + ph, "#000000", 1.0);
    let (x0, x1) = sx.domain();
    for t in nice_ticks(x0, x1, 6) {
        let x = sx.map(t);
        svg.line(x, top + ph, x, top + ph + 5.0, "#000000", 1.0);
        svg.text(x, top + ph + 18.0, 10.0, "middle", None, "tick", &tick_label(t));
    }
    let (y0, y1) = sy.domain();
    for t in nice_ticks(y0, y1, 6) {
        let y = sy.map(t);
        svg.line(left - 5.0, y, left, y, "#000000", 1.0);
        svg.text(left - 8.0, y + 3.5, 10.0, "end", None, "tick", &tick_label(t));
    }
}

/// Writes the scatter figure and returns its data-space content.
pub fn emit_scatter(records: &[PieceRecord], options: ScatterOptions, path: &Path) -> Result<ScatterPlot, ReportError> {
    let plot = ScatterPlot::build(records, options)?;
    write_file(path, plot.to_svg().as_bytes())?;
    Ok(plot)
}

/// Five-number summary of one composer's scores, quartiles by the median-exclusive rule.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxStats {
    pub composer: String,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Whiskers {
    pub low: f64,
    pub high: f64,
    pub outliers: Vec<f64>,
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn box_stats(composer: &str, values: &[f64]) -> Result<BoxStats, ReportError> {
    if values.is_empty() {
        return Err(ReportError::EmptyGroup(composer.to_string()));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = median_sorted(&v);
    let (q1, q3) = if n == 1 {
        (median, median)
    } else {
        let half = n / 2;
        (median_sorted(&v[..half]), median_sorted(&v[n - half..]))
    };
    Ok(BoxStats { composer: composer.to_string(), min: v[0], q1, median, q3, max: v[n - 1], n })
}

/// Whiskers reach the most extreme values within 1.5·IQR of the box; the rest are outliers.
pub fn whiskers(stats: &BoxStats, values: &[f64]) -> Whiskers {
    let iqr = stats.q3 - stats.q1;
    let (lo_fence, hi_fence) = (stats.q1 - 1.5 * iqr, stats.q3 + 1.5 * iqr);
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let inside = sorted.iter().copied().filter(|v| (lo_fence..=hi_fence).contains(v));
    let (low, high) = min_max(inside).unwrap_or((stats.q1, stats.q3));
    let outliers = sorted.into_iter().filter(|v| !(lo_fence..=hi_fence).contains(v)).collect();
    Whiskers { low, high, outliers }
}

pub fn box_plot_svg(groups: &[(BoxStats, Whiskers)]) -> String {
    let (left, top, bottom) = (80.0, 50.0, 70.0);
    let slot = 90.0;
    let pw = slot * groups.len().max(1) as f64;
    let ph = 400.0;
    let mut svg = Svg::new(left + pw + 30.0, top + ph + bottom);
    let all = groups.iter().flat_map(|(b, _)| [b.min, b.max]);
    let (lo, hi) = min_max(all).unwrap_or((0.0, 1.0));
    let sy = Scale::padded(lo, hi, top + ph, top);

    svg.text(left + pw / 2.0, 28.0, 16.0, "middle", None, "title", "Melodic originality by composer");
    svg.line(left, top + ph, left + pw, top + ph, "#000000", 1.0);
    svg.line(left, top, left, top + ph, "#000000", 1.0);
    let (y0, y1) = sy.domain();
    for t in nice_ticks(y0, y1, 6) {
        let y = sy.map(t);
        svg.line(left - 5.0, y, left, y, "#000000", 1.0);
        svg.text(left - 8.0, y + 3.5, 10.0, "end", None, "tick", &tick_label(t));
    }
    for (i, (b, w)) in groups.iter().enumerate() {
        let cx = left + slot * (i as f64 + 0.5);
        let half = slot * 0.3;
        let color = PALETTE[i % PALETTE.len()];
        svg.raw(&format!(r#"<g class="box" data-composer="{}">"#, super::svg::escape(&b.composer)));
        svg.line(cx, sy.map(w.low), cx, sy.map(b.q1), "#000000", 1.0);
        svg.line(cx, sy.map(b.q3), cx, sy.map(w.high), "#000000", 1.0);
        svg.line(cx - half / 2.0, sy.map(w.low), cx + half / 2.0, sy.map(w.low), "#000000", 1.0);
        svg.line(cx - half / 2.0, sy.map(w.high), cx + half / 2.0, sy.map(w.high), "#000000", 1.0);
        let (ytop, ybot) = (sy.map(b.q3), sy.map(b.q1));
        svg.rect(
            cx - half,
            ytop,
            2.0 * half,
            (ybot - ytop).max(0.5),
            color,
            r##" fill-opacity="0.6" stroke="#000000""##,
        );
        svg.line(cx - half, sy.map(b.median), cx + half, sy.map(b.median), "#000000", 2.0);
        for &o in &w.outliers {
            svg.circle(cx, sy.map(o), 3.0, "none", r##" class="outlier" stroke="#000000""##);
        }
        svg.raw("</g>");
        svg.text(cx, top + ph + 18.0, 11.0, "middle", None, "tick", &b.composer);
    }
    svg.text(left + pw / 2.0, top + ph + 50.0, 13.0, "middle", None, "x-label", "Composer");
    svg.text(24.0, top + ph / 2.0, 13.0, "middle", Some(-90.0), "y-label", ORIGINALITY_LABEL);
    svg.finish()
}

pub const BOX_STATS_HEADER: [&str; 11] =
    ["composer", "n", "min", "q1", "median", "q3", "max", "whisker_low", "whisker_high", "outliers", "iqr"];

/// Writes the box plot and a CSV of the per-composer summaries, composers in name order.
pub fn emit_box_plot(
    scores_by_composer: &BTreeMap<String, Vec<f64>>,
    svg_path: &Path,
    csv_path: &Path,
) -> Result<Vec<BoxStats>, ReportError> {
    let groups = scores_by_composer
        .iter()
        .map(|(c, v)| {
            let b = box_stats(c, v)?;
            let w = whiskers(&b, v);
            Ok((b, w))
        })
        .collect::<Result<Vec<_>, ReportError>>()?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let to_csv = |e: csv::Error| ReportError::csv(csv_path, e);
    w.write_record(BOX_STATS_HEADER).map_err(to_csv)?;
    for (b, wh) in &groups {
        w.write_record([
            b.composer.clone(),
            b.n.to_string(),
            b.min.to_string(),
            b.q1.to_string(),
            b.median.to_string(),
            b.q3.to_string(),
            b.max.to_string(),
            wh.low.to_string(),
            wh.high.to_string(),
            wh.outliers.len().to_string(),
            (b.q3 - b.q1).to_string(),
        ])
        .map_err(to_csv)?;
    }
    let bytes = w.into_inner().map_err(|e| ReportError::io(csv_path, e.into_error()))?;
    write_file(csv_path, &bytes)?;
    write_file(svg_path, box_plot_svg(&groups).as_bytes())?;
    Ok(groups.into_iter().map(|(b, _)| b).collect())
}
