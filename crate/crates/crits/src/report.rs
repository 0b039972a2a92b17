//! Report emission: CSV in, CSV/SVG out.
//!
//! All output is deterministic: no timestamps, stable row ordering, and the
//! shortest decimal float encoding that round-trips binary64. Saliency maps
//! and surrogates are CSV matrices (m rows x T columns) with `# key=value`
//! metadata lines; evaluation reports are long-format CSV
//! (`explainer,dataset,metric,method,repetition,value`). SVGs are hand-built:
//! zero-centered diverging heatmaps and grouped boxplots.

use std::fmt::Write as _;

use ndarray::Array2;
use thiserror::Error;

use crate::eval::EvalReport;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed report: {0}")]
    Malformed(String),
}

/// Writes a matrix as CSV with `# key=value` metadata comment lines.
pub fn matrix_to_csv(matrix: &Array2<f64>, meta: &[(String, String)]) -> String {
    let mut out = String::new();
    for (key, value) in meta {
        let _ = writeln!(out, "# {key}={value}");
    }
    for row in matrix.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Reads a matrix CSV written by [`matrix_to_csv`] (metadata returned as-is).
pub type MatrixMeta = Vec<(String, String)>;

pub fn matrix_from_csv(text: &str) -> Result<(Array2<f64>, MatrixMeta), ReportError> {
    let mut meta = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((key, value)) = rest.trim().split_once('=') {
                meta.push((key.trim().to_string(), value.trim().to_string()));
            }
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|t| t.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| {
            ReportError::Malformed(format!("line {}: {e}", lineno + 1))
        })?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(ReportError::Malformed(format!(
                    "line {}: {} columns, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ReportError::Malformed("no data rows".into()));
    }
    let (m, t) = (rows.len(), rows[0].len());
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let matrix = Array2::from_shape_vec((m, t), flat)
        .map_err(|e| ReportError::Malformed(e.to_string()))?;
    Ok((matrix, meta))
}

pub const EVAL_CSV_HEADER: &str = "explainer,dataset,metric,method,repetition,value";

/// Long-format CSV for an [`EvalReport`]: metadata comments, a header line,
/// then one row per measurement. The `method` column carries the perturbation
/// name for alignment rows, the noise std for input-sensitivity rows, and
/// the instance index for sparsity rows.
pub fn eval_report_to_csv(report: &EvalReport) -> String {
    let mut out = String::new();
    let grid: Vec<String> = report.noise_grid.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(
        out,
        "# dataset={} samples={} repetitions={} seed={} q={} window={} noise_grid={}",
        report.dataset,
        report.samples_per_repetition,
        report.repetitions,
        report.seed,
        report.q,
        report.window,
        grid.join("|")
    );
    let _ = writeln!(out, "{EVAL_CSV_HEADER}");
    for r in &report.alignment {
        let _ = writeln!(
            out,
            "{},{},alignment,{},{},{}",
            r.explainer, report.dataset, r.method, r.repetition, r.value
        );
    }
    for r in &report.sensitivity {
        let _ = writeln!(
            out,
            "{},{},input_sensitivity,{},{},{}",
            r.explainer, report.dataset, r.noise_std, r.repetition, r.value
        );
    }
    for r in &report.sparsity {
        let _ = writeln!(
            out,
            "{},{},sparsity,{},{},{}",
            r.explainer, report.dataset, r.instance, r.repetition, r.value
        );
    }
    out
}

/// One parsed row of a long-format evaluation CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalCsvRow {
    pub explainer: String,
    pub dataset: String,
    pub metric: String,
    pub method: String,
    pub repetition: usize,
    pub value: f64,
}

pub fn eval_csv_rows(text: &str) -> Result<Vec<EvalCsvRow>, ReportError> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != EVAL_CSV_HEADER {
                return Err(ReportError::Malformed(format!(
                    "line {}: expected header {EVAL_CSV_HEADER:?}",
                    lineno + 1
                )));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(ReportError::Malformed(format!(
                "line {}: {} fields, expected 6",
                lineno + 1,
                fields.len()
            )));
        }
        rows.push(EvalCsvRow {
            explainer: fields[0].to_string(),
            dataset: fields[1].to_string(),
            metric: fields[2].to_string(),
            method: fields[3].to_string(),
            repetition: fields[4].parse().map_err(|e| {
                ReportError::Malformed(format!("line {}: repetition: {e}", lineno + 1))
            })?,
            value: fields[5].parse().map_err(|e| {
                ReportError::Malformed(format!("line {}: value: {e}", lineno + 1))
            })?,
        });
    }
    if !saw_header {
        return Err(ReportError::Malformed("no header line".into()));
    }
    Ok(rows)
}

// -- SVG ---------------------------------------------------------------

const PALETTE: [&str; 6] = [
    "#4878a8", "#e1812c", "#3a923a", "#c03d3e", "#9372b2", "#937860",
];

fn diverging_color(value: f64, vmax: f64) -> String {
    // blue (negative) .. near-white .. red (positive)
    let t = if vmax > 0.0 {
        (value / vmax).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let (lo, hi): ([f64; 3], [f64; 3]) = if t < 0.0 {
        ([247.0, 247.0, 247.0], [33.0, 102.0, 172.0])
    } else {
        ([247.0, 247.0, 247.0], [178.0, 24.0, 43.0])
    };
    let a = t.abs();
    let mix = |i: usize| (lo[i] + a * (hi[i] - lo[i])).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(0), mix(1), mix(2))
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (0.01..10000.0).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.1e}")
    }
}

/// Zero-centered diverging heatmap of an (m, T) map. For univariate maps an
/// optional series panel is drawn above the heatmap.
pub fn heatmap_svg(map: &Array2<f64>, title: &str, series: Option<&Array2<f64>>) -> String {
    let (m, t) = map.dim();
    let cell_w = (900.0 / t as f64).clamp(3.0, 16.0);
    let cell_h = (240.0 / m as f64).clamp(cell_w, 40.0);
    let margin_l = 46.0;
    let margin_top = 34.0;
    let series_panel = match series {
        Some(s) if s.nrows() == 1 && m == 1 => 84.0,
        _ => 0.0,
    };
    let heat_w = cell_w * t as f64;
    let heat_h = cell_h * m as f64;
    let width = margin_l + heat_w + 30.0;
    let height = margin_top + series_panel + heat_h + 64.0;
    let vmax = map.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\">"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{margin_l}\" y=\"20\" font-size=\"14\">{title}</text>"
    );

    if series_panel > 0.0 {
        let s = series.unwrap();
        let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = (max - min).max(1e-12);
        let y0 = margin_top;
        let h = series_panel - 14.0;
        let points: Vec<String> = s
            .row(0)
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let x = margin_l + (i as f64 + 0.5) * cell_w;
                let y = y0 + h - (v - min) / span * h;
                format!("{x:.1},{y:.1}")
            })
            .collect();
        let _ = writeln!(
            svg,
            "<rect x=\"{margin_l}\" y=\"{y0}\" width=\"{heat_w:.1}\" height=\"{h:.1}\" fill=\"#fcfcfc\" stroke=\"#ddd\"/>"
        );
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#555\" stroke-width=\"1.2\"/>",
            points.join(" ")
        );
    }

    let heat_y = margin_top + series_panel;
    for c in 0..m {
        for ti in 0..t {
            let x = margin_l + ti as f64 * cell_w;
            let y = heat_y + c as f64 * cell_h;
            let _ = writeln!(
                svg,
                "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{cell_w:.1}\" height=\"{cell_h:.1}\" fill=\"{}\"/>",
                diverging_color(map[[c, ti]], vmax)
            );
        }
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"end\">ch {c}</text>",
            margin_l - 4.0,
            heat_y + (c as f64 + 0.6) * cell_h
        );
    }
    let _ = writeln!(
        svg,
        "<rect x=\"{margin_l}\" y=\"{heat_y:.1}\" width=\"{heat_w:.1}\" height=\"{heat_h:.1}\" fill=\"none\" stroke=\"#888\"/>"
    );
    // time axis labels: first and last step
    let _ = writeln!(
        svg,
        "<text x=\"{margin_l}\" y=\"{:.1}\" font-size=\"10\">t=0</text>",
        heat_y + heat_h + 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"end\">t={}</text>",
        margin_l + heat_w,
        heat_y + heat_h + 12.0,
        t - 1
    );

    // colorbar
    let bar_y = heat_y + heat_h + 22.0;
    let bar_w = 180.0;
    let _ = writeln!(svg, "<defs><linearGradient id=\"cb\" x1=\"0\" x2=\"1\" y1=\"0\" y2=\"0\">");
    for i in 0..=10 {
        let frac = i as f64 / 10.0;
        let v = -vmax + 2.0 * vmax * frac;
        let _ = writeln!(
            svg,
            "<stop offset=\"{:.0}%\" stop-color=\"{}\"/>",
            frac * 100.0,
            diverging_color(v, vmax)
        );
    }
    let _ = writeln!(svg, "</linearGradient></defs>");
    let _ = writeln!(
        svg,
        "<rect x=\"{margin_l}\" y=\"{bar_y:.1}\" width=\"{bar_w}\" height=\"10\" fill=\"url(#cb)\" stroke=\"#888\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{margin_l}\" y=\"{:.1}\" font-size=\"10\">-{}</text>",
        bar_y + 22.0,
        fmt_tick(vmax)
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"middle\">0</text>",
        margin_l + bar_w / 2.0,
        bar_y + 22.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"end\">{}</text>",
        margin_l + bar_w,
        bar_y + 22.0,
        fmt_tick(vmax)
    );
    svg.push_str("</svg>\n");
    svg
}

/// One boxplot series: a name plus one value set per category.
#[derive(Debug, Clone)]
pub struct BoxSeries {
    pub name: String,
    pub values: Vec<Vec<f64>>,
}

pub(crate) fn quartiles(sorted: &[f64]) -> (f64, f64, f64) {
    let q = |p: f64| -> f64 {
        let pos = p * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let frac = pos - lo as f64;
        if lo + 1 < sorted.len() {
            sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
        } else {
            sorted[lo]
        }
    };
    (q(0.25), (q(0.5)), q(0.75))
}

/// Grouped boxplots: one group of boxes (one per series) per category.
/// Whiskers span the full value range.
pub fn boxplot_svg(
    title: &str,
    y_label: &str,
    categories: &[String],
    series: &[BoxSeries],
) -> String {
    let box_w = 20.0;
    let gap = 8.0;
    let group_w = series.len() as f64 * (box_w + gap) + 26.0;
    let margin_l = 62.0;
    let margin_top = 40.0;
    let plot_h = 260.0;
    let width = margin_l + categories.len() as f64 * group_w + 150.0;
    let height = margin_top + plot_h + 50.0;

    let mut all = series
        .iter()
        .flat_map(|s| s.values.iter().flatten().copied())
        .filter(|v| v.is_finite())
        .peekable();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in all.by_ref() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    if hi - lo < 1e-12 {
        hi = lo + 1.0;
    }
    let pad = (hi - lo) * 0.08;
    let (lo, hi) = (lo - pad, hi + pad);
    let y_of = |v: f64| margin_top + plot_h - (v - lo) / (hi - lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\">"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{margin_l}\" y=\"20\" font-size=\"14\">{title}</text>"
    );
    // y axis + ticks
    let _ = writeln!(
        svg,
        "<line x1=\"{margin_l}\" y1=\"{margin_top}\" x2=\"{margin_l}\" y2=\"{:.1}\" stroke=\"#333\"/>",
        margin_top + plot_h
    );
    for i in 0..=5 {
        let v = lo + (hi - lo) * i as f64 / 5.0;
        let y = y_of(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#333\"/>",
            margin_l - 4.0,
            margin_l
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{margin_l}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#eee\"/>",
            margin_l + categories.len() as f64 * group_w
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"end\">{}</text>",
            margin_l - 7.0,
            y + 3.5,
            fmt_tick(v)
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"14\" y=\"{:.1}\" font-size=\"11\" transform=\"rotate(-90 14 {:.1})\" text-anchor=\"middle\">{y_label}</text>",
        margin_top + plot_h / 2.0,
        margin_top + plot_h / 2.0
    );

    for (ci, category) in categories.iter().enumerate() {
        let gx = margin_l + ci as f64 * group_w + 13.0;
        for (si, s) in series.iter().enumerate() {
            let values = match s.values.get(ci) {
                Some(v) if !v.is_empty() => v,
                _ => continue,
            };
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            let (q1, median, q3) = quartiles(&sorted);
            let (wmin, wmax) = (sorted[0], sorted[sorted.len() - 1]);
            let x = gx + si as f64 * (box_w + gap);
            let cx = x + box_w / 2.0;
            let color = PALETTE[si % PALETTE.len()];
            let _ = writeln!(
                svg,
                "<line x1=\"{cx:.1}\" y1=\"{:.1}\" x2=\"{cx:.1}\" y2=\"{:.1}\" stroke=\"#555\"/>",
                y_of(wmax),
                y_of(wmin)
            );
            for w in [wmin, wmax] {
                let _ = writeln!(
                    svg,
                    "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#555\"/>",
                    cx - box_w / 4.0,
                    y_of(w),
                    cx + box_w / 4.0,
                    y_of(w)
                );
            }
            let (top, bottom) = (y_of(q3), y_of(q1));
            let _ = writeln!(
                svg,
                "<rect x=\"{x:.1}\" y=\"{top:.1}\" width=\"{box_w}\" height=\"{:.1}\" fill=\"{color}\" fill-opacity=\"0.75\" stroke=\"#333\"/>",
                (bottom - top).max(0.5)
            );
            let my = y_of(median);
            let _ = writeln!(
                svg,
                "<line x1=\"{x:.1}\" y1=\"{my:.1}\" x2=\"{:.1}\" y2=\"{my:.1}\" stroke=\"#111\" stroke-width=\"1.5\"/>",
                x + box_w
            );
        }
        let label_x = gx + (series.len() as f64 * (box_w + gap)) / 2.0;
        let _ = writeln!(
            svg,
            "<text x=\"{label_x:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{category}</text>",
            margin_top + plot_h + 18.0
        );
    }

    // legend
    let legend_x = margin_l + categories.len() as f64 * group_w + 14.0;
    for (si, s) in series.iter().enumerate() {
        if s.name.is_empty() {
            continue;
        }
        let y = margin_top + si as f64 * 18.0;
        let color = PALETTE[si % PALETTE.len()];
        let _ = writeln!(
            svg,
            "<rect x=\"{legend_x:.1}\" y=\"{y:.1}\" width=\"12\" height=\"12\" fill=\"{color}\" fill-opacity=\"0.75\" stroke=\"#333\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">{}</text>",
            legend_x + 17.0,
            y + 10.0,
            s.name
        );
    }
    svg.push_str("</svg>\n");
    svg
}
