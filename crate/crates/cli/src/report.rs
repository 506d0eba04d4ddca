//! Merging evaluation runs into one report, with the accuracy-vs-precision
//! correlation and an optional SVG boxplot rendering.

use std::fmt::Write as _;
use std::path::Path;

use lesionbench_core::eval::{boxplot_stats, pearson};
use serde::{Deserialize, Serialize};

use crate::evaluate::{read_records, read_summary, PrecisionStats};
use crate::{Error, Result};

/// One evaluation run inside a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunBlock {
    pub id: String,
    pub accuracy: Option<f64>,
    pub n_records: usize,
    pub precision: PrecisionStats,
}

/// The merged report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub runs: Vec<RunBlock>,
    /// Pearson r between run accuracy and run mean precision; present when at
    /// least three runs carry an accuracy and the correlation is defined.
    pub pearson_accuracy_vs_mean_precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pearson_note: Option<String>,
}

/// Loads evaluation outputs (directories holding `records.csv` and, normally,
/// `summary.json`) and recomputes per-run statistics from the raw records.
pub fn build_report(run_dirs: &[impl AsRef<Path>]) -> Result<Report> {
    let mut runs = Vec::with_capacity(run_dirs.len());
    for dir in run_dirs {
        let dir = dir.as_ref();
        let records = read_records(&dir.join("records.csv"))?;
        if records.is_empty() {
            return Err(Error::EmptyEvaluation);
        }

        let summary_path = dir.join("summary.json");
        let (id, accuracy) = if summary_path.is_file() {
            let summary = read_summary(&summary_path)?;
            (summary.run_id, summary.accuracy)
        } else {
            let id = dir
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| dir.display().to_string());
            (id, None)
        };

        let precisions: Vec<f64> = records.iter().map(|r| r.precision).collect();
        runs.push(RunBlock {
            id,
            accuracy,
            n_records: records.len(),
            precision: boxplot_stats(&precisions)?.into(),
        });
    }

    let with_accuracy: Vec<&RunBlock> = runs.iter().filter(|r| r.accuracy.is_some()).collect();
    let (r, note) = if with_accuracy.len() >= 3 {
        let xs: Vec<f64> = with_accuracy.iter().map(|r| r.accuracy.unwrap()).collect();
        let ys: Vec<f64> = with_accuracy.iter().map(|r| r.precision.mean).collect();
        match pearson(&xs, &ys) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(format!("correlation not defined: {e}"))),
        }
    } else {
        (None, None)
    };

    Ok(Report {
        runs,
        pearson_accuracy_vs_mean_precision: r,
        pearson_note: note,
    })
}

/// Renders the report's precision distributions as a simple SVG boxplot.
pub fn render_boxplot_svg(report: &Report) -> String {
    const BOX_W: f64 = 46.0;
    const SLOT_W: f64 = 90.0;
    const LEFT: f64 = 60.0;
    const TOP: f64 = 20.0;
    const PLOT_H: f64 = 260.0;
    const BOTTOM_PAD: f64 = 50.0;

    let width = LEFT + SLOT_W * report.runs.len() as f64 + 20.0;
    let height = TOP + PLOT_H + BOTTOM_PAD;
    let y = |v: f64| TOP + PLOT_H * (1.0 - v.clamp(0.0, 1.0));

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="11">"#
    );
    // Axis and gridlines.
    for tick in 0..=4 {
        let v = tick as f64 / 4.0;
        let ty = y(v);
        let _ = write!(
            svg,
            r##"<line x1="{LEFT}" y1="{ty:.1}" x2="{:.1}" y2="{ty:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{v:.2}</text>"##,
            width - 15.0,
            LEFT - 6.0,
            ty + 4.0
        );
    }

    for (i, run) in report.runs.iter().enumerate() {
        let cx = LEFT + SLOT_W * (i as f64 + 0.5);
        let (x0, x1) = (cx - BOX_W / 2.0, cx + BOX_W / 2.0);
        let p = &run.precision;
        // Whiskers.
        let _ = write!(
            svg,
            r#"<line x1="{cx:.1}" y1="{:.1}" x2="{cx:.1}" y2="{:.1}" stroke="black"/>"#,
            y(p.min),
            y(p.q1)
        );
        let _ = write!(
            svg,
            r#"<line x1="{cx:.1}" y1="{:.1}" x2="{cx:.1}" y2="{:.1}" stroke="black"/>"#,
            y(p.q3),
            y(p.max)
        );
        // Box and median.
        let _ = write!(
            svg,
            r##"<rect x="{x0:.1}" y="{:.1}" width="{BOX_W}" height="{:.1}" fill="#9ecae1" stroke="black"/>"##,
            y(p.q3),
            (y(p.q1) - y(p.q3)).max(0.5)
        );
        let _ = write!(
            svg,
            r#"<line x1="{x0:.1}" y1="{:.1}" x2="{x1:.1}" y2="{:.1}" stroke="black" stroke-width="2"/>"#,
            y(p.median),
            y(p.median)
        );
        // Mean marker and label.
        let _ = write!(
            svg,
            r#"<circle cx="{cx:.1}" cy="{:.1}" r="3" fill="black"/>"#,
            y(p.mean)
        );
        let _ = write!(
            svg,
            r#"<text x="{cx:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            TOP + PLOT_H + 18.0,
            xml_escape(&run.id)
        );
        if let Some(acc) = run.accuracy {
            let _ = write!(
                svg,
                r##"<text x="{cx:.1}" y="{:.1}" text-anchor="middle" fill="#555">acc {acc:.3}</text>"##,
                TOP + PLOT_H + 34.0
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
