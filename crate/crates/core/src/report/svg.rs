//! Hand-rolled SVG figures for the three headline views. Each data mark
//! carries `data-*` attributes with the exact values it encodes, so tests
//! (and readers) can cross-check figures against the tables.

use std::path::{Path, PathBuf};

use crate::analysis::{AnalysisReport, RecognitionSection, WilsonRow};
use crate::corpus::Tone;

const BAR_FILL: [(&str, &str); 3] = [
    ("abusive", "#c0504d"),
    ("friendly", "#4f81bd"),
    ("unclear", "#9bbb59"),
];

fn fill_for(tone: Tone) -> &'static str {
    BAR_FILL
        .iter()
        .find(|(name, _)| *name == tone.as_str())
        .map(|(_, color)| *color)
        .unwrap_or("#888888")
}

struct Canvas {
    body: String,
    width: f64,
    height: f64,
}

impl Canvas {
    fn new(width: f64, height: f64) -> Self {
        Self { body: String::new(), width, height }
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }

    fn push(&mut self, fragment: String) {
        self.body.push_str(&fragment);
        self.body.push('\n');
    }
}

/// Pixel y for a proportion within a plot area.
fn y_of(value: f64, top: f64, bottom: f64) -> f64 {
    bottom - value * (bottom - top)
}

fn axis(canvas: &mut Canvas, left: f64, right: f64, top: f64, bottom: f64) {
    canvas.push(format!(
        "<line x1=\"{left}\" y1=\"{bottom}\" x2=\"{right}\" y2=\"{bottom}\" stroke=\"#333\"/>"
    ));
    canvas.push(format!(
        "<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{bottom}\" stroke=\"#333\"/>"
    ));
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let y = y_of(tick, top, bottom);
        canvas.push(format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{left}\" y2=\"{y}\" stroke=\"#333\"/>",
            left - 4.0
        ));
        canvas.push(format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{tick:.2}</text>",
            left - 7.0,
            y + 4.0
        ));
    }
}

fn bar_with_interval(
    canvas: &mut Canvas,
    x: f64,
    bar_width: f64,
    top: f64,
    bottom: f64,
    row: &WilsonRow,
) {
    let y_top = y_of(row.proportion, top, bottom);
    let y_lo = y_of(row.ci.0, top, bottom);
    let y_hi = y_of(row.ci.1, top, bottom);
    let center = x + bar_width / 2.0;
    canvas.push(format!(
        "<g class=\"cell\" data-tone=\"{}\" data-model=\"{}\" data-prop=\"{:.6}\" data-lo=\"{:.6}\" data-hi=\"{:.6}\">",
        row.tone,
        row.model.as_deref().unwrap_or("overall"),
        row.proportion,
        row.ci.0,
        row.ci.1
    ));
    canvas.push(format!(
        "<rect x=\"{x:.2}\" y=\"{:.2}\" width=\"{bar_width:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
        y_top,
        bottom - y_top,
        fill_for(row.tone)
    ));
    canvas.push(format!(
        "<line x1=\"{center:.2}\" y1=\"{y_lo:.2}\" x2=\"{center:.2}\" y2=\"{y_hi:.2}\" stroke=\"#222\" stroke-width=\"1.5\"/>"
    ));
    for y in [y_lo, y_hi] {
        canvas.push(format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#222\" stroke-width=\"1.5\"/>",
            center - 5.0,
            center + 5.0
        ));
    }
    canvas.push("</g>".into());
}

/// Re-engagement rate by tone with Wilson intervals.
pub fn tone_figure(rows: &[WilsonRow]) -> String {
    let (width, height) = (440.0, 330.0);
    let (left, right, top, bottom) = (56.0, width - 20.0, 28.0, height - 44.0);
    let mut canvas = Canvas::new(width, height);
    canvas.push(format!(
        "<text x=\"{}\" y=\"18\" font-size=\"13\" text-anchor=\"middle\">Re-engagement rate by tone (Wilson 95%)</text>",
        width / 2.0
    ));
    axis(&mut canvas, left, right, top, bottom);
    let slot = (right - left) / rows.len() as f64;
    for (i, row) in rows.iter().enumerate() {
        let x = left + i as f64 * slot + slot * 0.2;
        bar_with_interval(&mut canvas, x, slot * 0.6, top, bottom, row);
        canvas.push(format!(
            "<text x=\"{:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            left + i as f64 * slot + slot / 2.0,
            bottom + 18.0,
            row.tone
        ));
    }
    canvas.finish()
}

/// One panel per model, bars per tone.
pub fn model_tone_figure(rows: &[WilsonRow]) -> String {
    let mut models: Vec<String> = Vec::new();
    for r in rows {
        if let Some(m) = &r.model {
            if !models.contains(m) {
                models.push(m.clone());
            }
        }
    }
    let panel_width = 210.0;
    let (width, height) = (40.0 + panel_width * models.len() as f64, 340.0);
    let (top, bottom) = (40.0, height - 48.0);
    let mut canvas = Canvas::new(width, height);
    canvas.push(format!(
        "<text x=\"{}\" y=\"18\" font-size=\"13\" text-anchor=\"middle\">Re-engagement by model and tone (Wilson 95%)</text>",
        width / 2.0
    ));
    for (p, model) in models.iter().enumerate() {
        let left = 40.0 + p as f64 * panel_width + 16.0;
        let right = 40.0 + (p + 1) as f64 * panel_width - 16.0;
        axis(&mut canvas, left, right, top, bottom);
        canvas.push(format!(
            "<text x=\"{:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{model}</text>",
            (left + right) / 2.0,
            bottom + 32.0
        ));
        let panel_rows: Vec<&WilsonRow> =
            rows.iter().filter(|r| r.model.as_ref() == Some(model)).collect();
        let slot = (right - left) / panel_rows.len().max(1) as f64;
        for (i, row) in panel_rows.iter().enumerate() {
            let x = left + i as f64 * slot + slot * 0.2;
            bar_with_interval(&mut canvas, x, slot * 0.6, top, bottom, row);
            canvas.push(format!(
                "<text x=\"{:.2}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{}</text>",
                left + i as f64 * slot + slot / 2.0,
                bottom + 16.0,
                row.tone
            ));
        }
    }
    canvas.finish()
}

/// 2×2 heat cells: recognition status × re-engagement, row-normalized.
pub fn recognition_figure(section: &RecognitionSection) -> String {
    let (width, height) = (460.0, 280.0);
    let (left, top) = (170.0, 70.0);
    let cell = 120.0;
    let mut canvas = Canvas::new(width, height);
    canvas.push(format!(
        "<text x=\"{}\" y=\"22\" font-size=\"13\" text-anchor=\"middle\">Abusive trials: recognition × re-engagement</text>",
        width / 2.0
    ));
    for (j, answer) in ["NO", "YES"].iter().enumerate() {
        canvas.push(format!(
            "<text x=\"{:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{answer}</text>",
            left + j as f64 * cell + cell / 2.0,
            top - 10.0
        ));
    }
    for (i, row) in section.rows.iter().enumerate() {
        canvas.push(format!(
            "<text x=\"{}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>",
            left - 10.0,
            top + i as f64 * cell + cell / 2.0 + 4.0,
            row.label
        ));
        for (j, (count, pct)) in [
            (row.spice_no, row.row_pct_no),
            (row.spice_yes, row.row_pct_yes),
        ]
        .iter()
        .enumerate()
        {
            let x = left + j as f64 * cell;
            let y = top + i as f64 * cell;
            // Darker cell = larger row share.
            let shade = (235.0 - pct * 160.0) as u8;
            canvas.push(format!(
                "<g class=\"quad\" data-group=\"{}\" data-answer=\"{}\" data-count=\"{count}\" data-pct=\"{pct:.6}\">",
                row.label,
                if j == 0 { "NO" } else { "YES" },
            ));
            canvas.push(format!(
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cell}\" height=\"{cell}\" fill=\"rgb({shade},{shade},245)\" stroke=\"#333\"/>"
            ));
            canvas.push(format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">{count}</text>",
                x + cell / 2.0,
                y + cell / 2.0 - 4.0
            ));
            canvas.push(format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{:.1}%</text>",
                x + cell / 2.0,
                y + cell / 2.0 + 14.0,
                pct * 100.0
            ));
            canvas.push("</g>".into());
        }
    }
    canvas.finish()
}

/// Write the three figures from a report; every missing input is named.
pub fn write_figures(report: &AnalysisReport, dir: &Path) -> Result<Vec<PathBuf>, String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let mut written = Vec::new();
    let mut missing = Vec::new();

    match report.tone_wilson.get() {
        Some(rows) => {
            let path = dir.join("spice_by_tone.svg");
            std::fs::write(&path, tone_figure(rows)).map_err(|e| e.to_string())?;
            written.push(path);
        }
        None => missing.push("spice_by_tone.svg needs the tone_wilson table"),
    }
    match report.model_tone_wilson.get() {
        Some(rows) => {
            let path = dir.join("spice_by_model_tone.svg");
            std::fs::write(&path, model_tone_figure(rows)).map_err(|e| e.to_string())?;
            written.push(path);
        }
        None => missing.push("spice_by_model_tone.svg needs the model_tone_wilson table"),
    }
    match report.recognition.get() {
        Some(section) => {
            let path = dir.join("abusive_recognition.svg");
            std::fs::write(&path, recognition_figure(section)).map_err(|e| e.to_string())?;
            written.push(path);
        }
        None => missing.push("abusive_recognition.svg needs the recognition table"),
    }

    if missing.is_empty() {
        Ok(written)
    } else {
        Err(missing.join("; "))
    }
}
