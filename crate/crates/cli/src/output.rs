//! CSV tables, JSON manifests and bare-bones SVG line plots.
//!
//! Nothing written here depends on the clock or the thread count, so a rerun
//! from a manifest reproduces every file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use gibbs_lab::network::NetworkDocument;
use gibbs_lab::Network;
use serde::Serialize;
use serde_json::Value;

use crate::{usage, Failure};

/// Creates `dir` if needed; failure is a configuration problem.
pub fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))
}

/// Creates the parent directory of an output file.
pub fn ensure_parent(file: &Path) -> Result<(), Failure> {
    match file.parent() {
        Some(p) if !p.as_os_str().is_empty() => ensure_dir(p),
        _ => Ok(()),
    }
}

pub struct Table {
    writer: csv::Writer<fs::File>,
    path: PathBuf,
}

impl Table {
    pub fn create(path: &Path, header: &[String]) -> Result<Self, Failure> {
        ensure_parent(path)?;
        let mut writer = csv::Writer::from_path(path)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        writer.write_record(header).map_err(anyhow::Error::from)?;
        Ok(Self {
            writer,
            path: path.to_path_buf(),
        })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<(), Failure> {
        self.writer
            .write_record(fields)
            .map_err(anyhow::Error::from)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf, Failure> {
        self.writer
            .flush()
            .with_context(|| format!("flushing {}", self.path.display()))?;
        Ok(self.path)
    }
}

pub fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Shortest representation that round-trips.
pub fn num(x: f64) -> String {
    format!("{x}")
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a C,
    #[serde(skip_serializing_if = "Option::is_none")]
    network: Option<NetworkDocument>,
    outputs: Vec<String>,
    summary: Value,
}

/// Writes the manifest: enough configuration to rerun the experiment
/// exactly, the files it produced and a small summary.
pub fn write_manifest<C: Serialize>(
    path: &Path,
    command: &str,
    config: &C,
    network: Option<&Network>,
    outputs: &[PathBuf],
    summary: Value,
) -> Result<PathBuf, Failure> {
    let manifest = Manifest {
        tool: "gibbs-lab",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        network: network.map(NetworkDocument::from_network),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        summary,
    };
    write_json(path, &manifest)?;
    Ok(path.to_path_buf())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), Failure> {
    ensure_parent(path)?;
    let mut text = serde_json::to_string_pretty(value).map_err(anyhow::Error::from)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

/// `<file>.manifest.json` next to a CSV output.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

pub struct Series {
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

/// A line plot: frame, min/max tick labels and one polyline per series.
pub fn line_plot(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<(), Failure> {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 60.0;
    let all = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * M,
        H - 2.0 * M
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="30" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    for (v, anchor, x, y) in [
        (x0, "start", M, H - M + 16.0),
        (x1, "end", W - M, H - M + 16.0),
        (y0, "end", M - 4.0, H - M),
        (y1, "end", M - 4.0, M + 4.0),
    ] {
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{}</text>"#,
            tick(v)
        );
    }
    for s in series {
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let dash = if s.dashed {
            r#" stroke-dasharray="4 3""#
        } else {
            ""
        };
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="black"{dash} points="{}"/>"#,
            pts.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    ensure_parent(path)?;
    fs::write(path, svg).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
