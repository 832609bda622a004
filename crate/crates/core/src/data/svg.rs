use std::fmt::Write as _;
use std::path::Path;

use super::write_file;
use crate::error::{Error, Result};
use crate::geometry::PointSet;

/// A highlighted subset drawn as crosses over the base scatter.
#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub indices: Vec<usize>,
    pub color: String,
    pub label: String,
}

impl Overlay {
    pub fn new(indices: Vec<usize>, color: &str, label: &str) -> Self {
        Self {
            indices,
            color: color.to_string(),
            label: label.to_string(),
        }
    }
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

/// Scatter of every point as a blue dot, with each overlay's points marked
/// by a cross in its colour.
pub fn render_hull_svg(points: &PointSet, overlays: &[Overlay], title: &str) -> Result<String> {
    if points.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: points.dim(),
        });
    }
    for o in overlays {
        if let Some(&bad) = o.indices.iter().find(|&&i| i >= points.n()) {
            return Err(Error::input(format!("overlay index {bad} out of range")));
        }
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for r in points.rows() {
        for k in 0..2 {
            lo[k] = lo[k].min(r[k]);
            hi[k] = hi[k].max(r[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let at = |r: &[f64]| {
        (
            MARGIN + (r[0] - lo[0]) * scale,
            SIZE - MARGIN - (r[1] - lo[1]) * scale,
        )
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<g class="points" fill="steelblue">"#);
    for r in points.rows() {
        let (x, y) = at(r);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5"/>"#);
    }
    let _ = writeln!(s, "</g>");
    for (k, o) in overlays.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<g class="selected" stroke="{}" stroke-width="1.8">"#,
            escape(&o.color)
        );
        for &i in &o.indices {
            let (x, y) = at(points.row(i));
            let _ = writeln!(
                s,
                r#"<path d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}"/>"#,
                x - 4.0,
                y - 4.0,
                x + 4.0,
                y + 4.0,
                x - 4.0,
                y + 4.0,
                x + 4.0,
                y - 4.0
            );
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            r#"<text x="8" y="{:.0}" font-family="sans-serif" font-size="12" fill="{}">{} ({} selected)</text>"#,
            16.0 + 14.0 * k as f64,
            escape(&o.color),
            escape(&o.label),
            o.indices.len()
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

pub fn emit_hull_svg(
    points: &PointSet,
    overlays: &[Overlay],
    title: &str,
    path: impl AsRef<Path>,
) -> Result<()> {
    let svg = render_hull_svg(points, overlays, title)?;
    write_file(path.as_ref(), svg.as_bytes())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
