//! Standalone SVG figures: category heatmaps and phase portraits.
//!
//! Output depends only on the spec, so identical inputs give identical bytes.

use std::fmt::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};
use crate::table::emit;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 210.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

/// Colours for categorical data, assigned in order.
pub const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#1b9e77", "#7570b3",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub nx: usize,
    pub ny: usize,
    /// Row-major category indices, row 0 at the bottom.
    pub cells: Vec<usize>,
    /// Category names and colours, indexed by the cell values.
    pub categories: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub points: Vec<(f64, f64)>,
    pub color: String,
    pub width: f64,
    pub dashed: bool,
    pub label: Option<String>,
}

/// Equilibrium marker styles: green for stable, red for tangent points,
/// black for pseudo-equilibria, hollow for the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MarkerStyle {
    Stable,
    Tangent,
    Pseudo,
    Other,
}

impl MarkerStyle {
    fn label(self) -> &'static str {
        match self {
            MarkerStyle::Stable => "stable equilibrium",
            MarkerStyle::Tangent => "tangent point",
            MarkerStyle::Pseudo => "pseudo-equilibrium",
            MarkerStyle::Other => "other equilibrium",
        }
    }

    fn attrs(self) -> &'static str {
        match self {
            MarkerStyle::Stable => r##"fill="#1a9641" stroke="#000" stroke-width="0.8""##,
            MarkerStyle::Tangent => r##"fill="#d7191c" stroke="#000" stroke-width="0.8""##,
            MarkerStyle::Pseudo => r##"fill="#000" stroke="#000" stroke-width="0.8""##,
            MarkerStyle::Other => r##"fill="#fff" stroke="#000" stroke-width="1.2""##,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marker {
    pub at: (f64, f64),
    pub style: MarkerStyle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgPlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub heatmap: Option<Heatmap>,
    pub series: Vec<Series>,
    pub markers: Vec<Marker>,
}

impl SvgPlotSpec {
    pub fn new(
        title: &str,
        x_label: &str,
        y_label: &str,
        x_range: (f64, f64),
        y_range: (f64, f64),
    ) -> Self {
        SvgPlotSpec {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_range,
            y_range,
            heatmap: None,
            series: Vec::new(),
            markers: Vec::new(),
        }
    }

    fn validate(&self) -> Result<(), String> {
        let finite = |(a, b): (f64, f64)| a.is_finite() && b.is_finite();
        if !(finite(self.x_range) && finite(self.y_range)) {
            return Err("axis range is not finite".into());
        }
        if !(self.x_range.1 > self.x_range.0 && self.y_range.1 > self.y_range.0) {
            return Err("axis range is empty".into());
        }
        if self
            .series
            .iter()
            .flat_map(|s| &s.points)
            .any(|&p| !finite(p))
            || self.markers.iter().any(|m| !finite(m.at))
        {
            return Err("non-finite coordinate".into());
        }
        if let Some(h) = &self.heatmap {
            if h.cells.len() != h.nx * h.ny || h.cells.iter().any(|&c| c >= h.categories.len()) {
                return Err("heatmap cells do not match its size or categories".into());
            }
        }
        Ok(())
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn render_svg(spec: &SvgPlotSpec) -> Result<String, String> {
    spec.validate()?;
    let (x0, x1) = spec.x_range;
    let (y0, y1) = spec.y_range;
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut o = String::new();
    let w = &mut o;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        w,
        "<style>text{{font-family:Helvetica,Arial,sans-serif;font-size:12px;fill:#222}}.title{{font-size:14px;font-weight:bold}}.axis{{stroke:#222;stroke-width:1}}</style>"
    );
    let _ = writeln!(
        w,
        r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#fff"/>"##
    );
    let _ = writeln!(
        w,
        r#"<defs><clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath></defs>"#
    );

    let mut legend: Vec<(String, String, Option<MarkerStyle>)> = Vec::new();

    if let Some(h) = &spec.heatmap {
        let cw = pw / h.nx as f64;
        let ch = ph / h.ny as f64;
        let _ = writeln!(w, r#"<g shape-rendering="crispEdges">"#);
        for (k, &c) in h.cells.iter().enumerate() {
            let (i, j) = (k % h.nx, k / h.nx);
            let _ = writeln!(
                w,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                LEFT + i as f64 * cw,
                TOP + ph - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05,
                h.categories[c].1
            );
        }
        let _ = writeln!(w, "</g>");
        let mut used: Vec<usize> = h.cells.clone();
        used.sort_unstable();
        used.dedup();
        for c in used {
            legend.push((h.categories[c].0.clone(), h.categories[c].1.clone(), None));
        }
    }

    let _ = writeln!(w, r#"<g clip-path="url(#plot)" fill="none">"#);
    for s in &spec.series {
        if s.points.is_empty() {
            continue;
        }
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
            .collect();
        let dash = if s.dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            w,
            r#"<polyline points="{}" stroke="{}" stroke-width="{}"{dash} stroke-linejoin="round"/>"#,
            pts.join(" "),
            s.color,
            s.width
        );
        if let Some(label) = &s.label {
            legend.push((label.clone(), s.color.clone(), None));
        }
    }
    let _ = writeln!(w, "</g>");

    let mut styles: Vec<MarkerStyle> = spec.markers.iter().map(|m| m.style).collect();
    styles.sort_unstable();
    styles.dedup();
    let _ = writeln!(w, r#"<g clip-path="url(#plot)">"#);
    for m in &spec.markers {
        let _ = writeln!(
            w,
            r#"<circle cx="{:.3}" cy="{:.3}" r="5" {}/>"#,
            sx(m.at.0),
            sy(m.at.1),
            m.style.attrs()
        );
    }
    let _ = writeln!(w, "</g>");
    for s in styles {
        legend.push((s.label().into(), String::new(), Some(s)));
    }

    // Frame, ticks and labels.
    let _ = writeln!(
        w,
        r#"<rect class="axis" x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none"/>"#
    );
    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let bottom = TOP + ph;
        let _ = writeln!(
            w,
            r#"<line class="axis" x1="{px:.3}" y1="{bottom}" x2="{px:.3}" y2="{:.3}"/>"#,
            bottom + 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{px:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
            bottom + 19.0,
            tick_label(xv)
        );
        let _ = writeln!(
            w,
            r#"<line class="axis" x1="{:.3}" y1="{py:.3}" x2="{LEFT}" y2="{py:.3}"/>"#,
            LEFT - 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        w,
        r#"<text transform="translate(18 {:.3}) rotate(-90)" text-anchor="middle">{}</text>"#,
        TOP + ph / 2.0,
        escape(&spec.y_label)
    );
    let _ = writeln!(
        w,
        r#"<text class="title" x="{LEFT}" y="24">{}</text>"#,
        escape(&spec.title)
    );

    let lx = WIDTH - RIGHT + 16.0;
    for (k, (label, color, marker)) in legend.iter().enumerate() {
        let ly = TOP + 8.0 + 20.0 * k as f64;
        match marker {
            Some(style) => {
                let _ = writeln!(
                    w,
                    r#"<circle cx="{:.3}" cy="{ly:.3}" r="5" {}/>"#,
                    lx + 6.0,
                    style.attrs()
                );
            }
            None => {
                let _ = writeln!(
                    w,
                    r##"<rect x="{lx:.3}" y="{:.3}" width="12" height="12" fill="{color}" stroke="#444" stroke-width="0.5"/>"##,
                    ly - 6.0
                );
            }
        }
        let _ = writeln!(
            w,
            r#"<text x="{:.3}" y="{:.3}">{}</text>"#,
            lx + 18.0,
            ly + 4.0,
            escape(label)
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(o)
}

pub fn emit_svg(spec: &SvgPlotSpec, path: &Path) -> CliResult<()> {
    let text = render_svg(spec)
        .map_err(|e| CliError::Config(format!("figure {}: {e}", path.display())))?;
    emit(&text, Some(path))
}
