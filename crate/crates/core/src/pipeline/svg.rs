//! Standalone SVG scatter plots of Ord-graph points with cluster hulls.
//!
//! Output is a pure function of the input: coordinates are written with a fixed
//! number of decimals and elements appear in input order.

use std::fmt::Write as _;

use crate::cluster::ClusterResult;
use crate::error::{Error, Result};
use crate::moments::OrdPoint;
use crate::theory::{POINT_A, POINT_G, POINT_J, POINT_P};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 6;

const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub id: String,
    pub x: f64,
    pub y: f64,
}

impl LabeledPoint {
    pub fn new(id: impl Into<String>, x: f64, y: f64) -> Self {
        LabeledPoint {
            id: id.into(),
            x,
            y,
        }
    }
}

/// Title and axis captions.
#[derive(Debug, Clone)]
pub struct PlotText {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

impl Default for PlotText {
    fn default() -> Self {
        PlotText {
            title: String::new(),
            x_label: "I".into(),
            y_label: "S".into(),
        }
    }
}

/// Formats with 4 significant digits, switching to exponent form for very
/// large or small magnitudes.
pub fn format_sig4(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() {
            "0".into()
        } else {
            v.to_string()
        };
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-3..4).contains(&mag) {
        return format!("{v:.3e}");
    }
    let decimals = (3 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[derive(Clone, Copy)]
struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    fn padded(values: impl Iterator<Item = f64>) -> Range {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let span = hi - lo;
        let pad = if span > 0.0 {
            0.1 * span
        } else if lo != 0.0 {
            0.1 * lo.abs()
        } else {
            1.0
        };
        Range {
            lo: lo - pad,
            hi: hi + pad,
        }
    }

    fn contains(&self, v: f64) -> bool {
        (self.lo..=self.hi).contains(&v)
    }

    fn ticks(&self) -> impl Iterator<Item = f64> + '_ {
        let step = (self.hi - self.lo) / (TICKS - 1) as f64;
        (0..TICKS).map(move |i| self.lo + step * i as f64)
    }
}

struct Frame {
    x: Range,
    y: Range,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.lo) / (self.x.hi - self.x.lo) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.lo) / (self.y.hi - self.y.lo) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Andrew's monotone chain; collinear input collapses to its two extremes.
fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len() * 2);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 2 {
        // all points coincide after all
        return pts[..1].to_vec();
    }
    hull
}

pub fn render_scatter(
    points: &[LabeledPoint],
    clusters: Option<&ClusterResult>,
    overlay: bool,
) -> Result<String> {
    render_scatter_with(points, clusters, overlay, &PlotText::default())
}

/// Renders the points, a hull per cluster and, with `overlay`, the lines
/// `S = 2I − 1` and `S = 1` plus the landmarks A, G, J, P that fall in range.
pub fn render_scatter_with(
    points: &[LabeledPoint],
    clusters: Option<&ClusterResult>,
    overlay: bool,
    text: &PlotText,
) -> Result<String> {
    if points.is_empty() {
        return Err(Error::Value("nothing to plot: no points".into()));
    }
    if let Some(p) = points.iter().find(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::Value(format!(
            "point {} has a non-finite coordinate",
            p.id
        )));
    }
    let frame = Frame {
        x: Range::padded(points.iter().map(|p| p.x)),
        y: Range::padded(points.iter().map(|p| p.y)),
    };
    let cluster_of = |id: &str| clusters.and_then(|c| c.cluster_of(id));

    let mut svg = String::new();
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<defs><clipPath id="plot-area"><rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}"/></clipPath></defs>"#,
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !text.title.is_empty() {
        let _ = writeln!(
            svg,
            r#"<text class="title" x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&text.title)
        );
    }

    // axes
    let _ = writeln!(svg, r#"<g class="axes" stroke="black" fill="none">"#);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#
    );
    for t in frame.x.ticks() {
        let x = frame.px(t);
        let _ = writeln!(
            svg,
            r#"<line class="tick" x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
            y0 + 5.0
        );
    }
    for t in frame.y.ticks() {
        let y = frame.py(t);
        let _ = writeln!(
            svg,
            r#"<line class="tick" x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}"/>"#,
            x0 - 5.0
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, r#"<g class="tick-labels" fill="black">"#);
    for t in frame.x.ticks() {
        let _ = writeln!(
            svg,
            r#"<text class="tick-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            frame.px(t),
            y0 + 18.0,
            format_sig4(t)
        );
    }
    for t in frame.y.ticks() {
        let _ = writeln!(
            svg,
            r#"<text class="tick-label" x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            frame.py(t) + 4.0,
            format_sig4(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 20.0,
        escape(&text.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text class="axis-label" x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(&text.y_label)
    );
    let _ = writeln!(svg, "</g>");

    if overlay {
        let _ = writeln!(
            svg,
            r##"<g class="overlay" clip-path="url(#plot-area)" stroke="#999999" stroke-dasharray="4 3" fill="none">"##
        );
        let (lo, hi) = (frame.x.lo, frame.x.hi);
        let _ = writeln!(
            svg,
            r#"<line class="overlay-line" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            frame.px(lo),
            frame.py(2.0 * lo - 1.0),
            frame.px(hi),
            frame.py(2.0 * hi - 1.0)
        );
        let _ = writeln!(
            svg,
            r#"<line class="overlay-line" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            frame.px(lo),
            frame.py(1.0),
            frame.px(hi),
            frame.py(1.0)
        );
        let _ = writeln!(svg, "</g>");
        for (name, p) in [
            ("A", POINT_A),
            ("G", POINT_G),
            ("J", POINT_J),
            ("P", POINT_P),
        ] {
            if frame.x.contains(p.i) && frame.y.contains(p.s) {
                landmark(&mut svg, &frame, name, p);
            }
        }
    }

    if let Some(result) = clusters {
        for c in 0..result.k {
            let members: Vec<(f64, f64)> = points
                .iter()
                .filter(|p| cluster_of(&p.id) == Some(c))
                .map(|p| (frame.px(p.x), frame.py(p.y)))
                .collect();
            if members.is_empty() {
                continue;
            }
            let color = PALETTE[c % PALETTE.len()];
            let hull = convex_hull(&members);
            if hull.len() == 1 {
                let _ = writeln!(
                    svg,
                    r#"<circle class="hull-single" cx="{:.2}" cy="{:.2}" r="10" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    hull[0].0, hull[0].1
                );
            } else {
                let coords: Vec<String> =
                    hull.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    svg,
                    r#"<polygon class="hull" points="{}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="1.5" stroke-linejoin="round"/>"#,
                    coords.join(" ")
                );
            }
        }
    }

    for p in points {
        let color = cluster_of(&p.id).map_or("black", |c| PALETTE[c % PALETTE.len()]);
        let (x, y) = (frame.px(p.x), frame.py(p.y));
        let _ = writeln!(
            svg,
            r#"<circle class="point" cx="{x:.2}" cy="{y:.2}" r="3.5" fill="{color}"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text class="label" x="{:.2}" y="{:.2}">{}</text>"#,
            x + 6.0,
            y - 6.0,
            escape(&p.id)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn landmark(svg: &mut String, frame: &Frame, name: &str, p: OrdPoint) {
    let (x, y) = (frame.px(p.i), frame.py(p.s));
    let _ = writeln!(
        svg,
        r##"<circle class="landmark" cx="{x:.2}" cy="{y:.2}" r="3" fill="#999999"/>"##
    );
    let _ = writeln!(
        svg,
        r##"<text class="landmark-label" x="{:.2}" y="{:.2}" fill="#999999">{name}</text>"##,
        x + 5.0,
        y + 14.0
    );
}
