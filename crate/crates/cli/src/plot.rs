//! Minimal SVG line plots: axes with ticks, polylines, markers, legend.

use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Line,
    Dashed,
    Points,
}

#[derive(Clone, Debug)]
pub struct Layer {
    pub name: String,
    pub color: String,
    pub style: Style,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub width: f64,
    pub height: f64,
    pub layers: Vec<Layer>,
}

const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

impl Plot {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            x_label: String::new(),
            y_label: String::new(),
            width: 720.0,
            height: 420.0,
            layers: Vec::new(),
        }
    }

    pub fn labels(mut self, x: impl Into<String>, y: impl Into<String>) -> Self {
        self.x_label = x.into();
        self.y_label = y.into();
        self
    }

    pub fn layer(mut self, name: impl Into<String>, color: &str, style: Style, points: Vec<(f64, f64)>) -> Self {
        self.layers.push(Layer { name: name.into(), color: color.into(), style, points });
        self
    }

    fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        let finite = self.layers.iter().flat_map(|l| &l.points).filter(|(x, y)| x.is_finite() && y.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in finite {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return ((0.0, 1.0), (0.0, 1.0));
        }
        (pad(x0, x1, 0.0), pad(y0, y1, 0.05))
    }

    pub fn render(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.bounds();
        let (w, h) = (self.width, self.height);
        let pw = w - MARGIN_LEFT - MARGIN_RIGHT;
        let ph = h - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            w / 2.0,
            escape(&self.title)
        );

        // Ticks and grid.
        for t in ticks(x0, x1) {
            let x = sx(t);
            let _ = writeln!(
                s,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#e5e5e5"/>"##,
                MARGIN_TOP,
                MARGIN_TOP + ph
            );
            let _ = writeln!(
                s,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                MARGIN_TOP + ph + 16.0,
                tick_label(t, x0, x1)
            );
        }
        for t in ticks(y0, y1) {
            let y = sy(t);
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e5e5e5"/>"##,
                MARGIN_LEFT,
                MARGIN_LEFT + pw
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 6.0,
                y + 4.0,
                tick_label(t, y0, y1)
            );
        }
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + pw / 2.0,
            h - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            MARGIN_TOP + ph / 2.0,
            MARGIN_TOP + ph / 2.0,
            escape(&self.y_label)
        );

        let _ = writeln!(s, r#"<g>"#);
        for layer in &self.layers {
            let pts: Vec<(f64, f64)> = layer
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| (sx(x), sy(y)))
                .collect();
            match layer.style {
                Style::Line | Style::Dashed => {
                    let dash = if layer.style == Style::Dashed { r#" stroke-dasharray="6 4""# } else { "" };
                    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let _ = writeln!(
                        s,
                        r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
                        layer.color,
                        coords.join(" ")
                    );
                }
                Style::Points => {
                    let _ = writeln!(s, r#"<g fill="{}">"#, layer.color);
                    for (x, y) in pts {
                        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.6"/>"#);
                    }
                    let _ = writeln!(s, "</g>");
                }
            }
        }
        let _ = writeln!(s, "</g>");

        // Legend, top right inside the frame.
        if !self.layers.is_empty() {
            let _ = writeln!(
                s,
                r##"<rect x="{:.2}" y="{:.2}" width="166" height="{:.2}" fill="white" fill-opacity="0.85" stroke="#999"/>"##,
                MARGIN_LEFT + pw - 176.0,
                MARGIN_TOP + 4.0,
                16.0 * self.layers.len() as f64 + 6.0
            );
        }
        for (k, layer) in self.layers.iter().enumerate() {
            let y = MARGIN_TOP + 16.0 + 16.0 * k as f64;
            let x = MARGIN_LEFT + pw - 170.0;
            match layer.style {
                Style::Points => {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
                        x + 10.0,
                        y - 4.0,
                        layer.color
                    );
                }
                _ => {
                    let dash = if layer.style == Style::Dashed { r#" stroke-dasharray="6 4""# } else { "" };
                    let _ = writeln!(
                        s,
                        r#"<line x1="{x:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"{dash}/>"#,
                        y - 4.0,
                        x + 20.0,
                        y - 4.0,
                        layer.color
                    );
                }
            }
            let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, x + 26.0, escape(&layer.name));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn pad(lo: f64, hi: f64, frac: f64) -> (f64, f64) {
    let span = hi - lo;
    let min_span = 1e-6 * lo.abs().max(hi.abs()).max(1e-3);
    if span < min_span {
        let mid = 0.5 * (lo + hi);
        return (mid - min_span, mid + min_span);
    }
    (lo - frac * span, hi + frac * span)
}

/// Round-number ticks (1, 2, 5 times a power of ten) inside `[lo, hi]`.
pub fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(lo, hi);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_step(lo: f64, hi: f64) -> f64 {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn tick_label(v: f64, lo: f64, hi: f64) -> String {
    let step = tick_step(lo, hi);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    if decimals > 6 || v.abs() >= 1e6 {
        return format!("{v:.3e}");
    }
    let s = format!("{v:.decimals$}");
    // Avoid "-0.00".
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
