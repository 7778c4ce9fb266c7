//! Minimal hand-written SVG: line plots and shaded maps with iso-lines.
//! Decorative only; every number also lands in a CSV or JSON file.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(lo, hi): (f64, f64)| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        Self {
            x: widen(x),
            y: widen(y),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (H - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn open(title: &str, x_label: &str, y_label: &str, f: &Frame) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    let _ = writeln!(
        s,
        r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );
    for i in 0..=4 {
        let v = f.x.0 + (f.x.1 - f.x.0) * i as f64 / 4.0;
        let x = f.px(v);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
            y1 + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
            y1 + 19.0,
            tick_label(v)
        );
        let v = f.y.0 + (f.y.1 - f.y.0) * i as f64 / 4.0;
        let y = f.py(v);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            y + 4.0,
            tick_label(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        H - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
    s
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

/// Polylines with a legend; `y_range` fixes the vertical axis.
pub fn line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    y_range: Option<(f64, f64)>,
) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter());
    let x = bounds(all().map(|p| p.0));
    let y = y_range.unwrap_or_else(|| bounds(all().map(|p| p.1)));
    let f = Frame::new(
        if x.0.is_finite() { x } else { (0.0, 1.0) },
        if y.0.is_finite() { y } else { (0.0, 1.0) },
    );
    let mut s = open(title, x_label, y_label, &f);
    for (i, ser) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .filter(|p| p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y.clamp(f.y.0, f.y.1))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.6" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let lx = W - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 22.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 28.0,
            ly + 4.0,
            escape(ser.name)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Blue → yellow ramp for `u ∈ [0, 1]`.
fn ramp(u: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 4] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.35, [49.0, 104.0, 142.0]),
        (0.7, [53.0, 183.0, 121.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let u = if u.is_finite() {
        u.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let k = STOPS
        .iter()
        .rposition(|s| s.0 <= u)
        .unwrap_or(0)
        .min(STOPS.len() - 2);
    let (a, b) = (STOPS[k], STOPS[k + 1]);
    let w = (u - a.0) / (b.0 - a.0);
    let c: Vec<u8> = (0..3)
        .map(|i| (a.1[i] + w * (b.1[i] - a.1[i])).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Segments of the `level` iso-line through the cell grid (marching squares).
fn iso_segments(xs: &[f64], ys: &[f64], v: &[Vec<f64>], level: f64) -> Vec<[(f64, f64); 2]> {
    let mut out = Vec::new();
    for i in 0..xs.len().saturating_sub(1) {
        for j in 0..ys.len().saturating_sub(1) {
            let corners = [
                (xs[i], ys[j], v[i][j]),
                (xs[i + 1], ys[j], v[i + 1][j]),
                (xs[i + 1], ys[j + 1], v[i + 1][j + 1]),
                (xs[i], ys[j + 1], v[i][j + 1]),
            ];
            let mut hits = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (corners[e], corners[(e + 1) % 4]);
                if (a.2 < level) != (b.2 < level) {
                    let w = (level - a.2) / (b.2 - a.2);
                    hits.push((a.0 + w * (b.0 - a.0), a.1 + w * (b.1 - a.1)));
                }
            }
            for pair in hits.chunks_exact(2) {
                out.push([pair[0], pair[1]]);
            }
        }
    }
    out
}

/// Shaded map of `values[i][j]` at `(xs[i], ys[j])` with iso-lines and
/// optional markers.
#[allow(clippy::too_many_arguments)]
pub fn map_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    values: &[Vec<f64>],
    levels: usize,
    markers: &[(f64, f64)],
) -> String {
    let edges = |a: &[f64]| -> (f64, f64) {
        let h = if a.len() > 1 {
            0.5 * (a[1] - a[0])
        } else {
            0.5
        };
        (a[0] - h, a[a.len() - 1] + h)
    };
    let f = Frame::new(edges(xs), edges(ys));
    let (lo, hi) = bounds(values.iter().flatten().copied());
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut s = open(title, x_label, y_label, &f);
    let half = |a: &[f64], k: usize| if a.len() > 1 { 0.5 * (a[1] - a[0]) } else { 0.5 } * if k == 0 { -1.0 } else { 1.0 };
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let (x0, x1) = (f.px(x + half(xs, 0)), f.px(x + half(xs, 1)));
            let (y0, y1) = (f.py(y + half(ys, 1)), f.py(y + half(ys, 0)));
            let _ = writeln!(
                s,
                r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                x1 - x0 + 0.3,
                y1 - y0 + 0.3,
                ramp((values[i][j] - lo) / span)
            );
        }
    }
    for l in 1..=levels {
        let level = lo + span * l as f64 / (levels + 1) as f64;
        for [a, b] in iso_segments(xs, ys, values, level) {
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="white" stroke-width="0.8"/>"#,
                f.px(a.0),
                f.py(a.1),
                f.px(b.0),
                f.py(b.1)
            );
        }
    }
    for &(x, y) in markers {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="5" fill="none" stroke="red" stroke-width="2"/>"#,
            f.px(x),
            f.py(y)
        );
    }
    let bar_x = W - RIGHT + 20.0;
    for k in 0..50 {
        let y = TOP + (H - TOP - BOTTOM) * k as f64 / 50.0;
        let _ = writeln!(
            s,
            r#"<rect x="{bar_x}" y="{y:.2}" width="16" height="{:.2}" fill="{}"/>"#,
            (H - TOP - BOTTOM) / 50.0 + 0.3,
            ramp(1.0 - k as f64 / 49.0)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}">{}</text>"#,
        bar_x + 22.0,
        TOP + 10.0,
        tick_label(hi)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}">{}</text>"#,
        bar_x + 22.0,
        H - BOTTOM,
        tick_label(lo)
    );
    s.push_str("</svg>\n");
    s
}
