//! Minimal self-contained SVG: line plots and heat maps.

use std::fmt::Write;

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Series {
    pub label: String,
    /// NaN y values break the line.
    pub points: Vec<(f64, f64)>,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (H - TOP - BOTTOM)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n<text x=\"{:.1}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        W / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    let _ = writeln!(
        out,
        "<rect x=\"{x0:.1}\" y=\"{y0:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y1 - y0
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = f.x.0 + t * (f.x.1 - f.x.0);
        let yv = f.y.0 + t * (f.y.1 - f.y.0);
        let (px, py) = (f.px(xv), f.py(yv));
        let _ = writeln!(
            out,
            "<line x1=\"{px:.1}\" y1=\"{y1:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/><text x=\"{px:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            y1 + 5.0,
            y1 + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{x0:.1}\" y2=\"{py:.1}\" stroke=\"black\"/><text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
        (x0 + x1) / 2.0,
        H - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        "<text transform=\"translate(16 {:.1}) rotate(-90)\" text-anchor=\"middle\">{}</text>",
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let finite = || series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let x = padded(
        finite().map(|p| p.0).fold(f64::INFINITY, f64::min),
        finite().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max),
    );
    let y = padded(
        finite().map(|p| p.1).fold(f64::INFINITY, f64::min),
        finite().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max),
    );
    let f = Frame { x, y };
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, x_label, y_label);
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        let mut pen = false;
        for &(xv, yv) in &s.points {
            if !(xv.is_finite() && yv.is_finite()) {
                pen = false;
                continue;
            }
            let _ = write!(d, "{}{:.2},{:.2} ", if pen { "L" } else { "M" }, f.px(xv), f.py(yv));
            pen = true;
        }
        let _ = writeln!(out, "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>", d.trim_end());
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let lx = W - RIGHT + 12.0;
        let _ = writeln!(
            out,
            "<line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/><text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Blue-white-red for signed data (scaled by the largest magnitude), white
/// to red for non-negative data.
fn color(v: f64, scale: f64, signed: bool) -> String {
    if !v.is_finite() {
        return "#808080".into();
    }
    let t = if scale > 0.0 { (v / scale).clamp(-1.0, 1.0) } else { 0.0 };
    let t = if signed { t } else { t.abs() };
    let fade = |c: f64| (255.0 * (1.0 - c)).round() as u8;
    let (r, g, b) = if t >= 0.0 {
        (255, fade(t), fade(t))
    } else {
        (fade(-t), fade(-t), 255)
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// `values[j * nx + i]` at `(x_i, y_j)`, row 0 at the bottom.
#[allow(clippy::too_many_arguments)]
pub fn heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    x: (f64, f64),
    y: (f64, f64),
    nx: usize,
    ny: usize,
    values: &[f64],
) -> String {
    let f = Frame {
        x: padded(x.0, x.1),
        y: padded(y.0, y.1),
    };
    let scale = values.iter().filter(|v| v.is_finite()).fold(0.0f64, |m, v| m.max(v.abs()));
    let signed = values.iter().any(|&v| v < 0.0);
    let cw = (W - LEFT - RIGHT) / nx as f64;
    let ch = (H - TOP - BOTTOM) / ny as f64;
    let mut out = String::new();
    header(&mut out, title);
    for j in 0..ny {
        for i in 0..nx {
            let _ = writeln!(
                out,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
                LEFT + i as f64 * cw,
                H - BOTTOM - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05,
                color(values[j * nx + i], scale, signed)
            );
        }
    }
    axes(&mut out, &f, x_label, y_label);
    let lx = W - RIGHT + 20.0;
    let _ = writeln!(
        out,
        "<text x=\"{lx:.1}\" y=\"{:.1}\">max |value|</text><text x=\"{lx:.1}\" y=\"{:.1}\">{}</text>",
        TOP + 14.0,
        TOP + 30.0,
        tick(scale)
    );
    out.push_str("</svg>\n");
    out
}
