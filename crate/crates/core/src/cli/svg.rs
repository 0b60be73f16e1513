//! Minimal SVG figures built from `rect`, `polyline` and `text` elements.
//! Coordinates are printed with fixed precision so files are byte-stable.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = lo.abs().max(1.0) * 0.5;
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn plot_w() -> f64 {
        WIDTH - LEFT - RIGHT
    }

    fn plot_h() -> f64 {
        HEIGHT - TOP - BOTTOM
    }

    fn px(&self, x: f64) -> f64 {
        let span = self.x1 - self.x0;
        if span == 0.0 {
            return LEFT;
        }
        LEFT + (x - self.x0) / span * Self::plot_w()
    }

    fn py(&self, y: f64) -> f64 {
        let span = self.y1 - self.y0;
        if span == 0.0 {
            return TOP + Self::plot_h();
        }
        TOP + (1.0 - (y - self.y0) / span) * Self::plot_h()
    }
}

fn header(out: &mut String, title: &str, x_label: &str, y_label: &str, frame: &Frame) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        LEFT + Frame::plot_w() / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        LEFT + Frame::plot_w() / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        TOP + Frame::plot_h() / 2.0,
        TOP + Frame::plot_h() / 2.0,
        escape(y_label)
    );
    for (v, anchor_x, anchor_y, anchor) in [
        (frame.x0, frame.px(frame.x0), HEIGHT - BOTTOM + 16.0, "start"),
        (frame.x1, frame.px(frame.x1), HEIGHT - BOTTOM + 16.0, "end"),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{anchor_x:.1}" y="{anchor_y:.1}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{v:.3}</text>"#
        );
    }
    for (v, y) in [(frame.y0, frame.py(frame.y0)), (frame.y1, frame.py(frame.y1) + 10.0)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{y:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{v:.3}</text>"#,
            LEFT - 4.0
        );
    }
}

fn border(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT:.1}" y="{TOP:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        Frame::plot_w(),
        Frame::plot_h()
    );
}

fn legend(out: &mut String, entries: &[(String, String)]) {
    for (k, (name, color)) in entries.iter().enumerate() {
        let y = TOP + 18.0 * k as f64;
        let x = WIDTH - RIGHT + 16.0;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.1}" y="{y:.1}" width="12" height="12" fill="{color}" stroke="black"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{}</text>"#,
            x + 18.0,
            y + 10.0,
            escape(name)
        );
    }
}

/// Grid of filled cells; `fill(ix, iy)` gives the colour of cell `(x_values[ix], y_values[iy])`.
pub fn heat_map<F>(
    title: &str,
    x_label: &str,
    y_label: &str,
    x_values: &[f64],
    y_values: &[f64],
    fill: F,
    legend_entries: &[(String, String)],
) -> String
where
    F: Fn(usize, usize) -> String,
{
    let (nx, ny) = (x_values.len(), y_values.len());
    // cells are drawn on an index grid; the axis labels show the data range
    let frame = Frame {
        x0: 0.0,
        x1: nx.max(1) as f64,
        y0: 0.0,
        y1: ny.max(1) as f64,
    };
    let labels = Frame {
        x0: x_values.first().copied().unwrap_or(0.0),
        x1: x_values.last().copied().unwrap_or(1.0),
        y0: y_values.first().copied().unwrap_or(0.0),
        y1: y_values.last().copied().unwrap_or(1.0),
    };
    let mut out = String::new();
    header(&mut out, title, x_label, y_label, &labels);
    let cw = Frame::plot_w() / nx.max(1) as f64;
    let ch = Frame::plot_h() / ny.max(1) as f64;
    for ix in 0..nx {
        for iy in 0..ny {
            let _ = writeln!(
                out,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                frame.px(ix as f64),
                frame.py(iy as f64 + 1.0),
                cw,
                ch,
                fill(ix, iy)
            );
        }
    }
    border(&mut out);
    legend(&mut out, legend_entries);
    out.push_str("</svg>\n");
    out
}

/// `(legend name, colour, points)` of one plotted data set.
pub type Series = (String, String, Vec<(f64, f64)>);

/// Point cloud drawn as small squares, one colour per series.
pub fn scatter(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let all = || series.iter().flat_map(|(_, _, pts)| pts.iter());
    let (x0, x1) = extent(all().map(|p| p.0));
    let (y0, y1) = extent(all().map(|p| p.1));
    let frame = Frame { x0, x1, y0, y1 };
    let mut out = String::new();
    header(&mut out, title, x_label, y_label, &frame);
    for (_, color, pts) in series {
        for &(x, y) in pts {
            if x.is_finite() && y.is_finite() {
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{:.2}" width="2" height="2" fill="{color}"/>"#,
                    frame.px(x) - 1.0,
                    frame.py(y) - 1.0
                );
            }
        }
    }
    border(&mut out);
    let entries: Vec<(String, String)> = series.iter().map(|(n, c, _)| (n.clone(), c.clone())).collect();
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}

/// One polyline per series.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let all = || series.iter().flat_map(|(_, _, pts)| pts.iter());
    let (x0, x1) = extent(all().map(|p| p.0));
    let (mut y0, y1) = extent(all().map(|p| p.1));
    y0 = y0.min(0.0);
    let frame = Frame { x0, x1, y0, y1 };
    let mut out = String::new();
    header(&mut out, title, x_label, y_label, &frame);
    for (_, color, pts) in series {
        let coords: Vec<String> = pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
    }
    border(&mut out);
    let entries: Vec<(String, String)> = series.iter().map(|(n, c, _)| (n.clone(), c.clone())).collect();
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}

/// Fixed six-colour palette for phase labels I–VI.
pub const PHASE_COLORS: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];

/// Colour for cells without a value.
pub const MISSING_COLOR: &str = "#bdbdbd";

/// Blue-to-yellow ramp for `t ∈ [0, 1]`.
pub fn ramp(t: f64) -> String {
    let t = if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        return MISSING_COLOR.to_string();
    };
    let stops = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let pos = t * (stops.len() - 1) as f64;
    let k = (pos.floor() as usize).min(stops.len() - 2);
    let f = pos - k as f64;
    let mix = |a: f64, b: f64| (a + (b - a) * f).round() as u8;
    let (a, b) = (stops[k], stops[k + 1]);
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heat_map_has_one_rect_per_cell() {
        let svg = heat_map("t", "x", "y", &[0.0, 1.0, 2.0], &[0.0, 1.0], |_, _| "#000000".into(), &[]);
        let cells = svg.matches("fill=\"#000000\"").count();
        assert_eq!(cells, 6);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp(0.0), "#440154");
        assert_eq!(ramp(1.0), "#fde725");
        assert_eq!(ramp(f64::NAN), MISSING_COLOR);
    }

    #[test]
    fn text_is_escaped() {
        let svg = line_plot("a<b", "x", "y", &[("s".into(), "red".into(), vec![(0.0, 1.0), (1.0, 2.0)])]);
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains("<polyline"));
    }
}
