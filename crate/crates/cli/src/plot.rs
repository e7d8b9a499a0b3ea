//! Static SVG line chart of R(ε) and D(ε).

use std::fmt::Write;

use crate::report::{format_number, Report};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

struct Series<'a> {
    label: &'a str,
    values: &'a [f64],
    color: &'a str,
    dash: Option<&'a str>,
}

pub fn render_svg(title: &str, eps: &[f64], r: &[f64], d: &[f64]) -> String {
    let (x0, x1) = bounds(eps);
    let y_max = r.iter().chain(d).copied().filter(|v| v.is_finite()).fold(1.0, f64::max);
    let (y0, y1) = (0.0, y_max);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );

    for k in 0..=TICKS {
        let t = k as f64 / TICKS as f64;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            s,
            r##"<line x1="{px:.2}" y1="{TOP:.2}" x2="{px:.2}" y2="{:.2}" stroke="#e0e0e0"/>"##,
            TOP + ph
        );
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#e0e0e0"/>"##,
            LEFT + pw
        );
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="#333333"/>"##
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">parameter offset ε</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">resolution R, decoherence D</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    let series = [
        Series {
            label: "R(ε) resolution",
            values: r,
            color: "#1f5fa8",
            dash: None,
        },
        Series {
            label: "D(ε) decoherence",
            values: d,
            color: "#c0392b",
            dash: Some("6 4"),
        },
    ];
    for (i, line) in series.iter().enumerate() {
        let mut points = String::new();
        for (&x, &y) in eps.iter().zip(line.values) {
            if x.is_finite() && y.is_finite() {
                let _ = write!(points, "{:.2},{:.2} ", sx(x), sy(y));
            }
        }
        let dash = line.dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="2"{dash} points="{}"/>"#,
            line.color,
            points.trim_end()
        );
        let ly = TOP + 20.0 + 22.0 * i as f64;
        let lx = LEFT + pw + 16.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"{dash}/>"#,
            lx + 28.0,
            line.color
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 34.0, ly + 4.0, line.label);
    }
    s.push_str("</svg>\n");
    s
}

/// Plots the `eps`, `R` and `D` columns of a sweep report.
pub fn plot_report(report: &Report) -> Result<String, String> {
    let column = |name: &str| {
        report
            .numbers(name)
            .ok_or_else(|| format!("sweep has no numeric `{name}` column"))
    };
    let (eps, r, d) = (column("eps")?, column("R")?, column("D")?);
    if eps.is_empty() {
        return Err("sweep has no rows".into());
    }
    Ok(render_svg(&report.scenario, &eps, &r, &d))
}

fn bounds(xs: &[f64]) -> (f64, f64) {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    if s.parse::<f64>().ok() == Some(0.0) && v != 0.0 {
        format_number(v)
    } else {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
