//! Standalone SVG rendering of step survival curves.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::survival::StepSurvivalCurve;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// One `<path class="curve">` per curve, a `+` text glyph with class
/// `censor` per censoring, and a legend when there are two or more curves.
pub fn curve_svg(curves: &[(&str, &StepSurvivalCurve)]) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::InvalidParameter("no curves to plot".into()));
    }
    let t_end = curves.iter().map(|(_, c)| c.max_time()).fold(0.0, f64::max);
    let t_end = if t_end > 0.0 { t_end } else { 1.0 };
    let x = |t: f64| MARGIN + t / t_end * (WIDTH - 2.0 * MARGIN);
    let y = |s: f64| HEIGHT - MARGIN - s * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<line class="axis" x1="{MARGIN:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        y(0.0),
        x(t_end),
        y(0.0)
    );
    let _ = writeln!(
        svg,
        r#"<line class="axis" x1="{MARGIN:.2}" y1="{:.2}" x2="{MARGIN:.2}" y2="{:.2}" stroke="black"/>"#,
        y(0.0),
        y(1.0)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">time (days), max {t_end}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{:.2}" font-size="12" transform="rotate(-90 15 {:.2})" text-anchor="middle">survival probability</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    for (k, (_, c)) in curves.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut d = format!("M{:.2},{:.2}", x(0.0), y(1.0));
        let mut level = 1.0;
        for (t, s) in c.jumps() {
            if s != level {
                let _ = write!(d, " H{:.2} V{:.2}", x(t), y(s));
                level = s;
            }
        }
        let _ = write!(d, " H{:.2}", x(c.max_time()));
        let _ = writeln!(svg, r#"<path class="curve" d="{d}" fill="none" stroke="{color}" stroke-width="2"/>"#);
        for (t, s) in c.censor_marks() {
            let _ = writeln!(
                svg,
                r#"<text class="censor" x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle" dominant-baseline="central" fill="{color}">+</text>"#,
                x(t),
                y(s)
            );
        }
    }

    if curves.len() > 1 {
        let _ = writeln!(svg, r#"<g class="legend">"#);
        for (k, (label, _)) in curves.iter().enumerate() {
            let ly = MARGIN + 18.0 * k as f64;
            let color = COLORS[k % COLORS.len()];
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
                WIDTH - 170.0,
                WIDTH - 145.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#,
                WIDTH - 140.0,
                ly + 4.0,
                escape(label)
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn emit_curve_svg(curves: &[(&str, &StepSurvivalCurve)], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, curve_svg(curves)?).map_err(|e| Error::io(path, e))
}
