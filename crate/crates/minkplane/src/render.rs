//! SVG rendering of circles in the square torus chart [0, 1)².
//!
//! Each axis is mapped through u = (2·atan(t) + π)/2π with ∞ on the chart
//! boundary, the same chart the orientation tests use, so rendered
//! crossings match computed intersections. Parallel classes appear as grid
//! lines; infinite points of each circle are marked.

use crate::circles::{Circle, PlaneSpec};
use crate::torus::ExtendedReal;
use std::fmt::Write;

/// Chart coordinate in [0, 1); ∞ maps to 0 (the wrap line).
fn chart(v: ExtendedReal) -> f64 {
    match v {
        ExtendedReal::Finite(t) => (2.0 * t.atan() + std::f64::consts::PI)
            / (2.0 * std::f64::consts::PI),
        ExtendedReal::Infinity => 0.0,
    }
}

fn unchart(u: f64) -> f64 {
    (std::f64::consts::PI * (u - 0.5)).tan()
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Renders the circles into a standalone SVG 1.1 document of the given
/// pixel size.
pub fn render_svg(plane: &PlaneSpec, circles: &[Circle], size: u32) -> String {
    let s = size as f64;
    let px = |u: f64| u * s;
    let py = |v: f64| (1.0 - v) * s;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{size}" height="{size}" fill="white" stroke="none"/>"#
    );
    // Parallel classes as grid lines.
    for k in 0..=8 {
        let u = k as f64 / 8.0;
        let heavy = k == 0 || k == 8;
        let stroke = if heavy { "#888888" } else { "#dddddd" };
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="0" x2="{:.2}" y2="{size}" stroke="{stroke}" stroke-width="1"/>"#,
            px(u),
            px(u)
        );
        let _ = writeln!(
            out,
            r#"<line x1="0" y1="{:.2}" x2="{size}" y2="{:.2}" stroke="{stroke}" stroke-width="1"/>"#,
            py(u),
            py(u)
        );
    }
    for (idx, circle) in circles.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut segments: Vec<Vec<(f64, f64)>> = Vec::new();
        let mut current: Vec<(f64, f64)> = Vec::new();
        let mut prev_v: Option<f64> = None;
        let n = 1024;
        for j in 1..n {
            let u = j as f64 / n as f64;
            let x = unchart(u);
            let y = plane.eval_circle(circle, ExtendedReal::Finite(x));
            match y {
                ExtendedReal::Finite(yy) => {
                    let v = chart(ExtendedReal::Finite(yy));
                    // Break the polyline across chart wraps and branch gaps.
                    if let Some(pv) = prev_v {
                        if (v - pv).abs() > 0.5 {
                            segments.push(std::mem::take(&mut current));
                        }
                    }
                    current.push((px(u), py(v)));
                    prev_v = Some(v);
                }
                ExtendedReal::Infinity => {
                    segments.push(std::mem::take(&mut current));
                    prev_v = None;
                }
            }
        }
        segments.push(current);
        for seg in segments.iter().filter(|s| s.len() >= 2) {
            let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                pts.join(" ")
            );
        }
        for p in circle.infinite_points() {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(chart(p.x)),
                py(chart(p.y))
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_wellformed_svg() {
        let plane = PlaneSpec::classical();
        let circles = [
            Circle::NegCurve {
                a: 1.0,
                b: 0.0,
                c: 0.0,
            },
            Circle::NegLine { s: -1.0, t: 0.0 },
            Circle::PosLine { s: 1.0, t: 0.5 },
        ];
        let svg = render_svg(&plane, &circles, 512);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.matches("<polyline").count() >= 3);
        // One marker per infinite point: 2 + 1 + 1.
        assert_eq!(svg.matches("<circle").count(), 4);
    }

    #[test]
    fn chart_is_monotone_and_wraps_infinity() {
        assert_eq!(chart(ExtendedReal::Infinity), 0.0);
        let mut prev = chart(ExtendedReal::Finite(-1e6));
        for k in -100..100 {
            let u = chart(ExtendedReal::Finite(k as f64 / 10.0));
            assert!(u > 0.0 && u < 1.0);
            if k > -100 {
                assert!(u > prev);
            }
            prev = u;
        }
    }
}
