//! Static SVG plot of a closed boundary.

use std::fmt::Write;

use kspectral::Complex64;

const SIZE: f64 = 512.0;
const MARGIN: f64 = 0.05;

/// Closed polyline through `points` in a square canvas. The viewport is the
/// bounding box of the points plus a 5% margin on each side, scaled
/// uniformly, with the imaginary axis pointing up.
pub fn boundary_svg(points: &[Complex64], title: &str) -> String {
    let (origin, scale) = viewport(points);
    let map = |p: &Complex64| ((p.re - origin.re) * scale, (origin.im - p.im) * scale);
    let (lo, hi) = (origin, origin + Complex64::new(SIZE / scale, -SIZE / scale));

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, "<title>{}</title>", escape(title)).unwrap();
    writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    if (hi.im..=lo.im).contains(&0.0) {
        let y = map(&Complex64::new(0.0, 0.0)).1;
        writeln!(out, r##"<line x1="0" y1="{y}" x2="{SIZE}" y2="{y}" stroke="#bbb" stroke-width="0.5"/>"##).unwrap();
    }
    if (lo.re..=hi.re).contains(&0.0) {
        let x = map(&Complex64::new(0.0, 0.0)).0;
        writeln!(out, r##"<line x1="{x}" y1="0" x2="{x}" y2="{SIZE}" stroke="#bbb" stroke-width="0.5"/>"##).unwrap();
    }
    out.push_str(r#"<polygon fill="none" stroke="black" stroke-width="1" points=""#);
    for (k, p) in points.iter().enumerate() {
        let (x, y) = map(p);
        if k > 0 {
            out.push(' ');
        }
        write!(out, "{x},{y}").unwrap();
    }
    out.push_str("\"/>\n</svg>\n");
    out
}

/// Top-left corner of the viewport in the complex plane and the scale in
/// canvas units per unit length.
pub fn viewport(points: &[Complex64]) -> (Complex64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let half = 0.5 * span + MARGIN * span;
    (Complex64::new(0.5 * (x0 + x1) - half, 0.5 * (y0 + y1) + half), SIZE / (2.0 * half))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
