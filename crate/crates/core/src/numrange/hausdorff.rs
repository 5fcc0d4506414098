//! Hausdorff distance between convex hulls of point sets.
//!
//! For convex sets `d_H(P, Q) = max_φ |h_P(φ) − h_Q(φ)|`. Between consecutive
//! edge-normal angles of the two hulls the difference is
//! `Re(e^{−iφ}(v − w))` for fixed vertices `v`, `w`, so the maximum is found
//! exactly from interval endpoints and interior critical angles.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

/// Counterclockwise convex hull (Andrew's monotone chain).
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| ((a - o).conj() * (b - o)).im;
    let mut lower: Vec<Complex64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn edge_normal_angles(hull: &[Complex64], out: &mut Vec<f64>) {
    let m = hull.len();
    if m < 2 {
        return;
    }
    for k in 0..m {
        let e = hull[(k + 1) % m] - hull[k];
        if e.norm() > 0.0 {
            out.push((e.arg() - PI / 2.0).rem_euclid(TAU));
        }
    }
}

fn argmax(hull: &[Complex64], phi: f64) -> Complex64 {
    let dir = Complex64::from_polar(1.0, -phi);
    *hull
        .iter()
        .max_by(|a, b| (dir * **a).re.total_cmp(&(dir * **b).re))
        .expect("non-empty hull")
}

/// Hausdorff distance between the convex hulls of two point sets.
pub fn hausdorff_convex(p: &[Complex64], q: &[Complex64]) -> f64 {
    let hp = convex_hull(p);
    let hq = convex_hull(q);
    if hp.is_empty() || hq.is_empty() {
        return f64::INFINITY;
    }
    let mut breaks = vec![0.0];
    edge_normal_angles(&hp, &mut breaks);
    edge_normal_angles(&hq, &mut breaks);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks.push(TAU);
    let mut best: f64 = 0.0;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let d = argmax(&hp, mid) - argmax(&hq, mid);
        let value = |phi: f64| (Complex64::from_polar(1.0, -phi) * d).re.abs();
        best = best.max(value(lo)).max(value(hi));
        if d.norm() > 0.0 {
            for crit in [d.arg(), d.arg() + PI] {
                let c = crit.rem_euclid(TAU);
                if c > lo && c < hi {
                    best = best.max(value(c));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polygon(center: Complex64, r: f64, m: usize) -> Vec<Complex64> {
        (0..m).map(|k| center + Complex64::from_polar(r, TAU * k as f64 / m as f64)).collect()
    }

    #[test]
    fn identical_and_concentric() {
        let p = polygon(Complex64::new(0.0, 0.0), 1.0, 64);
        assert_eq!(hausdorff_convex(&p, &p), 0.0);
        let q = polygon(Complex64::new(0.0, 0.0), 2.0, 64);
        assert!((hausdorff_convex(&p, &q) - 1.0).abs() < 1e-14);
        let shifted: Vec<Complex64> = p.iter().map(|z| z + Complex64::new(0.3, -0.4)).collect();
        assert!((hausdorff_convex(&p, &shifted) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn segment_against_point() {
        let seg = vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)];
        let pt = vec![Complex64::new(0.0, 0.0)];
        assert!((hausdorff_convex(&seg, &pt) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn point_on_edge_versus_vertex_sets() {
        // Square against the square with edge midpoints added: same hull.
        let sq = vec![
            Complex64::new(1.0, 1.0),
            Complex64::new(-1.0, 1.0),
            Complex64::new(-1.0, -1.0),
            Complex64::new(1.0, -1.0),
        ];
        let mut more = sq.clone();
        more.push(Complex64::new(0.0, 1.0));
        assert!(hausdorff_convex(&sq, &more) < 1e-15);
    }
}
