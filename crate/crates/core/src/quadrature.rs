//! Gauss–Legendre quadrature.

use std::sync::OnceLock;

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..(m + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(m: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Cached 16-point rule.
pub fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// 16-point rule mapped to `[a, b]`, pushed into `nodes` / `weights`.
pub fn push_panel(a: f64, b: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
    let (x, w) = gl16();
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    for (xi, wi) in x.iter().zip(w) {
        nodes.push(m + h * xi);
        weights.push(h * wi);
    }
}

pub fn panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let (x, w) = gl16();
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    x.iter().zip(w).map(|(xi, wi)| wi * f(m + h * xi)).sum::<f64>() * h
}

/// Adaptive bisection with the 16-point rule; `tol` is absolute.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = panel(f, a, m);
        let right = panel(f, m, b);
        if depth >= 48 || (left + right - whole).abs() <= tol {
            return left + right;
        }
        rec(f, a, m, left, 0.5 * tol, depth + 1) + rec(f, m, b, right, 0.5 * tol, depth + 1)
    }
    let whole = panel(&mut f, a, b);
    rec(&mut f, a, b, whole, tol, 0)
}

/// Panels on `[a, b]` refined geometrically toward both endpoints, for
/// integrands with near-singular behaviour at the ends. No panel is wider
/// than `max_width`.
pub fn graded_rule(a: f64, b: f64, max_width: f64) -> (Vec<f64>, Vec<f64>) {
    let mut breaks = vec![a, 0.5 * (a + b), b];
    let mut h = 0.5 * (b - a);
    let floor = 1e-15 * (b - a).abs().max(1.0);
    while h > floor {
        h *= 0.3;
        breaks.push(a + h);
        breaks.push(b - h);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| (*x - *y).abs() <= 0.0);
    let mut nodes = Vec::with_capacity(16 * breaks.len());
    let mut weights = Vec::with_capacity(16 * breaks.len());
    for win in breaks.windows(2) {
        let width = win[1] - win[0];
        if width <= 0.0 {
            continue;
        }
        let pieces = (width / max_width).ceil().max(1.0) as usize;
        for p in 0..pieces {
            let lo = win[0] + width * p as f64 / pieces as f64;
            let hi = win[0] + width * (p + 1) as f64 / pieces as f64;
            push_panel(lo, hi, &mut nodes, &mut weights);
        }
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let (x, w) = gauss_legendre(16);
        for k in 0..32 {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let v = adaptive(|t| 1.0 / t.sqrt(), 0.0, 1.0, 1e-12);
        assert!((v - 2.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn graded_rule_integrates_log() {
        let (x, w) = graded_rule(0.0, 1.0, 1.0);
        let v: f64 = x.iter().zip(&w).map(|(t, wt)| wt * t.ln()).sum();
        assert!((v + 1.0).abs() < 1e-13);
    }
}
