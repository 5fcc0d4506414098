//! The three-parameter test family `A(a, b)` whose numerical range is bounded
//! by a vertical segment and an arc of a cardioid-like quartic.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::linalg::{from_real_rows, ComplexMatrix};
use crate::quadrature;

/// `[[0, a, b], [−a, 0, b], [−b, −b, 1]]`.
pub fn cardioid_matrix(a: f64, b: f64) -> ComplexMatrix {
    from_real_rows(&[&[0.0, a, b], &[-a, 0.0, b], &[-b, -b, 1.0]]).expect("finite entries")
}

/// Point of the curved part at parameter `t ∈ [−1/a, 1/a]`.
pub fn arc_point(a: f64, b: f64, t: f64) -> Complex64 {
    let (x, y, _, _) = arc_with_derivative(a, b, t);
    Complex64::new(x, y)
}

fn arc_with_derivative(a: f64, b: f64, t: f64) -> (f64, f64, f64, f64) {
    let (a2, b2, t2) = (a * a, b * b, t * t);
    let p = 1.0 - t2 * a2;
    let dp = -2.0 * a2 * t;
    let den = p * p + 2.0 * t2 * b2 * (1.0 + t2 * a2);
    let dden = 2.0 * p * dp + 4.0 * b2 * t + 8.0 * a2 * b2 * t2 * t;
    let x = p * p / den;
    let y = 4.0 * t * b2 / den;
    let dx = (2.0 * p * dp * den - p * p * dden) / (den * den);
    let dy = 4.0 * b2 * (den - t * dden) / (den * den);
    (x, y, dx, dy)
}

const TABLE_PANELS: usize = 512;

/// Parameterization of `∂W(A(a, b))` by graded arc length, starting at the
/// point 1 and running counterclockwise: upper arc to `ia`, the segment down
/// to `−ia`, then the lower arc back to 1.
#[derive(Debug, Clone)]
pub struct CardioidCurve {
    a: f64,
    b: f64,
    /// Parameter `t` at the panel breaks on `[0, 1/a]`.
    t_breaks: Vec<f64>,
    /// Arc length from `t = 0` to each break.
    s_breaks: Vec<f64>,
    half_arc: f64,
    total: f64,
    grading: Grading,
}

/// Periodic change of variable `x ↦ p` on the arc-length angle
/// `x = 2π s / L`, `p = (x + Σ A_c P_c(x − x_c)) / (1 + Σ A_c)` with `P_c` the
/// integrated Poisson kernel of radius `r_c`. Analytic and strictly monotone,
/// it moves nodes towards the high-curvature spots.
#[derive(Debug, Clone, Default)]
struct Grading {
    bumps: Vec<(f64, f64, f64)>,
}

impl Grading {
    fn mass(&self) -> f64 {
        1.0 + self.bumps.iter().map(|b| b.1).sum::<f64>()
    }

    /// `(p(x), dp/dx)`.
    fn forward(&self, x: f64) -> (f64, f64) {
        let (mut p, mut dp) = (x, 1.0);
        for &(xc, amp, r) in &self.bumps {
            let y = x - xc;
            let (sn, cs) = y.sin_cos();
            p += amp * (y + 2.0 * (r * sn).atan2(1.0 - r * cs));
            dp += amp * (1.0 - r * r) / (1.0 - 2.0 * r * cs + r * r);
        }
        let m = self.mass();
        (p / m, dp / m)
    }

    /// `x` with `p(x) − p(0) = p`.
    fn inverse(&self, p: f64) -> f64 {
        if self.bumps.is_empty() {
            return p;
        }
        let (p0, _) = self.forward(0.0);
        let target = p + p0;
        let mut x = p;
        let (mut lo, mut hi) = (p - TAU, p + TAU);
        for _ in 0..100 {
            let (v, d) = self.forward(x);
            let err = v - target;
            if err.abs() <= 1e-15 * (1.0 + target.abs()) {
                return x;
            }
            if err > 0.0 {
                hi = hi.min(x);
            } else {
                lo = lo.max(x);
            }
            let mut next = x - err / d;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 1e-16 * (1.0 + x.abs()) {
                return next;
            }
            x = next;
        }
        x
    }
}

impl CardioidCurve {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::DegenerateFamily(format!(
                "cardioid family needs a > 0 and b > 0, got a = {a}, b = {b}"
            )));
        }
        let tmax = 1.0 / a;
        let t_breaks: Vec<f64> = (0..=TABLE_PANELS).map(|k| tmax * k as f64 / TABLE_PANELS as f64).collect();
        let mut s_breaks = vec![0.0];
        let mut speed = |t: f64| speed(a, b, t);
        for w in t_breaks.windows(2) {
            let prev = *s_breaks.last().unwrap();
            s_breaks.push(prev + quadrature::panel(&mut speed, w[0], w[1]));
        }
        let half_arc = *s_breaks.last().unwrap();
        let total = 2.0 * half_arc + 2.0 * a;
        let grading = grading(a, b, &t_breaks, &s_breaks, total);
        Ok(Self { a, b, t_breaks, s_breaks, half_arc, total, grading })
    }

    pub fn length(&self) -> f64 {
        self.total
    }

    /// Inverse of the arc length on the upper arc, `s ∈ [0, half_arc]`.
    fn t_of_s(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.half_arc);
        let k = match self.s_breaks.binary_search_by(|v| v.total_cmp(&s)) {
            Ok(k) => return self.t_breaks[k],
            Err(k) => (k - 1).min(TABLE_PANELS - 1),
        };
        let (t0, t1) = (self.t_breaks[k], self.t_breaks[k + 1]);
        let (s0, s1) = (self.s_breaks[k], self.s_breaks[k + 1]);
        let mut t = t0 + (t1 - t0) * (s - s0) / (s1 - s0);
        let mut sp = |u: f64| speed(self.a, self.b, u);
        for _ in 0..8 {
            let st = s0 + quadrature::panel(&mut sp, t0, t);
            let step = (st - s) / speed(self.a, self.b, t);
            t = (t - step).clamp(t0, t1);
            if step.abs() < 1e-16 * (1.0 + t.abs()) {
                break;
            }
        }
        t
    }

    fn locate(&self, theta: f64) -> (Complex64, Complex64) {
        let (x, dp) = self.unwarp(theta.rem_euclid(TAU));
        let scale = self.total / TAU / dp;
        let s = x * self.total / TAU;
        let seg_end = self.half_arc + 2.0 * self.a;
        if s <= self.half_arc {
            let t = self.t_of_s(s);
            let (x, y, dx, dy) = arc_with_derivative(self.a, self.b, t);
            let d = Complex64::new(dx, dy);
            (Complex64::new(x, y), d / d.norm() * scale)
        } else if s <= seg_end {
            let u = s - self.half_arc;
            (Complex64::new(0.0, self.a - u), Complex64::new(0.0, -scale))
        } else {
            let u = s - seg_end;
            let t = -self.t_of_s(self.half_arc - u);
            let (x, y, dx, dy) = arc_with_derivative(self.a, self.b, t);
            let d = Complex64::new(dx, dy);
            (Complex64::new(x, y), d / d.norm() * scale)
        }
    }

    /// Arc-length angle for the curve parameter, with `dθ/dx` there.
    fn unwarp(&self, theta: f64) -> (f64, f64) {
        let x = self.grading.inverse(theta).clamp(0.0, TAU);
        (x, self.grading.forward(x).1)
    }
}

/// Bumps at the point 1 and at the curvature peaks next to `±ia`, sized from
/// the tabulated turning of the tangent.
fn grading(a: f64, b: f64, t_breaks: &[f64], s_breaks: &[f64], total: f64) -> Grading {
    let angle = |t: f64| {
        let (_, _, dx, dy) = arc_with_derivative(a, b, t);
        dy.atan2(dx)
    };
    let half_arc = *s_breaks.last().unwrap();
    let mut near_one = (0.0, 0.0);
    let mut near_join = (0.0, half_arc);
    let mut prev = angle(t_breaks[0]);
    for k in 1..t_breaks.len() {
        let cur = angle(t_breaks[k]);
        let turn = (cur - prev).rem_euclid(TAU);
        let turn = if turn > std::f64::consts::PI { turn - TAU } else { turn };
        let kappa = turn.abs() / (s_breaks[k] - s_breaks[k - 1]);
        let mid = 0.5 * (s_breaks[k] + s_breaks[k - 1]);
        let slot = if mid < 0.5 * half_arc { &mut near_one } else { &mut near_join };
        if kappa > slot.0 {
            *slot = (kappa, mid);
        }
        prev = cur;
    }
    let mean = TAU / total;
    let bump = |kappa: f64, s: f64| {
        let amp = 0.6 * ((kappa / mean - 1.0) / 3.0).clamp(0.0, 1.0);
        let r = 1.0 - (2.0 / kappa * mean).clamp(1e-3, 0.5);
        (TAU * s / total, amp, r)
    };
    let mut bumps = vec![bump(near_one.0, 0.0)];
    let join = bump(near_join.0, near_join.1);
    bumps.push(join);
    bumps.push((TAU - join.0, join.1, join.2));
    bumps.retain(|b| b.1 > 0.0);
    Grading { bumps }
}

fn speed(a: f64, b: f64, t: f64) -> f64 {
    let (_, _, dx, dy) = arc_with_derivative(a, b, t);
    dx.hypot(dy)
}

impl ClosedCurve for CardioidCurve {
    fn point(&self, t: f64) -> Complex64 {
        self.locate(t).0
    }
    fn derivative(&self, t: f64) -> Complex64 {
        self.locate(t).1
    }
}
