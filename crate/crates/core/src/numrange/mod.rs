//! Numerical range `W(A) = {x*Ax : ‖x‖ = 1}` through its support function.

mod cardioid;
pub mod curve;
mod hausdorff;
pub mod trig;

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

pub use cardioid::{arc_point, cardioid_matrix, CardioidCurve};
pub use curve::{Affine, Circle, ClosedCurve, Ellipse, Polygon, SupportCurve};
pub use hausdorff::{convex_hull, hausdorff_convex};

use crate::error::{Error, Result};
use crate::linalg::{check_finite, check_square, operator_norm, ComplexMatrix};

/// How the sample angles relate to the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameterization {
    /// `θ_j` is the outward normal angle at `σ_j`.
    SupportAngle,
    /// `θ_j` is arc length, regraded towards curvature peaks.
    GradedArcLength,
    /// Any other counterclockwise parameterization.
    General,
}

/// Boundary of a convex domain sampled at `θ_j = 2πj/(2n+1)`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundarySample {
    pub n: usize,
    pub angles: Vec<f64>,
    pub points: Vec<Complex64>,
    /// Support value `Re(ν̄_j σ_j)` for the outward unit normal `ν_j`.
    pub support: Vec<f64>,
    /// `dσ/dθ` at the nodes.
    pub tangents: Vec<Complex64>,
    pub smooth: bool,
    /// Smallest gap between the top two eigenvalues of the support pencil;
    /// `+∞` when not applicable.
    pub min_gap: f64,
    pub parameterization: Parameterization,
    #[serde(skip)]
    curve: Option<Arc<dyn ClosedCurve>>,
}

/// `(h(θ), z, gap)`: support value, extreme point and eigenvalue gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportPoint {
    pub value: f64,
    pub point: Complex64,
    pub gap: f64,
}

/// Support function data of `W(A)` in direction `e^{iθ}`.
pub fn support_point(a: &ComplexMatrix, theta: f64) -> Result<SupportPoint> {
    check_square(a)?;
    check_finite(a)?;
    let (value, point, gap) = SupportCurve::new(a).support(theta);
    Ok(SupportPoint { value, point, gap })
}

fn check_half_order(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::Contract(format!("half-order n must be at least 4, got {n}")));
    }
    Ok(())
}

/// Golden-section maximization of `f` on `[lo, hi]`.
pub(crate) fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Samples `∂W(A)` at `2n+1` normal angles. Tangents come from
/// trigonometric differentiation of the samples. The smoothness flag is
/// cleared when the eigenvalue gap, minimized around each grid-local
/// minimum, drops below `1e-6·‖A‖`.
pub fn boundary(a: &ComplexMatrix, n: usize) -> Result<BoundarySample> {
    check_half_order(n)?;
    check_square(a)?;
    check_finite(a)?;
    let curve = SupportCurve::new(a);
    let count = 2 * n + 1;
    let angles = trig::grid(count);
    let data: Vec<(f64, Complex64, f64)> = angles.iter().map(|&t| curve.support(t)).collect();
    let points: Vec<Complex64> = data.iter().map(|d| d.1).collect();
    let support: Vec<f64> = data.iter().map(|d| d.0).collect();
    let gaps: Vec<f64> = data.iter().map(|d| d.2).collect();
    let step = TAU / count as f64;
    let mut min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    if min_gap.is_finite() {
        for j in 0..count {
            let prev = gaps[(j + count - 1) % count];
            let next = gaps[(j + 1) % count];
            if gaps[j] <= prev && gaps[j] <= next {
                let t = angles[j];
                let (_, neg) = golden_max(|x| -curve.support(x).2, t - step, t + step, 60);
                min_gap = min_gap.min(-neg);
            }
        }
    }
    let norm = operator_norm(a);
    let smooth = min_gap > 1e-6 * norm;
    let tangents = trig::differentiate(&points);
    Ok(BoundarySample {
        n,
        angles,
        points,
        support,
        tangents,
        smooth,
        min_gap,
        parameterization: Parameterization::SupportAngle,
        curve: Some(Arc::new(curve)),
    })
}

/// Arc-length sample of the boundary of `W(A(a, b))` for the cardioid family.
pub fn cardioid_boundary(a: f64, b: f64, n: usize) -> Result<BoundarySample> {
    check_half_order(n)?;
    let curve = CardioidCurve::new(a, b)?;
    let mut s = BoundarySample::from_curve(Arc::new(curve), n)?;
    s.parameterization = Parameterization::GradedArcLength;
    Ok(s)
}

/// Outward unit normal for a counterclockwise tangent.
fn outward_normal(tangent: Complex64) -> Complex64 {
    let t = tangent / tangent.norm();
    Complex64::new(0.0, -1.0) * t
}

impl BoundarySample {
    /// Samples a smooth convex curve with exact tangents.
    pub fn from_curve(curve: Arc<dyn ClosedCurve>, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Contract("half-order n must be positive".into()));
        }
        let count = 2 * n + 1;
        let angles = trig::grid(count);
        let points: Vec<Complex64> = angles.iter().map(|&t| curve.point(t)).collect();
        let tangents: Vec<Complex64> = angles.iter().map(|&t| curve.derivative(t)).collect();
        if points.iter().chain(&tangents).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Contract("curve produced non-finite samples".into()));
        }
        let support = points
            .iter()
            .zip(&tangents)
            .map(|(p, t)| (outward_normal(*t).conj() * p).re)
            .collect();
        Ok(Self {
            n,
            angles,
            points,
            support,
            tangents,
            smooth: true,
            min_gap: f64::INFINITY,
            parameterization: Parameterization::General,
            curve: Some(curve),
        })
    }

    /// Builds a sample from points alone; tangents by trigonometric
    /// differentiation. The count must be odd.
    pub fn from_points(points: Vec<Complex64>) -> Result<Self> {
        let count = points.len();
        if count < 3 || count % 2 == 0 {
            return Err(Error::Contract(format!("need an odd number (≥ 3) of points, got {count}")));
        }
        let tangents = trig::differentiate(&points);
        let support = points
            .iter()
            .zip(&tangents)
            .map(|(p, t)| if t.norm() > 0.0 { (outward_normal(*t).conj() * p).re } else { f64::NAN })
            .collect();
        Ok(Self {
            n: (count - 1) / 2,
            angles: trig::grid(count),
            points,
            support,
            tangents,
            smooth: true,
            min_gap: f64::INFINITY,
            parameterization: Parameterization::General,
            curve: None,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn curve(&self) -> Option<&Arc<dyn ClosedCurve>> {
        self.curve.as_ref()
    }

    /// Outward unit normal at node `j`.
    pub fn normal(&self, j: usize) -> Complex64 {
        match self.parameterization {
            Parameterization::SupportAngle => Complex64::from_polar(1.0, self.angles[j]),
            _ => outward_normal(self.tangents[j]),
        }
    }

    /// Exterior-polygon membership: `Re(ν̄_j z) ≤ w_j + 1e-9` for all `j`.
    pub fn contains(&self, z: Complex64) -> bool {
        (0..self.len()).all(|j| {
            let w = self.support[j];
            !w.is_finite() || (self.normal(j).conj() * z).re <= w + 1e-9
        })
    }

    /// Convexity of the sampled polygon in the given order, with slack for
    /// repeated points.
    pub fn is_convex(&self, slack: f64) -> bool {
        let m = self.len();
        let mut sign = 0.0;
        for j in 0..m {
            let e1 = self.points[(j + 1) % m] - self.points[j];
            let e2 = self.points[(j + 2) % m] - self.points[(j + 1) % m];
            let cr = (e1.conj() * e2).im;
            if cr.abs() <= slack {
                continue;
            }
            if sign == 0.0 {
                sign = cr.signum();
            } else if cr.signum() != sign {
                return false;
            }
        }
        true
    }

    /// `scale·σ + shift` applied to every piece of data.
    pub fn affine(&self, scale: Complex64, shift: Complex64) -> Self {
        let mut out = self.clone();
        let unit = scale / scale.norm();
        for p in out.points.iter_mut() {
            *p = scale * *p + shift;
        }
        for t in out.tangents.iter_mut() {
            *t *= scale;
        }
        // Normals rotate with the scale's phase; a support-angle grid stays
        // one only when the rotation is trivial.
        if out.parameterization == Parameterization::SupportAngle && (unit - 1.0).norm() > 1e-15 {
            out.parameterization = Parameterization::General;
        }
        for j in 0..out.len() {
            let nu = if out.parameterization == Parameterization::SupportAngle {
                Complex64::from_polar(1.0, out.angles[j])
            } else {
                outward_normal(out.tangents[j])
            };
            out.support[j] = (nu.conj() * out.points[j]).re;
        }
        out.curve = self.curve.as_ref().map(|c| {
            Arc::new(Affine { inner: Arc::clone(c), scale, shift }) as Arc<dyn ClosedCurve>
        });
        out
    }

    pub fn translated(&self, shift: Complex64) -> Self {
        self.affine(Complex64::new(1.0, 0.0), shift)
    }

    /// Evaluates the trigonometric interpolant of the samples on a finer odd
    /// grid of `2m+1` points.
    pub fn resample(&self, m: usize) -> Result<Self> {
        let interp = trig::TrigInterpolant::new(&self.points);
        let pts = trig::grid(2 * m + 1).into_iter().map(|t| interp.eval(t)).collect();
        let mut out = Self::from_points(pts)?;
        out.smooth = self.smooth;
        out.min_gap = self.min_gap;
        Ok(out)
    }

    /// Hausdorff distance between the convex hulls of the two samples.
    pub fn hausdorff(&self, other: &BoundarySample) -> f64 {
        hausdorff_convex(&self.points, &other.points)
    }
}

/// Numerical radius `max{|z| : z ∈ W(A)} = max_θ h(θ)`: the largest sampled
/// support value, refined by 60 golden-section steps around it.
pub fn numerical_radius(a: &ComplexMatrix, n: usize) -> Result<f64> {
    let b = boundary(a, n)?;
    Ok(radius_from_sample(a, &b))
}

fn radius_from_sample(a: &ComplexMatrix, b: &BoundarySample) -> f64 {
    let (jmax, best) = b
        .support
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
    let curve = SupportCurve::new(a);
    let step = TAU / b.len() as f64;
    let t = b.angles[jmax];
    let (_, refined) = golden_max(|x| curve.support(x).0, t - step, t + step, 60);
    best.max(refined).max(0.0)
}

/// Exterior-polygon membership test for `W(A)`.
pub fn contains(a: &ComplexMatrix, z: Complex64, n: usize) -> Result<bool> {
    Ok(boundary(a, n)?.contains(z))
}

/// Summary data for `W(A)`.
#[derive(Debug, Clone, Serialize)]
pub struct NumericalRangeMeta {
    pub dim: usize,
    pub radius: f64,
    pub norm: f64,
    pub min_gap: f64,
}

pub fn meta(a: &ComplexMatrix, n: usize) -> Result<NumericalRangeMeta> {
    let b = boundary(a, n)?;
    Ok(NumericalRangeMeta {
        dim: a.nrows(),
        radius: radius_from_sample(a, &b),
        norm: operator_norm(a),
        min_gap: b.min_gap,
    })
}
