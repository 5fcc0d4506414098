//! Closed convex curves parameterized over `[0, 2π)`, counterclockwise.

use std::f64::consts::TAU;
use std::fmt::Debug;
use std::sync::Arc;

use num_complex::Complex64;

use crate::linalg::{hermitian_eigen, hermitian_parts, ComplexMatrix};

/// A 2π-periodic counterclockwise parameterization of a convex curve.
pub trait ClosedCurve: Send + Sync + Debug {
    fn point(&self, t: f64) -> Complex64;
    fn derivative(&self, t: f64) -> Complex64;
}

#[derive(Debug, Clone, Copy)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl ClosedCurve for Circle {
    fn point(&self, t: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, t)
    }
    fn derivative(&self, t: f64) -> Complex64 {
        Complex64::new(0.0, 1.0) * Complex64::from_polar(self.radius, t)
    }
}

/// Axis-aligned ellipse with semi-axes `rx`, `ry`.
#[derive(Debug, Clone, Copy)]
pub struct Ellipse {
    pub center: Complex64,
    pub rx: f64,
    pub ry: f64,
}

impl ClosedCurve for Ellipse {
    fn point(&self, t: f64) -> Complex64 {
        self.center + Complex64::new(self.rx * t.cos(), self.ry * t.sin())
    }
    fn derivative(&self, t: f64) -> Complex64 {
        Complex64::new(-self.rx * t.sin(), self.ry * t.cos())
    }
}

/// Convex polygon traversed counterclockwise at constant speed.
#[derive(Debug, Clone)]
pub struct Polygon {
    vertices: Vec<Complex64>,
    /// Arc length at each vertex, closing with the perimeter.
    marks: Vec<f64>,
}

impl Polygon {
    /// Vertices in counterclockwise order; at least three.
    pub fn new(vertices: Vec<Complex64>) -> Option<Self> {
        if vertices.len() < 3 {
            return None;
        }
        let mut marks = vec![0.0];
        for k in 0..vertices.len() {
            let next = vertices[(k + 1) % vertices.len()];
            marks.push(marks[k] + (next - vertices[k]).norm());
        }
        Some(Self { vertices, marks })
    }

    /// Regular `m`-gon with vertices `R·e^{2πik/m}`.
    pub fn regular(m: usize, circumradius: f64) -> Option<Self> {
        Self::new((0..m).map(|k| Complex64::from_polar(circumradius, TAU * k as f64 / m as f64)).collect())
    }

    pub fn perimeter(&self) -> f64 {
        *self.marks.last().unwrap()
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let s = t.rem_euclid(TAU) / TAU * self.perimeter();
        let k = self.marks.partition_point(|m| *m <= s).clamp(1, self.vertices.len()) - 1;
        (k, s - self.marks[k])
    }

    fn edge(&self, k: usize) -> Complex64 {
        let next = self.vertices[(k + 1) % self.vertices.len()];
        (next - self.vertices[k]) / (self.marks[k + 1] - self.marks[k])
    }
}

impl ClosedCurve for Polygon {
    fn point(&self, t: f64) -> Complex64 {
        let (k, u) = self.locate(t);
        self.vertices[k] + self.edge(k) * u
    }
    fn derivative(&self, t: f64) -> Complex64 {
        let (k, _) = self.locate(t);
        self.edge(k) * (self.perimeter() / TAU)
    }
}

/// `scale·γ(t) + shift` for a nonzero complex `scale`.
#[derive(Debug, Clone)]
pub struct Affine {
    pub inner: Arc<dyn ClosedCurve>,
    pub scale: Complex64,
    pub shift: Complex64,
}

impl ClosedCurve for Affine {
    fn point(&self, t: f64) -> Complex64 {
        self.scale * self.inner.point(t) + self.shift
    }
    fn derivative(&self, t: f64) -> Complex64 {
        self.scale * self.inner.derivative(t)
    }
}

/// Boundary of `W(A)` parameterized by the outward normal angle.
///
/// The point at angle θ is `w*Aw` for the top eigenvector `w` of
/// `cosθ·M + sinθ·N`. Its derivative is `i·e^{iθ}(h + h″)`, where `h` is the
/// support function and `h + h″ = 2 Σ_{k≥2} |v_k* H′ v_1|² / (λ_1 − λ_k)`.
#[derive(Debug, Clone)]
pub struct SupportCurve {
    a: ComplexMatrix,
    m: ComplexMatrix,
    n: ComplexMatrix,
}

impl SupportCurve {
    pub fn new(a: &ComplexMatrix) -> Self {
        let (m, n) = hermitian_parts(a);
        Self { a: a.clone(), m, n }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub(crate) fn pencil(&self, theta: f64) -> ComplexMatrix {
        let h = &self.m * Complex64::new(theta.cos(), 0.0) + &self.n * Complex64::new(theta.sin(), 0.0);
        (&h + h.adjoint()) * Complex64::new(0.5, 0.0)
    }

    /// `(h(θ), z(θ), λ₁ − λ₂)`; the gap is `+∞` for 1×1 matrices.
    pub fn support(&self, theta: f64) -> (f64, Complex64, f64) {
        let es = hermitian_eigen(&self.pencil(theta)).expect("pencil is Hermitian");
        let d = es.values.len();
        let w = es.vector(d - 1);
        let z = (w.adjoint() * &self.a * &w)[(0, 0)];
        let gap = if d == 1 { f64::INFINITY } else { es.values[d - 1] - es.values[d - 2] };
        (es.values[d - 1], z, gap)
    }

    /// Radius of curvature `h + h″` of the boundary at normal angle θ.
    pub fn curvature_radius(&self, theta: f64) -> f64 {
        let es = hermitian_eigen(&self.pencil(theta)).expect("pencil is Hermitian");
        let d = es.values.len();
        let hp = &self.n * Complex64::new(theta.cos(), 0.0) - &self.m * Complex64::new(theta.sin(), 0.0);
        let top = es.vector(d - 1);
        let hv = &hp * &top;
        let mut acc = 0.0;
        for k in 0..d - 1 {
            let c = (es.vector(k).adjoint() * &hv)[(0, 0)].norm_sqr();
            if c > 0.0 {
                acc += c / (es.values[d - 1] - es.values[k]);
            }
        }
        2.0 * acc
    }
}

impl ClosedCurve for SupportCurve {
    fn point(&self, t: f64) -> Complex64 {
        self.support(t).1
    }
    fn derivative(&self, t: f64) -> Complex64 {
        Complex64::new(0.0, self.curvature_radius(t)) * Complex64::from_polar(1.0, t)
    }
}

/// Samples `γ(2πj/N)` for `j = 0..N`.
pub fn sample_points(curve: &dyn ClosedCurve, count: usize) -> Vec<Complex64> {
    (0..count).map(|j| curve.point(TAU * j as f64 / count as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn support_curve_derivative_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random::gaussian_matrix(&mut rng, 4);
        let c = SupportCurve::new(&a);
        for &t in &[0.1, 1.3, 2.9, 4.4] {
            let h = 1e-5;
            let fd = (c.point(t + h) - c.point(t - h)) / (2.0 * h);
            let exact = c.derivative(t);
            assert!((fd - exact).norm() < 1e-6 * exact.norm().max(1.0), "{fd} vs {exact}");
        }
    }

    #[test]
    fn ellipse_and_circle_are_counterclockwise() {
        let e = Ellipse { center: Complex64::new(0.0, 0.0), rx: 2.0, ry: 1.0 };
        let c = Circle { center: Complex64::new(1.0, 0.0), radius: 0.5 };
        for curve in [&e as &dyn ClosedCurve, &c] {
            let p = curve.point(0.0);
            let d = curve.derivative(0.0);
            let center = curve.point(std::f64::consts::PI) * 0.5 + p * 0.5;
            assert!(((p - center).conj() * d).im > 0.0);
        }
    }
}
