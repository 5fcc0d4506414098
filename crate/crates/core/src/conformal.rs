//! Conformal map of a convex domain onto the unit disk by boundary
//! collocation.
//!
//! The map is `a(z) = τ·z·exp(F(z))` with `F(z) = ω + ∫ q(θ) log(σ(θ) − z) dθ`
//! and real density `q`. Collocating `Re F(σ_i) = −log|σ_i|` on the grid
//! `θ_j = 2πj/N`, `N = 2n+1`, gives the dense system
//!
//! `(2π/N) Σ_j q_j [K_ij − c(j−i)] = −log|σ_i|`
//!
//! where `K_ij = log|(σ_j − σ_i)/(e^{iθ_j} − e^{iθ_i})|`, `K_ii = log|σ′_i|`.
//! The system is solved bordered with a zero-mean constraint on `q` and a
//! free constant `ω`, which stays regular when the logarithmic capacity of
//! the domain is close to 1.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{function_of_matrix, schur, ComplexMatrix, Holomorphic};
use crate::numrange::trig::TrigInterpolant;
use crate::numrange::{golden_max, BoundarySample};
use crate::quadrature::graded_rule;

/// `c(k) = Σ_{j=1}^{n} cos(j·2πk/(2n+1))/j` for `k = 0..2n`.
pub fn c_coefficients(n: usize) -> Vec<f64> {
    let count = 2 * n + 1;
    (0..count)
        .map(|k| {
            (1..=n)
                .map(|j| (TAU * ((j * k) % count) as f64 / count as f64).cos() / j as f64)
                .sum()
        })
        .collect()
}

/// Near-boundary points closer than this many node spacings use graded
/// quadrature instead of the trapezoid rule.
const NEAR_FACTOR: f64 = 6.0;

/// Densities below this log-capacity magnitude are reported in balanced
/// (zero-mean) form.
const CAPACITY_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct DiskConformalMap {
    boundary: BoundarySample,
    density: Vec<f64>,
    balanced: Vec<f64>,
    offset: f64,
    log_capacity: f64,
    coeffs: Vec<f64>,
    tau: Complex64,
    q_interp: TrigInterpolant,
    /// `∫ q(θ)·θ dθ` over `[0, 2π]` for the balanced density's interpolant.
    theta_moment: f64,
    sigma_interp: TrigInterpolant,
    spacing: f64,
    scale: f64,
    residual: f64,
    condition: f64,
}

/// Solves for the density; refuses boundaries flagged non-smooth.
pub fn solve_density(boundary: &BoundarySample) -> Result<DiskConformalMap> {
    solve_density_with(boundary, false)
}

/// As [`solve_density`]; `force` accepts non-smooth boundaries, with no
/// accuracy guarantee.
pub fn solve_density_with(boundary: &BoundarySample, force: bool) -> Result<DiskConformalMap> {
    if !boundary.smooth && !force {
        return Err(Error::NonSmoothBoundary { gap: boundary.min_gap });
    }
    let count = boundary.len();
    if count < 3 || count % 2 == 0 {
        return Err(Error::Contract(format!("odd sample count ≥ 3 required, got {count}")));
    }
    if boundary.support.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::Contract("0 must lie strictly inside the sampled boundary".into()));
    }
    let n = (count - 1) / 2;
    let coeffs = c_coefficients(n);
    let h = TAU / count as f64;
    let sigma = &boundary.points;
    let nodes: Vec<Complex64> = boundary.angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();

    let mut m = DMatrix::<f64>::zeros(count, count);
    for i in 0..count {
        for j in 0..count {
            let k = if i == j {
                boundary.tangents[i].norm().ln()
            } else {
                ((sigma[j] - sigma[i]) / (nodes[j] - nodes[i])).norm().ln()
            };
            let diff = (j + count - i) % count;
            m[(i, j)] = h * (k - coeffs[diff]);
        }
    }
    let rhs: DVector<f64> = DVector::from_iterator(count, sigma.iter().map(|s| -s.norm().ln()));

    let mut bordered = DMatrix::<f64>::zeros(count + 1, count + 1);
    bordered.view_mut((0, 0), (count, count)).copy_from(&m);
    for i in 0..count {
        bordered[(i, count)] = 1.0;
        bordered[(count, i)] = h;
    }
    let inverse = bordered
        .clone()
        .try_inverse()
        .ok_or(Error::CapacityDegeneracy { condition: f64::INFINITY })?;
    let condition = bordered.column_iter().map(|c| c.lp_norm(1)).fold(0.0, f64::max)
        * inverse.column_iter().map(|c| c.lp_norm(1)).fold(0.0, f64::max);
    if !condition.is_finite() || condition > 1e13 {
        return Err(Error::CapacityDegeneracy { condition });
    }
    let lu = bordered.lu();
    let mut ext = DVector::<f64>::zeros(count + 1);
    ext.rows_mut(0, count).copy_from(&rhs);
    let sol = lu.solve(&ext).ok_or(Error::CapacityDegeneracy { condition })?;
    let balanced: Vec<f64> = sol.rows(0, count).iter().copied().collect();
    let offset = sol[count];
    let mut unit = DVector::<f64>::zeros(count + 1);
    unit[count] = 1.0;
    let eq = lu.solve(&unit).ok_or(Error::CapacityDegeneracy { condition })?;
    let log_capacity = -eq[count];

    let density: Vec<f64> = if log_capacity.abs() >= CAPACITY_FLOOR {
        (0..count).map(|j| balanced[j] + offset / log_capacity * eq[j]).collect()
    } else {
        balanced.clone()
    };
    let residual = if log_capacity.abs() >= CAPACITY_FLOOR {
        (&m * DVector::from_column_slice(&density) - &rhs).norm()
    } else {
        (&m * DVector::from_column_slice(&balanced) + DVector::from_element(count, offset) - &rhs).norm()
    };

    let spacing = (0..count)
        .map(|j| (sigma[(j + 1) % count] - sigma[j]).norm())
        .fold(0.0, f64::max);
    let scale = sigma.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let q_interp = TrigInterpolant::from_real(&balanced);
    let theta_moment = q_interp.theta_moment().re;
    let mut map = DiskConformalMap {
        boundary: boundary.clone(),
        density,
        q_interp,
        theta_moment,
        sigma_interp: TrigInterpolant::new(sigma),
        balanced,
        offset,
        log_capacity,
        coeffs,
        tau: Complex64::new(1.0, 0.0),
        spacing,
        scale,
        residual,
        condition,
    };
    let (f0, _, _) = map.potential(Complex64::new(0.0, 0.0), false)?;
    map.tau = Complex64::from_polar(1.0, -f0.im);
    Ok(map)
}

/// Where an interior point sits relative to the boundary.
struct Nearest {
    theta: f64,
    distance: f64,
}

impl DiskConformalMap {
    pub fn boundary(&self) -> &BoundarySample {
        &self.boundary
    }

    /// Solution of the collocation system as stated (the balanced density
    /// when the log-capacity is within 1e-3 of zero).
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Zero-mean density used for evaluation.
    pub fn balanced_density(&self) -> &[f64] {
        &self.balanced
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `log` of the logarithmic capacity implied by the discrete system.
    pub fn log_capacity(&self) -> f64 {
        self.log_capacity
    }

    pub fn c_coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// Residual of the solved linear system, 2-norm.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// 1-norm condition number of the bordered system.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// `∫ q dθ` of the exposed density.
    pub fn density_integral(&self) -> f64 {
        self.density.iter().sum::<f64>() * TAU / self.density.len() as f64
    }

    /// Widest quadrature panel: one node spacing in θ.
    fn panel_width(&self) -> f64 {
        TAU / self.balanced.len() as f64
    }

    fn point_at(&self, theta: f64) -> Complex64 {
        match self.boundary.curve() {
            Some(c) => c.point(theta),
            None => self.sigma_interp.eval(theta),
        }
    }

    fn tangent_at(&self, theta: f64) -> Complex64 {
        match self.boundary.curve() {
            Some(c) => c.derivative(theta),
            None => self.sigma_interp.eval_deriv(theta, 1),
        }
    }

    fn nearest(&self, z: Complex64) -> Nearest {
        let pts = &self.boundary.points;
        let count = pts.len();
        let (j, _) = pts
            .iter()
            .enumerate()
            .map(|(j, p)| (j, (p - z).norm()))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        let step = TAU / count as f64;
        let t = self.boundary.angles[j];
        let (theta, neg) = golden_max(|x| -(self.point_at(x) - z).norm(), t - 2.0 * step, t + 2.0 * step, 80);
        let node = (pts[j] - z).norm();
        if node <= -neg {
            Nearest { theta: t, distance: node }
        } else {
            Nearest { theta: theta.rem_euclid(TAU), distance: -neg }
        }
    }

    fn check_interior(&self, z: Complex64) -> Result<Nearest> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain { re: z.re, im: z.im });
        }
        if !self.boundary.contains(z) {
            return Err(Error::Domain { re: z.re, im: z.im });
        }
        let near = self.nearest(z);
        let p = self.point_at(near.theta);
        let t = self.tangent_at(near.theta);
        let side = (t.conj() * (z - p)).im;
        if near.distance <= 1e-13 * self.scale.max(1.0) || side <= 0.0 {
            return Err(Error::Domain { re: z.re, im: z.im });
        }
        Ok(near)
    }

    /// `(F, F′, F″)` at an interior point; derivatives only when asked.
    fn potential(&self, z: Complex64, derivs: bool) -> Result<(Complex64, Complex64, Complex64)> {
        let near = self.check_interior(z)?;
        let sigma0 = self.boundary.points[0];
        let phi0 = (sigma0 - z).arg();
        let mut f = Complex64::new(self.offset, 0.0);
        let mut f1 = Complex64::new(0.0, 0.0);
        let mut f2 = Complex64::new(0.0, 0.0);
        let mut add = |w: f64, q: f64, s: Complex64, unwind: f64| {
            let d = s - z;
            let arg = phi0 + (d.arg() - phi0).rem_euclid(TAU) - unwind;
            f += Complex64::new(d.norm().ln(), arg) * (w * q);
            if derivs {
                let inv = d.inv();
                f1 -= inv * (w * q);
                f2 -= inv * inv * (w * q);
            }
        };
        if near.distance > NEAR_FACTOR * self.spacing {
            // The continuous argument jumps by 2π across θ = 0, which would
            // spoil the trapezoid rule; integrate arg − θ (periodic) on the
            // nodes and add the exact moment of θ.
            let h = TAU / self.balanced.len() as f64;
            for ((q, s), t) in self.balanced.iter().zip(&self.boundary.points).zip(&self.boundary.angles) {
                add(h, *q, *s, *t);
            }
            f += Complex64::new(0.0, self.theta_moment);
        } else {
            for (lo, hi) in [(0.0, near.theta), (near.theta, TAU)] {
                if hi - lo <= 0.0 {
                    continue;
                }
                let (xs, ws) = graded_rule(lo, hi, self.panel_width());
                for (x, w) in xs.iter().zip(&ws) {
                    add(*w, self.q_interp.eval(*x).re, self.point_at(*x), 0.0);
                }
            }
        }
        Ok((f, f1, f2))
    }

    /// Distance from an interior point to the boundary curve.
    pub fn boundary_distance(&self, z: Complex64) -> Result<f64> {
        Ok(self.check_interior(z)?.distance)
    }

    /// `a(z)` for interior `z`.
    pub fn map_point(&self, z: Complex64) -> Result<Complex64> {
        let (f, _, _) = self.potential(z, false)?;
        Ok(self.tau * z * f.exp())
    }

    /// `a′(z) = τ·e^F·(1 + z·F′)`.
    pub fn map_derivative(&self, z: Complex64) -> Result<Complex64> {
        let (f, f1, _) = self.potential(z, true)?;
        Ok(self.tau * f.exp() * (1.0 + z * f1))
    }

    /// `a″(z) = τ·e^F·(2F′ + z(F′² + F″))`.
    pub fn map_second_derivative(&self, z: Complex64) -> Result<Complex64> {
        let (f, f1, f2) = self.potential(z, true)?;
        Ok(self.tau * f.exp() * (2.0 * f1 + z * (f1 * f1 + f2)))
    }

    /// `|a(σ(θ))|` for a boundary parameter θ; the log singularity is
    /// integrated with graded panels split at θ.
    pub fn boundary_modulus(&self, theta: f64) -> f64 {
        let theta = theta.rem_euclid(TAU);
        let s = self.point_at(theta);
        let mut re = self.offset;
        for (lo, hi) in [(0.0, theta), (theta, TAU)] {
            if hi - lo <= 0.0 {
                continue;
            }
            let (xs, ws) = graded_rule(lo, hi, self.panel_width());
            for (x, w) in xs.iter().zip(&ws) {
                let d = (self.point_at(*x) - s).norm();
                if d > 0.0 {
                    re += w * self.q_interp.eval(*x).re * d.ln();
                }
            }
        }
        s.norm() * re.exp()
    }

    /// `max | |a(σ)| − 1 |` over the midpoints between collocation nodes.
    pub fn boundary_error(&self) -> f64 {
        let count = self.balanced.len();
        (0..count)
            .map(|j| {
                let t = TAU * (j as f64 + 0.5) / count as f64;
                (self.boundary_modulus(t) - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `B = a(A)` through the Schur form with divided differences.
    pub fn map_matrix(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let s = schur(a)?;
        for lambda in s.eigenvalues() {
            if self.check_interior(lambda).is_err() {
                return Err(Error::SpectralDomain { re: lambda.re, im: lambda.im });
            }
        }
        function_of_matrix(a, &MapFunction(self))
    }
}

struct MapFunction<'a>(&'a DiskConformalMap);

impl Holomorphic for MapFunction<'_> {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        self.0.map_point(z)
    }
    fn derivative(&self, z: Complex64, order: usize) -> Option<Result<Complex64>> {
        match order {
            1 => Some(self.0.map_derivative(z)),
            2 => Some(self.0.map_second_derivative(z)),
            _ => None,
        }
    }
}
