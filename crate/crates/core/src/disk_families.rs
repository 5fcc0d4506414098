//! Matrices whose numerical range is the closed unit disk.
//!
//! Ando's factorization `A = 2 sin(B) U cos(B)` (`U` unitary,
//! `0 ≤ B = B* ≤ π/2`) describes every `A` with `W(A) ⊂ 𝔻̄`, and `W(A) = 𝔻̄`
//! exactly when `det(U cos B − z sin B)` vanishes identically in `z`. In
//! dimension 3 the matrices with `W(A) = 𝔻̄` and `ψ(A) = 2` are, up to unitary
//! similarity, the two families built by [`make_family`].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_square, hermitian_eigen, identity, is_hermitian, operator_norm, ComplexMatrix};
use crate::numrange::{boundary, BoundarySample, Circle};
use crate::psi::BlaschkeProduct;

const C0: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilySpec {
    /// `[[0,0,2],[0,ξ,0],[0,0,0]]`, `|ξ| ≤ 1`.
    Family1 { xi: Complex64 },
    /// `e^{iψ}·[[0, √2 cos φ, 2 sin φ], [0, −sin φ, √2 cos φ], [0, 0, 0]]`,
    /// `φ ∈ [0, π/2]`.
    Family2 { phi: f64, psi: f64 },
}

impl FamilySpec {
    fn check(&self) -> Result<()> {
        match *self {
            FamilySpec::Family1 { xi } if !(xi.norm() <= 1.0) => Err(Error::Range(format!("|ξ| = {} exceeds 1", xi.norm()))),
            FamilySpec::Family2 { phi, psi } if !(0.0..=FRAC_PI_2).contains(&phi) || !psi.is_finite() => {
                Err(Error::Range(format!("φ = {phi} outside [0, π/2] or ψ = {psi} not finite")))
            }
            _ => Ok(()),
        }
    }
}

pub fn make_family(spec: &FamilySpec) -> Result<ComplexMatrix> {
    spec.check()?;
    let mut a = ComplexMatrix::zeros(3, 3);
    match *spec {
        FamilySpec::Family1 { xi } => {
            a[(0, 2)] = Complex64::from(2.0);
            a[(1, 1)] = xi;
        }
        FamilySpec::Family2 { phi, psi } => {
            let w = Complex64::from_polar(1.0, psi);
            let (s, c) = phi.sin_cos();
            a[(0, 1)] = w * (SQRT_2 * c);
            a[(0, 2)] = w * (2.0 * s);
            a[(1, 1)] = -w * s;
            a[(1, 2)] = w * (SQRT_2 * c);
        }
    }
    Ok(a)
}

/// `(B, U)` with `B` Hermitian, `σ(B) ⊂ [0, π/2]`, and `U` unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct AndoForm {
    pub b: ComplexMatrix,
    pub u: ComplexMatrix,
}

impl AndoForm {
    pub fn new(b: ComplexMatrix, u: ComplexMatrix) -> Result<Self> {
        let d = check_square(&b)?;
        if check_square(&u)? != d {
            return Err(Error::Contract("B and U differ in size".into()));
        }
        if !is_hermitian(&b) {
            return Err(Error::Contract("B is not Hermitian".into()));
        }
        let defect = (u.adjoint() * &u - identity(d)).norm();
        if !(defect <= 1e-10) {
            return Err(Error::Contract(format!("U is not unitary (‖U*U − I‖ = {defect:.2e})")));
        }
        let spectrum = hermitian_eigen(&b)?.values;
        if spectrum.iter().any(|&x| !(-1e-12..=FRAC_PI_2 + 1e-12).contains(&x)) {
            return Err(Error::Range(format!("σ(B) = {spectrum:?} leaves [0, π/2]")));
        }
        Ok(Self { b, u })
    }

    /// `(sin B, cos B)` by the spectral decomposition of `B`.
    pub fn sin_cos(&self) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let e = hermitian_eigen(&self.b)?;
        let apply = |f: fn(f64) -> f64| {
            let diag = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                e.values.len(),
                e.values.iter().map(|&x| Complex64::from(f(x))),
            ));
            &e.vectors * diag * e.vectors.adjoint()
        };
        Ok((apply(f64::sin), apply(f64::cos)))
    }

    pub fn dim(&self) -> usize {
        self.b.nrows()
    }
}

/// `A = 2 sin(B) U cos(B)`.
pub fn ando_compose(form: &AndoForm) -> Result<ComplexMatrix> {
    let (s, c) = form.sin_cos()?;
    Ok(s * &form.u * c * Complex64::from(2.0))
}

/// Coefficients of `p(z) = det(U cos B − z sin B)`, lowest degree first,
/// interpolated at `2ω^k`, `ω = e^{2πi/(d+1)}`. Also returns the largest
/// Hadamard bound `∏ ‖row_i‖` over the nodes, the natural size of `p`.
pub fn disk_polynomial(form: &AndoForm) -> Result<(Vec<Complex64>, f64)> {
    let (s, c) = form.sin_cos()?;
    let d = form.dim();
    let m = d + 1;
    let uc = &form.u * c;
    let mut values = Vec::with_capacity(m);
    let mut scale = 0.0_f64;
    for k in 0..m {
        let z = Complex64::from_polar(2.0, std::f64::consts::TAU * k as f64 / m as f64);
        let mat = &uc - &s * z;
        let hadamard: f64 = (0..d).map(|i| mat.row(i).norm()).product();
        scale = scale.max(hadamard);
        values.push(mat.determinant());
    }
    let coeffs = (0..m)
        .map(|j| {
            let sum: Complex64 = (0..m)
                .map(|k| values[k] * Complex64::from_polar(1.0, -std::f64::consts::TAU * (j * k) as f64 / m as f64))
                .sum();
            sum / (m as f64 * 2f64.powi(j as i32))
        })
        .collect();
    Ok((coeffs, scale))
}

/// True when `det(U cos B − z sin B) ≡ 0`, i.e. every coefficient is below
/// `1e-10` times the Hadamard scale.
pub fn flat_disk_condition(form: &AndoForm) -> Result<bool> {
    let (coeffs, scale) = disk_polynomial(form)?;
    Ok(coeffs.iter().all(|c| c.norm() <= 1e-10 * scale.max(1.0)))
}

/// An Ando form composing `make_family(spec)` exactly: `B = diag(π/2, π/4, 0)`.
pub fn ando_form_of_family(spec: &FamilySpec) -> Result<AndoForm> {
    spec.check()?;
    let b = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::from(FRAC_PI_2),
        Complex64::from(FRAC_PI_4),
        C0,
    ]));
    let one = Complex64::from(1.0);
    let u = match *spec {
        FamilySpec::Family1 { xi } => {
            let a = Complex64::from((1.0 - xi.norm_sqr()).max(0.0).sqrt());
            ComplexMatrix::from_row_slice(3, 3, &[C0, C0, one, a, xi, C0, -xi.conj(), a, C0])
        }
        FamilySpec::Family2 { phi, psi } => {
            let w = Complex64::from_polar(1.0, psi);
            let (s, c) = phi.sin_cos();
            ComplexMatrix::from_row_slice(3, 3, &[C0, w * c, w * s, C0, -w * s, w * c, one, C0, C0])
        }
    };
    AndoForm::new(b, u)
}

/// Hausdorff distance between `W(A)` (sampled at `2n+1` normals) and the
/// closed unit disk (a 4097-gon).
pub fn disk_deviation(a: &ComplexMatrix, n: usize) -> Result<f64> {
    let w = boundary(a, n)?;
    let circle = BoundarySample::from_curve(Arc::new(Circle { center: C0, radius: 1.0 }), 2048)?;
    Ok(w.hausdorff(&circle))
}

/// Explicit Blaschke product certifying `ψ(A) ≥ 2` for a family member.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub g: BlaschkeProduct,
    /// `g(A)e₃` should equal `target·e₁` with `|target| = 2`.
    pub target: Complex64,
    /// `‖g(A)e₃ − target·e₁‖`.
    pub residual: f64,
    /// `‖g(A)‖`.
    pub norm: f64,
}

/// `g(z) = z(z − α)/(1 − ᾱz)` with `α = −e^{iψ} sin φ` for family 2 with
/// `φ < π/2`, where `g(A)e₃ = 2e^{2iψ}e₁`. Family 1 and family 2 at
/// `φ = π/2` use `g(z) = z`, for which `Ae₃ = a₁₃e₁` with `|a₁₃| = 2`.
pub fn witness_psi2(spec: &FamilySpec) -> Result<Witness> {
    let a = make_family(spec)?;
    let (g, target) = match *spec {
        FamilySpec::Family2 { phi, psi } if phi < FRAC_PI_2 => {
            let alpha = -Complex64::from_polar(phi.sin(), psi);
            (BlaschkeProduct::new(vec![C0, alpha])?, Complex64::from_polar(2.0, 2.0 * psi))
        }
        _ => (BlaschkeProduct::new(vec![C0])?, a[(0, 2)]),
    };
    let ga = g.eval_matrix(&a)?;
    let mut col = ga.column(2).into_owned();
    col[0] -= target;
    Ok(Witness { residual: col.norm(), norm: operator_norm(&ga), g, target })
}

/// Algebraic multiplicity of the eigenvalue 0, as the number of singular
/// values of `A^d` below `1e-8·max(1, ‖A‖)^d`.
pub fn zero_multiplicity(a: &ComplexMatrix) -> Result<usize> {
    let d = check_square(a)?;
    let mut p = identity(d);
    for _ in 0..d {
        p *= a;
    }
    let tol = 1e-8 * operator_norm(a).max(1.0).powi(d as i32);
    Ok(p.singular_values().iter().filter(|&&s| s <= tol).count())
}
