//! Dense complex linear algebra for small matrices.
//!
//! Everything here works on [`ComplexMatrix`], a dynamically sized
//! `nalgebra` matrix of `Complex64`. Dimensions are expected to stay small
//! (tens at most); the algorithms favour accuracy over asymptotic speed.

mod eigen;
mod funm;
pub mod random;
mod schur;

pub use eigen::{hermitian_eigen, EigenSystem};
pub use funm::{
    divided_difference, function_of_matrix, newton_form_of_matrix, Analytic, ExpScaled,
    Holomorphic, PrincipalPower,
};
pub use schur::{schur, Schur};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix. Square unless a routine says otherwise.
pub type ComplexMatrix = DMatrix<Complex64>;

pub(crate) const C0: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const C1: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Builds a square matrix from row-major rows.
///
/// Fails on ragged input, an empty matrix or non-finite entries.
pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<ComplexMatrix> {
    let d = rows.len();
    if d == 0 {
        return Err(Error::Contract("matrix must have at least one row".into()));
    }
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::Contract(format!("expected {d}x{d} entries, got ragged rows")));
    }
    let m = ComplexMatrix::from_fn(d, d, |i, j| rows[i][j]);
    check_finite(&m)?;
    Ok(m)
}

/// Real-valued convenience constructor, row-major.
pub fn from_real_rows(rows: &[&[f64]]) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
        .collect();
    from_rows(&rows)
}

pub fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Contract("matrix has non-finite entries".into()))
    }
}

pub fn check_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Contract(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

pub(crate) fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Hermitian test with the relative tolerance `1e-12 * max|a_ij|`.
pub fn is_hermitian(m: &ComplexMatrix) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let tol = 1e-12 * max_abs(m);
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= tol))
}

/// Normality test `‖A*A − AA*‖ ≤ 1e-12 ‖A‖²` (Frobenius norms).
pub fn is_normal(m: &ComplexMatrix) -> bool {
    let a_star = m.adjoint();
    let comm = &a_star * m - m * &a_star;
    let scale = m.norm_squared();
    comm.norm() <= 1e-12 * scale
}

/// Hermitian and skew-Hermitian parts: `A = M + iN` with `M`, `N` Hermitian.
pub fn hermitian_parts(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let a_star = a.adjoint();
    let m = (a + &a_star) * Complex64::new(0.5, 0.0);
    let n = (a - &a_star) * Complex64::new(0.0, -0.5);
    (m, n)
}

/// Largest singular value of a (possibly rectangular) matrix.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = if m.nrows() >= m.ncols() {
        m.adjoint() * m
    } else {
        m * m.adjoint()
    };
    let gram = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    match hermitian_eigen(&gram) {
        Ok(es) => es.values.last().copied().unwrap_or(0.0).max(0.0).sqrt(),
        // Power iteration fallback; the Hermitian QR has never failed in practice.
        Err(_) => power_norm(m),
    }
}

fn power_norm(m: &ComplexMatrix) -> f64 {
    let gram = m.adjoint() * m;
    let mut v = nalgebra::DVector::from_element(gram.ncols(), C1);
    let mut lambda = 0.0;
    for _ in 0..500 {
        let w = &gram * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        lambda = nw;
        v = w / Complex64::new(nw, 0.0);
    }
    lambda.sqrt()
}

/// Single disk-automorphism factor applied to a matrix:
/// `(B − ζI)(I − ζ̄B)⁻¹`.
pub fn mobius_of_matrix(b: &ComplexMatrix, zeta: Complex64) -> Result<ComplexMatrix> {
    let d = check_square(b)?;
    if zeta.norm() > 1.0 {
        return Err(Error::Contract(format!("|ζ| = {} exceeds 1", zeta.norm())));
    }
    let id = ComplexMatrix::identity(d, d);
    let denom = &id - b * zeta.conj();
    let inv = denom
        .clone()
        .try_inverse()
        .ok_or(Error::Pole { condition: f64::INFINITY })?;
    let condition = operator_norm(&denom) * operator_norm(&inv);
    if !condition.is_finite() || condition > 1e14 {
        return Err(Error::Pole { condition });
    }
    Ok((b - &id * zeta) * inv)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}
