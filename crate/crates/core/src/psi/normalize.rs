use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{check_square, is_normal, operator_norm, schur, ComplexMatrix};

/// `A′ = (V*AV − shift·I)·rotation/scale`, with `V` unitary, `A′` upper
/// triangular with zero trace, unit Frobenius norm of the strictly upper
/// part and a nonnegative first superdiagonal.
#[derive(Debug, Clone)]
pub struct NormalizedMatrix {
    pub matrix: ComplexMatrix,
    pub shift: Complex64,
    pub scale: f64,
    pub rotation: Complex64,
    pub unitary: ComplexMatrix,
}

impl NormalizedMatrix {
    /// Maps a point of the original plane to the normalized one.
    pub fn forward(&self, z: Complex64) -> Complex64 {
        (z - self.shift) * self.rotation / self.scale
    }

    /// Reconstructs the original matrix.
    pub fn restore(&self) -> ComplexMatrix {
        let d = self.matrix.nrows();
        let inner = &self.matrix * (self.scale / self.rotation) + ComplexMatrix::identity(d, d) * self.shift;
        &self.unitary * inner * self.unitary.adjoint()
    }
}

#[derive(Debug, Clone)]
pub enum Normalization {
    /// `A` is normal; ψ(A) = 1.
    Normal,
    Reduced(NormalizedMatrix),
}

/// Canonical representative of `A` under unitary similarity and affine
/// maps `A ↦ αA + βI`. Eigenvalues are ordered by decreasing modulus (then
/// argument) and the largest is rotated onto the positive axis; nilpotent
/// matrices are rotated using the first nonzero entry above the
/// superdiagonal.
pub fn normalize_matrix(a: &ComplexMatrix) -> Result<Normalization> {
    let d = check_square(a)?;
    if d == 1 || is_normal(a) {
        return Ok(Normalization::Normal);
    }
    let mut s = schur(a)?;
    let shift = a.trace() / d as f64;
    for i in 0..d {
        s.t[(i, i)] -= shift;
    }
    let norm = operator_norm(&s.t);
    let tol = 1e-10 * norm;
    let lead = s.eigenvalues().into_iter().fold(Complex64::new(0.0, 0.0), |m, z| if z.norm() > m.norm() + tol { z } else { m });
    let mut rotation = if lead.norm() > tol { lead.conj() / lead.norm() } else { Complex64::new(1.0, 0.0) };
    let key = |z: Complex64| (z * rotation).arg();
    s.sort_diagonal(|x, y| {
        if (x.norm() - y.norm()).abs() > tol {
            x.norm() > y.norm()
        } else {
            key(x) < key(y) - 1e-9
        }
    });
    let mut off = 0.0;
    for j in 0..d {
        for i in 0..j {
            off += s.t[(i, j)].norm_sqr();
        }
    }
    let scale = off.sqrt();
    let mut t = &s.t * (rotation / scale);
    let mut phases = superdiagonal_phases(&t);
    apply_phases(&mut t, &phases);
    if lead.norm() <= tol {
        if let Some((p, z)) = first_entry_above_superdiagonal(&t) {
            // Rotating by ρ and re-phasing multiplies distance-p entries by ρ^{1−p}.
            let rho = Complex64::from_polar(1.0, z.arg() / (p as f64 - 1.0));
            t *= rho;
            rotation *= rho;
            let extra = superdiagonal_phases(&t);
            apply_phases(&mut t, &extra);
            for (a, b) in phases.iter_mut().zip(extra) {
                *a *= b;
            }
        }
    }
    for j in 0..d {
        for i in (j + 1)..d {
            t[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    let dmat = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
    Ok(Normalization::Reduced(NormalizedMatrix {
        matrix: t,
        shift,
        scale,
        rotation,
        unitary: &s.q * dmat,
    }))
}

fn superdiagonal_phases(t: &ComplexMatrix) -> Vec<Complex64> {
    let d = t.nrows();
    let mut out = vec![Complex64::new(1.0, 0.0); d];
    for k in 0..d - 1 {
        let e = t[(k, k + 1)];
        out[k + 1] = if e.norm() > 0.0 { out[k] * e.conj() / e.norm() } else { out[k] };
    }
    out
}

/// `T ← D* T D` for `D = diag(phases)`.
fn apply_phases(t: &mut ComplexMatrix, phases: &[Complex64]) {
    let d = t.nrows();
    for i in 0..d {
        for j in 0..d {
            t[(i, j)] *= phases[i].conj() * phases[j];
        }
    }
    for k in 0..d - 1 {
        let e = t[(k, k + 1)];
        t[(k, k + 1)] = Complex64::new(e.norm(), 0.0);
    }
}

fn first_entry_above_superdiagonal(t: &ComplexMatrix) -> Option<(usize, Complex64)> {
    let d = t.nrows();
    let tol = 1e-12;
    for p in 2..d {
        for i in 0..d - p {
            let z = t[(i, i + p)];
            if z.norm() > tol {
                return Some((p, z));
            }
        }
    }
    None
}
