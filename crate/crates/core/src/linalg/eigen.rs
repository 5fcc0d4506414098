use num_complex::Complex64;

use super::{check_square, is_hermitian, schur, ComplexMatrix, C0};
use crate::error::{Error, Result};

/// Eigenvalues in ascending order with unit-norm eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn max_value(&self) -> f64 {
        *self.values.last().expect("non-empty eigensystem")
    }

    /// Column `k` as an owned vector.
    pub fn vector(&self, k: usize) -> nalgebra::DVector<Complex64> {
        self.vectors.column(k).into_owned()
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<EigenSystem> {
    let n = check_square(h)?;
    if !is_hermitian(h) {
        return Err(Error::Contract("hermitian_eigen called on a non-Hermitian matrix".into()));
    }
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let s = schur(&sym)?;
    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| s.t[(i, i)].re).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        values.push(vals[k]);
        let mut v = s.q.column(k).into_owned();
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        // Fix the phase: largest component real and positive.
        let pivot = v.iter().copied().fold(C0, |acc, z| if z.norm() > acc.norm() { z } else { acc });
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            v *= phase;
        }
        vectors.set_column(col, &v);
    }
    Ok(EigenSystem { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_rows, operator_norm, random};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn det_shifted(h: &ComplexMatrix, lambda: f64) -> f64 {
        let n = h.nrows();
        let m = h - ComplexMatrix::identity(n, n) * Complex64::new(lambda, 0.0);
        m.lu().determinant().re
    }

    /// Roots of det(H − λI) by sign scan and bisection.
    fn charpoly_roots(h: &ComplexMatrix) -> Vec<f64> {
        let bound = operator_norm(h) * 1.01 + 1e-12;
        let steps = 40_000;
        let mut roots = Vec::new();
        let mut prev_x = -bound;
        let mut prev = det_shifted(h, prev_x);
        for k in 1..=steps {
            let x = -bound + 2.0 * bound * k as f64 / steps as f64;
            let v = det_shifted(h, x);
            if prev == 0.0 || prev.signum() != v.signum() {
                let (mut lo, mut hi) = (prev_x, x);
                let flo = det_shifted(h, lo);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if det_shifted(h, mid).signum() == flo.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev = v;
            prev_x = x;
        }
        roots
    }

    fn check_system(h: &ComplexMatrix, es: &EigenSystem) {
        let n = h.nrows();
        let hn = operator_norm(h).max(1e-300);
        let gram = es.vectors.adjoint() * &es.vectors - ComplexMatrix::identity(n, n);
        assert!(gram.norm() < 1e-10);
        for k in 0..n {
            let v = es.vector(k);
            let r = h * &v - &v * Complex64::new(es.values[k], 0.0);
            assert!(r.norm() <= 1e-10 * hn);
        }
        assert!(es.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_and_swap() {
        let d = from_real_rows(&[&[3.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]).unwrap();
        let es = hermitian_eigen(&d).unwrap();
        assert_eq!(es.values, vec![1.0, 2.0, 3.0]);
        let s = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let es = hermitian_eigen(&s).unwrap();
        assert!((es.values[0] + 1.0).abs() < 1e-15 && (es.values[1] - 1.0).abs() < 1e-15);
        check_system(&s, &es);
    }

    #[test]
    fn random_hermitian_matches_charpoly_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let h = random::hermitian(&mut rng, 5);
            let es = hermitian_eigen(&h).unwrap();
            check_system(&h, &es);
            let roots = charpoly_roots(&h);
            assert_eq!(roots.len(), 5);
            for (a, b) in roots.iter().zip(&es.values) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn repeated_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random::unitary(&mut rng, 4);
        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            [1.0, 1.0, -2.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        ));
        let h = &u * d * u.adjoint();
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let es = hermitian_eigen(&h).unwrap();
        check_system(&h, &es);
        assert!((es.values[0] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eigen(&a), Err(Error::Contract(_))));
    }
}
