use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{identity, mobius_of_matrix, operator_norm, ComplexMatrix};

/// Finite Blaschke product `g(z) = ∏ (z − ζ_j)/(1 − ζ̄_j z)` with zeros in
/// the open unit disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        for z in &zeros {
            if !(z.norm() < 1.0) {
                return Err(Error::Contract(format!("Blaschke zero {z} not in the open unit disk")));
            }
        }
        Ok(Self { zeros })
    }

    /// The constant product `g ≡ 1`.
    pub fn identity() -> Self {
        Self { zeros: Vec::new() }
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, zeta| acc * (z - zeta) / (1.0 - zeta.conj() * z))
    }

    /// `g(B)` as a product of commuting Möbius factors.
    pub fn eval_matrix(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut g = identity(b.nrows());
        for zeta in &self.zeros {
            g = g * mobius_of_matrix(b, *zeta)?;
        }
        Ok(g)
    }
}

/// `‖g(B)‖`.
pub fn blaschke_matrix_norm(b: &ComplexMatrix, g: &BlaschkeProduct) -> Result<f64> {
    Ok(operator_norm(&g.eval_matrix(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real_rows;
    use std::f64::consts::TAU;

    #[test]
    fn unimodular_on_circle() {
        let g = BlaschkeProduct::new(vec![Complex64::new(0.3, 0.4), Complex64::new(-0.9, 0.0)]).unwrap();
        for k in 0..37 {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / 37.0);
            assert!((g.eval(z).norm() - 1.0).abs() < 1e-12);
        }
        assert!(g.eval(Complex64::new(0.2, -0.1)).norm() < 1.0);
        assert!(BlaschkeProduct::new(vec![Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn nilpotent_norms() {
        let b = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(blaschke_matrix_norm(&b, &BlaschkeProduct::identity()).unwrap(), 1.0);
        for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.2), Complex64::new(-0.1, 0.95)] {
            let g = BlaschkeProduct::new(vec![z]).unwrap();
            assert!((blaschke_matrix_norm(&b, &g).unwrap() - 1.0).abs() < 1e-12);
        }
        let b2 = from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let g0 = BlaschkeProduct::new(vec![Complex64::new(0.0, 0.0)]).unwrap();
        assert!((blaschke_matrix_norm(&b2, &g0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn factor_order_is_irrelevant() {
        let b = from_real_rows(&[&[0.1, 0.5, 0.2], &[0.0, -0.3, 0.4], &[0.0, 0.0, 0.2]]).unwrap();
        let z1 = Complex64::new(0.2, 0.1);
        let z2 = Complex64::new(-0.5, 0.3);
        let g12 = BlaschkeProduct::new(vec![z1, z2]).unwrap().eval_matrix(&b).unwrap();
        let g21 = BlaschkeProduct::new(vec![z2, z1]).unwrap().eval_matrix(&b).unwrap();
        assert!((g12 - g21).norm() < 1e-12);
    }
}
