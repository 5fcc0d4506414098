//! Random matrices for experiments and tests.

use num_complex::Complex64;
use rand::Rng;

use super::ComplexMatrix;

/// Standard complex Gaussian sample (independent real and imaginary parts).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // Box–Muller; avoids pulling in rand_distr for one distribution.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt() / std::f64::consts::SQRT_2;
    let t = std::f64::consts::TAU * u2;
    Complex64::new(r * t.cos(), r * t.sin())
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| gaussian(rng))
}

/// Haar-distributed unitary matrix via QR of a Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, d);
    let qr = g.qr();
    let (q, r) = qr.unpack();
    // Fix phases so the distribution is Haar.
    let mut q = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random Hermitian matrix `(G + G*)/2`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, d);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}
