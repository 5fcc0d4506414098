//! Blaschke maximization against brute force over a polar grid of zero pairs.

use std::f64::consts::TAU;

use kspectral::linalg::{random, schur};
use kspectral::psi::psi_disk;
use kspectral::{Complex64, ComplexMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn largest_singular_value(m: &ComplexMatrix) -> f64 {
    m.clone().singular_values().max()
}

/// `(B − ζI)(I − ζ̄B)⁻¹` by direct inversion.
fn factor(b: &ComplexMatrix, zeta: Complex64) -> ComplexMatrix {
    let d = b.nrows();
    let eye = ComplexMatrix::identity(d, d);
    let num = b - &eye * zeta;
    let den = &eye - b * zeta.conj();
    num * den.try_inverse().expect("ζ̄B has no eigenvalue 1")
}

fn grid_max(b: &ComplexMatrix, radii: usize, angles: usize) -> f64 {
    let mut zeros = Vec::new();
    for i in 0..radii {
        let r = (i as f64 + 0.5) / radii as f64;
        for k in 0..angles {
            zeros.push(Complex64::from_polar(r, TAU * k as f64 / angles as f64));
        }
    }
    let factors: Vec<ComplexMatrix> = zeros.iter().map(|z| factor(b, *z)).collect();
    let mut best = 1.0f64;
    for (i, fi) in factors.iter().enumerate() {
        best = best.max(largest_singular_value(fi));
        for fj in &factors[i..] {
            best = best.max(largest_singular_value(&(fi * fj)));
        }
    }
    best
}

#[test]
fn psi_disk_beats_the_polar_grid() {
    for seed in [3u64, 8] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = random::gaussian_matrix(&mut rng, 3);
        let rho = schur(&b).unwrap().eigenvalues().iter().map(|l| l.norm()).fold(0.0, f64::max);
        b *= Complex64::from(0.9 / rho);
        let oracle = grid_max(&b, 40, 40);
        let found = psi_disk(&b, 24, 0).unwrap().value;
        assert!(found >= oracle - 1e-3, "seed {seed}: psi_disk {found} < grid {oracle}");
    }
}
