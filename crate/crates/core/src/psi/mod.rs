//! `ψ(A)`: the best constant in `‖p(A)‖ ≤ ψ(A)·max_{W(A)} |p|`, computed as
//! `ψ_𝔻(a(A))` for the conformal map `a` of `W(A)` onto the disk, where
//! `ψ_𝔻(B)` is a maximum of `‖g(B)‖` over Blaschke products of degree < d.

mod blaschke;
mod normalize;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use blaschke::{blaschke_matrix_norm, BlaschkeProduct};
pub use normalize::{normalize_matrix, NormalizedMatrix, Normalization};

use crate::bounds::SectorCayley;
use crate::conformal::solve_density;
use crate::error::{Error, Result};
use crate::linalg::{from_real_rows, function_of_matrix, mobius_of_matrix, operator_norm, schur, ComplexMatrix};
use crate::numrange::{boundary, BoundarySample};
use crate::optim::{nelder_mead, restart_rng, NelderMeadOptions};

/// Zeros are clamped radially to this modulus.
const ZERO_CLAMP: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct PsiOptions {
    /// Boundary half-order; `2n+1` collocation points.
    pub n: usize,
    /// Restarts per Blaschke degree.
    pub restarts: usize,
    pub seed: u64,
    /// Nelder–Mead iteration cap per unknown zero.
    pub iterations_per_zero: usize,
}

impl Default for PsiOptions {
    fn default() -> Self {
        Self { n: 64, restarts: 24, seed: 0, iterations_per_zero: 200 }
    }
}

/// One Nelder–Mead run.
#[derive(Debug, Clone, Serialize)]
pub struct RestartRecord {
    pub degree: usize,
    pub index: usize,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsiResult {
    pub value: f64,
    pub argmax: BlaschkeProduct,
    pub restarts: usize,
    /// Whether the run that produced the maximum met the simplex tolerances.
    pub converged: bool,
    /// Best value for each Blaschke degree `r = 0..d−1`.
    pub per_degree: Vec<f64>,
    pub records: Vec<RestartRecord>,
    /// Off-node boundary error of the conformal map, when one was used.
    pub uncertainty: Option<f64>,
    /// True when the input was normal and ψ = 1 without computation.
    pub normal: bool,
}

impl PsiResult {
    fn trivial() -> Self {
        Self {
            value: 1.0,
            argmax: BlaschkeProduct::identity(),
            restarts: 0,
            converged: true,
            per_degree: vec![1.0],
            records: Vec::new(),
            uncertainty: None,
            normal: true,
        }
    }
}

fn clamp_zero(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > ZERO_CLAMP {
        z * (ZERO_CLAMP / r)
    } else {
        z
    }
}

fn zeros_from(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|p| clamp_zero(Complex64::new(p[0], p[1]))).collect()
}

/// `‖∏ (B − ζI)(I − ζ̄B)⁻¹‖`, or `-∞` if a factor is numerically singular.
fn objective(b: &ComplexMatrix, zeros: &[Complex64]) -> f64 {
    let mut g = ComplexMatrix::identity(b.nrows(), b.nrows());
    for z in zeros {
        match mobius_of_matrix(b, *z) {
            Ok(m) => g *= m,
            Err(_) => return f64::NEG_INFINITY,
        }
    }
    operator_norm(&g)
}

/// `ψ_𝔻(B)` with default restart options.
pub fn psi_disk(b: &ComplexMatrix, restarts: usize, seed: u64) -> Result<PsiResult> {
    psi_disk_with(b, &PsiOptions { restarts, seed, ..Default::default() })
}

/// Multi-start Nelder–Mead over Blaschke products of each degree
/// `r = 0..d−1`. Starts are the eigenvalue-anchored multisets
/// `(λ_k, λ_{k+1}, …)` followed by uniform draws in the disk of radius 0.7.
/// Each restart owns an RNG stream derived from `(seed, r, index)`.
pub fn psi_disk_with(b: &ComplexMatrix, opts: &PsiOptions) -> Result<PsiResult> {
    let d = crate::linalg::check_square(b)?;
    crate::linalg::check_finite(b)?;
    if opts.restarts == 0 {
        return Err(Error::Contract("restarts must be at least 1".into()));
    }
    let eig = schur(b)?.eigenvalues();
    if let Some(l) = eig.iter().find(|l| l.norm() >= 1.0) {
        return Err(Error::SpectralDomain { re: l.re, im: l.im });
    }
    let mut best_value = 1.0;
    let mut best_zeros: Vec<Complex64> = Vec::new();
    let mut best_converged = true;
    let mut per_degree = vec![1.0];
    let mut records = Vec::new();
    for r in 1..d {
        let nm = NelderMeadOptions {
            max_iter: opts.iterations_per_zero * r,
            ..Default::default()
        };
        let runs: Vec<(Vec<Complex64>, RestartRecord)> = (0..opts.restarts)
            .into_par_iter()
            .map(|k| {
                let mut rng = restart_rng(opts.seed, r as u64, k as u64);
                let start: Vec<Complex64> = if k < d {
                    (0..r).map(|j| clamp_zero(eig[(k + j) % d])).collect()
                } else {
                    (0..r)
                        .map(|_| {
                            let rad = 0.7 * rng.gen::<f64>().sqrt();
                            Complex64::from_polar(rad, TAU * rng.gen::<f64>())
                        })
                        .collect()
                };
                let x0: Vec<f64> = start.iter().flat_map(|z| [z.re, z.im]).collect();
                let m = nelder_mead(|x| -objective(b, &zeros_from(x)), &x0, &nm);
                let zeros = zeros_from(&m.x);
                let value = objective(b, &zeros);
                let rec = RestartRecord { degree: r, index: k, value, iterations: m.iterations, converged: m.converged };
                (zeros, rec)
            })
            .collect();
        let mut degree_best = if r == 1 { operator_norm(b) } else { f64::NEG_INFINITY };
        if r == 1 && degree_best > best_value {
            best_value = degree_best;
            best_zeros = vec![Complex64::new(0.0, 0.0)];
            best_converged = true;
        }
        for (zeros, rec) in runs {
            degree_best = degree_best.max(rec.value);
            if rec.value > best_value {
                best_value = rec.value;
                best_zeros = zeros;
                best_converged = rec.converged;
            }
            records.push(rec);
        }
        per_degree.push(degree_best);
    }
    Ok(PsiResult {
        value: best_value,
        argmax: BlaschkeProduct::new(best_zeros)?,
        restarts: opts.restarts,
        converged: best_converged,
        per_degree,
        records,
        uncertainty: None,
        normal: false,
    })
}

/// `ψ(A)` through the support-function boundary of `W(A)`.
pub fn psi(a: &ComplexMatrix, n: usize, restarts: usize, seed: u64) -> Result<PsiResult> {
    psi_with(a, &PsiOptions { n, restarts, seed, ..Default::default() })
}

pub fn psi_with(a: &ComplexMatrix, opts: &PsiOptions) -> Result<PsiResult> {
    let norm = match normalize_matrix(a)? {
        Normalization::Normal => return Ok(PsiResult::trivial()),
        Normalization::Reduced(m) => m,
    };
    let sample = boundary(&norm.matrix, opts.n)?;
    psi_normalized(&norm, &sample, opts)
}

/// `ψ(A)` with a caller-supplied boundary of `W(A)` in the original
/// coordinates (for example an arc-length parameterization).
pub fn psi_from_boundary(a: &ComplexMatrix, sample: &BoundarySample, opts: &PsiOptions) -> Result<PsiResult> {
    let norm = match normalize_matrix(a)? {
        Normalization::Normal => return Ok(PsiResult::trivial()),
        Normalization::Reduced(m) => m,
    };
    let factor = norm.rotation / norm.scale;
    let moved = sample.affine(factor, -norm.shift * factor);
    psi_normalized(&norm, &moved, opts)
}

fn psi_normalized(norm: &NormalizedMatrix, sample: &BoundarySample, opts: &PsiOptions) -> Result<PsiResult> {
    let a = &norm.matrix;
    let margin = 1e-9 * (1.0 + operator_norm(a));
    for l in schur(a)?.eigenvalues() {
        let slack = (0..sample.len())
            .map(|j| sample.support[j] - (sample.normal(j).conj() * l).re)
            .fold(f64::INFINITY, f64::min);
        if !(slack > margin) {
            return Err(Error::SpectralDomain { re: l.re, im: l.im });
        }
    }
    let map = solve_density(sample)?;
    let b = map.map_matrix(a)?;
    let mut result = psi_disk_with(&b, opts)?;
    result.uncertainty = Some(map.boundary_error());
    Ok(result)
}

/// Expected outcome for a fixture matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Expectation {
    Exact(f64),
    AtLeast(f64),
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub matrix: ComplexMatrix,
    pub expected: Expectation,
    /// `‖f(A)‖` for an explicit witness `f` bounded by 1 on `W(A)`.
    pub witness: Option<f64>,
}

/// Matrices at which ψ is discontinuous, with their known values or bounds.
pub fn psi_discontinuity_fixtures() -> Vec<Fixture> {
    let eps = 0.1f64;
    let sector = from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 2.0 * eps.sin()], &[0.0, 0.0, 1.0]]).unwrap();
    let witness = function_of_matrix(&sector, &SectorCayley(PI / (2.0 * eps)))
        .map(|m| operator_norm(&m))
        .ok();
    vec![
        Fixture {
            name: "zero_2x2",
            matrix: from_real_rows(&[&[0.0, 0.0], &[0.0, 0.0]]).unwrap(),
            expected: Expectation::Exact(1.0),
            witness: None,
        },
        Fixture {
            name: "nilpotent_eps_0.01",
            matrix: from_real_rows(&[&[0.0, 0.01], &[0.0, 0.0]]).unwrap(),
            expected: Expectation::Exact(2.0),
            witness: None,
        },
        Fixture {
            name: "diag_0_1_1",
            matrix: from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]).unwrap(),
            expected: Expectation::Exact(1.0),
            witness: None,
        },
        Fixture {
            name: "sector_eps_0.1",
            matrix: sector,
            expected: Expectation::AtLeast(PI * eps.sin() / (2.0 * eps)),
            witness,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_rows, random};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn contraction(seed: u64, d: usize, radius: f64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = random::gaussian_matrix(&mut rng, d);
        let rho = schur(&b).unwrap().eigenvalues().iter().map(|l| l.norm()).fold(0.0, f64::max);
        b *= Complex64::from(radius / rho);
        b
    }

    #[test]
    fn normal_input_short_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = random::hermitian(&mut rng, 4);
        let r = psi(&h, 16, 4, 0).unwrap();
        assert!(r.normal);
        assert_eq!(r.value, 1.0);
        let d = from_rows(&[vec![c(1.0, 1.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-2.0, 0.5)]]).unwrap();
        assert_eq!(psi(&d, 16, 4, 0).unwrap().value, 1.0);
    }

    #[test]
    fn jordan_block_pipeline_gives_two() {
        let a = from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let r = psi(&a, 32, 8, 0).unwrap();
        assert!((r.value - 2.0).abs() < 1e-6, "{}", r.value);
        assert!(!r.normal);
        assert!(r.uncertainty.unwrap() < 1e-10);
    }

    #[test]
    fn disk_jordan_block_gives_two() {
        let b = from_real_rows(&[&[0.0, 0.5], &[0.0, 0.0]]).unwrap() * Complex64::from(4.0);
        let r = psi_disk(&b, 8, 1).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert_eq!(r.per_degree.len(), 2);
    }

    #[test]
    fn normal_contraction_gives_one() {
        let b = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(0.0, -0.3), c(0.2, 0.2)]));
        let r = psi_disk(&b, 6, 3).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.argmax.degree() == 0);
    }

    #[test]
    fn value_dominates_every_candidate() {
        let b = contraction(11, 3, 0.8);
        let r = psi_disk(&b, 10, 5).unwrap();
        assert!(r.value >= 1.0);
        assert!(r.value >= operator_norm(&b));
        for rec in &r.records {
            assert!(r.value >= rec.value);
        }
        for v in &r.per_degree {
            assert!(r.value >= *v);
        }
        let g = blaschke_matrix_norm(&b, &r.argmax).unwrap();
        assert!((g - r.value).abs() < 1e-12);
    }

    #[test]
    fn restart_budget_is_monotone() {
        let b = contraction(21, 4, 0.9);
        let mut last = 0.0;
        for restarts in [1, 2, 4, 8, 16] {
            let v = psi_disk(&b, restarts, 9).unwrap().value;
            assert!(v >= last, "restarts={restarts}");
            last = v;
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let b = contraction(5, 3, 0.85);
        let r1 = psi_disk(&b, 12, 77).unwrap();
        let r2 = psi_disk(&b, 12, 77).unwrap();
        assert_eq!(r1.value, r2.value);
        assert_eq!(r1.argmax, r2.argmax);
    }

    #[test]
    fn rejects_bad_input() {
        let b = contraction(5, 3, 0.85);
        assert!(matches!(psi_disk(&b, 0, 0), Err(Error::Contract(_))));
        let big = contraction(5, 3, 1.2);
        assert!(matches!(psi_disk(&big, 4, 0), Err(Error::SpectralDomain { .. })));
    }

    #[test]
    fn boundary_eigenvalue_is_refused() {
        let fx = psi_discontinuity_fixtures();
        let sector = fx.iter().find(|f| f.name == "sector_eps_0.1").unwrap();
        assert!(matches!(psi(&sector.matrix, 32, 4, 0), Err(Error::SpectralDomain { .. })));
    }

    #[test]
    fn fixtures_hold() {
        for f in psi_discontinuity_fixtures() {
            match f.expected {
                Expectation::Exact(v) => {
                    let r = psi(&f.matrix, 32, 8, 0).unwrap();
                    assert!((r.value - v).abs() < 1e-6, "{}: {}", f.name, r.value);
                }
                Expectation::AtLeast(v) => {
                    let w = f.witness.unwrap();
                    assert!(w >= v - 1e-9, "{}: witness {w} < {v}", f.name);
                    let sin_series = 0.1 - 1e-3 / 6.0 + 1e-5 / 120.0 - 1e-7 / 5040.0 + 1e-9 / 362_880.0;
                    assert!((v - PI * sin_series / 0.2).abs() < 1e-12);
                    assert!((1.568..1.569).contains(&v));
                }
            }
        }
    }
}
