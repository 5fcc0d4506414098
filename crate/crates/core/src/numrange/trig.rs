//! Trigonometric interpolation on the odd grid `θ_j = 2πj/(2n+1)`.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Grid angles `2πj/N`, `j = 0..N`.
pub fn grid(count: usize) -> Vec<f64> {
    (0..count).map(|j| TAU * j as f64 / count as f64).collect()
}

/// Interpolating trigonometric polynomial of degree `n` through `2n+1`
/// equispaced samples.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    n: usize,
    /// Coefficients for frequencies `-n..=n`.
    coeffs: Vec<Complex64>,
}

impl TrigInterpolant {
    /// Panics if the number of samples is even.
    pub fn new(samples: &[Complex64]) -> Self {
        let count = samples.len();
        assert!(count % 2 == 1, "odd sample count required");
        let n = (count - 1) / 2;
        let coeffs = (0..count)
            .map(|idx| {
                let k = idx as i64 - n as i64;
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, y) in samples.iter().enumerate() {
                    let phase = -TAU * ((k * j as i64).rem_euclid(count as i64)) as f64 / count as f64;
                    acc += y * Complex64::from_polar(1.0, phase);
                }
                acc / count as f64
            })
            .collect();
        Self { n, coeffs }
    }

    pub fn from_real(samples: &[f64]) -> Self {
        let c: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(&c)
    }

    pub fn half_order(&self) -> usize {
        self.n
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.eval_deriv(theta, 0)
    }

    /// `order`-th derivative in θ.
    pub fn eval_deriv(&self, theta: f64, order: u32) -> Complex64 {
        let n = self.n as i64;
        let base = Complex64::from_polar(1.0, theta);
        let mut e = Complex64::from_polar(1.0, -(n as f64) * theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, c) in self.coeffs.iter().enumerate() {
            let k = idx as i64 - n;
            let factor = Complex64::new(0.0, k as f64).powu(order);
            acc += c * e * factor;
            e *= base;
        }
        acc
    }
}

impl TrigInterpolant {
    /// `∫₀^{2π} p(θ)·θ dθ`.
    pub fn theta_moment(&self) -> Complex64 {
        let n = self.n as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let k = idx as i64 - n;
                if k == 0 {
                    c * (0.5 * TAU * TAU)
                } else {
                    c * TAU / Complex64::new(0.0, k as f64)
                }
            })
            .sum()
    }
}

/// Spectral derivative of periodic samples on the odd grid.
pub fn differentiate(samples: &[Complex64]) -> Vec<Complex64> {
    let interp = TrigInterpolant::new(samples);
    grid(samples.len()).into_iter().map(|t| interp.eval_deriv(t, 1)).collect()
}
