//! Complex Schur decomposition: Householder reduction to Hessenberg form
//! followed by single-shift QR iteration with Givens rotations.

use num_complex::Complex64;

use super::{check_finite, check_square, ComplexMatrix, C0, C1};
use crate::error::{Error, Result};

/// `A = Q T Q*` with `Q` unitary and `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur {
    pub q: ComplexMatrix,
    pub t: ComplexMatrix,
}

impl Schur {
    /// Diagonal of `T`, the eigenvalues in the order QR produced them.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.q * &self.t * self.q.adjoint()
    }

    /// Exchanges the diagonal entries `k` and `k+1` by a unitary rotation.
    pub fn swap_adjacent(&mut self, k: usize) {
        let n = self.t.nrows();
        assert!(k + 1 < n);
        let (a, b, c) = (self.t[(k, k)], self.t[(k, k + 1)], self.t[(k + 1, k + 1)]);
        if a == c {
            return;
        }
        // (b, c − a) spans the eigenvector for c of the 2×2 block.
        let (cs, sn) = givens(b, c - a);
        rotate_rows(&mut self.t, k, cs, sn, k..n);
        rotate_cols(&mut self.t, k, cs, sn, 0..k + 2);
        rotate_cols(&mut self.q, k, cs, sn, 0..n);
        self.t[(k + 1, k)] = C0;
        self.t[(k, k)] = c;
        self.t[(k + 1, k + 1)] = a;
    }

    /// Reorders the diagonal so that `before(t_ii, t_jj)` holds for every
    /// pair that gets swapped; a stable bubble sort of adjacent exchanges.
    pub fn sort_diagonal<F: Fn(Complex64, Complex64) -> bool>(&mut self, before: F) {
        let n = self.t.nrows();
        for pass in 0..n {
            let mut swapped = false;
            for k in 0..n.saturating_sub(1 + pass) {
                if before(self.t[(k + 1, k + 1)], self.t[(k, k)]) {
                    self.swap_adjacent(k);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
    }
}

/// Complex Schur form. The iteration budget is `100·d²` QR sweeps.
pub fn schur(a: &ComplexMatrix) -> Result<Schur> {
    let n = check_square(a)?;
    check_finite(a)?;
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n, n);
    hessenberg(&mut h, &mut q);
    qr_iterate(&mut h, &mut q, a)?;
    for j in 0..n {
        for i in (j + 1)..n {
            h[(i, j)] = C0;
        }
    }
    Ok(Schur { q, t: h })
}

fn hessenberg(h: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let len = n - k - 1;
        let mut v: Vec<Complex64> = (0..len).map(|i| h[(k + 1 + i, k)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C1 };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H ← P H with P = I − 2vv*, acting on rows k+1..n.
        for j in 0..n {
            let mut s = C0;
            for i in 0..len {
                s += v[i].conj() * h[(k + 1 + i, j)];
            }
            s *= 2.0;
            for i in 0..len {
                h[(k + 1 + i, j)] -= v[i] * s;
            }
        }
        // H ← H P and Q ← Q P, acting on columns k+1..n.
        for m in [&mut *h, &mut *q] {
            for i in 0..n {
                let mut s = C0;
                for j in 0..len {
                    s += m[(i, k + 1 + j)] * v[j];
                }
                s *= 2.0;
                for j in 0..len {
                    m[(i, k + 1 + j)] -= s * v[j].conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            h[(i, k)] = C0;
        }
    }
}

/// Rotation `[c s; −s̄ c]` mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    let nrm = ax.hypot(ay);
    if nrm == 0.0 {
        return (1.0, C0);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    (ax / nrm, (x / ax) * y.conj() / nrm)
}

fn rotate_rows(h: &mut ComplexMatrix, k: usize, c: f64, s: Complex64, cols: std::ops::Range<usize>) {
    for j in cols {
        let a = h[(k, j)];
        let b = h[(k + 1, j)];
        h[(k, j)] = a * c + s * b;
        h[(k + 1, j)] = -s.conj() * a + b * c;
    }
}

fn rotate_cols(m: &mut ComplexMatrix, k: usize, c: f64, s: Complex64, rows: std::ops::Range<usize>) {
    for i in rows {
        let a = m[(i, k)];
        let b = m[(i, k + 1)];
        m[(i, k)] = a * c + b * s.conj();
        m[(i, k + 1)] = -a * s + b * c;
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let mu1 = mid + disc;
    let mu2 = mid - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

fn qr_iterate(h: &mut ComplexMatrix, q: &mut ComplexMatrix, a: &ComplexMatrix) -> Result<()> {
    let n = h.nrows();
    let budget = 100 * n * n;
    let eps = f64::EPSILON;
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut tst = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if tst == 0.0 {
                tst = scale;
            }
            if sub <= eps * tst || sub <= f64::MIN_POSITIVE * 1e3 {
                h[(l, l - 1)] = C0;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > budget {
            let residual = (&*q * &*h * q.adjoint() - a).norm();
            return Err(Error::Convergence { iterations: total, residual });
        }
        let mu = if since_deflation % 11 == 0 {
            h[(hi, hi)] + h[(hi, hi - 1)].norm() * 0.75
        } else if since_deflation % 17 == 0 {
            h[(hi, hi)] + Complex64::new(0.0, h[(hi, hi - 1)].norm() * 1.5)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for k in l..hi {
            let (x, y) = if k == l {
                (h[(l, l)] - mu, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let first_col = if k == l { l } else { k - 1 };
            rotate_rows(h, k, c, s, first_col..n);
            let last_row = (k + 2).min(hi);
            rotate_cols(h, k, c, s, 0..last_row + 1);
            rotate_cols(q, k, c, s, 0..n);
            if k > l {
                h[(k + 1, k - 1)] = C0;
            }
        }
    }
    Ok(())
}
