//! Holomorphic functions of matrices via divided differences.

use std::collections::HashMap;

use num_complex::Complex64;

use super::{check_square, identity, operator_norm, schur, ComplexMatrix, C0};
use crate::error::{Error, Result};

/// Scalar holomorphic function with optional access to derivatives.
pub trait Holomorphic: Sync {
    fn value(&self, z: Complex64) -> Result<Complex64>;

    /// Derivative of the given order (order ≥ 1), or `None` when unavailable.
    fn derivative(&self, z: Complex64, order: usize) -> Option<Result<Complex64>> {
        let _ = (z, order);
        None
    }
}

/// Value-only closures.
impl<F> Holomorphic for F
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self(z))
    }
}

/// Closure `(z, k) ↦ f⁽ᵏ⁾(z)` giving every derivative.
pub struct Analytic<F>(pub F);

impl<F> Holomorphic for Analytic<F>
where
    F: Fn(Complex64, usize) -> Complex64 + Sync,
{
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok((self.0)(z, 0))
    }
    fn derivative(&self, z: Complex64, order: usize) -> Option<Result<Complex64>> {
        Some(Ok((self.0)(z, order)))
    }
}

/// `z ↦ exp(c·z)`.
#[derive(Debug, Clone, Copy)]
pub struct ExpScaled(pub Complex64);

impl Holomorphic for ExpScaled {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok((self.0 * z).exp())
    }
    fn derivative(&self, z: Complex64, order: usize) -> Option<Result<Complex64>> {
        Some(Ok(self.0.powu(order as u32) * (self.0 * z).exp()))
    }
}

/// Principal branch of `z ↦ z^s`, cut along the non-positive real axis.
#[derive(Debug, Clone, Copy)]
pub struct PrincipalPower(pub f64);

impl PrincipalPower {
    fn check(&self, z: Complex64) -> Result<()> {
        let on_cut = z.norm() == 0.0 || (z.im.abs() <= 1e-14 * z.norm() && z.re < 0.0);
        if on_cut {
            Err(Error::PrincipalBranch { re: z.re, im: z.im })
        } else {
            Ok(())
        }
    }
}

impl Holomorphic for PrincipalPower {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        self.check(z)?;
        Ok((self.0 * z.ln()).exp())
    }
    fn derivative(&self, z: Complex64, order: usize) -> Option<Result<Complex64>> {
        if let Err(e) = self.check(z) {
            return Some(Err(e));
        }
        let coeff: f64 = (0..order).map(|k| self.0 - k as f64).product();
        Some(Ok(coeff * ((self.0 - order as f64) * z.ln()).exp()))
    }
}

fn derivative_or_fail<F: Holomorphic + ?Sized>(f: &F, z: Complex64, order: usize) -> Result<Complex64> {
    if order == 0 {
        return f.value(z);
    }
    match f.derivative(z, order) {
        Some(v) => v,
        None => Err(Error::DerivativeRequired { order }),
    }
}

/// Groups points closer than `tol` (single linkage to the first member)
/// and returns `(representative, members)` per cluster.
fn clusters(points: &[Complex64], tol: f64) -> Vec<(Complex64, Vec<usize>)> {
    let mut out: Vec<(Complex64, Vec<usize>)> = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        match out.iter_mut().find(|(_, m)| (points[m[0]] - p).norm() < tol) {
            Some((_, m)) => m.push(i),
            None => out.push((p, vec![i])),
        }
    }
    for (rep, m) in out.iter_mut() {
        let sum: Complex64 = m.iter().map(|&i| points[i]).sum();
        *rep = sum / m.len() as f64;
    }
    out
}

/// Divided difference `f[z₀,…,z_m]`. Points closer than `tol` are merged,
/// which needs derivatives of `f` up to the cluster size minus one.
pub fn divided_difference<F: Holomorphic + ?Sized>(
    f: &F,
    points: &[Complex64],
    tol: f64,
) -> Result<Complex64> {
    if points.is_empty() {
        return Err(Error::Contract("divided difference of no points".into()));
    }
    let cl = clusters(points, tol);
    // Flatten to a cluster-contiguous sequence and cache f⁽ᵏ⁾/k! per cluster.
    let mut z = Vec::with_capacity(points.len());
    let mut owner = Vec::with_capacity(points.len());
    let mut taylor: Vec<Vec<Complex64>> = Vec::with_capacity(cl.len());
    for (c, (rep, members)) in cl.iter().enumerate() {
        let mut coeffs = Vec::with_capacity(members.len());
        let mut fact = 1.0;
        for k in 0..members.len() {
            if k > 0 {
                fact *= k as f64;
            }
            coeffs.push(derivative_or_fail(f, *rep, k)? / fact);
        }
        taylor.push(coeffs);
        for _ in members {
            z.push(*rep);
            owner.push(c);
        }
    }
    let m = z.len();
    let mut col: Vec<Complex64> = (0..m).map(|i| taylor[owner[i]][0]).collect();
    for j in 1..m {
        for i in 0..m - j {
            col[i] = if owner[i] == owner[i + j] {
                taylor[owner[i]][j]
            } else {
                (col[i + 1] - col[i]) / (z[i + j] - z[i])
            };
        }
    }
    Ok(col[0])
}

fn confluence_tol(a: &ComplexMatrix) -> f64 {
    1e-8 * (1.0 + operator_norm(a))
}

/// `f(A)` through the Schur form. Entries of `f(T)` are sums over increasing
/// index paths of products of off-diagonal entries of `T` times divided
/// differences of the visited eigenvalues. Above dimension 16 the Parlett
/// recurrence is used instead, which cannot handle close eigenvalues.
pub fn function_of_matrix<F: Holomorphic + ?Sized>(a: &ComplexMatrix, f: &F) -> Result<ComplexMatrix> {
    let d = check_square(a)?;
    if d == 1 {
        return Ok(ComplexMatrix::from_element(1, 1, f.value(a[(0, 0)])?));
    }
    let s = schur(a)?;
    let tol = confluence_tol(a);
    let ft = if d <= 16 {
        triangular_path_sum(&s.t, f, tol)?
    } else {
        triangular_parlett(&s.t, f, tol)?
    };
    Ok(&s.q * ft * s.q.adjoint())
}

fn triangular_path_sum<F: Holomorphic + ?Sized>(t: &ComplexMatrix, f: &F, tol: f64) -> Result<ComplexMatrix> {
    let d = t.nrows();
    let lambda: Vec<Complex64> = (0..d).map(|i| t[(i, i)]).collect();
    let mut memo: HashMap<u64, Complex64> = HashMap::new();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut acc = C0;
            let mut stack: Vec<(usize, u64, Complex64)> = vec![(i, 1u64 << i, Complex64::new(1.0, 0.0))];
            while let Some((cur, mask, prod)) = stack.pop() {
                if cur == j {
                    let dd = match memo.get(&mask) {
                        Some(v) => *v,
                        None => {
                            let pts: Vec<Complex64> =
                                (0..d).filter(|k| mask & (1 << k) != 0).map(|k| lambda[k]).collect();
                            let v = divided_difference(f, &pts, tol)?;
                            memo.insert(mask, v);
                            v
                        }
                    };
                    acc += prod * dd;
                    continue;
                }
                for next in (cur + 1)..=j {
                    let tv = t[(cur, next)];
                    if tv != C0 {
                        stack.push((next, mask | (1 << next), prod * tv));
                    }
                }
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

fn triangular_parlett<F: Holomorphic + ?Sized>(t: &ComplexMatrix, f: &F, tol: f64) -> Result<ComplexMatrix> {
    let d = t.nrows();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        out[(i, i)] = f.value(t[(i, i)])?;
    }
    for p in 1..d {
        for i in 0..d - p {
            let j = i + p;
            let gap = t[(j, j)] - t[(i, i)];
            if gap.norm() < tol {
                return Err(Error::Instability(format!(
                    "eigenvalues {} and {} too close for the Parlett recurrence",
                    t[(i, i)],
                    t[(j, j)]
                )));
            }
            let mut s = t[(i, j)] * (out[(j, j)] - out[(i, i)]);
            for k in (i + 1)..j {
                s += t[(i, k)] * out[(k, j)] - out[(i, k)] * t[(k, j)];
            }
            out[(i, j)] = s / gap;
        }
    }
    Ok(out)
}

/// Generalized Newton form `Σ_k f[λ₁,…,λ_{k+1}] ∏_{j≤k}(A − λ_j I)` over the
/// eigenvalues of `A`, ordered so that close eigenvalues are adjacent.
pub fn newton_form_of_matrix<F: Holomorphic + ?Sized>(a: &ComplexMatrix, f: &F) -> Result<ComplexMatrix> {
    let d = check_square(a)?;
    let s = schur(a)?;
    let tol = confluence_tol(a);
    let ev = s.eigenvalues();
    let ordered: Vec<Complex64> = clusters(&ev, tol)
        .into_iter()
        .flat_map(|(rep, m)| std::iter::repeat(rep).take(m.len()))
        .collect();
    let mut out = ComplexMatrix::zeros(d, d);
    let mut prod = identity(d);
    for k in 0..d {
        let dd = divided_difference(f, &ordered[..=k], tol)?;
        out += &prod * dd;
        prod = prod * (a - identity(d) * ordered[k]);
    }
    Ok(out)
}
