//! Extremal searches for the strip `S₀ = {|Im z| < 1}` and the sector
//! `S_α = {|arg z| < α}`.
//!
//! Matrices are taken in the reduced forms
//! `A = [[D₁, E], [E*, D₂]] + i·diag(I_k, −I_{d−k})` (strip) and
//! `A = H·diag(e^{iα} I_k, e^{−iα} I_{d−k})·H` with `H = [[D₁, E], [E*, D₂]]`
//! (sector), which keep `W(A)` inside the closed domain by construction. The
//! functions are `f(z) = ∏ (φ(z) − γ_j)/(φ(z) + γ̄_j)` with `Re γ_j > 0` and
//! `φ(z) = exp(πz/2)` or `z^s`, `s = π/(2α)`. Every value reported here is a
//! best-found lower bound for the constant, not the constant itself.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    function_of_matrix, identity, operator_norm, ComplexMatrix, ExpScaled, Holomorphic, PrincipalPower,
};
use crate::numrange::boundary;
use crate::optim::{nelder_mead, restart_rng, NelderMeadOptions};

/// Largest exponent `s = π/(2α)` accepted by the sector objective.
pub const MAX_SECTOR_EXPONENT: f64 = 50.0;

/// `γ` for a factor that is the identity to working precision.
const INACTIVE_LOG_GAMMA: f64 = -30.0;

/// Largest accepted condition number of `M + γ̄_j`; beyond it rounding in
/// the product dominates the value.
const POLE_CONDITION: f64 = 1e10;

const ROUTE_AGREEMENT: f64 = 1e-6;

/// Hermitian block data shared by both reduced forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Blocks {
    pub d: usize,
    pub k: usize,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    /// `k × (d−k)`, row-major.
    pub e: Vec<Vec<Complex64>>,
    pub gamma: Vec<Complex64>,
}

impl Blocks {
    /// `[[D₁, E], [E*, D₂]]`.
    pub fn hermitian(&self) -> ComplexMatrix {
        let (d, k) = (self.d, self.k);
        let mut h = ComplexMatrix::zeros(d, d);
        for i in 0..k {
            h[(i, i)] = self.d1[i].into();
        }
        for j in 0..d - k {
            h[(k + j, k + j)] = self.d2[j].into();
        }
        for i in 0..k {
            for j in 0..d - k {
                h[(i, k + j)] = self.e[i][j];
                h[(k + j, i)] = self.e[i][j].conj();
            }
        }
        h
    }

    /// Appends one `+` and one `−` row with diagonal `fill`, zero coupling
    /// and an inactive `γ`, so `‖f(A)‖` is unchanged up to `O(e^{-30})`.
    pub fn embed(&self, fill: f64) -> Self {
        let mut e: Vec<Vec<Complex64>> = self.e.iter().map(|row| {
            let mut r = row.clone();
            r.push(Complex64::new(0.0, 0.0));
            r
        }).collect();
        e.push(vec![Complex64::new(0.0, 0.0); self.d - self.k + 1]);
        let mut gamma = self.gamma.clone();
        gamma.push(Complex64::from(INACTIVE_LOG_GAMMA.exp()));
        gamma.push(Complex64::from(INACTIVE_LOG_GAMMA.exp()));
        let mut d1 = self.d1.clone();
        d1.push(fill);
        let mut d2 = self.d2.clone();
        d2.insert(0, fill);
        // The new minus row goes first in the D₂ block, keeping the last
        // column of E equal to the old one padded with 0.
        let e = e
            .into_iter()
            .map(|mut row| {
                let zero = row.pop().unwrap();
                row.insert(0, zero);
                row
            })
            .collect();
        Self { d: self.d + 2, k: self.k + 1, d1, d2, e, gamma }
    }
}

/// Strip candidate; `A = H + i·diag(I_k, −I_{d−k})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripCandidate(pub Blocks);

/// Sector candidate; `A = H·diag(e^{iα} I_k, e^{−iα} I_{d−k})·H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorCandidate {
    pub alpha: f64,
    pub blocks: Blocks,
}

impl StripCandidate {
    pub fn matrix(&self) -> ComplexMatrix {
        let b = &self.0;
        let mut a = b.hermitian();
        for i in 0..b.d {
            a[(i, i)] += Complex64::new(0.0, if i < b.k { 1.0 } else { -1.0 });
        }
        a
    }

    /// `max |Im z|` over a support-function sample of `∂W(A)`.
    pub fn containment(&self, n: usize) -> Result<f64> {
        let s = boundary(&self.matrix(), n)?;
        Ok(s.points.iter().map(|z| z.im.abs()).fold(0.0, f64::max))
    }
}

impl SectorCandidate {
    pub fn exponent(&self) -> f64 {
        PI / (2.0 * self.alpha)
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let b = &self.blocks;
        let h = b.hermitian();
        let mut mid = h.clone();
        let (up, down) = (Complex64::from_polar(1.0, self.alpha), Complex64::from_polar(1.0, -self.alpha));
        for i in 0..b.d {
            let w = if i < b.k { up } else { down };
            for r in 0..b.d {
                mid[(r, i)] *= w;
            }
        }
        mid * h
    }

    /// `max |arg z| − α` over boundary samples with `|z| > 1e-9`.
    pub fn containment(&self, n: usize) -> Result<f64> {
        let s = boundary(&self.matrix(), n)?;
        Ok(s.points.iter().filter(|z| z.norm() > 1e-9).map(|z| z.arg().abs() - self.alpha).fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Inner map `φ` of the Blaschke-type functions.
#[derive(Debug, Clone, Copy)]
enum Inner {
    /// `exp(c·z)`.
    Exp(f64),
    /// Principal `z^s`.
    Power(f64),
}

impl Inner {
    /// Taylor coefficients of `φ(z + t)` up to `t^order`.
    fn series(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(order + 1);
        match *self {
            Inner::Exp(c) => {
                let mut term = (c * z).exp();
                for k in 0..=order {
                    out.push(term);
                    term *= c / (k + 1) as f64;
                }
            }
            Inner::Power(s) => {
                if z.norm() == 0.0 || (z.im.abs() <= 1e-14 * z.norm() && z.re < 0.0) {
                    return Err(Error::PrincipalBranch { re: z.re, im: z.im });
                }
                let mut term = (s * z.ln()).exp();
                for k in 0..=order {
                    out.push(term);
                    term *= (s - k as f64) / ((k + 1) as f64 * z);
                }
            }
        }
        Ok(out)
    }
}

/// `f(z) = ∏ (φ(z) − γ_j)/(φ(z) + γ̄_j)` with derivatives from truncated
/// power-series arithmetic.
struct CayleyProduct<'a> {
    inner: Inner,
    gamma: &'a [Complex64],
}

impl CayleyProduct<'_> {
    fn series(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let phi = self.inner.series(z, order)?;
        if phi.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Instability(format!("φ overflows at eigenvalue {z}")));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        out[0] = Complex64::new(1.0, 0.0);
        for g in self.gamma {
            let den0 = phi[0] + g.conj();
            let condition = (phi[0].norm() + g.norm()) / den0.norm();
            if !(condition < POLE_CONDITION) {
                return Err(Error::Pole { condition });
            }
            // q = (φ − γ)/(φ + γ̄), term by term.
            let mut q = vec![Complex64::new(0.0, 0.0); order + 1];
            for k in 0..=order {
                let mut acc = if k == 0 { phi[0] - g } else { phi[k] };
                for j in 1..=k {
                    acc -= phi[j] * q[k - j];
                }
                q[k] = acc / den0;
            }
            let prev = out.clone();
            for k in 0..=order {
                out[k] = (0..=k).map(|j| prev[j] * q[k - j]).sum();
            }
        }
        Ok(out)
    }
}

impl Holomorphic for CayleyProduct<'_> {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.series(z, 0)?[0])
    }
    fn derivative(&self, z: Complex64, order: usize) -> Option<Result<Complex64>> {
        let factorial: f64 = (1..=order).map(|k| k as f64).product();
        Some(self.series(z, order).map(|c| c[order] * factorial))
    }
}

fn finite_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Instability("non-finite matrix function".into()));
    }
    Ok(operator_norm(m))
}

fn check_sector(alpha: f64) -> Result<f64> {
    let s = PI / (2.0 * alpha);
    if !(alpha > 0.0 && alpha < FRAC_PI_2 + 1e-15) || s > MAX_SECTOR_EXPONENT {
        return Err(Error::Range(format!("sector half-angle {alpha} outside [π/100, π/2]")));
    }
    Ok(s)
}

/// `∏ (M − γ_j)(M + γ̄_j)⁻¹` for a precomputed `M`.
fn cayley_of_matrix(m: &ComplexMatrix, gamma: &[Complex64]) -> Result<ComplexMatrix> {
    let eye = identity(m.nrows());
    let mut g = eye.clone();
    for gj in gamma {
        let den = m + &eye * gj.conj();
        let inv = den.clone().try_inverse().ok_or(Error::Pole { condition: f64::INFINITY })?;
        let condition = den.lp_norm(1) * inv.lp_norm(1);
        if !(condition < POLE_CONDITION) {
            return Err(Error::Pole { condition });
        }
        g = g * (m - &eye * *gj) * inv;
    }
    Ok(g)
}

/// Runs both routes and accepts the Schur value only when they agree.
fn dual_route(a: &ComplexMatrix, inner: Inner, gamma: &[Complex64]) -> Result<f64> {
    let direct = finite_norm(&function_of_matrix(a, &CayleyProduct { inner, gamma })?)?;
    let m = match inner {
        Inner::Exp(c) => function_of_matrix(a, &ExpScaled(Complex64::from(c)))?,
        Inner::Power(s) => function_of_matrix(a, &PrincipalPower(s))?,
    };
    let product = finite_norm(&cayley_of_matrix(&m, gamma)?)?;
    if (direct - product).abs() > ROUTE_AGREEMENT * direct.max(1.0) {
        return Err(Error::Instability(format!("matrix function routes disagree ({direct:.6e} vs {product:.6e})")));
    }
    Ok(direct)
}

/// `‖f(A)‖`, `f(z) = ∏ (exp(πz/2) − γ_j)/(exp(πz/2) + γ̄_j)`.
///
/// `f(A)` is evaluated once as a single scalar function through the Schur
/// form and once as Möbius factors of `M = exp(πA/2)`; disagreement beyond
/// a relative 1e-6 is reported as instability.
pub fn strip_objective(c: &StripCandidate) -> Result<f64> {
    dual_route(&c.matrix(), Inner::Exp(FRAC_PI_2), &c.0.gamma)
}

/// `‖f(A)‖`, `f(z) = ∏ (z^s − γ_j)/(z^s + γ̄_j)`, `s = π/(2α)`, with the same
/// two routes as [`strip_objective`] (`M = A^s`, principal branch).
pub fn sector_objective(c: &SectorCandidate) -> Result<f64> {
    let s = check_sector(c.alpha)?;
    dual_route(&c.matrix(), Inner::Power(s), &c.blocks.gamma)
}

/// Map between real optimizer variables and [`Blocks`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Strip form with `Re tr A = 0`: `2k(d−k) + 2d − 2` variables.
    Strip { d: usize, k: usize },
    /// Sector form: `2k(d−k) + 2d − 1` variables (no trace condition).
    Sector { d: usize, k: usize },
    /// Real strip ansatz for `d = 2m`, `k = m`: `D₁ = D₂ = D = −rev(D)`, `E`
    /// real, symmetric and persymmetric, `γ` real with `γ_{d−j} = 1/γ_j`.
    SymmetricStrip { d: usize },
}

fn e_is_real(i: usize, j: usize, cols: usize) -> bool {
    i == 0 || j == cols - 1
}

fn decode_gamma(u: f64, v: f64) -> Complex64 {
    Complex64::from_polar(u.exp(), v.atan())
}

fn encode_gamma(g: Complex64) -> [f64; 2] {
    [g.norm().ln(), g.arg().tan()]
}

/// Orbits of `(i, j)` under transposition and anti-transposition of an
/// `m × m` matrix, in order of first appearance.
fn persymmetric_orbits(m: usize) -> Vec<Vec<(usize, usize)>> {
    let mut seen = vec![vec![false; m]; m];
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if seen[i][j] {
                continue;
            }
            let mut orbit = vec![(i, j), (j, i), (m - 1 - j, m - 1 - i), (m - 1 - i, m - 1 - j)];
            orbit.sort();
            orbit.dedup();
            for &(a, b) in &orbit {
                seen[a][b] = true;
            }
            out.push(orbit);
        }
    }
    out
}

impl Layout {
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            Layout::Strip { d, k } | Layout::Sector { d, k } => (d, k),
            Layout::SymmetricStrip { d } => (d, d / 2),
        }
    }

    pub fn variables(&self) -> usize {
        let (d, k) = self.dims();
        match self {
            Layout::Strip { .. } => 2 * k * (d - k) + 2 * d - 2,
            Layout::Sector { .. } => 2 * k * (d - k) + 2 * d - 1,
            Layout::SymmetricStrip { .. } => (k / 2) + persymmetric_orbits(k).len() + (k - 1),
        }
    }

    pub fn decode(&self, x: &[f64]) -> Blocks {
        let (d, k) = self.dims();
        let cols = d - k;
        let mut it = x.iter().copied();
        let mut next = || it.next().expect("variable count matches layout");
        match self {
            Layout::Strip { .. } | Layout::Sector { .. } => {
                let mut diag: Vec<f64> = (0..d - 1).map(|_| next()).collect();
                let last = if matches!(self, Layout::Strip { .. }) { -diag.iter().sum::<f64>() } else { next() };
                diag.push(last);
                let d2 = diag.split_off(k);
                let mut e = vec![vec![Complex64::new(0.0, 0.0); cols]; k];
                for (i, row) in e.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = if e_is_real(i, j, cols) { Complex64::new(next(), 0.0) } else { Complex64::new(next(), next()) };
                    }
                }
                let gamma = (0..d - 1).map(|_| {
                    let u = next();
                    decode_gamma(u, next())
                }).collect();
                Blocks { d, k, d1: diag, d2, e, gamma }
            }
            Layout::SymmetricStrip { .. } => {
                let m = k;
                let mut diag = vec![0.0; m];
                for i in 0..m / 2 {
                    let v = next();
                    diag[i] = v;
                    diag[m - 1 - i] = -v;
                }
                let mut e = vec![vec![Complex64::new(0.0, 0.0); m]; m];
                for orbit in persymmetric_orbits(m) {
                    let v = next();
                    for (i, j) in orbit {
                        e[i][j] = Complex64::new(v, 0.0);
                    }
                }
                let mut gamma = vec![Complex64::new(1.0, 0.0); d - 1];
                for j in 0..m - 1 {
                    let u = next();
                    gamma[j] = Complex64::from(u.exp());
                    gamma[d - 2 - j] = Complex64::from((-u).exp());
                }
                Blocks { d, k, d1: diag.clone(), d2: diag, e, gamma }
            }
        }
    }

    /// Inverse of [`Layout::decode`] for the general layouts; phases and the
    /// trace condition are assumed to hold already.
    pub fn encode(&self, b: &Blocks) -> Result<Vec<f64>> {
        let (d, k) = self.dims();
        if b.d != d || b.k != k {
            return Err(Error::Contract("block sizes do not match the layout".into()));
        }
        let cols = d - k;
        let mut x = Vec::with_capacity(self.variables());
        let diag: Vec<f64> = b.d1.iter().chain(&b.d2).copied().collect();
        match self {
            Layout::Strip { .. } => x.extend_from_slice(&diag[..d - 1]),
            Layout::Sector { .. } => x.extend_from_slice(&diag),
            Layout::SymmetricStrip { .. } => {
                return Err(Error::Contract("symmetric layout has no general encoding".into()));
            }
        }
        for i in 0..k {
            for j in 0..cols {
                x.push(b.e[i][j].re);
                if !e_is_real(i, j, cols) {
                    x.push(b.e[i][j].im);
                }
            }
        }
        for g in &b.gamma {
            x.extend_from_slice(&encode_gamma(*g));
        }
        Ok(x)
    }

    fn random_start<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.variables()).map(|_| rng.gen_range(-3.0..3.0)).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Nelder–Mead iteration cap per variable and round.
    pub iterations_per_variable: usize,
    /// Fresh-simplex restarts from the incumbent after the first run.
    pub polish_rounds: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { restarts: 24, seed: 0, iterations_per_variable: 300, polish_rounds: 3 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub k: usize,
    pub index: usize,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// True for warm or embedded starts.
    pub seeded: bool,
}

/// Maximizes `objective ∘ decode` from `x0`, re-seeding the simplex at the
/// incumbent until a round stops improving.
fn climb<F>(layout: &Layout, x0: &[f64], opts: &SearchOptions, objective: &F) -> (Vec<f64>, f64, usize, bool)
where
    F: Fn(&Blocks) -> Result<f64>,
{
    let eval = |x: &[f64]| -> f64 {
        match objective(&layout.decode(x)) {
            Ok(v) if v.is_finite() => -v,
            _ => f64::INFINITY,
        }
    };
    let nm = NelderMeadOptions {
        max_iter: opts.iterations_per_variable * layout.variables(),
        initial_step: 0.2,
        ..Default::default()
    };
    let mut x = x0.to_vec();
    let mut best = eval(&x);
    let mut iterations = 0;
    let mut converged = false;
    for round in 0..=opts.polish_rounds {
        let m = nelder_mead(eval, &x, &NelderMeadOptions { initial_step: nm.initial_step / (1 + 4 * round) as f64, ..nm });
        iterations += m.iterations;
        converged = m.converged;
        if m.value < best {
            let gain = best - m.value;
            best = m.value;
            x = m.x;
            if gain < 1e-12 {
                break;
            }
        } else {
            break;
        }
    }
    (x, -best, iterations, converged)
}

#[derive(Debug, Clone, Serialize)]
pub struct StripSearch {
    pub d: usize,
    pub symmetric: bool,
    /// Best value found; a lower bound for `C(S₀, d)`.
    pub best_found: f64,
    pub best: StripCandidate,
    pub runs: Vec<RunRecord>,
}

/// Multi-start search for `C(S₀, d)`, `d ∈ {2, 4, 6, 8}`.
///
/// For `d ≥ 4` without the symmetric ansatz the best `d − 2` candidate is
/// embedded as an extra start, so the result never falls below the smaller
/// dimension's.
pub fn optimize_strip(d: usize, restarts: usize, seed: u64, symmetric: bool) -> Result<StripSearch> {
    optimize_strip_with(d, symmetric, &SearchOptions { restarts, seed, ..Default::default() })
}

pub fn optimize_strip_with(d: usize, symmetric: bool, opts: &SearchOptions) -> Result<StripSearch> {
    if !matches!(d, 2 | 4 | 6 | 8) {
        return Err(Error::Contract(format!("strip dimension must be 2, 4, 6 or 8, got {d}")));
    }
    if opts.restarts == 0 {
        return Err(Error::Contract("restarts must be at least 1".into()));
    }
    let objective = |b: &Blocks| strip_objective(&StripCandidate(b.clone()));
    let layouts: Vec<Layout> = if symmetric {
        vec![Layout::SymmetricStrip { d }]
    } else {
        (1..=d / 2).map(|k| Layout::Strip { d, k }).collect()
    };
    let mut seeded: Vec<(Layout, Vec<f64>)> = Vec::new();
    if !symmetric && d >= 4 {
        let smaller = optimize_strip_with(d - 2, false, opts)?;
        let emb = smaller.best.0.embed(0.0);
        let layout = Layout::Strip { d, k: emb.k };
        seeded.push((layout, layout.encode(&emb)?));
    }
    let mut best: Option<(f64, Blocks)> = None;
    let mut runs = Vec::new();
    let mut consider = |value: f64, blocks: Blocks| {
        if best.as_ref().map_or(true, |(v, _)| value > *v) {
            best = Some((value, blocks));
        }
    };
    for (layout, x0) in &seeded {
        let (x, value, iterations, converged) = climb(layout, x0, opts, &objective);
        let (_, k) = layout.dims();
        runs.push(RunRecord { k, index: 0, value, iterations, converged, seeded: true });
        consider(value, layout.decode(&x));
    }
    for layout in &layouts {
        let (_, k) = layout.dims();
        let tag = ((d as u64) << 16) | ((k as u64) << 8) | symmetric as u64;
        let results: Vec<_> = (0..opts.restarts)
            .into_par_iter()
            .map(|index| {
                let mut rng = restart_rng(opts.seed, tag, index as u64);
                climb(layout, &layout.random_start(&mut rng), opts, &objective)
            })
            .collect();
        for (index, (x, value, iterations, converged)) in results.into_iter().enumerate() {
            runs.push(RunRecord { k, index, value, iterations, converged, seeded: false });
            if value.is_finite() {
                consider(value, layout.decode(&x));
            }
        }
    }
    let (best_found, blocks) = best.ok_or_else(|| Error::Instability("every strip restart failed".into()))?;
    Ok(StripSearch { d, symmetric, best_found, best: StripCandidate(blocks), runs })
}

/// One step of the α continuation.
#[derive(Debug, Clone, Serialize)]
pub struct ContinuationStep {
    pub alpha: f64,
    /// Best value on the `d = 2` branch.
    pub d2_branch: Option<f64>,
    /// Best value on the `d = 4` branch, when tracked.
    pub d4_branch: Option<f64>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorSearch {
    pub alpha: f64,
    pub d: usize,
    /// Best value found; a lower bound for `C(S_α, d)`.
    pub best_found: f64,
    pub best: SectorCandidate,
    pub runs: Vec<RunRecord>,
    pub trace: Vec<ContinuationStep>,
}

/// Multi-start search at a fixed α. Random starts use the streams
/// `first_stream .. first_stream + opts.restarts` of each block size.
fn sector_multistart(
    alpha: f64,
    d: usize,
    opts: &SearchOptions,
    first_stream: usize,
    warm: &[Blocks],
) -> Result<(f64, Blocks, Vec<RunRecord>)> {
    let objective = |b: &Blocks| sector_objective(&SectorCandidate { alpha, blocks: b.clone() });
    let mut best: Option<(f64, Blocks)> = None;
    let mut runs = Vec::new();
    let consider = |value: f64, blocks: Blocks, best: &mut Option<(f64, Blocks)>| {
        if value.is_finite() && best.as_ref().map_or(true, |(v, _)| value > *v) {
            *best = Some((value, blocks));
        }
    };
    for (index, w) in warm.iter().enumerate() {
        let layout = Layout::Sector { d, k: w.k };
        let x0 = layout.encode(w)?;
        let (x, value, iterations, converged) = climb(&layout, &x0, opts, &objective);
        runs.push(RunRecord { k: w.k, index, value, iterations, converged, seeded: true });
        consider(value, layout.decode(&x), &mut best);
    }
    for k in 1..=d / 2 {
        let layout = Layout::Sector { d, k };
        let tag = (1 << 24) | ((d as u64) << 16) | ((k as u64) << 8);
        let results: Vec<_> = (first_stream..first_stream + opts.restarts)
            .into_par_iter()
            .map(|index| {
                let mut rng = restart_rng(opts.seed, tag, index as u64);
                let mut x0 = layout.random_start(&mut rng);
                // Keep the Hermitian factor near unit size; γ carries the scale.
                let hermitian_vars = layout.variables() - 2 * (d - 1);
                for v in x0.iter_mut().take(hermitian_vars) {
                    *v /= 3.0;
                }
                (index, climb(&layout, &x0, opts, &objective))
            })
            .collect();
        for (index, (x, value, iterations, converged)) in results {
            runs.push(RunRecord { k, index, value, iterations, converged, seeded: false });
            consider(value, layout.decode(&x), &mut best);
        }
    }
    let (value, blocks) = best.ok_or_else(|| Error::Instability(format!("every sector restart failed at α = {alpha}")))?;
    Ok((value, blocks, runs))
}

/// Multi-start search for `C(S_α, d)`, `d ∈ {2, 4}`, `α ∈ (0, π/2)`.
///
/// With `continuation`, α is stepped down from `π/2 − 0.02` to the target
/// and the `d = 2` and `d = 4` branches are tracked separately: each step
/// warm-starts from the branch's previous optimum, the `d = 4` branch also
/// gets a quarter of the restart budget as fresh starts so that a local
/// maximum born along the path is picked up. A branch whose step fails is
/// re-seeded with the full budget at the next α.
pub fn optimize_sector(alpha: f64, d: usize, restarts: usize, seed: u64, continuation: bool) -> Result<SectorSearch> {
    optimize_sector_with(alpha, d, continuation, &SearchOptions { restarts, seed, ..Default::default() })
}

pub fn optimize_sector_with(alpha: f64, d: usize, continuation: bool, opts: &SearchOptions) -> Result<SectorSearch> {
    if !(alpha > 0.0 && alpha < FRAC_PI_2) || PI / (2.0 * alpha) > MAX_SECTOR_EXPONENT {
        return Err(Error::Contract(format!("sector half-angle {alpha} outside [π/100, π/2)")));
    }
    if !matches!(d, 2 | 4) {
        return Err(Error::Contract(format!("sector dimension must be 2 or 4, got {d}")));
    }
    if opts.restarts == 0 {
        return Err(Error::Contract("restarts must be at least 1".into()));
    }
    let mut runs = Vec::new();
    if !continuation {
        let mut warm = Vec::new();
        if d == 4 {
            let (_, small, r) = sector_multistart(alpha, 2, opts, 0, &[])?;
            runs.extend(r);
            warm.push(small.embed(1.0));
        }
        let (value, blocks, r) = sector_multistart(alpha, d, opts, 0, &warm)?;
        runs.extend(r);
        let best = SectorCandidate { alpha, blocks };
        return Ok(SectorSearch { alpha, d, best_found: value, best, runs, trace: Vec::new() });
    }
    let scout = SearchOptions { restarts: (opts.restarts / 4).max(1), ..*opts };
    let warm_only = SearchOptions { restarts: 0, ..*opts };
    let mut branches: Vec<(usize, Option<(f64, Blocks)>)> = if d == 4 { vec![(2, None), (4, None)] } else { vec![(2, None)] };
    let mut trace = Vec::new();
    let mut stream = 0;
    for &a in &continuation_path(alpha) {
        let mut step = ContinuationStep { alpha: a, d2_branch: None, d4_branch: None, errors: Vec::new() };
        for (dim, state) in branches.iter_mut() {
            let warm: Vec<Blocks> = state.iter().map(|(_, b)| b.clone()).collect();
            let (budget, first) = match (warm.is_empty(), *dim) {
                (true, _) => (opts, 0),
                (false, 2) => (&warm_only, 0),
                (false, _) => (&scout, opts.restarts + stream),
            };
            match sector_multistart(a, *dim, budget, first, &warm) {
                Ok((v, b, r)) => {
                    runs.extend(r);
                    *state = Some((v, b));
                }
                Err(e) => {
                    step.errors.push(format!("d = {dim}: {e}"));
                    *state = None;
                }
            }
            let value = state.as_ref().map(|(v, _)| *v);
            if *dim == 2 {
                step.d2_branch = value;
            } else {
                step.d4_branch = value;
            }
        }
        stream += scout.restarts;
        trace.push(step);
    }
    let (best_found, blocks) = branches
        .into_iter()
        .filter_map(|(_, state)| state)
        .map(|(v, b)| (v, if b.d < d { b.embed(1.0) } else { b }))
        .max_by(|x, y| x.0.total_cmp(&y.0))
        .ok_or_else(|| Error::Instability(format!("continuation lost every branch before α = {alpha}")))?;
    Ok(SectorSearch { alpha, d, best_found, best: SectorCandidate { alpha, blocks }, runs, trace })
}

/// α values from `π/2 − 0.02` down to `alpha` in steps of at most 0.02.
pub fn continuation_path(alpha: f64) -> Vec<f64> {
    let start = FRAC_PI_2 - 0.02;
    if alpha >= start {
        return vec![alpha];
    }
    let steps = ((start - alpha) / 0.02).ceil() as usize;
    (0..=steps).map(|i| start + (alpha - start) * i as f64 / steps as f64).collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_blocks(layout: Layout, rng: &mut ChaCha8Rng) -> Blocks {
        layout.decode(&layout.random_start(rng))
    }

    /// `−A` written back in reduced form, with `γ ↦ 1/γ`.
    fn negated(b: &Blocks) -> Blocks {
        let (d, k) = (b.d, b.k);
        let e = (0..d - k).map(|j| (0..k).map(|i| -b.e[i][j].conj()).collect()).collect();
        Blocks {
            d,
            k: d - k,
            d1: b.d2.iter().map(|x| -x).collect(),
            d2: b.d1.iter().map(|x| -x).collect(),
            e,
            gamma: b.gamma.iter().map(|g| g.inv()).collect(),
        }
    }

    /// `conj(A)` written back in reduced form, with `γ ↦ γ̄`.
    fn conjugated(b: &Blocks) -> Blocks {
        let (d, k) = (b.d, b.k);
        let e = (0..d - k).map(|j| (0..k).map(|i| b.e[i][j]).collect()).collect();
        Blocks { d, k: d - k, d1: b.d2.clone(), d2: b.d1.clone(), e, gamma: b.gamma.iter().map(|g| g.conj()).collect() }
    }

    #[test]
    fn variable_counts() {
        assert_eq!(Layout::Strip { d: 2, k: 1 }.variables(), 4);
        assert_eq!(Layout::Strip { d: 4, k: 2 }.variables(), 14);
        assert_eq!(Layout::Strip { d: 4, k: 1 }.variables(), 12);
        assert_eq!(Layout::Sector { d: 4, k: 2 }.variables(), 15);
        assert_eq!(Layout::SymmetricStrip { d: 4 }.variables(), 4);
        for d in [2, 4, 6, 8] {
            let layout = Layout::SymmetricStrip { d };
            let b = layout.decode(&vec![0.3; layout.variables()]);
            assert_eq!((b.d1.len(), b.d2.len(), b.gamma.len()), (d / 2, d / 2, d - 1));
        }
    }

    #[test]
    fn encode_inverts_decode() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for layout in [Layout::Strip { d: 2, k: 1 }, Layout::Strip { d: 6, k: 2 }, Layout::Sector { d: 4, k: 1 }, Layout::Sector { d: 4, k: 2 }] {
            for _ in 0..10 {
                let x = layout.random_start(&mut rng);
                let back = layout.encode(&layout.decode(&x)).unwrap();
                for (a, b) in x.iter().zip(&back) {
                    assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()), "{layout:?}");
                }
            }
        }
        assert!(Layout::Strip { d: 4, k: 2 }.encode(&Layout::Strip { d: 4, k: 1 }.decode(&[0.0; 12])).is_err());
    }

    #[test]
    fn gauge_conditions_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = random_blocks(Layout::Strip { d: 6, k: 2 }, &mut rng);
        assert!(b.e[0].iter().all(|z| z.im == 0.0));
        assert!(b.e.iter().all(|row| row[3].im == 0.0));
        assert!(b.gamma.iter().all(|g| g.re > 0.0));
        let a = StripCandidate(b).matrix();
        assert!(a.trace().re.abs() < 1e-12);
        let s = Layout::SymmetricStrip { d: 6 }.decode(&[0.4, -1.0, 2.0, 0.5, 0.7, 1.5, -0.2]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s.e[i][j], s.e[j][i]);
                assert_eq!(s.e[i][j], s.e[2 - j][2 - i]);
            }
            assert_eq!(s.d1[i], -s.d1[2 - i]);
        }
        assert_eq!(s.gamma[2], c(1.0, 0.0));
        assert!((s.gamma[0] * s.gamma[4] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn candidates_stay_inside_their_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for layout in [Layout::Strip { d: 2, k: 1 }, Layout::Strip { d: 4, k: 1 }, Layout::Strip { d: 4, k: 2 }] {
            for _ in 0..5 {
                let s = StripCandidate(random_blocks(layout, &mut rng));
                assert!(s.containment(64).unwrap() <= 1.0 + 1e-9);
            }
        }
        for alpha in [0.2, FRAC_PI_4, 1.3] {
            for layout in [Layout::Sector { d: 2, k: 1 }, Layout::Sector { d: 4, k: 2 }] {
                for _ in 0..5 {
                    let s = SectorCandidate { alpha, blocks: random_blocks(layout, &mut rng) };
                    assert!(s.containment(64).unwrap() <= 1e-7);
                }
            }
        }
    }

    #[test]
    fn normal_candidates_are_contractive() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let mut b = random_blocks(Layout::Strip { d: 4, k: 2 }, &mut rng);
            b.e.iter_mut().flatten().for_each(|z| *z = c(0.0, 0.0));
            assert!(strip_objective(&StripCandidate(b.clone())).unwrap() <= 1.0 + 1e-9);
            b.d1.iter_mut().chain(b.d2.iter_mut()).for_each(|x| *x = x.abs() + 0.1);
            let s = SectorCandidate { alpha: 0.5, blocks: b };
            assert!(sector_objective(&s).unwrap() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn half_plane_is_von_neumann() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut evaluated = 0;
        for _ in 0..20 {
            let s = SectorCandidate { alpha: FRAC_PI_2, blocks: random_blocks(Layout::Sector { d: 4, k: 2 }, &mut rng) };
            if let Ok(v) = sector_objective(&s) {
                assert!(v <= 1.0 + 1e-9, "{v}");
                evaluated += 1;
            }
        }
        assert!(evaluated >= 10);
    }

    #[test]
    fn block_swap_symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for layout in [Layout::Strip { d: 2, k: 1 }, Layout::Strip { d: 4, k: 1 }, Layout::Strip { d: 4, k: 2 }] {
            for _ in 0..5 {
                let b = random_blocks(layout, &mut rng);
                let neg = negated(&b);
                let a = StripCandidate(b.clone()).matrix();
                assert!((StripCandidate(neg.clone()).matrix() - {
                    let mut p = -a.clone();
                    let (d, k) = (b.d, b.k);
                    let perm: Vec<usize> = (k..d).chain(0..k).collect();
                    for i in 0..d {
                        for j in 0..d {
                            p[(i, j)] = -a[(perm[i], perm[j])];
                        }
                    }
                    p
                })
                .norm() < 1e-12);
                let (x, y) = (strip_objective(&StripCandidate(b)), strip_objective(&StripCandidate(neg)));
                if let (Ok(x), Ok(y)) = (x, y) {
                    assert!((x - y).abs() < 1e-10, "{x} {y}");
                }
            }
        }
        for _ in 0..5 {
            let b = random_blocks(Layout::Sector { d: 4, k: 1 }, &mut rng);
            let (x, y) = (
                sector_objective(&SectorCandidate { alpha: 0.6, blocks: b.clone() }),
                sector_objective(&SectorCandidate { alpha: 0.6, blocks: conjugated(&b) }),
            );
            if let (Ok(x), Ok(y)) = (x, y) {
                assert!((x - y).abs() < 1e-10, "{x} {y}");
            }
        }
    }

    #[test]
    fn embedding_preserves_the_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = Layout::Strip { d: 2, k: 1 }.decode(&[0.3, 1.2, 0.1, 0.4]);
        let e = b.embed(0.0);
        assert_eq!((e.d, e.k), (4, 2));
        let (x, y) = (strip_objective(&StripCandidate(b)).unwrap(), strip_objective(&StripCandidate(e.clone())).unwrap());
        assert!((x - y).abs() < 1e-9, "{x} {y}");
        assert!(Layout::Strip { d: 4, k: 2 }.encode(&e).is_ok());
        let s = random_blocks(Layout::Sector { d: 2, k: 1 }, &mut rng);
        let (x, y) = (
            sector_objective(&SectorCandidate { alpha: 0.7, blocks: s.clone() }).unwrap(),
            sector_objective(&SectorCandidate { alpha: 0.7, blocks: s.embed(1.0) }).unwrap(),
        );
        assert!((x - y).abs() < 1e-9, "{x} {y}");
    }

    #[test]
    fn strip_d2_optimum() {
        let r = optimize_strip(2, 48, 0, false).unwrap();
        assert!((1.5866..=1.5886).contains(&r.best_found), "{}", r.best_found);
        assert!((strip_objective(&r.best).unwrap() - r.best_found).abs() < 1e-12);
        assert!(r.best.containment(64).unwrap() <= 1.0 + 1e-9);
        assert_eq!(r.runs.len(), 48);
    }

    #[test]
    fn strip_embedding_start_keeps_monotonicity() {
        let small = optimize_strip(2, 3, 11, false).unwrap();
        let big = optimize_strip(4, 3, 11, false).unwrap();
        assert!(big.best_found >= small.best_found - 1e-9, "{} {}", big.best_found, small.best_found);
        assert!(big.runs.iter().any(|r| r.seeded));
    }

    #[test]
    fn symmetric_strip_search() {
        let r = optimize_strip(4, 6, 0, true).unwrap();
        assert!(r.best_found >= 1.6715, "{}", r.best_found);
        assert!(r.best.containment(64).unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn strip_search_is_deterministic() {
        let a = optimize_strip(2, 4, 9, false).unwrap();
        let b = optimize_strip(2, 4, 9, false).unwrap();
        assert_eq!(a.best_found, b.best_found);
        assert_eq!(a.best, b.best);
    }

    #[test]
    fn quarter_plane_gives_sqrt_two() {
        let r = optimize_sector(FRAC_PI_4, 2, 12, 0, false).unwrap();
        assert!((r.best_found - SQRT_2).abs() < 1e-3, "{}", r.best_found);
        assert!(r.best.containment(128).unwrap() <= 1e-7);
    }

    #[test]
    fn near_half_plane_value_tends_to_one() {
        let r = optimize_sector(FRAC_PI_2 - 1e-3, 2, 6, 0, false).unwrap();
        assert!((r.best_found - 1.0).abs() < 1e-3, "{}", r.best_found);
    }

    #[test]
    fn continuation_path_steps() {
        let p = continuation_path(0.5);
        assert!((p[0] - (FRAC_PI_2 - 0.02)).abs() < 1e-15);
        assert_eq!(*p.last().unwrap(), 0.5);
        assert!(p.windows(2).all(|w| w[0] > w[1] && w[0] - w[1] <= 0.02 + 1e-12));
        assert_eq!(continuation_path(1.56), vec![1.56]);
    }

    #[test]
    fn errors() {
        assert!(matches!(optimize_strip(3, 4, 0, false), Err(Error::Contract(_))));
        assert!(matches!(optimize_strip(2, 0, 0, false), Err(Error::Contract(_))));
        assert!(matches!(optimize_sector(0.0, 2, 4, 0, false), Err(Error::Contract(_))));
        assert!(matches!(optimize_sector(FRAC_PI_2, 2, 4, 0, false), Err(Error::Contract(_))));
        assert!(matches!(optimize_sector(0.5, 3, 4, 0, false), Err(Error::Contract(_))));
        let b = Layout::Sector { d: 2, k: 1 }.decode(&[1.0, 1.0, 0.5, 0.0, 0.0]);
        assert!(matches!(sector_objective(&SectorCandidate { alpha: 0.01, blocks: b.clone() }), Err(Error::Range(_))));

        // exp(πA/2) has eigenvalue i = −γ̄ for γ = i.
        let pole = Blocks { d: 2, k: 1, d1: vec![0.0], d2: vec![0.0], e: vec![vec![c(0.0, 0.0)]], gamma: vec![c(0.0, 1.0)] };
        assert!(matches!(strip_objective(&StripCandidate(pole)), Err(Error::Pole { .. })));

        let singular = Blocks { d: 2, k: 1, d1: vec![1.0], d2: vec![0.0], e: vec![vec![c(0.0, 0.0)]], gamma: vec![c(1.0, 0.0)] };
        assert!(matches!(sector_objective(&SectorCandidate { alpha: 0.5, blocks: singular }), Err(Error::PrincipalBranch { .. })));

        let huge = Blocks { d: 2, k: 1, d1: vec![1e9], d2: vec![1e9], e: vec![vec![c(1.0, 0.0)]], gamma: vec![c(1.0, 0.0)] };
        assert!(matches!(sector_objective(&SectorCandidate { alpha: 0.04, blocks: huge }), Err(Error::Instability(_))));
    }

    #[test]
    fn reports_say_best_found() {
        let r = optimize_strip(2, 1, 0, false).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"best_found\""));
    }
}
