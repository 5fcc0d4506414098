//! Closed-form lower and upper bounds for `C(Ω, 2)` and `C_cb(Ω)` on model
//! domains, with the explicit pairs `(A, f)` behind the lower bounds.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::conformal::{solve_density, DiskConformalMap};
use crate::error::{Error, Result};
use crate::linalg::{from_real_rows, function_of_matrix, operator_norm, ComplexMatrix, Holomorphic};
use crate::numrange::BoundarySample;
use crate::quadrature::adaptive;

/// The universal upper bound for `C_cb(Ω)` on convex domains.
pub const UNIVERSAL_UPPER: f64 = 11.08;

const CONSISTENCY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// `{|arg z| < α}`; `α = 0` stands for the strip.
    Sector { alpha: f64 },
    Strip,
    Polygon { sides: usize },
    Ellipse { eccentricity: f64 },
    Parabola,
    Boundary { nodes: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Labeled {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub domain: Domain,
    pub lower: Vec<Labeled>,
    pub upper: Vec<Labeled>,
    /// `|‖f(A)‖ − bound|` for each witness pair that was evaluated.
    pub witness_residuals: Vec<Labeled>,
    /// False when some lower bound exceeds some upper bound.
    pub consistent: bool,
}

impl BoundReport {
    pub fn new(domain: Domain) -> Self {
        Self { domain, lower: Vec::new(), upper: Vec::new(), witness_residuals: Vec::new(), consistent: true }
    }

    pub fn add_lower(&mut self, label: &str, value: f64) {
        self.lower.push(Labeled { label: label.into(), value });
        self.recheck();
    }

    pub fn add_upper(&mut self, label: &str, value: f64) {
        self.upper.push(Labeled { label: label.into(), value });
        self.recheck();
    }

    pub fn add_residual(&mut self, label: &str, value: f64) {
        self.witness_residuals.push(Labeled { label: label.into(), value });
    }

    pub fn best_lower(&self) -> Option<f64> {
        self.lower.iter().map(|b| b.value).reduce(f64::max)
    }

    pub fn best_upper(&self) -> Option<f64> {
        self.upper.iter().map(|b| b.value).reduce(f64::min)
    }

    fn recheck(&mut self) {
        self.consistent = match (self.best_lower(), self.best_upper()) {
            (Some(lo), Some(hi)) => lo <= hi + CONSISTENCY_SLACK,
            _ => true,
        };
    }
}

fn check_angle(alpha: f64, allow_zero: bool) -> Result<()> {
    let ok = alpha.is_finite() && alpha <= FRAC_PI_2 && (alpha > 0.0 || (allow_zero && alpha == 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::Contract(format!("sector half-angle {alpha} outside the admissible range")))
    }
}

/// `π sin α / (2α)`, with the strip value `π/2` at `α = 0`.
pub fn sector_lower(alpha: f64) -> Result<f64> {
    check_angle(alpha, true)?;
    if alpha == 0.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(PI * alpha.sin() / (2.0 * alpha))
}

/// `z ↦ (1 − z^s)/(1 + z^s)` with the principal power, mapping the sector
/// `|arg z| < π/(2s)` onto the unit disk. Only first derivatives are
/// provided, which covers matrices with double eigenvalues.
#[derive(Debug, Clone, Copy)]
pub struct SectorCayley(pub f64);

impl Holomorphic for SectorCayley {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let p = (self.0 * z.ln()).exp();
        Ok((1.0 - p) / (1.0 + p))
    }
    fn derivative(&self, z: Complex64, order: usize) -> Option<Result<Complex64>> {
        if order != 1 || z.norm() == 0.0 {
            return None;
        }
        let p = (self.0 * z.ln()).exp();
        let dp = self.0 * p / z;
        Some(Ok(-2.0 * dp / ((1.0 + p) * (1.0 + p))))
    }
}

/// `A = [[1, 2 sin α], [0, 1]]` (numerical range the disk of radius `sin α`
/// about 1, inside the sector) and `‖f(A)‖` for the sector Cayley map `f`.
pub fn cone_witness(alpha: f64) -> Result<(ComplexMatrix, f64)> {
    check_angle(alpha, false)?;
    let a = from_real_rows(&[&[1.0, 2.0 * alpha.sin()], &[0.0, 1.0]])?;
    let fa = function_of_matrix(&a, &SectorCayley(PI / (2.0 * alpha)))?;
    let value = operator_norm(&fa);
    Ok((a, value))
}

/// `2 ∫₀¹ (1 + t^m)^{−2/m} dt`, the distance from the center of a regular
/// `m`-gon to its sides under the Schwarz–Christoffel normalization `g′(0) = 1`.
pub fn polygon_lower(m: usize) -> Result<f64> {
    if m < 3 {
        return Err(Error::Contract(format!("polygon needs at least 3 sides, got {m}")));
    }
    let e = m as f64;
    // Below t₀ the power t^m is under e^{−40} and the integrand is 1.
    let t0 = (1.0 - 40.0 / e).max(0.0);
    Ok(2.0 * (t0 + adaptive(|t| (1.0 + t.powf(e)).powf(-2.0 / e), t0, 1.0, 1e-12)))
}

/// `2 d(z₁, ∂Ω) |a′(z₁)| / (1 − |a(z₁)|²)` for the conformal map `a`.
pub fn conformal_lower(map: &DiskConformalMap, z1: Complex64) -> Result<f64> {
    let gamma = map.boundary_distance(z1)?;
    let a = map.map_point(z1)?;
    let da = map.map_derivative(z1)?;
    Ok(2.0 * gamma * da.norm() / (1.0 - a.norm_sqr()))
}

/// `2r/R` for `B(0, r) ⊂ Ω ⊂ B(0, R)`.
pub fn rough_lower(r: f64, big_r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= big_r && big_r.is_finite()) {
        return Err(Error::Contract(format!("radii must satisfy 0 < r ≤ R, got r = {r}, R = {big_r}")));
    }
    Ok(2.0 * r / big_r)
}

/// Every applicable upper bound for `C_cb(S_α)`, labeled.
pub fn sector_upper_terms(alpha: f64) -> Result<Vec<Labeled>> {
    check_angle(alpha, true)?;
    let mut out = vec![Labeled { label: "universal".into(), value: UNIVERSAL_UPPER }];
    let mut push = |label: &str, value: f64| out.push(Labeled { label: label.into(), value });
    if alpha > 0.0 {
        let t = (alpha * PI / (4.0 * (PI - alpha))).tan();
        push("log_tan", (PI - alpha) / PI * (2.0 - 2.0 / PI * t.ln()));
        let integral = adaptive(|x| (PI - x + x.sin()) / x.sin(), alpha, FRAC_PI_2, 1e-12);
        push("contained_sector_integral", 1.0 + 2.0 / PI * integral);
        push("contained_sector_ratio", (PI - alpha) / alpha);
    }
    if alpha < FRAC_PI_3 - 1e-6 {
        let c = alpha.cos();
        let arc = ((PI - 2.0 * alpha).cos() / c).clamp(-1.0, 1.0).acos();
        push("arccos", 2.0 - 2.0 * alpha / PI + 2.0 * c / (PI * (1.0 + 2.0 * (2.0 * alpha).cos()).sqrt()) * arc);
    }
    Ok(out)
}

/// The smallest of [`sector_upper_terms`].
pub fn sector_upper(alpha: f64) -> Result<f64> {
    Ok(sector_upper_terms(alpha)?.into_iter().map(|b| b.value).fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conic {
    Ellipse { eccentricity: f64 },
    Parabola,
}

/// `2 + 2/√(4 − e²)` for an ellipse, `2 + 2/√3` for a parabola.
pub fn ellipse_parabola_upper(shape: Conic) -> Result<f64> {
    let e = match shape {
        Conic::Parabola => 1.0,
        Conic::Ellipse { eccentricity } => {
            if !(0.0..1.0).contains(&eccentricity) {
                return Err(Error::Contract(format!("eccentricity {eccentricity} outside [0, 1)")));
            }
            eccentricity
        }
    };
    Ok(2.0 + 2.0 / (4.0 - e * e).sqrt())
}

/// Total variation of `log|σ_j − ω|` around the closed node polygon.
pub fn log_distance_variation(boundary: &BoundarySample, omega: Complex64) -> f64 {
    let logs: Vec<f64> = boundary.points.iter().map(|p| (p - omega).norm().ln()).collect();
    let count = logs.len();
    (0..count).map(|j| (logs[(j + 1) % count] - logs[j]).abs()).sum()
}

/// Variation along the open chain that skips node `k` and its neighbors,
/// for `ω = σ_k`.
fn node_variation(boundary: &BoundarySample, k: usize) -> f64 {
    let count = boundary.len();
    let omega = boundary.points[k];
    let chain: Vec<f64> = (2..count - 1).map(|i| (boundary.points[(k + i) % count] - omega).norm().ln()).collect();
    chain.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// `min(11.08, 2 + π + TV(log|σ − ω|))` at a fixed `ω`.
pub fn tv_upper_at(boundary: &BoundarySample, omega: Complex64) -> f64 {
    UNIVERSAL_UPPER.min(2.0 + PI + log_distance_variation(boundary, omega))
}

/// `min(11.08, 2 + π + min_ω TV)` with `ω` ranging over the boundary nodes.
pub fn tv_upper(boundary: &BoundarySample) -> Result<f64> {
    if boundary.len() < 5 {
        return Err(Error::Contract("total variation bound needs at least 5 nodes".into()));
    }
    let best = (0..boundary.len()).map(|k| node_variation(boundary, k)).fold(f64::INFINITY, f64::min);
    Ok(UNIVERSAL_UPPER.min(2.0 + PI + best))
}

/// Bounds for the sector `S_α`; `α = 0` gives the strip.
pub fn sector_report(alpha: f64) -> Result<BoundReport> {
    let domain = if alpha == 0.0 { Domain::Strip } else { Domain::Sector { alpha } };
    let mut report = BoundReport::new(domain);
    let lower = sector_lower(alpha)?;
    report.add_lower("two_by_two", lower);
    if alpha > 0.0 {
        let (_, value) = cone_witness(alpha)?;
        report.add_residual("cone_witness", (value - lower).abs());
    }
    for term in sector_upper_terms(alpha)? {
        report.add_upper(&term.label, term.value);
    }
    Ok(report)
}

/// Bounds for the regular `m`-gon; `nodes` sets the boundary sample used by
/// the total variation bound.
pub fn polygon_report(m: usize, nodes: usize) -> Result<BoundReport> {
    let mut report = BoundReport::new(Domain::Polygon { sides: m });
    report.add_lower("schwarz_christoffel", polygon_lower(m)?);
    report.add_lower("rough", rough_lower((PI / m as f64).cos(), 1.0)?);
    let curve = crate::numrange::Polygon::regular(m, 1.0).expect("m ≥ 3");
    let sample = BoundarySample::from_curve(std::sync::Arc::new(curve), nodes)?;
    report.add_upper("total_variation", tv_upper(&sample)?);
    report.add_upper("universal", UNIVERSAL_UPPER);
    Ok(report)
}

/// Bounds for the ellipse of eccentricity `e` with unit major semi-axis.
pub fn ellipse_report(e: f64, nodes: usize) -> Result<BoundReport> {
    let mut report = BoundReport::new(Domain::Ellipse { eccentricity: e });
    let upper = ellipse_parabola_upper(Conic::Ellipse { eccentricity: e })?;
    let minor = (1.0 - e * e).sqrt();
    report.add_lower("rough", rough_lower(minor, 1.0)?);
    let curve = crate::numrange::Ellipse { center: Complex64::new(0.0, 0.0), rx: 1.0, ry: minor };
    let sample = BoundarySample::from_curve(std::sync::Arc::new(curve), nodes)?;
    let map = solve_density(&sample)?;
    report.add_lower("conformal_center", conformal_lower(&map, Complex64::new(0.0, 0.0))?);
    report.add_upper("conic", upper);
    report.add_upper("total_variation", tv_upper(&sample)?);
    report.add_upper("universal", UNIVERSAL_UPPER);
    Ok(report)
}

pub fn parabola_report() -> BoundReport {
    let mut report = BoundReport::new(Domain::Parabola);
    report.add_upper("conic", 2.0 + 2.0 / 3f64.sqrt());
    report.add_upper("universal", UNIVERSAL_UPPER);
    report
}

/// Bounds for the domain enclosed by a sampled convex boundary, using the
/// node centroid as the center for the rough and conformal lower bounds.
pub fn boundary_report(sample: &BoundarySample) -> Result<BoundReport> {
    let mut report = BoundReport::new(Domain::Boundary { nodes: sample.len() });
    let center = sample.points.iter().sum::<Complex64>() / sample.len() as f64;
    let r = (0..sample.len())
        .map(|j| sample.support[j] - (sample.normal(j).conj() * center).re)
        .fold(f64::INFINITY, f64::min);
    let big_r = sample.points.iter().map(|p| (p - center).norm()).fold(0.0, f64::max);
    if r > 0.0 {
        report.add_lower("rough", rough_lower(r, big_r)?);
    }
    if sample.smooth {
        let map = solve_density(&sample.translated(-center))?;
        report.add_lower("conformal_centroid", conformal_lower(&map, Complex64::new(0.0, 0.0))?);
    }
    report.add_upper("total_variation", tv_upper(sample)?);
    report.add_upper("universal", UNIVERSAL_UPPER);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, SQRT_2, TAU};
    use std::sync::Arc;

    use super::*;
    use crate::numrange::{Circle, ClosedCurve, Ellipse, Polygon};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(curve: impl ClosedCurve + 'static, n: usize) -> BoundarySample {
        BoundarySample::from_curve(Arc::new(curve), n).unwrap()
    }

    #[test]
    fn sector_lower_values() {
        assert!((sector_lower(FRAC_PI_6).unwrap() - 1.5).abs() < 1e-15);
        assert!((sector_lower(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(sector_lower(0.0).unwrap(), FRAC_PI_2);
        assert!((sector_lower(1e-9).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!(sector_lower(-0.1).is_err());
        assert!(sector_lower(2.0).is_err());
    }

    #[test]
    fn sector_lower_is_nonincreasing() {
        let mut last = f64::INFINITY;
        for k in 0..=200 {
            let v = sector_lower(FRAC_PI_2 * k as f64 / 200.0).unwrap();
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn cone_witness_matches_the_closed_form() {
        for alpha in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2] {
            let (a, value) = cone_witness(alpha).unwrap();
            assert!((value - sector_lower(alpha).unwrap()).abs() < 1e-9, "α={alpha}");
            assert!((a[(0, 1)].re - 2.0 * alpha.sin()).abs() < 1e-15);
        }
        assert!((cone_witness(FRAC_PI_6).unwrap().1 - 1.5).abs() < 1e-9);
        assert!((cone_witness(FRAC_PI_4).unwrap().1 - SQRT_2).abs() < 1e-9);
        assert!((cone_witness(FRAC_PI_2).unwrap().1 - 1.0).abs() < 1e-9);
        assert!(cone_witness(0.0).is_err());
    }

    #[test]
    fn cone_witness_is_bounded_on_the_sector() {
        let alpha = FRAC_PI_6;
        let f = SectorCayley(PI / (2.0 * alpha));
        for k in 0..50 {
            let phi = alpha * (2.0 * k as f64 / 49.0 - 1.0);
            for r in [1e-3, 0.5, 1.0, 3.0, 50.0] {
                let z = Complex64::from_polar(r, phi);
                assert!(f.value(z).unwrap().norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn polygon_values() {
        assert!((polygon_lower(3).unwrap() - 1.7666).abs() < 5e-5);
        assert!((polygon_lower(4).unwrap() - 1.854).abs() < 5e-4);
        assert!((polygon_lower(5).unwrap() - 1.9003).abs() < 5e-4);
        assert!((polygon_lower(6).unwrap() - 1.9276).abs() < 5e-4);
        let big = polygon_lower(10_000).unwrap();
        assert!(big > 1.999 && big < 2.0);
        assert!(polygon_lower(2).is_err());
    }

    #[test]
    fn polygon_lower_increases() {
        let mut last = 0.0;
        for m in 3..40 {
            let v = polygon_lower(m).unwrap();
            assert!(v > last && v < 2.0);
            last = v;
        }
    }

    #[test]
    fn polygon_lower_against_midpoint_rule() {
        let m = 5.0f64;
        let k = 200_000;
        let h = 1.0 / k as f64;
        let mid: f64 = (0..k).map(|i| (1.0 + ((i as f64 + 0.5) * h).powf(m)).powf(-2.0 / m)).sum::<f64>() * h;
        assert!((polygon_lower(5).unwrap() - 2.0 * mid).abs() < 1e-9);
    }

    #[test]
    fn conformal_lower_on_disks() {
        let map = solve_density(&sample(Circle { center: c(0.0, 0.0), radius: 1.0 }, 32)).unwrap();
        assert!((conformal_lower(&map, c(0.0, 0.0)).unwrap() - 2.0).abs() < 1e-10);

        let map = solve_density(&sample(Circle { center: c(0.5, 0.0), radius: 1.0 }, 32)).unwrap();
        let z1 = c(0.5, 0.0);
        assert!((conformal_lower(&map, z1).unwrap() - 2.0).abs() < 1e-10);
        for z in [c(0.5, 0.0), c(0.1, 0.3), c(-0.2, -0.4)] {
            let exact = 4.0 * z / (3.0 + 2.0 * z);
            assert!((map.map_point(z).unwrap() - exact).norm() < 1e-10);
        }
    }

    #[test]
    fn conformal_lower_off_center_is_the_hyperbolic_closed_form() {
        let (center, radius) = (c(0.3, -0.2), 2.0);
        let map = solve_density(&sample(Circle { center, radius }, 48)).unwrap();
        for k in 0..20 {
            let rho = radius * 0.9 * (k as f64 / 19.0);
            let z = center + Complex64::from_polar(rho, 0.7 * k as f64);
            let v = conformal_lower(&map, z).unwrap();
            assert!((v - 2.0 * radius / (radius + rho)).abs() < 1e-8, "k={k}");
            assert!(v <= 2.0 + 1e-9);
        }
    }

    #[test]
    fn conformal_lower_on_the_hexagon() {
        let map = solve_density(&sample(Polygon::regular(6, 1.0).unwrap(), 128)).unwrap();
        let v = conformal_lower(&map, c(0.0, 0.0)).unwrap();
        assert!(v >= 1.92, "{v}");
        assert!((v - polygon_lower(6).unwrap()).abs() < 2e-3, "{v}");
    }

    #[test]
    fn rough_values() {
        assert_eq!(rough_lower(1.0, 1.0).unwrap(), 2.0);
        assert_eq!(rough_lower(1.0, 2.0).unwrap(), 1.0);
        assert!((rough_lower(1.0, SQRT_2).unwrap() - SQRT_2).abs() < 1e-15);
        assert!(rough_lower(2.0, 1.0).is_err());
        assert!(rough_lower(0.0, 1.0).is_err());
    }

    #[test]
    fn sector_upper_values() {
        assert!((sector_upper(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-14);
        let strip = sector_upper(0.0).unwrap();
        assert!((strip - (2.0 + 2.0 / 3f64.sqrt())).abs() < 1e-14);
        assert!((strip - 3.1547).abs() < 1e-4);
        let quarter = sector_upper(FRAC_PI_4).unwrap();
        assert!(quarter <= 3.0 && quarter >= SQRT_2);
    }

    #[test]
    fn arccos_bound_wins_below_a_fifth_of_pi() {
        let pick = |alpha: f64, label: &str| {
            sector_upper_terms(alpha).unwrap().into_iter().find(|t| t.label == label).unwrap().value
        };
        for alpha in [0.05 * PI, 0.15 * PI, 0.21 * PI] {
            assert!(pick(alpha, "arccos") < pick(alpha, "log_tan"), "α={alpha}");
        }
        for alpha in [0.23 * PI, 0.3 * PI] {
            assert!(pick(alpha, "arccos") > pick(alpha, "log_tan"), "α={alpha}");
        }
    }

    #[test]
    fn near_a_third_of_pi_the_arccos_term_is_dropped() {
        let terms = sector_upper_terms(FRAC_PI_3).unwrap();
        assert!(terms.iter().all(|t| t.label != "arccos" && t.value.is_finite()));
        let close = sector_upper_terms(FRAC_PI_3 - 1e-3).unwrap();
        assert!(close.iter().any(|t| t.label == "arccos" && t.value.is_finite()));
    }

    #[test]
    fn two_sided_sector_estimate() {
        for k in 1..=400 {
            let alpha = FRAC_PI_2 * k as f64 / 400.0;
            assert!(sector_lower(alpha).unwrap() <= sector_upper(alpha).unwrap() + 1e-12, "α={alpha}");
            assert!(sector_report(alpha).unwrap().consistent);
        }
        assert!(sector_report(0.0).unwrap().consistent);
    }

    #[test]
    fn conic_values() {
        assert_eq!(ellipse_parabola_upper(Conic::Ellipse { eccentricity: 0.0 }).unwrap(), 3.0);
        let p = ellipse_parabola_upper(Conic::Parabola).unwrap();
        assert!((p - (2.0 + 2.0 / 3f64.sqrt())).abs() < 1e-15);
        let e8 = ellipse_parabola_upper(Conic::Ellipse { eccentricity: 0.8 }).unwrap();
        assert!((e8 - 3.0911).abs() < 1e-4);
        assert!(ellipse_parabola_upper(Conic::Ellipse { eccentricity: 1.0 }).is_err());
    }

    #[test]
    fn total_variation_on_the_circle() {
        let s = sample(Circle { center: c(0.0, 0.0), radius: 1.0 }, 32);
        assert!(log_distance_variation(&s, c(0.0, 0.0)) < 1e-13);
        assert!((tv_upper_at(&s, c(0.0, 0.0)) - (2.0 + PI)).abs() < 1e-13);
        let nodes = tv_upper(&s).unwrap();
        assert!(nodes > 2.0 + PI && nodes <= UNIVERSAL_UPPER);
    }

    #[test]
    fn total_variation_on_ellipses() {
        let mut last = f64::INFINITY;
        for e in [0.6f64, 0.4, 0.2, 0.0] {
            let minor = (1.0 - e * e).sqrt();
            let s = sample(Ellipse { center: c(0.0, 0.0), rx: 1.0, ry: minor }, 64);
            let tv = log_distance_variation(&s, c(0.0, 0.0));
            // |σ| climbs from the minor to the major semi-axis four times.
            assert!((tv - 4.0 * (1.0 / minor).ln()).abs() < 1e-3, "e={e}");
            let bound = tv_upper_at(&s, c(0.0, 0.0));
            assert!(bound < last);
            last = bound;
            let nodes = tv_upper(&s).unwrap();
            assert!((2.0 + PI..=UNIVERSAL_UPPER).contains(&nodes));
        }
    }

    #[test]
    fn dense_center_grid_does_not_beat_the_center() {
        let s = sample(Ellipse { center: c(0.0, 0.0), rx: 1.0, ry: 0.8 }, 64);
        let at_center = log_distance_variation(&s, c(0.0, 0.0));
        for k in 0..40 {
            let w = Complex64::from_polar(0.3 * (k % 5) as f64 / 4.0, TAU * k as f64 / 40.0);
            assert!(log_distance_variation(&s, w) >= at_center - 1e-12);
        }
    }

    #[test]
    fn reports_flag_inconsistency() {
        let mut r = BoundReport::new(Domain::Strip);
        r.add_lower("a", 1.5);
        r.add_upper("b", 3.0);
        assert!(r.consistent);
        r.add_lower("bogus", 3.5);
        assert!(!r.consistent);
    }

    #[test]
    fn domain_reports() {
        let p = polygon_report(6, 64).unwrap();
        assert!(p.consistent);
        assert_eq!(p.best_lower().unwrap(), polygon_lower(6).unwrap());
        let e = ellipse_report(0.6, 64).unwrap();
        assert!(e.consistent);
        assert!(e.lower.iter().any(|b| b.label == "conformal_center"));
        assert!(parabola_report().consistent);
        let s = sector_report(FRAC_PI_6).unwrap();
        assert!(s.witness_residuals[0].value < 1e-9);
        let b = boundary_report(&sample(Circle { center: c(1.0, 1.0), radius: 0.5 }, 32)).unwrap();
        assert!((b.best_lower().unwrap() - 2.0).abs() < 1e-9);
    }
}
