//! Continuation of the sector constants in α for d = 4.

use std::f64::consts::PI;

use kspectral::extremal::optimize_sector;

#[test]
fn branches_cross_near_two_pi_over_thirteen() {
    let center = 2.0 * PI / 13.0;
    let (lo, hi) = (0.9 * center, 1.1 * center);
    let r = optimize_sector(lo, 4, 4, 0, true).unwrap();
    let mut closest = f64::INFINITY;
    for step in &r.trace {
        println!("α = {:.4}  d=2 branch {:?}  d=4 branch {:?}  {:?}", step.alpha, step.d2_branch, step.d4_branch, step.errors);
        if let (true, Some(a), Some(b)) = ((lo..=hi).contains(&step.alpha), step.d2_branch, step.d4_branch) {
            closest = closest.min((a - b).abs());
        }
    }
    println!("smallest branch gap in [{lo:.4}, {hi:.4}]: {closest:.3e}");
    assert!(r.trace.iter().filter(|s| (lo..=hi).contains(&s.alpha)).count() >= 3);
    assert!(closest <= 5e-3, "branches stay {closest:.3e} apart in [{lo:.4}, {hi:.4}]");
}
