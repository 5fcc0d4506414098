//! Derivative-free minimization and seeded RNG streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop when the simplex diameter falls below this.
    pub xatol: f64,
    /// Stop when the spread of function values falls below this.
    pub fatol: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_iter: 1000, xatol: 1e-10, fatol: 1e-12, initial_step: 0.1 }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead with the standard coefficients (1, 2, ½, ½).
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let m = x0.len();
    if m == 0 {
        return Minimum { x: vec![], value: f(&[]), iterations: 0, converged: true };
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    simplex.push(x0.to_vec());
    for i in 0..m {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| sanitize(f(v))).collect();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        let mut order: Vec<usize> = (0..=m).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let fspread = values[m] - values[0];
        let xspread = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if fspread <= opts.fatol && xspread <= opts.xatol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..m).map(|k| simplex[..m].iter().map(|v| v[k]).sum::<f64>() / m as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..m).map(|k| centroid[k] + t * (simplex[m][k] - centroid[k])).collect() };
        let xr = along(-1.0);
        let fr = sanitize(f(&xr));
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = sanitize(f(&xe));
            if fe < fr {
                simplex[m] = xe;
                values[m] = fe;
            } else {
                simplex[m] = xr;
                values[m] = fr;
            }
            continue;
        }
        if fr < values[m - 1] {
            simplex[m] = xr;
            values[m] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[m] {
            let xc = along(-0.5);
            let fc = sanitize(f(&xc));
            (xc, fc)
        } else {
            let xc = along(0.5);
            let fc = sanitize(f(&xc));
            (xc, fc)
        };
        if fc < values[m].min(fr) {
            simplex[m] = xc;
            values[m] = fc;
            continue;
        }
        for i in 1..=m {
            for k in 0..m {
                simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
            }
            values[i] = sanitize(f(&simplex[i]));
        }
    }
    let best = (0..=m).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    Minimum { x: simplex[best].clone(), value: values[best], iterations, converged }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Independent RNG stream for one restart: ChaCha8 keyed by `seed`, with
/// the stream id built from `(tag, index)`.
pub fn restart_rng(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((tag << 32) ^ index);
    rng
}
