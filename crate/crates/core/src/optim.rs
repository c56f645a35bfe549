//! Derivative-free multi-start maximization.
//!
//! Each start runs a Nelder-Mead simplex search. When a search stalls the
//! simplex is rebuilt around the best vertex and the search continues, until
//! a rebuild no longer improves the value or the iteration budget runs out.
//! Starts are independent and run in parallel; start `i` draws its initial
//! point from a ChaCha stream keyed by `(seed, i)`, so results do not depend
//! on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 32, max_iters: 2000, tol: 1e-7, seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidArgument("optimizer restarts and max_iters must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("optimizer tolerance {} must be positive", self.tol)));
        }
        Ok(())
    }
}

/// Result of a single local search.
#[derive(Clone, Debug)]
pub struct LocalSearch {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Best result over all starts.
#[derive(Clone, Debug)]
pub struct Optimum {
    pub x: Vec<f64>,
    pub value: f64,
    /// Whether the winning start converged within its budget.
    pub converged: bool,
    pub starts: usize,
    pub starts_converged: usize,
    pub evaluations: usize,
}

/// Minimizes `f` from `x0` with an adaptive Nelder-Mead simplex.
pub fn nelder_mead<F>(f: &F, x0: &[f64], step: f64, max_iters: usize, tol: f64) -> LocalSearch
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    if n == 0 {
        return LocalSearch { x: vec![], value: eval(x0), iterations: 0, evaluations: 1, converged: true };
    }
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = if n > 2 { (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf) } else { (1.0, 2.0, 0.5, 0.5) };

    let mut best_x = x0.to_vec();
    let mut best_v = eval(x0);
    let mut evaluations = 1;
    let mut iterations = 0;
    let mut converged = false;
    let mut scale = step;

    'outer: while iterations < max_iters {
        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        let mut values: Vec<f64> = Vec::with_capacity(n + 1);
        simplex.push(best_x.clone());
        values.push(best_v);
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] += scale;
            values.push(eval(&x));
            simplex.push(x);
            evaluations += 1;
        }
        let start_v = best_v;

        loop {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let spread = values[n] - values[0];
            if spread <= tol * (1.0 + values[0].abs()) || iterations >= max_iters {
                break;
            }
            iterations += 1;

            let mut centroid = vec![0.0; n];
            for x in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / nf;
                }
            }
            let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect() };

            let xr = along(alpha);
            let fr = eval(&xr);
            evaluations += 1;
            if fr < values[0] {
                let xe = along(beta);
                let fe = eval(&xe);
                evaluations += 1;
                if fe < fr {
                    simplex[n] = xe;
                    values[n] = fe;
                } else {
                    simplex[n] = xr;
                    values[n] = fr;
                }
                continue;
            }
            if fr < values[n - 1] {
                simplex[n] = xr;
                values[n] = fr;
                continue;
            }
            let (xc, fc) = if fr < values[n] {
                let xc = along(gamma);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-gamma);
                let fc = eval(&xc);
                (xc, fc)
            };
            evaluations += 1;
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
                continue;
            }
            // shrink towards the best vertex
            let x0 = simplex[0].clone();
            for i in 1..=n {
                for (xi, bi) in simplex[i].iter_mut().zip(&x0) {
                    *xi = bi + delta * (*xi - bi);
                }
                values[i] = eval(&simplex[i]);
                evaluations += 1;
            }
        }

        let improved = values[0] < best_v;
        if improved {
            best_x = simplex[0].clone();
            best_v = values[0];
        }
        if iterations >= max_iters {
            break 'outer;
        }
        if start_v - best_v <= tol * (1.0 + best_v.abs()) {
            converged = true;
            break;
        }
        scale = (scale * 0.5).max(1e-3);
    }

    LocalSearch { x: best_x, value: best_v, iterations, evaluations, converged }
}

/// Maximizes `objective` from `cfg.restarts` random starts drawn by `init`
/// plus every point in `warm_starts`.
pub fn multistart_maximize<F, G>(objective: F, init: G, warm_starts: &[Vec<f64>], step: f64, cfg: &OptimizerConfig) -> Result<Optimum>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    cfg.validate()?;
    let neg = |x: &[f64]| -objective(x);
    let total = cfg.restarts + warm_starts.len();
    let results: Vec<LocalSearch> = (0..total)
        .into_par_iter()
        .map(|i| {
            let x0 = if i < warm_starts.len() {
                warm_starts[i].clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(i as u64);
                init(&mut rng)
            };
            nelder_mead(&neg, &x0, step, cfg.max_iters, cfg.tol)
        })
        .collect();

    let starts_converged = results.iter().filter(|r| r.converged).count();
    let evaluations = results.iter().map(|r| r.evaluations).sum();
    let best = results.into_iter().reduce(|a, b| if b.value < a.value { b } else { a }).expect("at least one start");
    Ok(Optimum { value: -best.value, x: best.x, converged: best.converged, starts: total, starts_converged, evaluations })
}
