//! Bounded Nelder–Mead simplex search with seeded restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::OptimizeError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexOptions {
    /// Evaluation budget of each restart.
    pub max_evaluations: usize,
    /// Stop when every vertex is this close to the best one.
    pub diameter_tolerance: f64,
    /// Stop when the objective spread over the simplex is this small.
    pub value_tolerance: f64,
    pub restarts: usize,
    /// Initial simplex edge, as a fraction of each parameter's range.
    pub initial_step: f64,
    pub seed: u64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_evaluations: 2000,
            diameter_tolerance: 1e-6,
            value_tolerance: 1e-8,
            restarts: 5,
            initial_step: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
}

struct Run<'a, F> {
    f: &'a F,
    bounds: &'a [Interval],
    evaluations: usize,
}

impl<F: Fn(&[f64]) -> f64> Run<'_, F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    fn clamp(&self, x: Vec<f64>) -> Vec<f64> {
        x.into_iter()
            .zip(self.bounds)
            .map(|(v, b)| b.clamp(v))
            .collect()
    }

    /// One simplex descent from `x0`. Returns the best vertex and its value.
    fn descend(
        &mut self,
        x0: &[f64],
        step: f64,
        opts: &SimplexOptions,
        budget: usize,
    ) -> (Vec<f64>, f64) {
        let n = x0.len();
        let start = self.evaluations;
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let f0 = self.eval(x0);
        simplex.push((x0.to_vec(), f0));
        for i in 0..n {
            let mut x = x0.to_vec();
            let d = step * self.bounds[i].width().max(1e-12);
            // step inward when the forward vertex would leave the box
            x[i] = if x[i] + d <= self.bounds[i].hi {
                x[i] + d
            } else {
                x[i] - d
            };
            let x = self.clamp(x);
            let v = self.eval(&x);
            simplex.push((x, v));
        }
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            let diameter = simplex[1..]
                .iter()
                .map(|(x, _)| {
                    x.iter()
                        .zip(&simplex[0].0)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            let spread = if best.is_finite() && worst.is_finite() {
                worst - best
            } else {
                f64::INFINITY
            };
            if diameter < opts.diameter_tolerance
                || spread < opts.value_tolerance
                || self.evaluations - start >= budget
            {
                break;
            }
            let centroid: Vec<f64> = (0..n)
                .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
                .collect();
            let along = |t: f64, worst: &[f64]| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(worst)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let xw = simplex[n].0.clone();
            let xr = self.clamp(along(1.0, &xw));
            let fr = self.eval(&xr);
            if fr < simplex[0].1 {
                let xe = self.clamp(along(2.0, &xw));
                let fe = self.eval(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < simplex[n].1 {
                let x = self.clamp(along(0.5, &xw));
                let v = self.eval(&x);
                (x, v)
            } else {
                let x = self.clamp(along(-0.5, &xw));
                let v = self.eval(&x);
                (x, v)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            // shrink toward the best vertex
            let x0 = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = vertex
                    .0
                    .iter()
                    .zip(&x0)
                    .map(|(v, b)| b + 0.5 * (v - b))
                    .collect();
                let v = self.eval(&x);
                *vertex = (x, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        simplex.swap_remove(0)
    }
}

/// Minimizes `f` inside the box `bounds`, starting from `x0`.
///
/// Restart 0 starts at `x0`; the others start from seeded jitters of it. Each
/// restart re-runs its simplex from the point it reached until a descent stops
/// improving or the budget is spent. The best restart wins; ties go to the
/// lowest index, so results depend only on the seed.
pub fn minimize<F>(
    f: &F,
    x0: &[f64],
    bounds: &[Interval],
    opts: &SimplexOptions,
) -> Result<MinimizeResult, OptimizeError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if x0.len() != bounds.len() || x0.is_empty() {
        return Err(OptimizeError::Arity {
            expected: bounds.len(),
            got: x0.len(),
        });
    }
    if x0
        .iter()
        .zip(bounds)
        .any(|(x, b)| !(b.lo <= *x && *x <= b.hi))
    {
        return Err(OptimizeError::OutOfBounds);
    }
    let restarts = opts.restarts.max(1);
    let results: Vec<(Vec<f64>, f64, usize)> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut run = Run {
                f,
                bounds,
                evaluations: 0,
            };
            let start: Vec<f64> = if k == 0 {
                x0.to_vec()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k as u64));
                let jittered = x0
                    .iter()
                    .zip(bounds)
                    .map(|(x, b)| x + opts.initial_step * b.width() * rng.gen_range(-1.0..1.0))
                    .collect();
                run.clamp(jittered)
            };
            let mut best = (start.clone(), f64::INFINITY);
            let mut step = opts.initial_step;
            while run.evaluations < opts.max_evaluations {
                let budget = opts.max_evaluations - run.evaluations;
                let (x, v) = run.descend(&best.0, step, opts, budget);
                let improved = v < best.1 - opts.value_tolerance;
                if v < best.1 {
                    best = (x, v);
                }
                if !improved {
                    break;
                }
                step = (step * 0.5).max(1e-4);
            }
            (best.0, best.1, run.evaluations)
        })
        .collect();
    let evaluations = results.iter().map(|r| r.2).sum();
    let (best_params, best_value, _) = results
        .into_iter()
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .expect("at least one restart");
    if !best_value.is_finite() {
        return Err(OptimizeError::AllInfeasible);
    }
    Ok(MinimizeResult {
        best_params,
        best_value,
        evaluations,
    })
}
