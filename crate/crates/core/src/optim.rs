//! Derivative-free local minimization on top of `argmin`'s Nelder-Mead.

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;

/// Outcome of [`nelder_mead`].
#[derive(Clone, Debug)]
pub struct LocalMin {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Restarts that still improved on the previous run.
    pub restarts: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    /// Initial simplex edge along each coordinate.
    pub step: f64,
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: f64,
    pub max_iters: u64,
    /// Fresh simplices built around the incumbent once a run collapses.
    pub max_restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            step: 0.1,
            f_tol: 1e-10,
            max_iters: 2000,
            max_restarts: 3,
        }
    }
}

struct Objective<'a, F> {
    f: &'a F,
}

impl<F: Fn(&[f64]) -> f64> CostFunction for Objective<'_, F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> Result<f64, argmin::core::Error> {
        let v = (self.f)(p);
        Ok(if v.is_nan() { f64::INFINITY } else { v })
    }
}

fn simplex(x: &[f64], step: f64) -> Vec<Vec<f64>> {
    let mut s = vec![x.to_vec()];
    for i in 0..x.len() {
        let mut v = x.to_vec();
        v[i] += step;
        s.push(v);
    }
    s
}

/// Minimizes `f` from `x0`, restarting on a fresh simplex whenever a run
/// ends, until a restart no longer improves by more than `f_tol`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], opts: NelderMeadOptions) -> LocalMin {
    let mut best = LocalMin {
        x: x0.to_vec(),
        value: f(x0),
        evaluations: 1,
        restarts: 0,
    };
    if x0.is_empty() {
        return best;
    }
    let mut step = opts.step;
    for round in 0..=opts.max_restarts {
        let solver = NelderMead::new(simplex(&best.x, step))
            .with_sd_tolerance(opts.f_tol)
            .expect("nonnegative tolerance");
        let run = Executor::new(Objective { f }, solver)
            .configure(|s| s.max_iters(opts.max_iters))
            .run();
        let Ok(run) = run else { break };
        let state = run.state();
        best.evaluations += state.get_func_counts().values().sum::<u64>() as usize;
        let (Some(x), value) = (state.get_best_param(), state.get_best_cost()) else {
            break;
        };
        let improved = value < best.value - opts.f_tol;
        if value < best.value {
            best.x = x.clone();
            best.value = value;
        }
        if round > 0 && !improved {
            break;
        }
        if round > 0 {
            best.restarts += 1;
        }
        step *= 0.5;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |p: &[f64]| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2);
        let r = nelder_mead(
            &f,
            &[-1.2, 1.0],
            NelderMeadOptions {
                f_tol: 1e-16,
                ..Default::default()
            },
        );
        assert!(
            (r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn quadratic_in_five_dims() {
        let f = |p: &[f64]| {
            p.iter()
                .enumerate()
                .map(|(i, x)| (i + 1) as f64 * (x - i as f64).powi(2))
                .sum::<f64>()
        };
        let r = nelder_mead(
            &f,
            &[0.0; 5],
            NelderMeadOptions {
                step: 1.0,
                f_tol: 1e-18,
                max_iters: 5000,
                ..Default::default()
            },
        );
        assert!(r.value < 1e-10, "{}", r.value);
    }

    #[test]
    fn nan_is_rejected() {
        let f = |p: &[f64]| {
            if p[0] < 0.0 {
                f64::NAN
            } else {
                (p[0] - 0.5).powi(2)
            }
        };
        let r = nelder_mead(&f, &[0.2], Default::default());
        assert!((r.x[0] - 0.5).abs() < 1e-4);
    }
}
