//! Nelder-Mead simplex minimiser with the standard coefficients
//! (reflection 1, expansion 2, contraction 1/2, shrink 1/2).

/// Outcome of one minimisation.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub n_evals: usize,
    pub converged: bool,
    /// Best-so-far objective after each evaluation.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when `f_worst - f_best` over the simplex falls below this.
    pub tolerance: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions { max_evals: 2000, tolerance: 1e-12, initial_step: 0.25 }
    }
}

struct Counted<'a, F> {
    f: &'a mut F,
    n: usize,
    best: f64,
    trace: Vec<f64>,
}

impl<F: FnMut(&[f64]) -> f64> Counted<'_, F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        let mut v = (self.f)(x);
        if !v.is_finite() {
            v = f64::MAX;
        }
        self.n += 1;
        self.best = self.best.min(v);
        self.trace.push(self.best);
        v
    }
}

/// Minimises `f` from `x0`. Non-finite objective values are treated as `f64::MAX`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let n = x0.len();
    let mut obj = Counted { f: &mut f, n: 0, best: f64::MAX, trace: Vec::new() };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = obj.eval(x0);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        if obj.n >= opts.max_evals {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let fx = obj.eval(&x);
        simplex.push((x, fx));
    }

    let mut converged = false;
    while simplex.len() == n + 1 {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        if spread.is_finite() && spread < opts.tolerance {
            converged = true;
            break;
        }
        if obj.n >= opts.max_evals {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(1.0);
        let fr = obj.eval(&xr);
        if fr < simplex[0].1 {
            if obj.n >= opts.max_evals {
                simplex[n] = (xr, fr);
                continue;
            }
            let xe = along(2.0);
            let fe = obj.eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        if obj.n >= opts.max_evals {
            break;
        }
        // contraction: outside if the reflection beat the worst point, inside otherwise
        let (xc, fc) = if fr < simplex[n].1 {
            let xc = along(0.5);
            let fc = obj.eval(&xc);
            (xc, if fc <= fr { fc } else { f64::INFINITY })
        } else {
            let xc = along(-0.5);
            let fc = obj.eval(&xc);
            (xc, if fc < simplex[n].1 { fc } else { f64::INFINITY })
        };
        if fc.is_finite() {
            simplex[n] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if obj.n >= opts.max_evals {
                break;
            }
            let x: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
            let fx = obj.eval(&x);
            *vertex = (x, fx);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fbest) = simplex.swap_remove(0);
    Minimum { x, f: fbest, n_evals: obj.n, converged, trace: obj.trace }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_quadratic() {
        let m = minimize(
            |x| x.iter().map(|v| (v - 3.0).powi(2)).sum(),
            &[0.0; 4],
            &NelderMeadOptions { tolerance: 1e-20, ..Default::default() },
        );
        assert!(m.converged);
        for v in &m.x {
            assert!((v - 3.0).abs() < 1e-6, "{:?}", m.x);
        }
    }

    #[test]
    fn rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions { max_evals: 2000, tolerance: 1e-16, initial_step: 0.25 };
        let m = minimize(rosen, &[-1.2, 1.0], &opts);
        assert!(m.f < 1e-8, "f = {} after {} evals", m.f, m.n_evals);
        assert!(m.n_evals <= 2000);
    }

    #[test]
    fn deterministic_and_monotone_trace() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + 2.0).powi(4) + (x[0] * x[1]).sin();
        let a = minimize(f, &[0.5, 0.5], &NelderMeadOptions::default());
        let b = minimize(f, &[0.5, 0.5], &NelderMeadOptions::default());
        assert_eq!(a, b);
        assert!(a.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(a.trace.len(), a.n_evals);
    }

    #[test]
    fn budget_exhaustion_returns_best_so_far() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = minimize(rosen, &[-1.2, 1.0], &NelderMeadOptions { max_evals: 30, ..Default::default() });
        assert!(!m.converged);
        assert!(m.n_evals <= 30);
        assert_eq!(m.f, *m.trace.last().unwrap());
    }

    #[test]
    fn non_finite_objective_is_tolerated() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 2.0).powi(2) };
        let m = minimize(f, &[0.1], &NelderMeadOptions { tolerance: 1e-14, ..Default::default() });
        assert!((m.x[0] - 2.0).abs() < 1e-5);
    }
}
