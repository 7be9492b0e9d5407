//! Nelder–Mead simplex minimization with dimension-adaptive coefficients
//! (Gao & Han, 2012) and restarts from the incumbent.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Budget of simplex iterations, shared across restarts.
    pub max_iterations: usize,
    /// Stop when the objective spread over the simplex is at most this...
    pub f_tol: f64,
    /// ...and every vertex lies within this distance of the best one.
    pub x_tol: f64,
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iterations: 500,
            f_tol: 1e-9,
            x_tol: 1e-6,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// The final run met both tolerances before exhausting the budget.
    pub converged: bool,
}

struct Coefficients {
    reflect: f64,
    expand: f64,
    contract: f64,
    shrink: f64,
}

impl Coefficients {
    fn for_dimension(n: usize) -> Self {
        let n = n.max(2) as f64;
        Coefficients {
            reflect: 1.0,
            expand: 1.0 + 2.0 / n,
            contract: 0.75 - 0.5 / n,
            shrink: 1.0 - 1.0 / n,
        }
    }
}

fn combine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(&x, &y)| x + t * (y - x)).collect()
}

struct Run {
    best: (Vec<f64>, f64),
    iterations: usize,
    evaluations: usize,
    converged: bool,
}

fn run_once<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x0: &[f64],
    f0: f64,
    step: f64,
    budget: usize,
    opts: &SimplexOptions,
) -> Run {
    let n = x0.len();
    let coef = Coefficients::for_dimension(n);
    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = eval(&x, &mut evaluations);
        simplex.push((x, fx));
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let f_spread = simplex[n].1 - simplex[0].1;
        let x_spread = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if f_spread <= opts.f_tol && x_spread <= opts.x_tol {
            converged = true;
            break;
        }
        if iterations >= budget {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let xr = combine(&centroid, &worst.0, -coef.reflect);
        let fr = eval(&xr, &mut evaluations);

        if fr < simplex[0].1 {
            let xe = combine(&centroid, &worst.0, -coef.reflect * coef.expand);
            let fe = eval(&xe, &mut evaluations);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = combine(&centroid, &xr, coef.contract);
            let fc = eval(&xc, &mut evaluations);
            (xc, fc)
        } else {
            let xc = combine(&centroid, &worst.0, coef.contract);
            let fc = eval(&xc, &mut evaluations);
            (xc, fc)
        };
        if fc < fr.min(worst.1) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = combine(&best, &vertex.0, coef.shrink);
            let fx = eval(&x, &mut evaluations);
            *vertex = (x, fx);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Run {
        best: simplex.swap_remove(0),
        iterations,
        evaluations,
        converged,
    }
}

/// Minimizes `f` from `x0`. After each converged run the simplex is rebuilt
/// around the incumbent with a tenth of the previous step; the search stops
/// once a restart no longer improves the objective by more than `f_tol`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexOutcome {
    let f0 = f(x0);
    if x0.is_empty() {
        return SimplexOutcome {
            x: Vec::new(),
            f: f0,
            iterations: 0,
            evaluations: 1,
            converged: true,
        };
    }
    let mut best = (x0.to_vec(), f0);
    let mut iterations = 0;
    let mut evaluations = 1;
    let mut step = opts.initial_step;
    let converged = loop {
        let run = run_once(&mut f, &best.0, best.1, step, opts.max_iterations - iterations, opts);
        iterations += run.iterations;
        evaluations += run.evaluations;
        let improvement = best.1 - run.best.1;
        if run.best.1 <= best.1 {
            best = run.best;
        }
        if !run.converged || improvement <= opts.f_tol || iterations >= opts.max_iterations {
            break run.converged;
        }
        step = (step * 0.1).max(10.0 * opts.x_tol);
    };
    SimplexOutcome {
        x: best.0,
        f: best.1,
        iterations,
        evaluations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let out = minimize(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + 0.5,
            &[0.0, 0.0],
            &SimplexOptions::default(),
        );
        assert!(out.converged);
        assert!((out.f - 0.5).abs() < 1e-9);
        assert!((out.x[0] - 1.0).abs() < 1e-4);
        assert!((out.x[1] + 2.0).abs() < 1e-4);
    }

    #[test]
    fn rosenbrock_within_budget() {
        let opts = SimplexOptions {
            max_iterations: 5000,
            ..SimplexOptions::default()
        };
        let out = minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &opts,
        );
        assert!(out.f < 1e-8, "f = {}", out.f);
    }

    #[test]
    fn budget_exhaustion_reports_not_converged() {
        let opts = SimplexOptions {
            max_iterations: 3,
            ..SimplexOptions::default()
        };
        let out = minimize(|x| x.iter().map(|v| (v - 3.0).powi(2)).sum(), &[0.0; 4], &opts);
        assert!(!out.converged);
        assert!(out.iterations <= 3);
    }

    #[test]
    fn never_worse_than_start() {
        let out = minimize(|x| x[0].sin() + x[1].cos(), &[0.3, 0.1], &SimplexOptions::default());
        assert!(out.f <= 0.3f64.sin() + 0.1f64.cos());
    }
}
