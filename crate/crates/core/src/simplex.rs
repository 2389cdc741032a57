//! Nelder–Mead downhill simplex with the standard coefficients
//! (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
//!
//! Non-finite objective values are treated as `+∞`, so infeasible points can be rejected
//! by returning `f64::INFINITY`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub max_iterations: usize,
    /// Stop when every vertex is within `x_tol` of the best one (max norm)...
    pub x_tol: f64,
    /// ...and every objective value is within `f_tol` of the best one.
    pub f_tol: f64,
    /// Relative perturbation used to build the initial simplex.
    pub initial_step: f64,
    /// Absolute perturbation for zero coordinates.
    pub zero_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            x_tol: 1e-10,
            f_tol: 1e-14,
            initial_step: 0.05,
            zero_step: 0.00025,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

impl NelderMead {
    /// Minimizes `f` starting from `x0`. The initial simplex is `x0` plus `x0` with one
    /// coordinate at a time scaled by `1 + initial_step`.
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: &[f64]) -> Minimum {
        let n = x0.len();
        let mut evals = 0usize;
        let mut eval = |x: &[f64]| {
            evals += 1;
            sanitize(f(x))
        };

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut v = x0.to_vec();
            v[i] = if v[i] != 0.0 {
                (1.0 + self.initial_step) * v[i]
            } else {
                self.zero_step
            };
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

        let mut iterations = 0;
        let mut converged = false;
        loop {
            sort_simplex(&mut simplex, &mut values);
            if self.is_converged(&simplex, &values) {
                converged = true;
                break;
            }
            if iterations >= self.max_iterations {
                break;
            }
            iterations += 1;

            let centroid: Vec<f64> = (0..n)
                .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
                .collect();
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let reflected = along(1.0);
            let f_r = eval(&reflected);
            if f_r < values[0] {
                let expanded = along(2.0);
                let f_e = eval(&expanded);
                if f_e < f_r {
                    simplex[n] = expanded;
                    values[n] = f_e;
                } else {
                    simplex[n] = reflected;
                    values[n] = f_r;
                }
                continue;
            }
            if f_r < values[n - 1] {
                simplex[n] = reflected;
                values[n] = f_r;
                continue;
            }
            // contraction, outside if the reflection improved on the worst vertex
            let (trial, f_t, accept) = if f_r < values[n] {
                let c = along(0.5);
                let fc = eval(&c);
                let ok = fc <= f_r;
                (c, fc, ok)
            } else {
                let c = along(-0.5);
                let fc = eval(&c);
                let ok = fc < values[n];
                (c, fc, ok)
            };
            if accept {
                simplex[n] = trial;
                values[n] = f_t;
                continue;
            }
            // shrink towards the best vertex
            let best = simplex[0].clone();
            for i in 1..=n {
                let v: Vec<f64> = best
                    .iter()
                    .zip(&simplex[i])
                    .map(|(b, x)| b + 0.5 * (x - b))
                    .collect();
                values[i] = eval(&v);
                simplex[i] = v;
            }
        }
        Minimum {
            x: simplex[0].clone(),
            f: values[0],
            iterations,
            evaluations: evals,
            converged,
        }
    }

    fn is_converged(&self, simplex: &[Vec<f64>], values: &[f64]) -> bool {
        let best = &simplex[0];
        let width = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(best).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let spread = values[1..]
            .iter()
            .map(|v| (v - values[0]).abs())
            .fold(0.0, f64::max);
        width <= self.x_tol && spread <= self.f_tol
    }
}

fn sort_simplex(simplex: &mut Vec<Vec<f64>>, values: &mut Vec<f64>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    *simplex = order.iter().map(|&i| simplex[i].clone()).collect();
    *values = order.iter().map(|&i| values[i]).collect();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_1d() {
        let m = NelderMead::default().minimize(|x| (x[0] - 3.25).powi(2), &[1.0]);
        assert!(m.converged);
        assert!((m.x[0] - 3.25).abs() < 1e-7, "{m:?}");
    }

    #[test]
    fn rosenbrock_2d() {
        let nm = NelderMead {
            max_iterations: 2000,
            x_tol: 1e-10,
            f_tol: 1e-16,
            ..Default::default()
        };
        let m = nm.minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert!(m.converged);
        assert!(
            (m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6,
            "{m:?}"
        );
    }

    #[test]
    fn rejects_infeasible_region() {
        // minimum of the unconstrained parabola lies at 5, feasible set is x < 4
        let f = |x: &[f64]| {
            if x[0] >= 4.0 {
                f64::INFINITY
            } else {
                (x[0] - 5.0).powi(2)
            }
        };
        let m = NelderMead {
            max_iterations: 500,
            ..Default::default()
        }
        .minimize(f, &[3.9]);
        assert!(m.x[0] < 4.0 && m.x[0] > 3.99, "{m:?}");
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let nm = NelderMead {
            max_iterations: 3,
            ..Default::default()
        };
        let m = nm.minimize(|x| (x[0] - 100.0).powi(2), &[1.0]);
        assert!(!m.converged);
        assert_eq!(m.iterations, 3);
    }

    #[test]
    fn nan_treated_as_infinite() {
        let m = NelderMead::default().minimize(
            |x| {
                if x[0] < 0.0 {
                    f64::NAN
                } else {
                    (x[0] - 0.5).powi(2)
                }
            },
            &[2.0],
        );
        assert!((m.x[0] - 0.5).abs() < 1e-7);
    }
}
