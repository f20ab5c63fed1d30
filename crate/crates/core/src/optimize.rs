//! Derivative-free minimisation by the Nelder–Mead simplex method.

#[derive(Clone, Copy, Debug)]
pub struct NelderMeadConfig {
    pub max_evaluations: usize,
    /// Stop when the spread of simplex values falls below this.
    pub f_tolerance: f64,
    /// Edge length of the initial simplex, relative to `max(1, |x_i|)`.
    pub initial_step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_evaluations: 4000,
            f_tolerance: 1e-12,
            initial_step: 0.1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimises `f` starting from `x0` with standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], config: &NelderMeadConfig) -> Minimum {
    let n = x0.len();
    let evaluations = std::cell::Cell::new(0);
    let eval = |x: &[f64]| {
        evaluations.set(evaluations.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += config.initial_step * x[i].abs().max(1.0);
        let v = eval(&x);
        simplex.push((x, v));
    }

    while evaluations.get() < config.max_evaluations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if (worst - best).abs() <= config.f_tolerance * (1.0 + best.abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(1.0);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(2.0);
            let fe = eval(&expanded);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < worst {
                let x = along(0.5);
                let v = eval(&x);
                (x, v)
            } else {
                let x = along(-0.5);
                let v = eval(&x);
                (x, v)
            };
            if fc < fr.min(worst) {
                simplex[n] = (contracted, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, ai) in x.iter_mut().zip(&anchor) {
                        *xi = ai + 0.5 * (*xi - ai);
                    }
                    *v = eval(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        evaluations: evaluations.get(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let cfg = NelderMeadConfig {
            max_evaluations: 20_000,
            f_tolerance: 1e-20,
            initial_step: 0.5,
        };
        let m = nelder_mead(f, &[-1.2, 1.0], &cfg);
        assert!(
            (m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5,
            "{:?}",
            m.x
        );
    }

    #[test]
    fn respects_budget() {
        let cfg = NelderMeadConfig {
            max_evaluations: 50,
            ..Default::default()
        };
        let m = nelder_mead(|x: &[f64]| x.iter().map(|v| v * v).sum(), &[3.0; 6], &cfg);
        assert!(m.evaluations <= 50 + 7);
    }
}
