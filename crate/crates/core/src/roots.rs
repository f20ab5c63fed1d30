//! Simultaneous all-roots iteration (Aberth–Ehrlich) for complex polynomials.

use num_complex::Complex64;
use std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Converged(usize),
    MaxIteration(usize),
    Failed(usize),
}

#[derive(Clone, Debug)]
pub struct Roots {
    pub roots: Vec<Complex64>,
    pub stop_reason: StopReason,
}

/// Evaluates `p` and `p'` at `w` by Horner's scheme. Coefficients are ascending.
pub fn horner_with_derivative(coeffs: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        deriv = deriv * w + value;
        value = value * w + c;
    }
    (value, deriv)
}

/// Finds all roots of the polynomial with ascending coefficients `coeffs`.
///
/// Starting points sit on the circle of radius `radius` at equispaced angles
/// with a small deterministic offset, which keeps them off any symmetry axis
/// of the polynomial.
pub fn aberth(coeffs: &[Complex64], radius: f64, max_iterations: usize, epsilon: f64) -> Roots {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1] == Complex64::new(0.0, 0.0) {
        end -= 1;
    }
    let coeffs = &coeffs[..end];
    if coeffs.len() < 2 {
        return Roots {
            roots: Vec::new(),
            stop_reason: StopReason::Converged(0),
        };
    }
    let degree = coeffs.len() - 1;
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|j| {
            let angle = TAU * (j as f64 + 0.25) / degree as f64
                + 0.1 * ((j as f64 + 1.0) * 1.618).sin() / degree as f64;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    for iteration in 1..=max_iterations {
        let mut largest_step = 0.0f64;
        for j in 0..degree {
            let w = roots[j];
            let (value, deriv) = horner_with_derivative(coeffs, w);
            if value.norm() == 0.0 {
                continue;
            }
            let newton = value / deriv;
            let repulsion: Complex64 = roots
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &r)| (w - r).inv())
                .sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return Roots {
                    roots,
                    stop_reason: StopReason::Failed(iteration),
                };
            }
            roots[j] = w - step;
            largest_step = largest_step.max(step.norm() / (1.0 + w.norm()));
        }
        if largest_step < epsilon {
            return Roots {
                roots,
                stop_reason: StopReason::Converged(iteration),
            };
        }
    }
    Roots {
        roots,
        stop_reason: StopReason::MaxIteration(max_iterations),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_of_unity() {
        // w^5 - 1
        let mut coeffs = vec![c(0.0, 0.0); 6];
        coeffs[0] = c(-1.0, 0.0);
        coeffs[5] = c(1.0, 0.0);
        let out = aberth(&coeffs, 1.0, 200, 1e-15);
        assert!(matches!(out.stop_reason, StopReason::Converged(_)));
        for r in &out.roots {
            let (v, _) = horner_with_derivative(&coeffs, *r);
            assert!(v.norm() < 1e-13);
        }
    }

    #[test]
    fn quadratic_with_known_roots() {
        // (w - 2)(w + 0.5i) = w^2 + (-2 + 0.5i) w - i
        let coeffs = [c(0.0, -1.0), c(-2.0, 0.5), c(1.0, 0.0)];
        let mut out = aberth(&coeffs, 1.0, 200, 1e-15).roots;
        out.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((out[0] - c(0.0, -0.5)).norm() < 1e-12);
        assert!((out[1] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn constant_has_no_roots() {
        let out = aberth(&[c(3.0, 0.0), c(0.0, 0.0)], 1.0, 10, 1e-15);
        assert!(out.roots.is_empty());
    }
}
