//! Norm of the first Taylor coefficient functional on `H^p`, and the test
//! family `f_c(z) = (1 + cz)^{2/p}` that attains it.

use crate::blaschke::golden_section_max;
use crate::error::{invalid, Result};
use crate::hardy::CircleGrid;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const SERIES_TOLERANCE: f64 = 1e-14;
const MAX_SERIES_TERMS: usize = 1 << 22;
const QUADRATURE_NODES: usize = 4096;

fn check_open_unit(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("p = {p} must lie in (0, 1)")))
    }
}

/// `c(1, p) = √(2/p) (1 − p/2)^{1/p − 1/2}`.
pub fn coefficient_constant(p: f64) -> Result<f64> {
    check_open_unit(p)?;
    Ok((2.0 / p).sqrt() * (1.0 - p / 2.0).powf(1.0 / p - 0.5))
}

/// Taylor coefficients of `(1 + cz)^α`, stopping once a coefficient drops
/// below `1e-14` in modulus (or vanishes identically for integer `α`).
pub fn binomial_series(alpha: f64, c: f64) -> Result<Vec<f64>> {
    let integer = alpha >= 0.0 && alpha.fract() == 0.0;
    if !(c.abs() < 1.0 || integer) {
        return Err(invalid(format!(
            "the series of (1 + {c} z)^{alpha} does not converge geometrically"
        )));
    }
    let mut out = vec![1.0];
    let mut a = 1.0;
    for k in 1..MAX_SERIES_TERMS {
        a *= (alpha - (k - 1) as f64) / k as f64 * c;
        if a == 0.0 || a.abs() < SERIES_TOLERANCE {
            break;
        }
        out.push(a);
    }
    Ok(out)
}

/// `|f̂_c(1)| / ‖f_c‖_p` two ways.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRatio {
    /// `(2c/p) (1 + c²)^{−1/p}`.
    pub closed_form: f64,
    /// Coefficient from the binomial series, norm from quadrature of the
    /// boundary values of the principal power.
    pub quadrature: f64,
}

pub fn coefficient_ratio_family(p: f64, c: f64) -> Result<CoefficientRatio> {
    check_open_unit(p)?;
    if !(0.0..=1.0).contains(&c) {
        return Err(invalid(format!("c = {c} must lie in [0, 1]")));
    }
    let closed_form = coefficient_ratio_closed_form(p, c);
    let alpha = 2.0 / p;
    let first = if c < 1.0 || alpha.fract() == 0.0 {
        binomial_series(alpha, c)?.get(1).copied().unwrap_or(0.0)
    } else {
        alpha * c
    };
    let grid = CircleGrid::new(QUADRATURE_NODES)?;
    let mean = grid
        .nodes()
        .map(|z| {
            (Complex64::new(1.0, 0.0) + c * z)
                .powf(alpha)
                .norm()
                .powf(p)
        })
        .sum::<f64>()
        / grid.len() as f64;
    Ok(CoefficientRatio {
        closed_form,
        quadrature: first.abs() / mean.powf(1.0 / p),
    })
}

fn coefficient_ratio_closed_form(p: f64, c: f64) -> f64 {
    2.0 * c / p * (1.0 + c * c).powf(-1.0 / p)
}

/// Maximiser of the closed-form ratio over `c ∈ [0, 1)`: a `grid`-point scan
/// followed by golden-section refinement around the best point.
pub fn maximize_coefficient_ratio(p: f64, grid: usize) -> Result<(f64, f64)> {
    check_open_unit(p)?;
    if grid < 3 {
        return Err(invalid("the c-grid needs at least 3 points"));
    }
    let h = 1.0 / grid as f64;
    let f = |c: f64| coefficient_ratio_closed_form(p, c);
    let best = (0..grid)
        .map(|i| i as f64 * h)
        .max_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap_or(0.0);
    Ok(golden_section_max(
        &f,
        (best - h).max(0.0),
        (best + h).min(1.0),
        1e-12,
    ))
}
