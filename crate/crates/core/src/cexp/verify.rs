use super::CexpOperator;
use crate::blaschke::{BlaschkeProduct, UnitCirclePoint};
use crate::error::{Error, Result};
use crate::hardy::{AnalyticPoly, BoundarySamples, CircleGrid, Interpolant};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One line of a verifier report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual < tolerance,
        }
    }
}

/// `|∫ f |η'| dm − ∫ Σ_{w∈η^{-1}(z)} f(w) dm(z)|`, both sides by quadrature on
/// the grid of `f`.
pub fn change_of_variables_residual(b: &BlaschkeProduct, f: &BoundarySamples) -> Result<f64> {
    let grid = f.grid();
    let left: Complex64 = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| v * b.boundary_derivative_modulus(grid.theta(j)))
        .sum::<Complex64>()
        / grid.len() as f64;
    let interp = Interpolant::new(f);
    let sums = (0..grid.len())
        .into_par_iter()
        .map(|j| {
            let fiber = b.preimages(UnitCirclePoint::from_angle(grid.theta(j)))?;
            Ok(fiber
                .iter()
                .map(|w| match grid.node_index(w.value(), 1e-11) {
                    Some(i) => f.values()[i],
                    None => interp.eval(w.value()),
                })
                .sum::<Complex64>())
        })
        .collect::<Result<Vec<Complex64>>>()?;
    let right = sums.iter().sum::<Complex64>() / grid.len() as f64;
    Ok((left - right).norm())
}

const KERNEL_TOLERANCE: f64 = 1e-8;
const MIN_MODULUS: f64 = 1e-3;

/// `∫ |g|^{p−2} g conj(f) dm` for `f` in the kernel and `g` in the range of
/// `E(·|η)`, with `g` bounded away from zero.
pub fn birkhoff_james_residual(
    op: &CexpOperator,
    p: f64,
    f: &AnalyticPoly,
    g: &AnalyticPoly,
) -> Result<Complex64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(crate::error::invalid(format!("p = {p} must lie in (0, 1)")));
    }
    let ef = op.apply_fourier(f, f.degree())?;
    if ef.l2_norm() >= KERNEL_TOLERANCE {
        return Err(Error::Precondition {
            what: "f must lie in the kernel of E(·|η)".into(),
            measured: ef.l2_norm(),
            tolerance: KERNEL_TOLERANCE,
        });
    }
    let eg = op.apply_fourier(g, g.degree())?;
    let off_range = (&eg - g).l2_norm();
    if off_range >= KERNEL_TOLERANCE {
        return Err(Error::Precondition {
            what: "g must lie in the range of E(·|η)".into(),
            measured: off_range,
            tolerance: KERNEL_TOLERANCE,
        });
    }
    let grid = CircleGrid::at_least((8 * (f.degree() + g.degree() + 1)).max(4096));
    let mut min_modulus = f64::INFINITY;
    let mut total = Complex64::new(0.0, 0.0);
    for z in grid.nodes() {
        let gv = g.eval(z);
        let m = gv.norm();
        min_modulus = min_modulus.min(m);
        total += gv * m.powf(p - 2.0) * f.eval(z).conj();
    }
    if min_modulus <= MIN_MODULUS {
        return Err(Error::Precondition {
            what: "g must stay away from zero on the circle".into(),
            measured: min_modulus,
            tolerance: MIN_MODULUS,
        });
    }
    Ok(total / grid.len() as f64)
}
