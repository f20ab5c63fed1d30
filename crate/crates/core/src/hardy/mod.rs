//! Grids, quadrature and quasi-norms on the circle and the d-torus.
//!
//! All integrals use equal weights on uniform grids. For band-limited
//! integrands this is exact; for `|f|^p` with `0 < p < 1` it converges at the
//! rate allowed by the Hölder singularities at zeros of `f`.

mod grid;
mod multipoly;
mod outer;
mod poly;
mod samples;

pub use grid::CircleGrid;
pub use multipoly::{default_torus_nodes, torus_quasi_norm, MultiIndex, MultiPoly, MAX_TENSOR_DIM};
pub use outer::{analytic_completion, outer_function, smoothed_arc_log_modulus};
pub use poly::AnalyticPoly;
pub(crate) use samples::check_exponent;
pub use samples::{BoundarySamples, Interpolant};

/// Functions that can be evaluated at arbitrary points of the unit circle.
pub trait CircleFunction: Sync {
    fn eval_at(&self, w: num_complex::Complex64) -> num_complex::Complex64;
}

impl CircleFunction for AnalyticPoly {
    fn eval_at(&self, w: num_complex::Complex64) -> num_complex::Complex64 {
        self.eval(w)
    }
}

impl CircleFunction for Interpolant {
    fn eval_at(&self, w: num_complex::Complex64) -> num_complex::Complex64 {
        self.eval(w)
    }
}

impl<F: Fn(num_complex::Complex64) -> num_complex::Complex64 + Sync> CircleFunction for F {
    fn eval_at(&self, w: num_complex::Complex64) -> num_complex::Complex64 {
        self(w)
    }
}
