//! Numerical toolkit for contractive projections on the Hardy spaces `H^p`,
//! `0 < p < 1`.
//!
//! * [`blaschke`]: finite Blaschke products, boundary derivatives, preimages.
//! * [`hardy`]: circle and torus grids, quasi-norms, Fourier coefficients,
//!   outer functions.
//! * [`cexp`]: the conditional expectation `E(·|η)` for a finite Blaschke
//!   product with `η(0) = 0`, its identities and its operator norm.
//! * [`multipliers`]: idempotent coefficient multipliers on `H^p(𝕋^d)` and on
//!   Dirichlet series.
//! * [`suite`]: the batch verification suite behind `verify all`.

pub mod blaschke;
pub mod cexp;
mod complex_json;
mod error;
pub mod hardy;
pub mod multipliers;
pub mod optimize;
mod roots;
pub mod suite;

pub use blaschke::{BlaschkeProduct, Fiber, UnitCirclePoint};
pub use error::{Error, Result};
pub use num_complex::Complex64;
