//! Idempotent coefficient multipliers `P_Γ : Σ c_α z^α ↦ Σ_{α∈Γ} c_α z^α` on
//! `H^p(𝕋^d)`, `0 < p < 1`.
//!
//! `P_Γ` is contractive exactly when `Γ = ℕ_J` for some set of coordinates
//! `J`. Explicit sets are only known inside a box, so for them the best
//! possible positive answer is "consistent with `ℕ_{J*}`"; negative answers
//! come with the structural check that failed and, on request, a numeric
//! witness polynomial.

mod bohr;
mod classify;
mod coefficient;
mod falsify;
mod index_set;

pub use bohr::{
    bohr_exponents, bohr_number, dirichlet_set_classify, primes_up_to, PrimeTable, MAX_BOHR_INPUT,
};
pub use classify::{
    classify, classify_with, structural_checks, CheckResult, ClassifyOptions, Counterexample,
    Reason, Status, StructuralCheck, Verdict, Witness,
};
pub use coefficient::{
    binomial_series, coefficient_constant, coefficient_ratio_family, maximize_coefficient_ratio,
    CoefficientRatio,
};
pub use falsify::{
    falsify_contractivity, falsify_contractivity_with, FalsifyConfig, FalsifyResult,
};
pub use index_set::{apply_multiplier, box_points, Dimension, IndexSet};
