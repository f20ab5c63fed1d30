//! The conditional expectation `E(·|η)` onto `η`-measurable functions, for a
//! finite Blaschke product `η` with `η(0) = 0`.
//!
//! Two independent routes are provided:
//!
//! * the fiber sum `E(f|η)(z) = Σ_{w∼z} f(w) / |η'(w)|`, where `w ∼ z` means
//!   `η(w) = η(z)` ([`CexpOperator::apply_pointwise`], [`CexpOperator::apply_on_grid`]);
//! * the `L²` expansion `E(f|η) = Σ_{k≥0} ⟨f, η^k⟩ η^k` for analytic `f`
//!   ([`CexpOperator::apply_fourier`]).

mod finite;
mod norm;
mod verify;

pub use finite::{finite_space_cexp_norm, FiniteSpace};
pub use norm::{default_schedule, EmpiricalNorm, NormSample, ScheduleEntry};
pub use verify::{birkhoff_james_residual, change_of_variables_residual, CheckReport};

use crate::blaschke::{BlaschkeProduct, UnitCirclePoint};
use crate::error::{invalid, Error, Result};
use crate::hardy::{AnalyticPoly, BoundarySamples, CircleFunction, CircleGrid, Interpolant};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

const WEIGHT_TOLERANCE: f64 = 1e-9;
const ON_GRID_TOLERANCE: f64 = 1e-11;

/// One point of a fiber together with its averaging weight `1/|η'(w)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberEntry {
    pub point: Complex64,
    pub weight: f64,
    /// Grid index when the point coincides with a node.
    pub node: Option<usize>,
}

/// For every node `z_j` of a grid, the fiber `{w : η(w) = η(z_j)}` with weights.
#[derive(Debug)]
pub struct FiberTable {
    grid: CircleGrid,
    fibers: Vec<Vec<FiberEntry>>,
    worst_weight_residual: f64,
}

impl FiberTable {
    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn fiber(&self, j: usize) -> &[FiberEntry] {
        &self.fibers[j]
    }

    /// Largest `|Σ weights − 1|` over all nodes.
    pub fn worst_weight_residual(&self) -> f64 {
        self.worst_weight_residual
    }

    /// `Σ_{w∼z_j} value(w)·weight(w)` for every node.
    pub fn fiber_sums(&self, value: impl Fn(&FiberEntry) -> Complex64 + Sync) -> Vec<Complex64> {
        self.fibers
            .par_iter()
            .map(|fiber| fiber.iter().map(|e| value(e) * e.weight).sum())
            .collect()
    }
}

/// `E(·|η)` for a finite Blaschke product vanishing at the origin.
#[derive(Debug)]
pub struct CexpOperator {
    product: BlaschkeProduct,
    tables: Mutex<HashMap<usize, Arc<FiberTable>>>,
}

impl Clone for CexpOperator {
    fn clone(&self) -> Self {
        Self::new(self.product.clone()).expect("validated at construction")
    }
}

impl CexpOperator {
    pub fn new(product: BlaschkeProduct) -> Result<Self> {
        if !product.vanishes_at_origin() {
            return Err(invalid(
                "conditional expectation requires a zero at the origin (η(0) = 0)",
            ));
        }
        Ok(Self {
            product,
            tables: Mutex::new(HashMap::new()),
        })
    }

    pub fn product(&self) -> &BlaschkeProduct {
        &self.product
    }

    pub fn degree(&self) -> usize {
        self.product.degree()
    }

    /// The fiber table for `grid`, built on first use and cached.
    pub fn table(&self, grid: CircleGrid) -> Result<Arc<FiberTable>> {
        if let Some(t) = self
            .tables
            .lock()
            .expect("table cache poisoned")
            .get(&grid.len())
        {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(self.build_table(grid)?);
        self.tables
            .lock()
            .expect("table cache poisoned")
            .insert(grid.len(), Arc::clone(&table));
        Ok(table)
    }

    fn build_table(&self, grid: CircleGrid) -> Result<FiberTable> {
        let b = &self.product;
        let fibers = (0..grid.len())
            .into_par_iter()
            .map(|j| {
                let image = UnitCirclePoint::project(b.eval_unchecked(grid.node(j)));
                let fiber = b.preimages(image)?;
                Ok(fiber
                    .iter()
                    .map(|w| FiberEntry {
                        point: w.value(),
                        weight: 1.0 / b.derivative_modulus_at(w.value()),
                        node: grid.node_index(w.value(), ON_GRID_TOLERANCE),
                    })
                    .collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        let worst = fibers
            .iter()
            .map(|f| (f.iter().map(|e| e.weight).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max);
        if worst > WEIGHT_TOLERANCE {
            return Err(Error::Precondition {
                what: "fiber weights must sum to one".into(),
                measured: worst,
                tolerance: WEIGHT_TOLERANCE,
            });
        }
        Ok(FiberTable {
            grid,
            fibers,
            worst_weight_residual: worst,
        })
    }

    /// `Σ_{w∼z} f(w)/|η'(w)|` at a single boundary point.
    pub fn apply_pointwise(
        &self,
        f: &impl CircleFunction,
        z: UnitCirclePoint,
    ) -> Result<Complex64> {
        let b = &self.product;
        let image = UnitCirclePoint::project(b.eval_unchecked(z.value()));
        let fiber = b.preimages(image)?;
        Ok(fiber
            .iter()
            .map(|w| f.eval_at(w.value()) / b.derivative_modulus_at(w.value()))
            .sum())
    }

    /// Fiber-sum route for sampled input, evaluating off-grid points through
    /// the band-limited interpolant of the samples.
    pub fn apply_pointwise_samples(
        &self,
        f: &BoundarySamples,
        z: UnitCirclePoint,
    ) -> Result<Complex64> {
        self.apply_pointwise(&Interpolant::new(f), z)
    }

    /// Fiber-sum route evaluated at every node of `grid`.
    pub fn apply_on_grid(
        &self,
        f: &impl CircleFunction,
        grid: CircleGrid,
    ) -> Result<BoundarySamples> {
        let table = self.table(grid)?;
        let values = table.fiber_sums(|e| f.eval_at(e.point));
        BoundarySamples::new(grid, values)
    }

    /// Fiber-sum route on the sample grid; on-grid fiber points use the
    /// samples directly.
    pub fn apply_samples(&self, f: &BoundarySamples) -> Result<BoundarySamples> {
        let table = self.table(f.grid())?;
        let interp = Interpolant::new(f);
        let values = table.fiber_sums(|e| match e.node {
            Some(j) => f.values()[j],
            None => interp.eval(e.point),
        });
        BoundarySamples::new(f.grid(), values)
    }

    /// `|Σ_{w∼z} 1/|η'(w)| − 1|`.
    pub fn partition_of_unity_residual(&self, z: UnitCirclePoint) -> Result<f64> {
        let b = &self.product;
        let fiber = b.preimages(UnitCirclePoint::project(b.eval_unchecked(z.value())))?;
        let total: f64 = fiber
            .iter()
            .map(|w| 1.0 / b.derivative_modulus_at(w.value()))
            .sum();
        Ok((total - 1.0).abs())
    }

    /// Grid on which the `L²` expansion is computed for input of degree `deg`
    /// truncated at `band`.
    ///
    /// `η^band` has poles of order up to `band·m` at `1/ā` (`m` the largest
    /// zero multiplicity), so its Taylor coefficients behave like
    /// `C(N+K−1, K−1) r^N` with `K = band·m`; the grid holds `N` terms once
    /// that bound drops below `1e-17`.
    pub fn expansion_grid(&self, deg: usize, band: usize) -> CircleGrid {
        let zeros = self.product.zeros();
        let r = zeros.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let tail = if r < 1e-3 {
            0
        } else {
            let multiplicity = zeros
                .iter()
                .map(|a| zeros.iter().filter(|b| (*a - **b).norm() < 1e-9).count())
                .max()
                .unwrap_or(1);
            pole_tail(r, (band * multiplicity).max(1), 1e-17)
        };
        let needed = (8 * (deg + 1))
            .max(2 * (band * self.degree() + tail + deg + 1))
            .max(256);
        CircleGrid::at_least(needed)
    }

    /// `Σ_{k=0}^{band} ⟨f, η^k⟩ η^k`, expanded into Taylor coefficients on a
    /// grid fine enough that the aliasing error is below double precision.
    ///
    /// Since `η` vanishes at the origin, `⟨f, η^k⟩ = 0` once `k > deg f`.
    /// A smaller band logs a warning with `‖f − Σ_{k≤band} ⟨f, η^k⟩ η^k‖₂`.
    pub fn apply_fourier(&self, f: &AnalyticPoly, band: usize) -> Result<AnalyticPoly> {
        let (poly, inner) = self.expand(f, band)?;
        if band < f.degree() {
            let kept: f64 = inner.iter().map(|c| c.norm_sqr()).sum();
            let residual = (f.l2_norm().powi(2) - kept).max(0.0).sqrt();
            log::warn!(
                "band {band} below degree {}: residual {residual:e}",
                f.degree()
            );
        }
        Ok(poly)
    }

    /// `‖E f − Σ_{k≤band} ⟨f, η^k⟩ η^k‖₂`.
    pub fn truncation_residual(&self, f: &AnalyticPoly, band: usize) -> Result<f64> {
        let full = f.degree().max(band);
        let (_, coeffs) = self.expand(f, full)?;
        // η^k are orthonormal, so the residual is the ℓ² norm of the tail.
        Ok(coeffs[band.min(coeffs.len())..]
            .iter()
            .skip(1)
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    fn expand(&self, f: &AnalyticPoly, band: usize) -> Result<(AnalyticPoly, Vec<Complex64>)> {
        let grid = self.expansion_grid(f.degree(), band);
        let n = grid.len();
        let eta: Vec<Complex64> = grid
            .nodes()
            .map(|z| self.product.eval_unchecked(z))
            .collect();
        let fv: Vec<Complex64> = grid.nodes().map(|z| f.eval(z)).collect();
        let mut power = vec![Complex64::new(1.0, 0.0); n];
        let mut sum = vec![Complex64::new(0.0, 0.0); n];
        let mut inner = Vec::with_capacity(band + 1);
        for _ in 0..=band {
            let c: Complex64 = fv
                .iter()
                .zip(&power)
                .map(|(a, b)| a * b.conj())
                .sum::<Complex64>()
                / n as f64;
            for (s, pw) in sum.iter_mut().zip(&power) {
                *s += c * pw;
            }
            inner.push(c);
            for (pw, e) in power.iter_mut().zip(&eta) {
                *pw *= e;
            }
        }
        FftPlanner::new().plan_fft_forward(n).process(&mut sum);
        let scale = 1.0 / n as f64;
        let coeffs: Vec<Complex64> = sum[..n / 2].iter().map(|c| c * scale).collect();
        let magnitude = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Ok((
            AnalyticPoly::new(coeffs).trimmed(1e-16 * magnitude.max(1.0)),
            inner,
        ))
    }

    /// `‖η'‖_∞^{1/p − 1}`, the norm of `E(·|η)` on `H^p` for `0 < p < 1`.
    pub fn theoretical_norm(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid(format!("p = {p} must lie in (0, 1)")));
        }
        Ok(self.product.derivative_sup().powf(1.0 / p - 1.0))
    }
}

/// Smallest `N` with `C(N+K−1, K−1) r^N < eps`.
fn pole_tail(r: f64, k: usize, eps: f64) -> usize {
    let target = eps.ln();
    let mut log_term = 0.0;
    let mut n = 0usize;
    // The bound is increasing until N ≈ K r / (1 − r), so only stop after that.
    let peak = (k as f64 * r / (1.0 - r)).ceil() as usize;
    while n <= peak || log_term >= target {
        log_term += ((n + k) as f64 / (n + 1) as f64).ln() + r.ln();
        n += 1;
    }
    n
}
