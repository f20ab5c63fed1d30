//! Python bindings. Structured results (verdicts, reports, polynomials on the
//! torus) cross the boundary as the same JSON the CLI prints, decoded into
//! plain dicts and lists.

use hardycexp::blaschke::{BlaschkeProduct as Product, UnitCirclePoint};
use hardycexp::cexp::{
    default_schedule, finite_space_cexp_norm, CexpOperator as Operator, FiniteSpace,
};
use hardycexp::hardy::{AnalyticPoly, CircleGrid, MultiPoly};
use hardycexp::multipliers::{self, ClassifyOptions, FalsifyConfig, IndexSet as Set};
use hardycexp::suite;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: hardycexp::Error) -> PyErr {
    match e {
        hardycexp::Error::ConvergenceFailure { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Accepts a JSON string, a bare string scalar, or any JSON-able object.
fn from_py<T: serde::de::DeserializeOwned>(
    py: Python<'_>,
    value: &Bound<'_, PyAny>,
) -> PyResult<T> {
    let parsed = match value.extract::<String>() {
        Ok(s) => serde_json::from_str(&s)
            .or_else(|_| serde_json::from_value(serde_json::Value::String(s))),
        Err(_) => {
            let text: String = py
                .import("json")?
                .call_method1("dumps", (value,))?
                .extract()?;
            serde_json::from_str(&text)
        }
    };
    parsed.map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Finite Blaschke product `c ∏ (w − a)/(1 − ā w)`.
#[pyclass(frozen, skip_from_py_object, module = "hardycexp_py")]
#[derive(Clone)]
struct BlaschkeProduct {
    inner: Product,
}

#[pymethods]
impl BlaschkeProduct {
    #[new]
    #[pyo3(signature = (zeros, rotation = Complex64::new(1.0, 0.0)))]
    fn new(zeros: Vec<Complex64>, rotation: Complex64) -> PyResult<Self> {
        Ok(Self {
            inner: Product::new(zeros, rotation).map_err(err)?,
        })
    }

    #[staticmethod]
    fn power(k: usize) -> PyResult<Self> {
        Ok(Self {
            inner: Product::power(k).map_err(err)?,
        })
    }

    #[getter]
    fn zeros(&self) -> Vec<Complex64> {
        self.inner.zeros().to_vec()
    }

    #[getter]
    fn rotation(&self) -> Complex64 {
        self.inner.rotation()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn evaluate(&self, w: Complex64) -> PyResult<Complex64> {
        self.inner.evaluate(w).map_err(err)
    }

    fn boundary_derivative_modulus(&self, theta: f64) -> f64 {
        self.inner.boundary_derivative_modulus(theta)
    }

    fn lifted_phase(&self, theta: f64) -> f64 {
        self.inner.lifted_phase(theta)
    }

    fn derivative_sup(&self) -> f64 {
        self.inner.derivative_sup()
    }

    fn derivative_inf(&self) -> f64 {
        self.inner.derivative_inf()
    }

    fn derivative_argmax(&self) -> f64 {
        self.inner.derivative_argmax()
    }

    /// `(Σ (1−|a|)/(1+|a|), Σ (1+|a|)/(1−|a|))`.
    fn derivative_bounds(&self) -> (f64, f64) {
        self.inner.derivative_bounds()
    }

    /// Preimages of a point on the unit circle, sorted by argument.
    fn preimages(&self, z: Complex64) -> PyResult<Vec<Complex64>> {
        let point = UnitCirclePoint::new(z).map_err(err)?;
        let fiber = self.inner.preimages(point).map_err(err)?;
        Ok(fiber.iter().map(|w| w.value()).collect())
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner })
    }

    fn __repr__(&self) -> String {
        format!(
            "BlaschkeProduct(zeros={:?}, rotation={})",
            self.inner.zeros(),
            self.inner.rotation()
        )
    }
}

/// `E(·|η)` for a Blaschke product with `η(0) = 0`. Polynomials are given
/// as coefficient lists, constant term first.
#[pyclass(frozen, module = "hardycexp_py")]
struct CexpOperator {
    inner: Operator,
}

#[pymethods]
impl CexpOperator {
    #[new]
    fn new(product: &BlaschkeProduct) -> PyResult<Self> {
        Ok(Self {
            inner: Operator::new(product.inner.clone()).map_err(err)?,
        })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    /// `L²` route: coefficients of `Σ_{k≤band} ⟨f, η^k⟩ η^k`.
    #[pyo3(signature = (coeffs, band = None))]
    fn apply_fourier(
        &self,
        coeffs: Vec<Complex64>,
        band: Option<usize>,
    ) -> PyResult<Vec<Complex64>> {
        let f = AnalyticPoly::new(coeffs);
        let band = band.unwrap_or(f.degree());
        Ok(self
            .inner
            .apply_fourier(&f, band)
            .map_err(err)?
            .coeffs()
            .to_vec())
    }

    /// Fiber-sum route at one point of the circle.
    fn apply_pointwise(&self, coeffs: Vec<Complex64>, z: Complex64) -> PyResult<Complex64> {
        let point = UnitCirclePoint::new(z).map_err(err)?;
        self.inner
            .apply_pointwise(&AnalyticPoly::new(coeffs), point)
            .map_err(err)
    }

    /// Fiber-sum route at the `n` nodes `e^{2πij/n}`.
    fn apply_on_grid(&self, coeffs: Vec<Complex64>, n: usize) -> PyResult<Vec<Complex64>> {
        let grid = CircleGrid::new(n).map_err(err)?;
        Ok(self
            .inner
            .apply_on_grid(&AnalyticPoly::new(coeffs), grid)
            .map_err(err)?
            .into_values())
    }

    fn partition_of_unity_residual(&self, z: Complex64) -> PyResult<f64> {
        let point = UnitCirclePoint::new(z).map_err(err)?;
        self.inner.partition_of_unity_residual(point).map_err(err)
    }

    fn theoretical_norm(&self, p: f64) -> PyResult<f64> {
        self.inner.theoretical_norm(p).map_err(err)
    }

    /// Outer-function lower bound over the default schedule, as a dict with
    /// `samples`, `best` and `theoretical`.
    #[pyo3(signature = (p, grid = 8192))]
    fn empirical_norm<'py>(
        &self,
        py: Python<'py>,
        p: f64,
        grid: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let grid = CircleGrid::new(grid).map_err(err)?;
        let est = py
            .detach(|| {
                self.inner
                    .empirical_norm_lower_bound(p, &default_schedule(), grid)
            })
            .map_err(err)?;
        to_py(py, &est)
    }
}

/// Index set `Γ`: symbolic `ℕ_J` or explicit members inside a box.
#[pyclass(frozen, module = "hardycexp_py")]
struct IndexSet {
    inner: Set,
}

#[pymethods]
impl IndexSet {
    /// `ℕ_J` in dimension `d` (an integer, or `"infinite"`); `J` is 1-based.
    #[staticmethod]
    fn symbolic(py: Python<'_>, d: &Bound<'_, PyAny>, j: Vec<usize>) -> PyResult<Self> {
        let d = from_py(py, d)?;
        Ok(Self {
            inner: Set::symbolic(d, j).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(name = "explicit")]
    fn explicit_set(d: usize, bounds: Vec<u32>, members: Vec<Vec<u32>>) -> PyResult<Self> {
        Ok(Self {
            inner: Set::explicit(d, bounds, members).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __contains__(&self, alpha: Vec<u32>) -> bool {
        self.inner.contains(&alpha)
    }

    /// Keeps the terms of a torus polynomial (dict or JSON) indexed by `Γ`.
    fn apply<'py>(&self, py: Python<'py>, poly: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let f: MultiPoly = from_py(py, poly)?;
        to_py(
            py,
            &multipliers::apply_multiplier(&self.inner, &f).map_err(err)?,
        )
    }

    /// Verdict dict; `falsify=True` attaches a numeric witness when one is found.
    #[pyo3(signature = (p, falsify = false, budget = 3000, seed = 0, restarts = 16))]
    fn classify<'py>(
        &self,
        py: Python<'py>,
        p: f64,
        falsify: bool,
        budget: usize,
        seed: u64,
        restarts: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let options = ClassifyOptions {
            falsify: falsify.then(|| FalsifyConfig {
                budget,
                seed,
                restarts,
                ..Default::default()
            }),
        };
        let verdict = py
            .detach(|| multipliers::classify_with(&self.inner, p, &options))
            .map_err(err)?;
        to_py(py, &verdict)
    }

    #[pyo3(signature = (p, budget = 3000, seed = 0, restarts = 16))]
    fn falsify<'py>(
        &self,
        py: Python<'py>,
        p: f64,
        budget: usize,
        seed: u64,
        restarts: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let config = FalsifyConfig {
            budget,
            seed,
            restarts,
            ..Default::default()
        };
        let result = py
            .detach(|| multipliers::falsify_contractivity_with(&self.inner, p, &config))
            .map_err(err)?;
        to_py(py, &result)
    }
}

/// `‖f‖_p` of a polynomial on the circle.
#[pyfunction]
fn quasi_norm(coeffs: Vec<Complex64>, p: f64) -> PyResult<f64> {
    AnalyticPoly::new(coeffs).quasi_norm(p).map_err(err)
}

#[pyfunction]
fn coefficient_constant(p: f64) -> PyResult<f64> {
    multipliers::coefficient_constant(p).map_err(err)
}

/// `(closed_form, quadrature)` ratios for `(1 + cz)^{2/p}`.
#[pyfunction]
fn coefficient_ratio_family(p: f64, c: f64) -> PyResult<(f64, f64)> {
    let r = multipliers::coefficient_ratio_family(p, c).map_err(err)?;
    Ok((r.closed_form, r.quadrature))
}

#[pyfunction]
#[pyo3(signature = (p, grid = 1024))]
fn maximize_coefficient_ratio(p: f64, grid: usize) -> PyResult<(f64, f64)> {
    multipliers::maximize_coefficient_ratio(p, grid).map_err(err)
}

#[pyfunction]
fn bohr_exponents(n: u64) -> PyResult<Vec<u32>> {
    multipliers::bohr_exponents(n).map_err(err)
}

#[pyfunction]
fn bohr_number(kappa: Vec<u32>) -> PyResult<u64> {
    multipliers::bohr_number(&kappa)
        .ok_or_else(|| PyValueError::new_err("the product overflows 64 bits"))
}

#[pyfunction]
fn dirichlet_set_classify<'py>(
    py: Python<'py>,
    members: Vec<u64>,
    bound: u64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &multipliers::dirichlet_set_classify(&members.into_iter().collect(), bound).map_err(err)?,
    )
}

/// Norm of the conditional expectation onto a partition of a finite space.
#[pyfunction]
#[pyo3(signature = (partition, p, weights = None))]
fn finite_space_norm(
    partition: Vec<Vec<usize>>,
    p: f64,
    weights: Option<Vec<f64>>,
) -> PyResult<f64> {
    let n = partition.iter().map(Vec::len).sum();
    let space = match weights {
        Some(w) => FiniteSpace::new(w, partition),
        None => FiniteSpace::uniform(n, partition),
    }
    .map_err(err)?;
    finite_space_cexp_norm(&space, p).map_err(err)
}

/// Runs the verification suite; returns one dict per check.
#[pyfunction]
#[pyo3(signature = (seed = 0, only = None))]
fn verify_all<'py>(
    py: Python<'py>,
    seed: u64,
    only: Option<String>,
) -> PyResult<Bound<'py, PyAny>> {
    let prefix = only.unwrap_or_default();
    let reports = py.detach(|| suite::run_selected(seed, |name| name.starts_with(&prefix), |_| {}));
    to_py(py, &reports)
}

#[pymodule]
fn hardycexp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<BlaschkeProduct>()?;
    m.add_class::<CexpOperator>()?;
    m.add_class::<IndexSet>()?;
    m.add_function(wrap_pyfunction!(quasi_norm, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_constant, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_ratio_family, m)?)?;
    m.add_function(wrap_pyfunction!(maximize_coefficient_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(bohr_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(bohr_number, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_set_classify, m)?)?;
    m.add_function(wrap_pyfunction!(finite_space_norm, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
