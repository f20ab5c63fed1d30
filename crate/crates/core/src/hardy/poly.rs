use super::grid::CircleGrid;
use super::samples::{check_exponent, BoundarySamples};
use crate::blaschke::horner;
use crate::error::Result;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

/// Smallest grid used for quasi-norms of polynomials.
const MIN_NORM_GRID: usize = 4096;

/// Analytic polynomial `Σ c_j z^j`, coefficient of `z^j` at index `j`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct AnalyticPoly {
    coeffs: Vec<Complex64>,
}

impl From<Vec<[f64; 2]>> for AnalyticPoly {
    fn from(pairs: Vec<[f64; 2]>) -> Self {
        Self::new(
            pairs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<AnalyticPoly> for Vec<[f64; 2]> {
    fn from(p: AnalyticPoly) -> Self {
        p.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }
}

impl AnalyticPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs
            .last()
            .is_some_and(|c| *c == Complex64::new(0.0, 0.0))
        {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(j: usize, c: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); j + 1];
        coeffs[j] = c;
        Self::new(coeffs)
    }

    /// `(1 + c z)^m`.
    pub fn binomial(c: Complex64, m: u32) -> Self {
        Self::new(vec![Complex64::new(1.0, 0.0), c]).pow(m)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn pow(&self, m: u32) -> Self {
        (0..m).fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, _| {
            &acc * self
        })
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn trimmed(&self, tol: f64) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c.norm() <= tol {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }

    /// `f(z^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1, "substitution power must be at least 1");
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k * self.degree() + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * j] = c;
        }
        Self::new(coeffs)
    }

    /// `f(λz)`.
    pub fn rotate(&self, lambda: Complex64) -> Self {
        let mut power = Complex64::new(1.0, 0.0);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            coeffs.push(c * power);
            power *= lambda;
        }
        Self::new(coeffs)
    }

    /// Euclidean norm of the coefficient vector, which is the `L²(𝕋)` norm.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn samples(&self, grid: CircleGrid) -> BoundarySamples {
        BoundarySamples::from_fn(grid, |z| self.eval(z))
    }

    /// Grid with at least `8 (deg + 1)` and at least 4096 nodes.
    pub fn norm_grid(&self) -> CircleGrid {
        CircleGrid::at_least((8 * (self.degree() + 1)).max(MIN_NORM_GRID))
    }

    pub fn quasi_norm(&self, p: f64) -> Result<f64> {
        self.quasi_norm_on(self.norm_grid(), p)
    }

    pub fn quasi_norm_on(&self, grid: CircleGrid, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let sum: f64 = grid.nodes().map(|z| self.eval(z).norm().powf(p)).sum();
        Ok((sum / grid.len() as f64).powf(1.0 / p))
    }
}

impl Add for &AnalyticPoly {
    type Output = AnalyticPoly;
    fn add(self, rhs: &AnalyticPoly) -> AnalyticPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        AnalyticPoly::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &AnalyticPoly {
    type Output = AnalyticPoly;
    fn sub(self, rhs: &AnalyticPoly) -> AnalyticPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        AnalyticPoly::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &AnalyticPoly {
    type Output = AnalyticPoly;
    fn mul(self, rhs: &AnalyticPoly) -> AnalyticPoly {
        if self.is_zero() || rhs.is_zero() {
            return AnalyticPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        AnalyticPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normalises_trailing_zeros() {
        let p = AnalyticPoly::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert!(AnalyticPoly::from_real(&[0.0]).is_zero());
    }

    #[test]
    fn quasi_norm_examples() {
        assert_abs_diff_eq!(
            AnalyticPoly::from_real(&[1.0]).quasi_norm(0.5).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        let binom = AnalyticPoly::binomial(Complex64::new(1.0, 0.0), 4);
        assert_eq!(binom, AnalyticPoly::from_real(&[1.0, 4.0, 6.0, 4.0, 1.0]));
        assert_abs_diff_eq!(binom.quasi_norm(0.5).unwrap(), 4.0, epsilon = 1e-12);
        let z7 = AnalyticPoly::monomial(7, Complex64::new(1.0, 0.0));
        assert_abs_diff_eq!(z7.quasi_norm(0.3).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn substitute_power_examples() {
        let f = AnalyticPoly::from_real(&[1.0, 1.0]);
        assert_eq!(
            f.substitute_power(3),
            AnalyticPoly::from_real(&[1.0, 0.0, 0.0, 1.0])
        );
        let z = AnalyticPoly::from_real(&[0.0, 1.0]);
        assert_eq!(z.substitute_power(1), z);
        let binom = AnalyticPoly::binomial(Complex64::new(1.0, 0.0), 4);
        let a = binom.quasi_norm(0.5).unwrap();
        let b = binom.substitute_power(5).quasi_norm(0.5).unwrap();
        assert_abs_diff_eq!(a, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn json_is_a_list_of_pairs() {
        let p = AnalyticPoly::from_real(&[1.0, -2.0]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[1.0,0.0],[-2.0,0.0]]");
    }
}
