use super::samples::check_exponent;
use crate::complex_json;
use crate::error::{invalid, Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// Largest dimension handled by dense tensor quadrature.
pub const MAX_TENSOR_DIM: usize = 3;

pub type MultiIndex = Vec<u32>;

/// Sparse analytic polynomial `Σ c_α z^α` on the d-torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMultiPoly", into = "RawMultiPoly")]
pub struct MultiPoly {
    d: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    alpha: MultiIndex,
    #[serde(with = "complex_json")]
    c: Complex64,
}

#[derive(Serialize, Deserialize)]
struct RawMultiPoly {
    d: usize,
    terms: Vec<RawTerm>,
}

impl TryFrom<RawMultiPoly> for MultiPoly {
    type Error = Error;
    fn try_from(raw: RawMultiPoly) -> Result<Self> {
        let mut f = MultiPoly::new(raw.d)?;
        for t in raw.terms {
            f.add_term(t.alpha, t.c)?;
        }
        Ok(f)
    }
}

impl From<MultiPoly> for RawMultiPoly {
    fn from(f: MultiPoly) -> Self {
        RawMultiPoly {
            d: f.d,
            terms: f
                .terms
                .into_iter()
                .map(|(alpha, c)| RawTerm { alpha, c })
                .collect(),
        }
    }
}

impl MultiPoly {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("dimension must be positive"));
        }
        Ok(Self {
            d,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_terms(
        d: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self> {
        let mut f = Self::new(d)?;
        for (alpha, c) in terms {
            f.add_term(alpha, c)?;
        }
        Ok(f)
    }

    /// Adds `c z^α`; cancelled coefficients are removed.
    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) -> Result<()> {
        if alpha.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: alpha.len(),
            });
        }
        let entry = self.terms.entry(alpha).or_default();
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &[u32]) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Keeps the terms whose multi-index satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        Self {
            d: self.d,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if other.d != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        let mut out = Self::new(self.d)?;
        for (alpha, c) in &self.terms {
            out.add_term(alpha.clone(), a * c)?;
        }
        for (alpha, c) in &other.terms {
            out.add_term(alpha.clone(), b * c)?;
        }
        Ok(out)
    }

    /// Largest exponent of each variable.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.d];
        for alpha in self.terms.keys() {
            for (m, &a) in deg.iter_mut().zip(alpha) {
                *m = (*m).max(a);
            }
        }
        deg
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(alpha, c)| {
                alpha
                    .iter()
                    .zip(z)
                    .fold(*c, |acc, (&a, &zj)| acc * zj.powu(a))
            })
            .sum()
    }

    /// Values on the tensor grid of `nodes` points per variable, last variable fastest.
    pub fn tensor_samples(&self, nodes: usize) -> Result<Vec<Complex64>> {
        if self.d > MAX_TENSOR_DIM {
            return Err(Error::DimensionTooLarge(self.d));
        }
        let max_deg = self.degrees().into_iter().max().unwrap_or(0) as usize;
        // powers[e][j] = ω^{j e}
        let powers: Vec<Vec<Complex64>> = (0..=max_deg)
            .map(|e| {
                (0..nodes)
                    .map(|j| {
                        Complex64::from_polar(1.0, TAU * ((j * e) % nodes) as f64 / nodes as f64)
                    })
                    .collect()
            })
            .collect();
        let total = nodes.pow(self.d as u32);
        let mut out = vec![Complex64::new(0.0, 0.0); total];
        let mut index = vec![0usize; self.d];
        for slot in out.iter_mut() {
            *slot = self
                .terms
                .iter()
                .map(|(alpha, c)| {
                    alpha
                        .iter()
                        .zip(&index)
                        .fold(*c, |acc, (&a, &j)| acc * powers[a as usize][j])
                })
                .sum();
            for pos in (0..self.d).rev() {
                index[pos] += 1;
                if index[pos] < nodes {
                    break;
                }
                index[pos] = 0;
            }
        }
        Ok(out)
    }
}

/// `(∫_{𝕋^d} |f|^p dm_d)^{1/p}` by equal-weight tensor quadrature.
pub fn torus_quasi_norm(f: &MultiPoly, p: f64, nodes_per_dim: usize) -> Result<f64> {
    check_exponent(p)?;
    if f.dim() > MAX_TENSOR_DIM {
        return Err(Error::DimensionTooLarge(f.dim()));
    }
    let needed = 4 * (f.degrees().into_iter().max().unwrap_or(0) as usize + 1);
    if nodes_per_dim < needed {
        return Err(invalid(format!(
            "{nodes_per_dim} nodes per dimension is too coarse; need at least {needed}"
        )));
    }
    let samples = f.tensor_samples(nodes_per_dim)?;
    let mean = samples.iter().map(|v| v.norm().powf(p)).sum::<f64>() / samples.len() as f64;
    Ok(mean.powf(1.0 / p))
}

/// Default nodes per dimension for [`torus_quasi_norm`].
pub fn default_torus_nodes(f: &MultiPoly) -> usize {
    (4 * (f.degrees().into_iter().max().unwrap_or(0) as usize + 1)).max(16)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn torus_norm_examples() {
        let z1z2 = MultiPoly::from_terms(2, [(vec![1, 1], one())]).unwrap();
        for p in [0.3, 1.0, 2.0] {
            assert_abs_diff_eq!(
                torus_quasi_norm(&z1z2, p, 16).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
        let lin = MultiPoly::from_terms(2, [(vec![0, 0], one()), (vec![1, 0], one())]).unwrap();
        assert_abs_diff_eq!(
            torus_quasi_norm(&lin, 2.0, 16).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-12
        );
        let prod = MultiPoly::from_terms(
            2,
            [
                (vec![0, 0], one()),
                (vec![1, 0], one()),
                (vec![0, 1], one()),
                (vec![1, 1], one()),
            ],
        )
        .unwrap();
        assert_abs_diff_eq!(
            torus_quasi_norm(&prod, 2.0, 16).unwrap(),
            2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn torus_norm_errors() {
        let big = MultiPoly::from_terms(4, [(vec![1, 0, 0, 0], one())]).unwrap();
        assert!(matches!(
            torus_quasi_norm(&big, 0.5, 16),
            Err(Error::DimensionTooLarge(4))
        ));
        let lin = MultiPoly::from_terms(1, [(vec![3], one())]).unwrap();
        assert!(torus_quasi_norm(&lin, 0.5, 8).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut f = MultiPoly::new(1).unwrap();
        f.add_term(vec![2], one()).unwrap();
        f.add_term(vec![2], -one()).unwrap();
        assert!(f.is_empty());
        assert!(f.add_term(vec![1, 1], one()).is_err());
    }

    #[test]
    fn json_shape() {
        let f = MultiPoly::from_terms(2, [(vec![1, 0], Complex64::new(0.5, -1.0))]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"d":2,"terms":[{"alpha":[1,0],"c":[0.5,-1.0]}]}"#);
        assert_eq!(serde_json::from_str::<MultiPoly>(&s).unwrap(), f);
        assert!(
            serde_json::from_str::<MultiPoly>(r#"{"d":2,"terms":[{"alpha":[1],"c":[1,0]}]}"#)
                .is_err()
        );
    }
}
