//! Conditional expectations on finite probability spaces.

use crate::error::{invalid, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Point masses `weights` with a sub-σ-algebra given by the blocks of `partition`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteSpace {
    weights: Vec<f64>,
    partition: Vec<Vec<usize>>,
}

impl FiniteSpace {
    pub fn new(weights: Vec<f64>, partition: Vec<Vec<usize>>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(invalid("weights must be positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("weights sum to {total}, not 1")));
        }
        let mut seen = vec![false; weights.len()];
        for block in &partition {
            if block.is_empty() {
                return Err(invalid("partition blocks must be nonempty"));
            }
            for &i in block {
                if i >= weights.len() || std::mem::replace(&mut seen[i], true) {
                    return Err(invalid(format!("index {i} is out of range or repeated")));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(invalid("partition does not cover every point"));
        }
        Ok(Self { weights, partition })
    }

    /// Uniform weights on `n` points.
    pub fn uniform(n: usize, partition: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n], partition)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn partition(&self) -> &[Vec<usize>] {
        &self.partition
    }

    /// Block averages, spread back over each block.
    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        for block in &self.partition {
            let mass: f64 = block.iter().map(|&i| self.weights[i]).sum();
            let avg = block
                .iter()
                .map(|&i| f[i] * self.weights[i])
                .sum::<Complex64>()
                / mass;
            for &i in block {
                out[i] = avg;
            }
        }
        out
    }

    pub fn quasi_norm(&self, f: &[Complex64], p: f64) -> f64 {
        let s: f64 = f
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| w * v.norm().powf(p))
            .sum();
        s.powf(1.0 / p)
    }
}

/// `sup_f ‖E(f|Σ′)‖_p / ‖f‖_p` for `0 < p ≤ 1`.
///
/// The supremum is attained at a point mass on the lightest point of some
/// block, giving `max_B (μ(B) / min_{i∈B} μ_i)^{1/p − 1}`.
pub fn finite_space_cexp_norm(space: &FiniteSpace, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("p = {p} must lie in (0, 1]")));
    }
    let exponent = 1.0 / p - 1.0;
    Ok(space
        .partition
        .iter()
        .map(|block| {
            let mass: f64 = block.iter().map(|&i| space.weights[i]).sum();
            let lightest = block
                .iter()
                .map(|&i| space.weights[i])
                .fold(f64::INFINITY, f64::min);
            (mass / lightest).powf(exponent)
        })
        .fold(1.0, f64::max))
}
