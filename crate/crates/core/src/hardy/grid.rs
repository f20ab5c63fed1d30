use crate::error::{invalid, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Uniform grid of `n` nodes `e^{2πij/n}` on the unit circle.
///
/// `n` is a power of two, at least 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct CircleGrid {
    n: usize,
}

impl CircleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(invalid(format!(
                "grid size {n} must be a power of two >= 8"
            )));
        }
        Ok(Self { n })
    }

    /// Smallest admissible grid with at least `min_nodes` nodes.
    pub fn at_least(min_nodes: usize) -> Self {
        Self {
            n: min_nodes.max(8).next_power_of_two(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n as f64
    }

    pub fn node(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.theta(j))
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = Complex64> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n as f64
    }

    /// Index of the node at `w` when `w` lies within `tol` of one.
    pub fn node_index(&self, w: Complex64, tol: f64) -> Option<usize> {
        let t = w.arg().rem_euclid(TAU);
        let j = (t / self.spacing()).round() as usize % self.n;
        ((self.node(j) - w).norm() <= tol).then_some(j)
    }
}

impl TryFrom<usize> for CircleGrid {
    type Error = crate::Error;
    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<CircleGrid> for usize {
    fn from(g: CircleGrid) -> usize {
        g.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(CircleGrid::new(4).is_err());
        assert!(CircleGrid::new(24).is_err());
        assert_eq!(CircleGrid::new(16).unwrap().len(), 16);
        assert_eq!(CircleGrid::at_least(100).len(), 128);
        assert_eq!(CircleGrid::at_least(1).len(), 8);
    }

    #[test]
    fn node_lookup() {
        let g = CircleGrid::new(64).unwrap();
        assert_eq!(g.node_index(g.node(63), 1e-12), Some(63));
        assert_eq!(
            g.node_index(g.node(0) * Complex64::from_polar(1.0, 1e-3), 1e-9),
            None
        );
    }
}
