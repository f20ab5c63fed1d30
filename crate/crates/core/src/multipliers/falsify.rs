//! Numeric search for polynomials with `‖P_Γ f‖_p > ‖f‖_p`.

use super::index_set::{box_points, Dimension, IndexSet};
use crate::error::{invalid, Error, Result};
use crate::hardy::{check_exponent, torus_quasi_norm, MultiIndex, MultiPoly, MAX_TENSOR_DIM};
use crate::optimize::{nelder_mead, NelderMeadConfig};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const INCONCLUSIVE_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsifyConfig {
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub budget: usize,
    pub seed: u64,
    /// Template: box points within this ℓ¹ distance of `Γ`.
    pub ring: u32,
    pub max_terms: usize,
}

impl Default for FalsifyConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            budget: 3000,
            seed: 0,
            ring: 3,
            max_terms: 25,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsifyResult {
    pub polynomial: MultiPoly,
    pub ratio: f64,
    /// Best ratio did not exceed `1 + 1e-9`.
    pub inconclusive: bool,
    /// Ratio reached by each restart, in restart order.
    pub restart_ratios: Vec<f64>,
}

pub fn falsify_contractivity(
    gamma: &IndexSet,
    p: f64,
    budget: usize,
    seed: u64,
) -> Result<FalsifyResult> {
    falsify_contractivity_with(
        gamma,
        p,
        &FalsifyConfig {
            budget,
            seed,
            ..Default::default()
        },
    )
}

pub fn falsify_contractivity_with(
    gamma: &IndexSet,
    p: f64,
    config: &FalsifyConfig,
) -> Result<FalsifyResult> {
    check_exponent(p)?;
    if p >= 1.0 {
        return Err(invalid(format!("p = {p} must lie in (0, 1)")));
    }
    if config.restarts == 0 {
        return Err(invalid("at least one restart is needed"));
    }
    let bounds: Vec<u32> = match gamma {
        IndexSet::Explicit { bounds, .. } => bounds.clone(),
        IndexSet::Symbolic {
            d: Dimension::Infinite,
            ..
        } => return Err(invalid("infinite-dimensional sets have no numeric search")),
        IndexSet::Symbolic {
            d: Dimension::Finite(d),
            ..
        } => vec![[4, 3, 2].get(*d - 1).copied().unwrap_or(2); *d],
    };
    let d = bounds.len();
    if d > MAX_TENSOR_DIM {
        return Err(Error::DimensionTooLarge(d));
    }

    let template = template(gamma, &bounds, config.ring, config.max_terms);
    let kept: Vec<bool> = template.iter().map(|a| gamma.contains(a)).collect();
    let max_deg = bounds.iter().copied().max().unwrap_or(0) as usize;
    let coarse = (4 * (max_deg + 1)).max([128, 32, 16][d - 1]);
    let fine = [4096, coarse * 4, coarse * 2][d - 1];

    let basis: Vec<Vec<Complex64>> = template
        .iter()
        .map(|a| {
            MultiPoly::from_terms(d, [(a.clone(), Complex64::new(1.0, 0.0))])?
                .tensor_samples(coarse)
        })
        .collect::<Result<_>>()?;
    let objective = |x: &[f64]| -> f64 {
        let mut sum_f = 0.0;
        let mut sum_pf = 0.0;
        for node in 0..basis[0].len() {
            let mut f = Complex64::new(0.0, 0.0);
            let mut pf = Complex64::new(0.0, 0.0);
            for (t, b) in basis.iter().enumerate() {
                let term = Complex64::new(x[2 * t], x[2 * t + 1]) * b[node];
                f += term;
                if kept[t] {
                    pf += term;
                }
            }
            sum_f += f.norm().powf(p);
            sum_pf += pf.norm().powf(p);
        }
        -(sum_pf / sum_f).powf(1.0 / p)
    };

    let starts = structured_starts(&template, &bounds, p);
    let nm = NelderMeadConfig {
        max_evaluations: config.budget,
        ..Default::default()
    };
    let runs: Vec<(MultiPoly, f64)> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let x0 = match starts.get(r) {
                Some(x) => x.clone(),
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    rng.set_stream(r as u64);
                    (0..2 * template.len())
                        .map(|_| StandardNormal.sample(&mut rng))
                        .collect()
                }
            };
            let best = nelder_mead(objective, &x0, &nm);
            let f = to_poly(d, &template, &best.x)?;
            let pf = f.filter(|a| gamma.contains(a));
            let ratio = if f.is_empty() {
                0.0
            } else {
                torus_quasi_norm(&pf, p, fine)? / torus_quasi_norm(&f, p, fine)?
            };
            Ok((f, ratio))
        })
        .collect::<Result<_>>()?;

    let restart_ratios: Vec<f64> = runs.iter().map(|(_, r)| *r).collect();
    let best = (0..runs.len())
        .reduce(|a, b| if runs[b].1 > runs[a].1 { b } else { a })
        .unwrap_or(0);
    let (polynomial, ratio) = runs.into_iter().nth(best).expect("at least one restart");
    log::debug!("falsifier ratios per restart: {restart_ratios:?}");
    Ok(FalsifyResult {
        polynomial,
        ratio,
        inconclusive: ratio.is_nan() || ratio <= 1.0 + INCONCLUSIVE_MARGIN,
        restart_ratios,
    })
}

/// Box points within ℓ¹ distance `ring` of `Γ`, nearest first.
fn template(gamma: &IndexSet, bounds: &[u32], ring: u32, max_terms: usize) -> Vec<MultiIndex> {
    let distance = |a: &MultiIndex| -> u32 {
        match gamma {
            IndexSet::Symbolic { j, .. } => j.iter().map(|&c| a[c - 1]).sum(),
            IndexSet::Explicit { members, .. } => members
                .iter()
                .map(|m| m.iter().zip(a).map(|(x, y)| x.abs_diff(*y)).sum())
                .min()
                .unwrap_or(u32::MAX),
        }
    };
    let mut points: Vec<(u32, u32, MultiIndex)> = box_points(bounds)
        .map(|a| (distance(&a), a.iter().sum(), a))
        .filter(|(dist, _, _)| *dist <= ring)
        .collect();
    points.sort();
    points.truncate(max_terms.max(1));
    let mut out: Vec<MultiIndex> = points.into_iter().map(|(_, _, a)| a).collect();
    out.sort();
    out
}

/// Binomial `(1 + c* z_i)^m` and concentration `(1 + z_i)^{b_i}` starts per
/// coordinate, then the product `∏ (1 + z_i)^{b_i}`, restricted to the template.
fn structured_starts(template: &[MultiIndex], bounds: &[u32], p: f64) -> Vec<Vec<f64>> {
    let c_star = (p / (2.0 - p)).sqrt();
    let m = ((2.0 / p).round() as u32).max(1);
    let choose = |n: u32, k: u32| -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    };
    let along = |i: usize, c: f64, deg: u32| -> Vec<f64> {
        template
            .iter()
            .flat_map(|a| {
                let on_axis = a.iter().enumerate().all(|(j, &x)| j == i || x == 0);
                let v = if on_axis && a[i] <= deg {
                    choose(deg, a[i]) * c.powi(a[i] as i32)
                } else {
                    0.0
                };
                [v, 0.0]
            })
            .collect()
    };
    let mut out = Vec::new();
    for (i, &b) in bounds.iter().enumerate() {
        out.push(along(i, c_star, m.min(b).max(1)));
        out.push(along(i, 1.0, b.max(1)));
    }
    if bounds.len() > 1 {
        out.push(
            template
                .iter()
                .flat_map(|a| {
                    [
                        a.iter().zip(bounds).map(|(&x, &b)| choose(b, x)).product(),
                        0.0,
                    ]
                })
                .collect(),
        );
    }
    out
}

fn to_poly(d: usize, template: &[MultiIndex], x: &[f64]) -> Result<MultiPoly> {
    let scale = x.chunks(2).map(|c| c[0].hypot(c[1])).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    MultiPoly::from_terms(
        d,
        template
            .iter()
            .zip(x.chunks(2))
            .map(|(a, c)| (a.clone(), Complex64::new(c[0], c[1]) / scale)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_coefficient_reaches_the_constant() {
        let gamma = IndexSet::explicit(1, vec![10], [vec![1]]).unwrap();
        let out = falsify_contractivity(&gamma, 0.5, 1500, 7).unwrap();
        assert!(out.ratio >= 1.29, "{}", out.ratio);
        assert!(out.ratio <= 1.2990381056766578 + 1e-6, "{}", out.ratio);
        assert!(!out.inconclusive);
    }

    #[test]
    fn evens_exceed_one_and_a_half() {
        let gamma = IndexSet::explicit(1, vec![10], (0..=10).step_by(2).map(|k| vec![k])).unwrap();
        let out = falsify_contractivity(&gamma, 0.5, 3000, 1).unwrap();
        assert!(out.ratio >= 1.5 && out.ratio <= 2.0, "{}", out.ratio);
    }

    #[test]
    fn nj_sets_are_inconclusive() {
        let gamma = IndexSet::symbolic(Dimension::Finite(2), [2]).unwrap();
        let out = falsify_contractivity(&gamma, 0.5, 400, 3).unwrap();
        assert!(out.inconclusive);
        assert!(
            out.restart_ratios.iter().all(|&r| r <= 1.0 + 1e-9),
            "{:?}",
            out.restart_ratios
        );
    }

    #[test]
    fn deterministic_for_a_seed() {
        let gamma = IndexSet::explicit(1, vec![4], [vec![0], vec![3]]).unwrap();
        let a = falsify_contractivity(&gamma, 0.6, 300, 11).unwrap();
        let b = falsify_contractivity(&gamma, 0.6, 300, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn infinite_dimension_rejected() {
        let gamma = IndexSet::symbolic(Dimension::Infinite, [1]).unwrap();
        assert!(falsify_contractivity(&gamma, 0.5, 10, 0).is_err());
    }
}
