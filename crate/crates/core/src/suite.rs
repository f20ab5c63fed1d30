//! The property suite run by `verify all`: every check draws its random
//! inputs from a ChaCha stream derived from the seed and the check's position,
//! so reports are reproducible.

use crate::blaschke::{BlaschkeProduct, UnitCirclePoint};
use crate::cexp::{
    birkhoff_james_residual, change_of_variables_residual, default_schedule,
    finite_space_cexp_norm, CexpOperator, CheckReport, FiniteSpace,
};
use crate::error::Result;
use crate::hardy::{
    outer_function, torus_quasi_norm, AnalyticPoly, BoundarySamples, CircleGrid, MultiPoly,
};
use crate::multipliers::{
    apply_multiplier, classify, coefficient_constant, coefficient_ratio_family,
    dirichlet_set_classify, falsify_contractivity, maximize_coefficient_ratio, Counterexample,
    Dimension, IndexSet, PrimeTable, Reason, Status,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::time::Instant;

/// Outcome of one CLI command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: Vec<CheckReport>,
    pub pass: bool,
    /// Seconds.
    pub elapsed: f64,
}

impl RunReport {
    pub fn new(
        command: impl Into<String>,
        inputs: serde_json::Value,
        results: Vec<CheckReport>,
        elapsed: f64,
    ) -> Self {
        let pass = results.iter().all(|r| r.pass);
        Self {
            command: command.into(),
            inputs,
            results,
            pass,
            elapsed,
        }
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<f64>;

/// `(name, tolerance, check)`; a check returns its residual.
const CHECKS: &[(&str, f64, Check)] = &[
    ("blaschke.modulus", 1e-11, modulus),
    ("blaschke.preimages", 1e-10, preimages),
    ("blaschke.finite_difference", 1e-6, finite_difference),
    ("blaschke.bound_sandwich", 1e-9, bound_sandwich),
    ("blaschke.degree_lower_bound", 1e-9, degree_lower_bound),
    ("blaschke.worked_sup", 1e-9, worked_sup),
    ("hardy.parseval", 1e-10, parseval),
    ("hardy.rotation_invariance", 1e-9, rotation_invariance),
    (
        "hardy.substitute_power_isometry",
        1e-8,
        substitute_power_isometry,
    ),
    ("hardy.outer_analyticity", 1e-7, outer_analyticity),
    ("cexp.partition_of_unity", 1e-8, partition_of_unity),
    ("cexp.change_of_variables", 1e-6, change_of_variables),
    ("cexp.worked_closed_form", 1e-8, worked_closed_form),
    ("cexp.idempotence", 1e-8, idempotence),
    ("cexp.route_agreement", 1e-8, route_agreement),
    ("cexp.measurability", 1e-9, measurability),
    ("cexp.self_adjoint", 1e-8, self_adjoint),
    ("cexp.mean_preservation", 1e-9, mean_preservation),
    ("cexp.norm_ceiling", 1e-6, norm_ceiling),
    ("cexp.empirical_norm_square", 1e-12, empirical_norm_square),
    ("cexp.empirical_norm_worked", 1e-12, empirical_norm_worked),
    ("cexp.birkhoff_james", 1e-8, birkhoff_james),
    ("cexp.finite_space", 1e-9, finite_space),
    (
        "multipliers.idempotence_linearity",
        f64::MIN_POSITIVE,
        multiplier_linearity,
    ),
    ("multipliers.nj_contractivity", 1e-9, nj_contractivity),
    ("multipliers.nj_mean", 1e-10, nj_mean),
    ("multipliers.evens_equal_cexp", 1e-10, evens_equal_cexp),
    (
        "multipliers.permutation_invariance",
        0.5,
        permutation_invariance,
    ),
    ("multipliers.golden_table", 0.5, golden_table),
    ("multipliers.coefficient_family", 1e-8, coefficient_family),
    (
        "multipliers.coefficient_constant",
        1e-6,
        coefficient_maximum,
    ),
    ("multipliers.falsifier_single", 1e-12, falsifier_single),
    ("multipliers.falsifier_evens", 1e-12, falsifier_evens),
    ("multipliers.bohr_round_trip", 0.5, bohr_round_trip),
    ("multipliers.dirichlet_smooth", 0.5, dirichlet_smooth),
];

/// Names of every check, in run order.
pub fn check_names() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|(name, _, _)| *name)
}

/// Runs every check, handing each report to `sink` as soon as it is ready.
pub fn run_all(seed: u64, sink: impl FnMut(&CheckReport)) -> Vec<CheckReport> {
    run_selected(seed, |_| true, sink)
}

/// Runs the checks whose names pass `select`. A check sees the same random
/// inputs whether or not the others run.
pub fn run_selected(
    seed: u64,
    select: impl Fn(&str) -> bool,
    mut sink: impl FnMut(&CheckReport),
) -> Vec<CheckReport> {
    CHECKS
        .iter()
        .enumerate()
        .filter(|(_, (name, _, _))| select(name))
        .map(|(i, (name, tolerance, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let started = Instant::now();
            let residual = check(&mut rng).unwrap_or_else(|e| {
                log::error!("{name}: {e}");
                f64::INFINITY
            });
            log::info!("{name}: {residual:e} in {:.2?}", started.elapsed());
            let report = CheckReport::new(*name, residual, *tolerance);
            sink(&report);
            report
        })
        .collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Degree in `1..=max_degree`, zeros in `|a| ≤ 0.9`, optionally one at 0.
pub fn random_product(
    rng: &mut ChaCha8Rng,
    max_degree: usize,
    zero_at_origin: bool,
) -> BlaschkeProduct {
    let k = rng.random_range(1..=max_degree);
    let zeros = (0..k)
        .map(|j| {
            if zero_at_origin && j == 0 {
                c(0.0, 0.0)
            } else {
                Complex64::from_polar(0.9 * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())
            }
        })
        .collect();
    let rotation = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
    BlaschkeProduct::new(zeros, rotation).expect("zeros lie well inside the disc")
}

pub fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> AnalyticPoly {
    AnalyticPoly::new((0..=degree).map(|_| gaussian(rng)).collect())
}

fn worked() -> BlaschkeProduct {
    BlaschkeProduct::from_real_zeros(&[0.0, 0.5]).expect("valid zeros")
}

fn random_point(rng: &mut ChaCha8Rng) -> UnitCirclePoint {
    UnitCirclePoint::from_angle(TAU * rng.random::<f64>())
}

fn sup_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn modulus(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let b = random_product(rng, 10, false);
        let v = b.evaluate(random_point(rng).value())?;
        worst = worst.max((v.norm() - 1.0).abs());
    }
    Ok(worst)
}

fn preimages(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let b = random_product(rng, 10, false);
        let z = random_point(rng);
        let fiber = b.preimages(z)?;
        if fiber.len() != b.degree() {
            return Ok(f64::INFINITY);
        }
        for w in fiber.iter() {
            worst = worst.max((b.evaluate(w.value())? - z.value()).norm());
        }
    }
    Ok(worst)
}

fn finite_difference(rng: &mut ChaCha8Rng) -> Result<f64> {
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let b = random_product(rng, 8, false);
        let t = TAU * rng.random::<f64>();
        let (wp, wm) = (
            Complex64::from_polar(1.0, t + h),
            Complex64::from_polar(1.0, t - h),
        );
        let fd = (b.evaluate(wp)? - b.evaluate(wm)?).norm() / (wp - wm).norm();
        let exact = b.boundary_derivative_modulus(t);
        worst = worst.max((fd - exact).abs() / exact);
    }
    Ok(worst)
}

fn bound_sandwich(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let b = random_product(rng, 8, false);
        let (lo, hi) = b.derivative_bounds();
        worst = worst
            .max(lo - b.derivative_inf())
            .max(b.derivative_sup() - hi);
    }
    Ok(worst.max(0.0))
}

fn degree_lower_bound(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let b = random_product(rng, 8, true);
        worst = worst.max(b.degree() as f64 - b.derivative_sup());
    }
    Ok(worst.max(0.0))
}

fn worked_sup(_: &mut ChaCha8Rng) -> Result<f64> {
    Ok((worked().derivative_sup() - 4.0).abs())
}

fn parseval(rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = CircleGrid::new(256)?;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let coeffs: Vec<Complex64> = (0..41).map(|_| gaussian(rng)).collect();
        let f = BoundarySamples::from_fn(grid, |z| {
            coeffs
                .iter()
                .enumerate()
                .map(|(j, a)| a * z.powi(j as i32 - 20))
                .sum()
        });
        let l2 = f
            .fourier_coefficients(-20, 20)?
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max((f.quasi_norm(2.0)? - l2).abs() / l2);
    }
    Ok(worst)
}

fn rotation_invariance(rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = CircleGrid::new(4096)?;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = random_poly(rng, 10);
        let lambda = grid.node(rng.random_range(0..grid.len()));
        let p = 0.2 + 0.7 * rng.random::<f64>();
        let a = f.quasi_norm_on(grid, p)?;
        let b = f.rotate(lambda).quasi_norm_on(grid, p)?;
        worst = worst.max((a - b).abs() / a);
    }
    Ok(worst)
}

fn substitute_power_isometry(rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = CircleGrid::new(1 << 16)?;
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let f = {
            let degree = rng.random_range(1..=8);
            random_poly(rng, degree)
        };
        let k = rng.random_range(1..=5);
        for p in [0.3, 0.5, 0.8] {
            let a = f.quasi_norm_on(grid, p)?;
            let b = f.substitute_power(k).quasi_norm_on(grid, p)?;
            worst = worst.max((a - b).abs() / a);
        }
    }
    Ok(worst)
}

fn outer_analyticity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = CircleGrid::new(1024)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let a: Vec<Complex64> = (0..6).map(|_| gaussian(rng) * 0.3).collect();
        let u = BoundarySamples::from_real_fn(grid, |t| {
            a.iter()
                .enumerate()
                .map(|(j, aj)| (aj * Complex64::from_polar(1.0, j as f64 * t)).re)
                .sum()
        });
        let f = outer_function(&u)?;
        let negative = f.fourier_coefficients(-(grid.len() as i64) / 4, -1)?;
        worst = negative.iter().map(|v| v.norm()).fold(worst, f64::max);
        for (v, lu) in f.values().iter().zip(u.values()) {
            worst = worst.max((v.norm() - lu.re.exp()).abs());
        }
    }
    Ok(worst)
}

fn partition_of_unity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let op = CexpOperator::new(random_product(rng, 8, true))?;
        for _ in 0..64 {
            worst = worst.max(op.partition_of_unity_residual(random_point(rng))?);
        }
    }
    Ok(worst)
}

fn change_of_variables(rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = CircleGrid::new(1 << 14)?;
    let random = loop {
        let b = random_product(rng, 4, false);
        if b.degree() == 4 {
            break b;
        }
    };
    let mut worst = 0.0f64;
    for b in [BlaschkeProduct::power(2)?, worked(), random] {
        let fs = [
            BoundarySamples::from_fn(grid, |_| c(1.0, 0.0)),
            BoundarySamples::from_fn(grid, |z| z),
            BoundarySamples::from_fn(grid, |z| z.conj().powi(2)),
            BoundarySamples::from_fn(grid, |z| b.evaluate(z).unwrap_or_default().powi(3)),
        ];
        for f in &fs {
            worst = worst.max(change_of_variables_residual(&b, f)?);
        }
    }
    Ok(worst)
}

fn worked_closed_form(_: &mut ChaCha8Rng) -> Result<f64> {
    let eta = worked();
    let op = CexpOperator::new(eta.clone())?;
    let grid = CircleGrid::new(1 << 12)?;
    let z = AnalyticPoly::from_real(&[0.0, 1.0]);
    let expected: Vec<Complex64> = grid
        .nodes()
        .map(|w| -0.5 * eta.evaluate(w).unwrap_or_default())
        .collect();
    let fiber = op.apply_on_grid(&z, grid)?;
    let fourier = op.apply_fourier(&z, 1)?.samples(grid);
    Ok(sup_diff(fiber.values(), &expected).max(sup_diff(fourier.values(), &expected)))
}

fn idempotence(rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = CircleGrid::new(1 << 12)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let op = CexpOperator::new(random_product(rng, 6, true))?;
        let f = {
            let degree = rng.random_range(0..=12);
            random_poly(rng, degree)
        };
        let once = op.apply_fourier(&f, f.degree())?;
        let twice = op.apply_fourier(&once, once.degree())?;
        worst = worst.max(sup_diff(
            once.samples(grid).values(),
            twice.samples(grid).values(),
        ));
        let g1 = op.apply_on_grid(&f, grid)?;
        let g2 = op.apply_samples(&g1)?;
        worst = worst.max(sup_diff(g1.values(), g2.values()));
    }
    Ok(worst)
}

fn route_agreement(rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = CircleGrid::new(1 << 11)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let op = CexpOperator::new(random_product(rng, 6, true))?;
        let f = {
            let degree = rng.random_range(0..=12);
            random_poly(rng, degree)
        };
        let a = op.apply_on_grid(&f, grid)?;
        let b = op.apply_fourier(&f, f.degree())?.samples(grid);
        worst = worst.max(sup_diff(a.values(), b.values()));
    }
    Ok(worst)
}

fn measurability(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let b = random_product(rng, 6, true);
        let op = CexpOperator::new(b.clone())?;
        let f = random_poly(rng, 8);
        let z = random_point(rng);
        let level = UnitCirclePoint::project(b.evaluate(z.value())?);
        let values = b
            .preimages(level)?
            .iter()
            .map(|w| op.apply_pointwise(&f, *w))
            .collect::<Result<Vec<_>>>()?;
        worst = values
            .iter()
            .map(|v| (v - values[0]).norm())
            .fold(worst, f64::max);
    }
    Ok(worst)
}

fn self_adjoint(rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = CircleGrid::new(1 << 12)?;
    let inner = |a: &BoundarySamples, b: &BoundarySamples| -> Complex64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| x * y.conj())
            .sum::<Complex64>()
            / grid.len() as f64
    };
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let op = CexpOperator::new(random_product(rng, 6, true))?;
        let f = random_poly(rng, 8).samples(grid);
        let g = random_poly(rng, 8).samples(grid);
        let left = inner(&op.apply_samples(&f)?, &g);
        let right = inner(&f, &op.apply_samples(&g)?);
        worst = worst.max((left - right).norm());
    }
    Ok(worst)
}

fn mean_preservation(rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = CircleGrid::new(1 << 12)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let op = CexpOperator::new(random_product(rng, 6, true))?;
        let f = random_poly(rng, 8);
        let ef = op.apply_on_grid(&f, grid)?;
        worst = worst.max((ef.mean() - f.coeff(0)).norm());
    }
    Ok(worst)
}

fn norm_ceiling(rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = CircleGrid::new(1 << 12)?;
    let mut worst = 0.0f64;
    for (b, p) in [(BlaschkeProduct::power(2)?, 0.5), (worked(), 2.0 / 3.0)] {
        let op = CexpOperator::new(b)?;
        let ceiling = op.theoretical_norm(p)?;
        for _ in 0..100 {
            let f = {
                let degree = rng.random_range(1..=12);
                random_poly(rng, degree)
            }
            .samples(grid);
            let ratio = op.apply_samples(&f)?.quasi_norm(p)? / f.quasi_norm(p)?;
            worst = worst.max(ratio / ceiling - 1.0);
        }
    }
    Ok(worst.max(0.0))
}

fn empirical_norm_square(_: &mut ChaCha8Rng) -> Result<f64> {
    let op = CexpOperator::new(BlaschkeProduct::power(2)?)?;
    let est = op.empirical_norm_lower_bound(0.5, &default_schedule(), CircleGrid::new(1 << 13)?)?;
    Ok((1.9 - est.best).max(0.0))
}

fn empirical_norm_worked(_: &mut ChaCha8Rng) -> Result<f64> {
    let op = CexpOperator::new(worked())?;
    let est =
        op.empirical_norm_lower_bound(2.0 / 3.0, &default_schedule(), CircleGrid::new(1 << 13)?)?;
    Ok((1.85 - est.best).max(0.0))
}

fn birkhoff_james(_: &mut ChaCha8Rng) -> Result<f64> {
    let op = CexpOperator::new(BlaschkeProduct::power(2)?)?;
    let f = AnalyticPoly::from_real(&[0.0, -1.0, 0.0, 1.0]);
    let g = AnalyticPoly::from_real(&[2.0, 0.0, 1.0, 0.0, 1.0]);
    let mut worst = 0.0f64;
    for p in [0.3, 0.5, 0.8] {
        worst = worst.max(birkhoff_james_residual(&op, p, &f, &g)?.norm());
    }
    Ok(worst)
}

fn finite_space(_: &mut ChaCha8Rng) -> Result<f64> {
    let two = FiniteSpace::uniform(2, vec![vec![0, 1]])?;
    Ok((finite_space_cexp_norm(&two, 0.5)? - 2.0)
        .abs()
        .max((finite_space_cexp_norm(&two, 1.0)? - 1.0).abs()))
}

fn random_multipoly(rng: &mut ChaCha8Rng, d: usize, degree: u32) -> Result<MultiPoly> {
    let bounds = vec![degree; d];
    MultiPoly::from_terms(
        d,
        crate::multipliers::box_points(&bounds)
            .collect::<Vec<_>>()
            .into_iter()
            .map(|a| (a, gaussian(rng))),
    )
}

fn multiplier_linearity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let gamma = IndexSet::symbolic(Dimension::Finite(2), [2])?;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let f = random_multipoly(rng, 2, 4)?;
        let g = random_multipoly(rng, 2, 4)?;
        let (a, b) = (gaussian(rng), gaussian(rng));
        let pf = apply_multiplier(&gamma, &f)?;
        let twice = apply_multiplier(&gamma, &pf)?;
        let combined = apply_multiplier(&gamma, &f.linear_combination(a, &g, b)?)?;
        let separate = pf.linear_combination(a, &apply_multiplier(&gamma, &g)?, b)?;
        let diff = twice.linear_combination(c(1.0, 0.0), &pf, c(-1.0, 0.0))?;
        let diff2 = combined.linear_combination(c(1.0, 0.0), &separate, c(-1.0, 0.0))?;
        worst = diff
            .terms()
            .values()
            .chain(diff2.terms().values())
            .map(|v| v.norm())
            .fold(worst, f64::max);
    }
    Ok(worst)
}

fn nj_contractivity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let gamma = IndexSet::symbolic(Dimension::Finite(2), [2])?;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let f = random_multipoly(rng, 2, 4)?;
        let pf = apply_multiplier(&gamma, &f)?;
        for p in [0.3, 0.5, 0.8] {
            let ratio = torus_quasi_norm(&pf, p, 64)? / torus_quasi_norm(&f, p, 64)?;
            worst = worst.max(ratio - 1.0);
        }
    }
    Ok(worst.max(0.0))
}

fn nj_mean(rng: &mut ChaCha8Rng) -> Result<f64> {
    let gamma = IndexSet::symbolic(Dimension::Finite(2), [2])?;
    let n = 16;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = random_multipoly(rng, 2, 4)?;
        let pf = apply_multiplier(&gamma, &f)?;
        for _ in 0..8 {
            let z1 = random_point(rng).value();
            let mean = (0..n)
                .map(|j| f.eval(&[z1, Complex64::from_polar(1.0, TAU * j as f64 / n as f64)]))
                .sum::<Complex64>()
                / n as f64;
            worst = worst.max((mean - pf.eval(&[z1, c(1.0, 0.0)])).norm());
        }
    }
    Ok(worst)
}

fn evens_equal_cexp(rng: &mut ChaCha8Rng) -> Result<f64> {
    let op = CexpOperator::new(BlaschkeProduct::power(2)?)?;
    let box_degree = 12u32;
    let gamma = IndexSet::explicit(
        1,
        vec![box_degree],
        (0..=box_degree).step_by(2).map(|k| vec![k]),
    )?;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = random_poly(rng, box_degree as usize);
        let mf = MultiPoly::from_terms(
            1,
            f.coeffs()
                .iter()
                .enumerate()
                .map(|(k, v)| (vec![k as u32], *v)),
        )?;
        let pf = apply_multiplier(&gamma, &mf)?;
        let ef = op.apply_fourier(&f, f.degree())?;
        for k in 0..=box_degree as usize + 2 {
            worst = worst.max((pf.coeff(&[k as u32]) - ef.coeff(k)).norm());
        }
    }
    Ok(worst)
}

fn permutation_invariance(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut mismatches = 0;
    for _ in 0..30 {
        let bounds = vec![rng.random_range(1..=3u32), rng.random_range(1..=3u32)];
        let members: Vec<Vec<u32>> = crate::multipliers::box_points(&bounds)
            .filter(|a| a.iter().all(|&x| x == 0) || rng.random::<f64>() < 0.6)
            .collect();
        let swapped: Vec<Vec<u32>> = members.iter().map(|a| vec![a[1], a[0]]).collect();
        let a = classify(&IndexSet::explicit(2, bounds.clone(), members)?, 0.5)?;
        let b = classify(
            &IndexSet::explicit(2, vec![bounds[1], bounds[0]], swapped)?,
            0.5,
        )?;
        let same = a.status == b.status
            && match (&a.reason, &b.reason) {
                (
                    Reason::ConsistentWithNj { j_star: x },
                    Reason::ConsistentWithNj { j_star: y },
                ) => {
                    let flipped: BTreeSet<usize> = x.iter().map(|j| 3 - j).collect();
                    flipped == y.iter().copied().collect()
                }
                _ => true,
            };
        mismatches += usize::from(!same);
    }
    for j in [vec![], vec![1], vec![2], vec![1, 2]] {
        let flipped: Vec<usize> = j.iter().map(|x| 3 - x).collect();
        let a = classify(&IndexSet::symbolic(Dimension::Finite(2), j)?, 0.5)?;
        let b = classify(&IndexSet::symbolic(Dimension::Finite(2), flipped)?, 0.5)?;
        mismatches += usize::from(a.status != b.status);
    }
    Ok(mismatches as f64)
}

fn golden_table(_: &mut ChaCha8Rng) -> Result<f64> {
    let mut failures = 0;
    let symbolic = classify(&IndexSet::symbolic(Dimension::Finite(3), [1, 3])?, 0.5)?;
    failures += usize::from(symbolic.status != Status::Contractive);
    let evens = classify(
        &IndexSet::explicit(1, vec![10], (0..=10).step_by(2).map(|k| vec![k]))?,
        0.5,
    )?;
    let ray_ok = matches!(
        &evens.reason,
        Reason::StructuralCheckFailed(r) if matches!(
            &r.counterexample,
            Some(Counterexample::Ray { beta, k: 1, .. }) if beta == &vec![2]
        )
    );
    failures += usize::from(evens.status != Status::NotContractive || !ray_ok);
    let full = classify(
        &IndexSet::explicit(1, vec![10], (0..=10).map(|k| vec![k]))?,
        0.5,
    )?;
    failures += usize::from(full.status != Status::UndecidableFromTruncation);
    Ok(failures as f64)
}

fn coefficient_family(_: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in [0.25, 0.5, 0.75] {
        let constant = coefficient_constant(p)?;
        for i in 0..1024 {
            let r = coefficient_ratio_family(p, i as f64 / 1024.0)?;
            worst = worst
                .max((r.closed_form - r.quadrature).abs())
                .max(r.closed_form - constant);
        }
        let at_star = coefficient_ratio_family(p, (p / (2.0 - p)).sqrt())?;
        worst = worst.max((at_star.closed_form - constant).abs());
    }
    Ok(worst)
}

fn coefficient_maximum(_: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in [0.25, 0.5, 0.75] {
        let (_, best) = maximize_coefficient_ratio(p, 1024)?;
        worst = worst.max((best - coefficient_constant(p)?).abs());
    }
    Ok(worst)
}

fn falsifier_single(rng: &mut ChaCha8Rng) -> Result<f64> {
    let gamma = IndexSet::explicit(1, vec![10], [vec![1]])?;
    let found = falsify_contractivity(&gamma, 0.5, 3000, rng.random())?;
    Ok((1.29 - found.ratio).max(0.0))
}

fn falsifier_evens(rng: &mut ChaCha8Rng) -> Result<f64> {
    let gamma = IndexSet::explicit(1, vec![10], (0..=10).step_by(2).map(|k| vec![k]))?;
    let found = falsify_contractivity(&gamma, 0.5, 3000, rng.random())?;
    Ok((1.5 - found.ratio).max(0.0))
}

fn bohr_round_trip(_: &mut ChaCha8Rng) -> Result<f64> {
    let table = PrimeTable::up_to(100_000)?;
    let mut failures = 0;
    for n in 1..=100_000u64 {
        failures += usize::from(table.number(&table.exponents(n)?) != Some(n));
    }
    Ok(failures as f64)
}

fn dirichlet_smooth(_: &mut ChaCha8Rng) -> Result<f64> {
    let bound = 100;
    let smooth: BTreeSet<u64> = (1..=bound)
        .filter(|&n| {
            let mut m = n;
            for q in [2, 3] {
                while m % q == 0 {
                    m /= q;
                }
            }
            m == 1
        })
        .collect();
    let mut failures = 0;
    let full = dirichlet_set_classify(&smooth, bound)?;
    failures += usize::from(
        full.reason
            != Reason::DirichletConsistent {
                allowed_primes: vec![2, 3],
            },
    );
    for &n in &smooth {
        let mut less = smooth.clone();
        less.remove(&n);
        if less.is_empty() {
            continue;
        }
        let v = dirichlet_set_classify(&less, bound)?;
        let ok = v.status == Status::NotContractive
            && matches!(v.reason, Reason::DirichletOffending { n: m, .. } if m == n);
        failures += usize::from(!ok);
    }
    Ok(failures as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let names: BTreeSet<_> = check_names().collect();
        assert_eq!(names.len(), CHECKS.len());
    }

    #[test]
    fn report_pass_reflects_results() {
        let ok = CheckReport::new("a", 0.0, 1.0);
        let bad = CheckReport::new("b", 2.0, 1.0);
        assert!(RunReport::new("x", serde_json::Value::Null, vec![ok.clone()], 0.0).pass);
        assert!(!RunReport::new("x", serde_json::Value::Null, vec![ok, bad], 0.0).pass);
    }

    #[test]
    fn cheap_checks_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(worked_sup(&mut rng).unwrap() < 1e-9);
        assert!(golden_table(&mut rng).unwrap() < 0.5);
        assert!(finite_space(&mut rng).unwrap() < 1e-9);
        assert!(dirichlet_smooth(&mut rng).unwrap() < 0.5);
        assert!(permutation_invariance(&mut rng).unwrap() < 0.5);
    }
}
