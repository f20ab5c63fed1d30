//! Outer functions with prescribed boundary modulus.

use super::grid::CircleGrid;
use super::samples::BoundarySamples;
use crate::error::{invalid, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::{PI, TAU};

/// Boundary samples of `u + iũ`, where `ũ` is the discrete conjugate
/// function (multiplier `−i·sign(k)` on `|k| < n/2`, zero mean).
///
/// The real part reproduces `u` exactly at every node.
pub fn analytic_completion(log_modulus: &BoundarySamples) -> Result<BoundarySamples> {
    let values = log_modulus.values();
    let scale = values.iter().map(|v| v.re.abs()).fold(1.0, f64::max);
    if let Some(bad) = values
        .iter()
        .find(|v| v.im.abs() > 1e-12 * scale || !v.re.is_finite())
    {
        return Err(invalid(format!(
            "log-modulus must be real and finite, found {bad}"
        )));
    }
    let grid = log_modulus.grid();
    let n = grid.len();
    let mut spectrum = log_modulus.spectrum();
    // u + iũ keeps k = 0, doubles 0 < k < n/2, removes negative frequencies.
    for k in 1..n / 2 {
        spectrum[k] *= 2.0;
        spectrum[n - k] = Complex64::new(0.0, 0.0);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
    // Pin the real part to the input so |exp(u + iũ)| = exp(u) holds exactly.
    let completed = spectrum
        .iter()
        .zip(values)
        .map(|(h, u)| Complex64::new(u.re, h.im))
        .collect();
    BoundarySamples::new(grid, completed)
}

/// Samples of the outer function `exp(u + iũ)` with boundary modulus `exp(u)`.
pub fn outer_function(log_modulus: &BoundarySamples) -> Result<BoundarySamples> {
    Ok(analytic_completion(log_modulus)?.map(|h| h.exp()))
}

/// Smoothstep profile on the circle: `log t` on the arc of half-width
/// `half_width − δ` around `center`, `0` beyond `half_width + δ`, and the
/// cubic `3s² − 2s³` in between.
pub fn smoothed_arc_log_modulus(
    grid: CircleGrid,
    center: f64,
    half_width: f64,
    t: f64,
    delta: f64,
) -> Result<BoundarySamples> {
    if !(t >= 1.0 && t.is_finite()) {
        return Err(invalid(format!("arc height t = {t} must be at least 1")));
    }
    if !(delta >= 0.0 && delta < half_width) {
        return Err(invalid(format!(
            "transition width {delta} must lie in [0, {half_width})"
        )));
    }
    if half_width + delta >= PI {
        return Err(invalid(
            "arc plus transition must be shorter than half the circle",
        ));
    }
    let level = t.ln();
    Ok(BoundarySamples::from_real_fn(grid, |theta| {
        let dist = ((theta - center + PI).rem_euclid(TAU) - PI).abs();
        level * arc_profile(dist, half_width, delta)
    }))
}

fn arc_profile(dist: f64, half_width: f64, delta: f64) -> f64 {
    if dist <= half_width - delta {
        1.0
    } else if dist >= half_width + delta {
        0.0
    } else {
        let s = (half_width + delta - dist) / (2.0 * delta);
        s * s * (3.0 - 2.0 * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid(n: usize) -> CircleGrid {
        CircleGrid::new(n).unwrap()
    }

    #[test]
    fn constant_log_modulus() {
        let u = BoundarySamples::from_real_fn(grid(64), |_| 3f64.ln());
        let f = outer_function(&u).unwrap();
        for v in f.values() {
            assert_abs_diff_eq!((v - 3.0).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn cosine_gives_exponential() {
        let g = grid(128);
        let u = BoundarySamples::from_real_fn(g, f64::cos);
        let f = outer_function(&u).unwrap();
        for (j, v) in f.values().iter().enumerate() {
            assert_abs_diff_eq!((v - g.node(j).exp()).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_complex_input() {
        let s = BoundarySamples::from_fn(grid(16), |z| z);
        assert!(outer_function(&s).is_err());
    }

    #[test]
    fn arc_examples() {
        let g = grid(4096);
        let flat = smoothed_arc_log_modulus(g, 1.0, 0.3, 1.0, 0.1).unwrap();
        assert!(flat.values().iter().all(|v| v.re == 0.0));
        let e = std::f64::consts::E;
        let arc = smoothed_arc_log_modulus(g, 0.0, 0.1, e, 0.02).unwrap();
        assert_abs_diff_eq!(arc.values()[0].re, 1.0, epsilon = 1e-15);
        let mean = arc.mean().re;
        assert!((2.0 * 0.08 / TAU..=2.0 * 0.12 / TAU).contains(&mean));
        assert!(smoothed_arc_log_modulus(g, 0.0, 0.1, e, 0.2).is_err());
        assert!(smoothed_arc_log_modulus(g, 0.0, 3.0, e, 0.2).is_err());
        assert!(smoothed_arc_log_modulus(g, 0.0, 0.1, 0.5, 0.02).is_err());
    }

    #[test]
    fn smoothed_arc_outer_function_modulus() {
        let g = grid(4096);
        let t = 50.0;
        // transition width of 12 grid cells
        let delta = 12.0 * g.spacing();
        let u = smoothed_arc_log_modulus(g, 0.5, 0.2, t, delta).unwrap();
        let f = outer_function(&u).unwrap();
        for (v, uj) in f.values().iter().zip(u.values()) {
            let m = v.norm();
            assert!(m >= 1.0 - 1e-12 && m <= t * (1.0 + 1e-12));
            assert_abs_diff_eq!(m, uj.re.exp(), epsilon = 1e-10 * t);
        }
        let centre = g.node_index(Complex64::from_polar(1.0, 0.5), 1.0).unwrap();
        let at_centre = f.values()[centre].norm();
        assert!((at_centre - t).abs() / t < 1e-3);
    }
}
