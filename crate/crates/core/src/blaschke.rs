//! Finite Blaschke products `η(w) = c · ∏ (w − a_j) / (1 − conj(a_j) w)`.
//!
//! A degree-k product maps the unit circle onto itself as a k-fold covering,
//! so every boundary point has exactly k preimages on the circle. The lifted
//! boundary phase
//!
//! ```text
//! Φ(θ) = arg c + kθ + 2 Σ_j arg(1 − a_j e^{−iθ})
//! ```
//!
//! is continuous and strictly increasing with `Φ'(θ) = |η'(e^{iθ})|`, which is
//! what the preimage polisher and the bracketing fallback rely on.

use crate::complex_json;
use crate::error::{invalid, Error, Result};
use crate::roots::{aberth, horner_with_derivative, StopReason};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Zeros with modulus at or above this cap are rejected unless a caller opts in.
pub const DEFAULT_ZERO_CAP: f64 = 0.999;

const POLE_TOLERANCE: f64 = 1e-14;
const RESIDUAL_TOLERANCE: f64 = 1e-10;
const CLUSTER_TOLERANCE: f64 = 1e-8;
const ROTATION_TOLERANCE: f64 = 1e-6;
const DERIVATIVE_GRID: usize = 4096;

/// A point on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct UnitCirclePoint(Complex64);

impl UnitCirclePoint {
    pub fn new(value: Complex64) -> Result<Self> {
        if (value.norm() - 1.0).abs() > 1e-10 || !value.re.is_finite() || !value.im.is_finite() {
            return Err(invalid(format!("{value} is not on the unit circle")));
        }
        Ok(Self(value))
    }

    pub fn from_angle(theta: f64) -> Self {
        Self(Complex64::from_polar(1.0, theta))
    }

    /// Radial projection of a nonzero complex number onto the circle.
    pub fn project(value: Complex64) -> Self {
        Self(value / value.norm())
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    /// Principal argument in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        let a = self.0.arg();
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }
}

impl TryFrom<[f64; 2]> for UnitCirclePoint {
    type Error = Error;
    fn try_from([re, im]: [f64; 2]) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }
}

impl From<UnitCirclePoint> for [f64; 2] {
    fn from(p: UnitCirclePoint) -> Self {
        [p.0.re, p.0.im]
    }
}

/// The k preimages of a boundary point, sorted by principal argument.
#[derive(Clone, Debug, PartialEq)]
pub struct Fiber {
    pub points: Vec<UnitCirclePoint>,
    /// Smallest pairwise chordal distance between returned points.
    pub min_separation: f64,
}

impl Fiber {
    pub fn is_clustered(&self) -> bool {
        self.min_separation < CLUSTER_TOLERANCE
    }
}

impl std::ops::Deref for Fiber {
    type Target = [UnitCirclePoint];
    fn deref(&self) -> &[UnitCirclePoint] {
        &self.points
    }
}

#[derive(Deserialize, Serialize)]
struct RawProduct {
    #[serde(with = "complex_json::vec")]
    zeros: Vec<Complex64>,
    #[serde(with = "complex_json")]
    rotation: Complex64,
}

/// A finite Blaschke product with at least one zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProduct", into = "RawProduct")]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    rotation: Complex64,
}

impl TryFrom<RawProduct> for BlaschkeProduct {
    type Error = Error;
    fn try_from(raw: RawProduct) -> Result<Self> {
        Self::new(raw.zeros, raw.rotation)
    }
}

impl From<BlaschkeProduct> for RawProduct {
    fn from(b: BlaschkeProduct) -> Self {
        RawProduct {
            zeros: b.zeros,
            rotation: b.rotation,
        }
    }
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, rotation: Complex64) -> Result<Self> {
        Self::with_zero_cap(zeros, rotation, DEFAULT_ZERO_CAP)
    }

    /// Like [`BlaschkeProduct::new`] but with a caller-chosen bound on `|a_j|`
    /// (must lie in `(0, 1]`).
    pub fn with_zero_cap(zeros: Vec<Complex64>, rotation: Complex64, cap: f64) -> Result<Self> {
        if !(cap > 0.0 && cap <= 1.0) {
            return Err(invalid(format!("zero cap {cap} must lie in (0, 1]")));
        }
        if zeros.is_empty() {
            return Err(invalid("a Blaschke product needs at least one zero"));
        }
        for (index, a) in zeros.iter().enumerate() {
            let modulus = a.norm();
            if !modulus.is_finite() || modulus >= cap {
                return Err(Error::ZeroOutsideDisk {
                    index,
                    modulus,
                    cap,
                });
            }
        }
        let r = rotation.norm();
        if !r.is_finite() || (r - 1.0).abs() > ROTATION_TOLERANCE {
            return Err(invalid(format!("rotation {rotation} is not unimodular")));
        }
        Ok(Self {
            zeros,
            rotation: rotation / r,
        })
    }

    /// `η(w) = w^k`.
    pub fn power(k: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); k], Complex64::new(1.0, 0.0))
    }

    /// Product with real zeros and no rotation.
    pub fn from_real_zeros(zeros: &[f64]) -> Result<Self> {
        Self::new(
            zeros.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
            Complex64::new(1.0, 0.0),
        )
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn rotation(&self) -> Complex64 {
        self.rotation
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// True when some zero is exactly (to 1e-14) the origin, i.e. `η(0) = 0`.
    pub fn vanishes_at_origin(&self) -> bool {
        self.zeros.iter().any(|a| a.norm() < 1e-14)
    }

    pub fn evaluate(&self, w: Complex64) -> Result<Complex64> {
        let mut value = self.rotation;
        for &a in &self.zeros {
            let den = Complex64::new(1.0, 0.0) - a.conj() * w;
            if den.norm() < POLE_TOLERANCE {
                return Err(Error::PoleProximity(format!("{w}")));
            }
            value *= (w - a) / den;
        }
        Ok(value)
    }

    /// Evaluation on the closed disk, where no pole can occur.
    pub(crate) fn eval_unchecked(&self, w: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.rotation, |acc, &a| {
            acc * (w - a) / (Complex64::new(1.0, 0.0) - a.conj() * w)
        })
    }

    /// `|η'(e^{iθ})| = Σ_j (1 − |a_j|²) / |1 − conj(a_j) e^{iθ}|²`.
    pub fn boundary_derivative_modulus(&self, theta: f64) -> f64 {
        let w = Complex64::from_polar(1.0, theta);
        self.derivative_modulus_at(w)
    }

    pub(crate) fn derivative_modulus_at(&self, w: Complex64) -> f64 {
        self.zeros
            .iter()
            .map(|&a| (1.0 - a.norm_sqr()) / (Complex64::new(1.0, 0.0) - a.conj() * w).norm_sqr())
            .sum()
    }

    /// Continuous lift of `arg η(e^{iθ})`; increases by `2πk` over a period.
    pub fn lifted_phase(&self, theta: f64) -> f64 {
        let k = self.degree() as f64;
        let e = Complex64::from_polar(1.0, -theta);
        let corrections: f64 = self
            .zeros
            .iter()
            .map(|&a| (Complex64::new(1.0, 0.0) - a * e).arg())
            .sum();
        self.rotation.arg() + k * theta + 2.0 * corrections
    }

    /// The closed-form sums `Σ (1−|a|)/(1+|a|)` and `Σ (1+|a|)/(1−|a|)` that
    /// bracket `|η'|` on the circle.
    pub fn derivative_bounds(&self) -> (f64, f64) {
        self.zeros.iter().fold((0.0, 0.0), |(lo, hi), a| {
            let r = a.norm();
            (lo + (1.0 - r) / (1.0 + r), hi + (1.0 + r) / (1.0 - r))
        })
    }

    pub fn derivative_sup(&self) -> f64 {
        self.derivative_extremum(true).1
    }

    pub fn derivative_inf(&self) -> f64 {
        self.derivative_extremum(false).1
    }

    /// Angle in `[0, 2π)` where `|η'|` is largest.
    pub fn derivative_argmax(&self) -> f64 {
        self.derivative_extremum(true).0
    }

    fn derivative_extremum(&self, maximize: bool) -> (f64, f64) {
        let sign = if maximize { 1.0 } else { -1.0 };
        let h = TAU / DERIVATIVE_GRID as f64;
        let samples: Vec<f64> = (0..DERIVATIVE_GRID)
            .map(|j| sign * self.boundary_derivative_modulus(j as f64 * h))
            .collect();
        let mut candidates: Vec<usize> = (0..DERIVATIVE_GRID)
            .filter(|&j| {
                let prev = samples[(j + DERIVATIVE_GRID - 1) % DERIVATIVE_GRID];
                let next = samples[(j + 1) % DERIVATIVE_GRID];
                samples[j] >= prev && samples[j] >= next
            })
            .collect();
        candidates.sort_by(|&a, &b| samples[b].total_cmp(&samples[a]));
        candidates.truncate(16);

        let objective = |t: f64| sign * self.boundary_derivative_modulus(t);
        let mut best = (0.0, f64::NEG_INFINITY);
        for j in candidates {
            let centre = j as f64 * h;
            let (t, v) = golden_section_max(&objective, centre - h, centre + h, 1e-12);
            if v > best.1 {
                best = (t.rem_euclid(TAU), v);
            }
        }
        (best.0, sign * best.1)
    }

    /// Coefficients (ascending) of `c ∏(w − a_j) − z ∏(1 − conj(a_j) w)`, whose
    /// roots are the preimages of `z`.
    fn preimage_polynomial(&self, z: Complex64) -> Vec<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let mut numer = vec![self.rotation];
        let mut denom = vec![one];
        for &a in &self.zeros {
            numer = multiply_linear(&numer, -a, one);
            denom = multiply_linear(&denom, one, -a.conj());
        }
        numer.iter().zip(&denom).map(|(&n, &d)| n - z * d).collect()
    }

    /// All k preimages of a boundary point.
    pub fn preimages(&self, z: UnitCirclePoint) -> Result<Fiber> {
        let target = z.value();
        let k = self.degree();
        let poly = self.preimage_polynomial(target);
        let solved = aberth(&poly, 1.0, 500, 1e-14);

        let mut angles: Vec<f64> = Vec::with_capacity(k);
        let usable =
            solved.roots.len() == k && !matches!(solved.stop_reason, StopReason::Failed(_));
        if usable {
            for root in &solved.roots {
                if root.norm() == 0.0 || !root.re.is_finite() || !root.im.is_finite() {
                    angles.clear();
                    break;
                }
                angles.push(self.polish_angle(root.arg(), target));
            }
        }
        let mut fiber = self.assemble(angles, target)?;
        if fiber.points.len() != k || fiber.is_clustered() {
            log::debug!("aberth returned a degenerate fiber; falling back to phase bracketing");
            fiber = self.assemble(self.bracket_preimages(target), target)?;
        }
        if fiber.is_clustered() {
            log::warn!(
                "preimages closer than {CLUSTER_TOLERANCE:e} (min separation {:e})",
                fiber.min_separation
            );
        }
        Ok(fiber)
    }

    fn assemble(&self, angles: Vec<f64>, target: Complex64) -> Result<Fiber> {
        let mut points = Vec::with_capacity(angles.len());
        let mut worst = 0.0f64;
        for theta in angles {
            let w = Complex64::from_polar(1.0, theta);
            worst = worst.max((self.eval_unchecked(w) - target).norm());
            points.push(UnitCirclePoint::project(w));
        }
        if worst > RESIDUAL_TOLERANCE {
            return Err(Error::ConvergenceFailure {
                residual: worst,
                iterations: 500,
            });
        }
        points.sort_by(|a, b| {
            a.angle()
                .total_cmp(&b.angle())
                .then(a.value().re.total_cmp(&b.value().re))
        });
        let mut min_separation = f64::INFINITY;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                min_separation = min_separation.min((points[i].value() - points[j].value()).norm());
            }
        }
        Ok(Fiber {
            points,
            min_separation,
        })
    }

    /// Newton on the lifted phase, starting from `theta`. The phase derivative
    /// is `|η'| > 0`, so the iteration is well conditioned everywhere.
    fn polish_angle(&self, mut theta: f64, target: Complex64) -> f64 {
        for _ in 0..60 {
            let w = Complex64::from_polar(1.0, theta);
            let miss = (self.eval_unchecked(w) / target).arg();
            let step = miss / self.derivative_modulus_at(w);
            theta -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        theta
    }

    /// Solves `Φ(θ) = arg z + 2πm` for every admissible m by safeguarded
    /// Newton inside brackets.
    fn bracket_preimages(&self, target: Complex64) -> Vec<f64> {
        let start = self.lifted_phase(0.0);
        let base = target.arg();
        let mut m = ((start - base) / TAU).ceil();
        let mut angles = Vec::with_capacity(self.degree());
        while angles.len() < self.degree() {
            let level = base + TAU * m;
            let f = |t: f64| self.lifted_phase(t) - level;
            let (mut lo, mut hi) = (0.0, TAU);
            let mut t = PI;
            for _ in 0..200 {
                let v = f(t);
                if v.abs() < 1e-15 {
                    break;
                }
                if v > 0.0 {
                    hi = t;
                } else {
                    lo = t;
                }
                let newton = t - v / self.boundary_derivative_modulus(t);
                t = if newton > lo && newton < hi {
                    newton
                } else {
                    0.5 * (lo + hi)
                };
                if hi - lo < 1e-15 {
                    break;
                }
            }
            angles.push(t);
            m += 1.0;
        }
        angles
    }
}

/// Multiplies the ascending polynomial `p` by `(c0 + c1 w)`.
fn multiply_linear(p: &[Complex64], c0: Complex64, c1: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i] += c * c0;
        out[i + 1] += c * c1;
    }
    out
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
pub(crate) fn golden_section_max(
    f: &impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Horner evaluation with ascending coefficients.
pub(crate) fn horner(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    horner_with_derivative(coeffs, w).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn worked() -> BlaschkeProduct {
        BlaschkeProduct::from_real_zeros(&[0.0, 0.5]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let id = BlaschkeProduct::from_real_zeros(&[0.0]).unwrap();
        assert_abs_diff_eq!(
            (id.evaluate(c(0.0, 1.0)).unwrap() - c(0.0, 1.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            (worked().evaluate(c(-1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        let sq = BlaschkeProduct::power(2).unwrap();
        let w = Complex64::from_polar(1.0, PI / 4.0);
        assert_abs_diff_eq!(
            (sq.evaluate(w).unwrap() - c(0.0, 1.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn pole_proximity_is_reported() {
        let b = BlaschkeProduct::from_real_zeros(&[0.5]).unwrap();
        assert!(matches!(
            b.evaluate(c(2.0, 0.0)),
            Err(Error::PoleProximity(_))
        ));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(BlaschkeProduct::new(vec![], c(1.0, 0.0)).is_err());
        assert!(matches!(
            BlaschkeProduct::from_real_zeros(&[0.9995]),
            Err(Error::ZeroOutsideDisk { .. })
        ));
        assert!(BlaschkeProduct::with_zero_cap(vec![c(0.9995, 0.0)], c(1.0, 0.0), 1.0).is_ok());
        assert!(BlaschkeProduct::new(vec![c(0.0, 0.0)], c(2.0, 0.0)).is_err());
        let b = BlaschkeProduct::new(vec![c(0.0, 0.0)], c(1.0 + 1e-9, 0.0)).unwrap();
        assert_eq!(b.rotation().norm(), 1.0);
    }

    #[test]
    fn derivative_examples() {
        let sq = BlaschkeProduct::power(2).unwrap();
        for t in [0.0, 0.3, 2.0] {
            assert_abs_diff_eq!(sq.boundary_derivative_modulus(t), 2.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(
            worked().boundary_derivative_modulus(0.0),
            4.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            worked().boundary_derivative_modulus(PI),
            4.0 / 3.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn derivative_extrema_examples() {
        let sq = BlaschkeProduct::power(2).unwrap();
        assert_abs_diff_eq!(sq.derivative_sup(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sq.derivative_inf(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(worked().derivative_sup(), 4.0, epsilon = 1e-9);
        assert_abs_diff_eq!(worked().derivative_inf(), 4.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(worked().derivative_argmax(), 0.0, epsilon = 1e-6);
        let neg = BlaschkeProduct::new(vec![c(0.0, 0.0)], c(-1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(neg.derivative_sup(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn derivative_bound_examples() {
        let (lo, hi) = worked().derivative_bounds();
        assert_abs_diff_eq!(lo, 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 4.0, epsilon = 1e-15);
        assert_eq!(
            BlaschkeProduct::power(1).unwrap().derivative_bounds(),
            (1.0, 1.0)
        );
        assert_eq!(
            BlaschkeProduct::power(3).unwrap().derivative_bounds(),
            (3.0, 3.0)
        );
    }

    #[test]
    fn preimage_examples() {
        let one = UnitCirclePoint::from_angle(0.0);
        for b in [BlaschkeProduct::power(2).unwrap(), worked()] {
            let fiber = b.preimages(one).unwrap();
            assert_eq!(fiber.len(), 2);
            assert_abs_diff_eq!(
                (fiber[0].value() - c(1.0, 0.0)).norm(),
                0.0,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                (fiber[1].value() - c(-1.0, 0.0)).norm(),
                0.0,
                epsilon = 1e-12
            );
        }
        let id = BlaschkeProduct::power(1).unwrap();
        let z = UnitCirclePoint::from_angle(2.5);
        let fiber = id.preimages(z).unwrap();
        assert_eq!(fiber.len(), 1);
        assert_abs_diff_eq!((fiber[0].value() - z.value()).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn bracketing_fallback_agrees_with_aberth() {
        let b = BlaschkeProduct::new(
            vec![c(0.0, 0.0), c(0.3, -0.4), c(-0.7, 0.1), c(0.2, 0.85)],
            Complex64::from_polar(1.0, 0.7),
        )
        .unwrap();
        let z = UnitCirclePoint::from_angle(1.3);
        let fast = b.preimages(z).unwrap();
        let slow = b
            .assemble(b.bracket_preimages(z.value()), z.value())
            .unwrap();
        for (p, q) in fast.iter().zip(slow.iter()) {
            assert_abs_diff_eq!((p.value() - q.value()).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn lifted_phase_winds_k_times() {
        let b = BlaschkeProduct::new(vec![c(0.0, 0.0), c(0.6, 0.6), c(-0.5, 0.0)], c(0.0, 1.0))
            .unwrap();
        let diff = b.lifted_phase(TAU) - b.lifted_phase(0.0);
        assert_abs_diff_eq!(diff, 3.0 * TAU, epsilon = 1e-12);
        let t = 0.9;
        let w = Complex64::from_polar(1.0, b.lifted_phase(t));
        assert_abs_diff_eq!(
            (w - b.evaluate(Complex64::from_polar(1.0, t)).unwrap()).norm(),
            0.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn json_shape() {
        let b = worked();
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"zeros":[[0.0,0.0],[0.5,0.0]],"rotation":[1.0,0.0]}"#);
        let back: BlaschkeProduct = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        assert!(
            serde_json::from_str::<BlaschkeProduct>(r#"{"zeros":[[1.5,0]],"rotation":[1,0]}"#)
                .is_err()
        );
    }

    #[test]
    fn unit_point_validation() {
        assert!(UnitCirclePoint::new(c(0.5, 0.0)).is_err());
        assert_abs_diff_eq!(
            UnitCirclePoint::from_angle(-0.5).angle(),
            TAU - 0.5,
            epsilon = 1e-15
        );
    }
}
