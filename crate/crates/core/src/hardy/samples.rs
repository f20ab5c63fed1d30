use super::grid::CircleGrid;
use crate::error::{invalid, Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;
use std::io::{BufRead, Write};

/// Values of a function at the nodes of a [`CircleGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySamples {
    grid: CircleGrid,
    values: Vec<Complex64>,
}

impl BoundarySamples {
    pub fn new(grid: CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid(format!(
                "{} samples supplied for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: CircleGrid, f: impl Fn(Complex64) -> Complex64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: CircleGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|j| Complex64::new(f(grid.theta(j)), 0.0))
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Equal-weight mean over the grid, i.e. the trapezoidal rule for `∫ f dm`.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// `(∫ |f|^p dm)^{1/p}` by the trapezoidal rule.
    pub fn quasi_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let mean =
            self.values.iter().map(|v| v.norm().powf(p)).sum::<f64>() / self.values.len() as f64;
        Ok(mean.powf(1.0 / p))
    }

    /// Discrete Fourier coefficients `(1/n) Σ_j f_j e^{−2πijk/n}` for
    /// `k_min ≤ k ≤ k_max`; every requested `|k|` must be below `n/2`.
    pub fn fourier_coefficients(&self, k_min: i64, k_max: i64) -> Result<Vec<Complex64>> {
        if k_min > k_max {
            return Err(invalid(format!("empty band [{k_min}, {k_max}]")));
        }
        let n = self.grid.len() as i64;
        let band = k_min.abs().max(k_max.abs());
        if 2 * band >= n {
            return Err(Error::BandTooWide {
                band,
                grid: self.grid.len(),
            });
        }
        let spectrum = self.spectrum();
        Ok((k_min..=k_max)
            .map(|k| spectrum[k.rem_euclid(n) as usize])
            .collect())
    }

    /// Full normalised DFT, index `k` holding the coefficient of `z^k`
    /// (negative frequencies wrap to the top half).
    pub fn spectrum(&self) -> Vec<Complex64> {
        let n = self.grid.len();
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Writes `index,theta,re,im` rows with a header line.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "index,theta,re,im")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(
                out,
                "{},{:.17e},{:.17e},{:.17e}",
                j,
                self.grid.theta(j),
                v.re,
                v.im
            )?;
        }
        Ok(())
    }

    pub fn read_csv(input: impl BufRead) -> Result<Self> {
        let mut values = Vec::new();
        for (line_no, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || (line_no == 0 && line.starts_with("index")) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::Parse(format!(
                    "line {}: expected 4 fields",
                    line_no + 1
                )));
            }
            let index: usize = fields[0]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad index", line_no + 1)))?;
            if index != values.len() {
                return Err(Error::Parse(format!(
                    "line {}: indices must be consecutive",
                    line_no + 1
                )));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: bad number {s:?}", line_no + 1)))
            };
            values.push(Complex64::new(num(fields[2])?, num(fields[3])?));
        }
        let grid = CircleGrid::new(values.len())?;
        Self::new(grid, values)
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("exponent p = {p} must be positive")))
    }
}

/// Band-limited trigonometric interpolant of a set of samples, evaluated
/// off-grid by local Lagrange interpolation on a 16x zero-padded grid.
#[derive(Clone, Debug)]
pub struct Interpolant {
    fine: Vec<Complex64>,
}

const OVERSAMPLE: usize = 16;
const STENCIL: usize = 12;

impl Interpolant {
    pub fn new(samples: &BoundarySamples) -> Self {
        let n = samples.grid.len();
        let m = n * OVERSAMPLE;
        let coeffs = samples.spectrum();
        let mut padded = vec![Complex64::new(0.0, 0.0); m];
        let half = n / 2;
        padded[..half].copy_from_slice(&coeffs[..half]);
        for k in 1..half {
            padded[m - k] = coeffs[n - k];
        }
        // Nyquist mode split evenly between ±n/2 so the interpolant stays real for real data.
        padded[half] += 0.5 * coeffs[half];
        padded[m - half] += 0.5 * coeffs[half];
        FftPlanner::new().plan_fft_inverse(m).process(&mut padded);
        Self { fine: padded }
    }

    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        let m = self.fine.len();
        let s = theta.rem_euclid(TAU) / TAU * m as f64;
        let base = s.floor() as i64 - (STENCIL as i64 / 2 - 1);
        let x = s - base as f64;
        let at = |i: usize| self.fine[(base + i as i64).rem_euclid(m as i64) as usize];
        if (x - x.round()).abs() < 1e-13 {
            return at(x.round() as usize);
        }
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        let mut binom = 1.0;
        for i in 0..STENCIL {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let w = sign * binom / (x - i as f64);
            num += at(i) * w;
            den += w;
            binom = binom * (STENCIL - 1 - i) as f64 / (i + 1) as f64;
        }
        num / den
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.eval_angle(w.arg())
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
    fn norm_examples() {
        let g = grid(256);
        let one = BoundarySamples::from_fn(g, |_| Complex64::new(1.0, 0.0));
        assert_abs_diff_eq!(one.quasi_norm(0.5).unwrap(), 1.0, epsilon = 1e-14);
        let binom = BoundarySamples::from_fn(g, |z| (1.0 + z).powi(4));
        assert_abs_diff_eq!(binom.quasi_norm(0.5).unwrap(), 4.0, epsilon = 1e-12);
        let z7 = BoundarySamples::from_fn(g, |z| z.powi(7));
        assert_abs_diff_eq!(z7.quasi_norm(0.3).unwrap(), 1.0, epsilon = 1e-12);
        assert!(one.quasi_norm(0.0).is_err());
        assert!(one.quasi_norm(-1.0).is_err());
    }

    #[test]
    fn fourier_examples() {
        let g = grid(64);
        let binom = BoundarySamples::from_fn(g, |z| (1.0 + z).powi(4));
        let c = binom.fourier_coefficients(0, 4).unwrap();
        for (ck, expect) in c.iter().zip([1.0, 4.0, 6.0, 4.0, 1.0]) {
            assert_abs_diff_eq!((ck - expect).norm(), 0.0, epsilon = 1e-12);
        }
        let conj = BoundarySamples::from_fn(g, |z| z.conj());
        let c = conj.fourier_coefficients(-3, 3).unwrap();
        for (k, ck) in (-3..=3).zip(&c) {
            let expect = if k == -1 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!((ck - expect).norm(), 0.0, epsilon = 1e-13);
        }
        let eta = BoundarySamples::from_fn(grid(256), |z| z * (z - 0.5) / (1.0 - 0.5 * z));
        let c = eta.fourier_coefficients(0, 2).unwrap();
        assert_abs_diff_eq!((c[1] - (-0.5)).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((c[2] - 0.75).norm(), 0.0, epsilon = 1e-14);
        assert!(matches!(
            binom.fourier_coefficients(0, 32),
            Err(Error::BandTooWide { .. })
        ));
    }

    #[test]
    fn interpolant_reproduces_trig_polynomial() {
        let f = |z: Complex64| z.powi(20) * 0.3 + z.conj().powi(7) * Complex64::new(0.0, 2.0) + 1.5;
        let s = BoundarySamples::from_fn(grid(128), f);
        let interp = Interpolant::new(&s);
        for t in [0.0, 0.0123, 1.0, 2.71, 6.2] {
            let w = Complex64::from_polar(1.0, t);
            assert_abs_diff_eq!((interp.eval(w) - f(w)).norm(), 0.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn csv_round_trip() {
        let s = BoundarySamples::from_fn(grid(8), |z| z * Complex64::new(0.25, -1.0));
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = BoundarySamples::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, s);
        assert!(BoundarySamples::read_csv("index,theta,re,im\n0,0,1\n".as_bytes()).is_err());
    }
}
