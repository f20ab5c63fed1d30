//! Lower bounds for `‖E(·|η)‖_{H^p}` from outer test functions whose modulus
//! is `t` on a short arc around the maximiser of `|η'|` and `1` elsewhere.

use super::CexpOperator;
use crate::error::{invalid, Result};
use crate::hardy::{analytic_completion, smoothed_arc_log_modulus, CircleGrid, Interpolant};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub t: f64,
    pub half_width: f64,
    pub delta: f64,
}

/// One row of the norm sweep; CSV columns `t,half_width,delta,ratio,theoretical`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSample {
    pub t: f64,
    pub half_width: f64,
    pub delta: f64,
    pub ratio: f64,
    pub theoretical: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalNorm {
    pub samples: Vec<NormSample>,
    pub best: f64,
    pub theoretical: f64,
}

impl EmpiricalNorm {
    pub fn write_csv(&self, mut out: impl std::io::Write) -> std::io::Result<()> {
        writeln!(out, "t,half_width,delta,ratio,theoretical")?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{},{}",
                s.t, s.half_width, s.delta, s.ratio, s.theoretical
            )?;
        }
        Ok(())
    }
}

/// Heights `10^4, 10^6, 10^8`, half-widths `0.3, 0.1, 0.03, 0.01`, `δ = half_width / 8`.
pub fn default_schedule() -> Vec<ScheduleEntry> {
    let mut out = Vec::new();
    for &half_width in &[0.3, 0.1, 0.03, 0.01] {
        for &t in &[1e4, 1e6, 1e8] {
            out.push(ScheduleEntry {
                t,
                half_width,
                delta: half_width / 8.0,
            });
        }
    }
    out
}

impl CexpOperator {
    /// For each schedule entry, builds the outer function `f` with smoothed arc
    /// modulus centred at the maximiser of `|η'|` and measures
    /// `‖E(f|η)‖_p / ‖f‖_p` on `grid`.
    pub fn empirical_norm_lower_bound(
        &self,
        p: f64,
        schedule: &[ScheduleEntry],
        grid: CircleGrid,
    ) -> Result<EmpiricalNorm> {
        if schedule.is_empty() {
            return Err(invalid("norm schedule is empty"));
        }
        let theoretical = self.theoretical_norm(p)?;
        let centre = self.product().derivative_argmax();
        let table = self.table(grid)?;
        let mut samples = Vec::with_capacity(schedule.len());
        for entry in schedule {
            let u = smoothed_arc_log_modulus(grid, centre, entry.half_width, entry.t, entry.delta)?;
            // Interpolating the logarithm keeps off-grid evaluation accurate
            // even when f itself spans many orders of magnitude.
            let h = analytic_completion(&u)?;
            let interp = Interpolant::new(&h);
            let f: Vec<_> = h.values().iter().map(|v| v.exp()).collect();
            let ef = table.fiber_sums(|e| match e.node {
                Some(j) => f[j],
                None => interp.eval(e.point).exp(),
            });
            let norm_f = quasi_norm(f.iter().map(|v| v.norm()), p);
            let norm_ef = quasi_norm(ef.iter().map(|v| v.norm()), p);
            samples.push(NormSample {
                t: entry.t,
                half_width: entry.half_width,
                delta: entry.delta,
                ratio: norm_ef / norm_f,
                theoretical,
            });
        }
        let best = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
        Ok(EmpiricalNorm {
            samples,
            best,
            theoretical,
        })
    }
}

fn quasi_norm(moduli: impl ExactSizeIterator<Item = f64>, p: f64) -> f64 {
    let n = moduli.len() as f64;
    (moduli.map(|m| m.powf(p)).sum::<f64>() / n).powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::BlaschkeProduct;

    #[test]
    fn identity_has_ratio_one() {
        let op = CexpOperator::new(BlaschkeProduct::power(1).unwrap()).unwrap();
        let grid = CircleGrid::new(4096).unwrap();
        let schedule = [ScheduleEntry {
            t: 100.0,
            half_width: 0.2,
            delta: 0.025,
        }];
        for p in [0.3, 0.7] {
            let est = op.empirical_norm_lower_bound(p, &schedule, grid).unwrap();
            assert!((est.best - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn square_ratio_approaches_two() {
        let op = CexpOperator::new(BlaschkeProduct::power(2).unwrap()).unwrap();
        let grid = CircleGrid::new(8192).unwrap();
        let schedule = [ScheduleEntry {
            t: 1e8,
            half_width: 0.3,
            delta: 0.3 / 8.0,
        }];
        let est = op.empirical_norm_lower_bound(0.5, &schedule, grid).unwrap();
        assert!(
            est.best >= 1.9 && est.best <= 2.0 * (1.0 + 1e-6),
            "{}",
            est.best
        );
    }

    #[test]
    fn empty_schedule_rejected() {
        let op = CexpOperator::new(BlaschkeProduct::power(2).unwrap()).unwrap();
        assert!(op
            .empirical_norm_lower_bound(0.5, &[], CircleGrid::new(64).unwrap())
            .is_err());
    }

    #[test]
    fn csv_header() {
        let est = EmpiricalNorm {
            samples: vec![NormSample {
                t: 10.0,
                half_width: 0.1,
                delta: 0.0125,
                ratio: 1.5,
                theoretical: 2.0,
            }],
            best: 1.5,
            theoretical: 2.0,
        };
        let mut out = Vec::new();
        est.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "t,half_width,delta,ratio,theoretical\n10,0.1,0.0125,1.5,2\n"
        );
    }
}
