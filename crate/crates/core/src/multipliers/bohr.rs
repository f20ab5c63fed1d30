//! Prime-exponent vectors `κ(n)` with `n = ∏ p_j^{κ_j}`, and the
//! classification of integer index sets for Dirichlet series.

use super::classify::{Reason, Status, Verdict};
use crate::error::{invalid, Result};
use std::collections::BTreeSet;

/// Primes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Largest `n` accepted by [`bohr_exponents`]; the sieve behind it is linear in `n`.
pub const MAX_BOHR_INPUT: u64 = 100_000_000;

/// Primes up to a limit, for repeated `κ` computations.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    primes: Vec<u64>,
    limit: u64,
}

impl PrimeTable {
    pub fn up_to(limit: u64) -> Result<Self> {
        if limit > MAX_BOHR_INPUT {
            return Err(invalid(format!(
                "{limit} exceeds the sieve limit {MAX_BOHR_INPUT}"
            )));
        }
        Ok(Self {
            primes: primes_up_to(limit),
            limit,
        })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `κ(n)` for `1 ≤ n ≤ limit`.
    pub fn exponents(&self, n: u64) -> Result<Vec<u32>> {
        if n == 0 || n > self.limit {
            return Err(invalid(format!("κ({n}) needs 1 ≤ n ≤ {}", self.limit)));
        }
        let mut rest = n;
        let mut out = Vec::new();
        for &q in &self.primes {
            if q * q > rest {
                break;
            }
            let mut e = 0;
            while rest.is_multiple_of(q) {
                rest /= q;
                e += 1;
            }
            out.push(e);
        }
        if rest > 1 {
            // What remains is a prime.
            let index = self.primes.partition_point(|&q| q < rest);
            out.resize(index, 0);
            out.push(1);
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        Ok(out)
    }

    /// `∏ p_j^{κ_j}`, or `None` on overflow or when `κ` is longer than the table.
    pub fn number(&self, kappa: &[u32]) -> Option<u64> {
        if kappa.len() > self.primes.len() {
            return None;
        }
        kappa
            .iter()
            .zip(&self.primes)
            .try_fold(1u64, |acc, (&e, &q)| acc.checked_mul(q.checked_pow(e)?))
    }
}

/// `κ(n)` over the primes `2, 3, 5, ...`, trailing zeros trimmed.
pub fn bohr_exponents(n: u64) -> Result<Vec<u32>> {
    PrimeTable::up_to(n.max(2))?.exponents(n)
}

/// `∏ p_j^{κ_j}`, or `None` on overflow.
pub fn bohr_number(kappa: &[u32]) -> Option<u64> {
    // The j-th prime is below j (ln j + ln ln j) for j ≥ 6.
    let j = kappa.len().max(6) as f64;
    let limit = (j * (j.ln() + j.ln().ln())).ceil() as u64 + 1;
    PrimeTable::up_to(limit).ok()?.number(kappa)
}

/// Classifies `Γ = members ⊆ [1, bound]`, assumed exhaustive up to `bound`.
///
/// With `J*` the primes dividing some member, the set is consistent when it
/// equals `{n ≤ bound : every prime divisor of n lies in J*}`. Otherwise the
/// smallest such `n` that is missing is reported.
pub fn dirichlet_set_classify(members: &BTreeSet<u64>, bound: u64) -> Result<Verdict> {
    if members.is_empty() {
        return Err(invalid("an index set must be nonempty"));
    }
    if let Some(&n) = members.iter().find(|&&n| n == 0 || n > bound) {
        return Err(invalid(format!("{n} lies outside [1, {bound}]")));
    }
    let allowed: Vec<u64> = primes_up_to(bound)
        .into_iter()
        .filter(|&q| members.iter().any(|&n| n % q == 0))
        .collect();
    let smooth = |mut n: u64| {
        for &q in &allowed {
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        n == 1
    };
    let missing = (1..=bound).find(|&n| smooth(n) && !members.contains(&n));
    Ok(match missing {
        None => Verdict {
            status: Status::UndecidableFromTruncation,
            reason: Reason::DirichletConsistent {
                allowed_primes: allowed,
            },
            witness: None,
        },
        Some(n) => Verdict {
            status: Status::NotContractive,
            reason: Reason::DirichletOffending {
                n,
                allowed_primes: allowed,
            },
            witness: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_examples() {
        assert_eq!(bohr_exponents(12).unwrap(), vec![2, 1]);
        assert_eq!(bohr_exponents(1).unwrap(), Vec::<u32>::new());
        let k = bohr_exponents(97).unwrap();
        assert_eq!(k.len(), 25);
        assert_eq!(k[24], 1);
        assert!(k[..24].iter().all(|&e| e == 0));
        assert_eq!(bohr_exponents(2 * 49).unwrap(), vec![1, 0, 0, 2]);
        assert_eq!(bohr_exponents(5 * 101).unwrap().iter().sum::<u32>(), 2);
        assert!(bohr_exponents(0).is_err());
    }

    #[test]
    fn round_trip() {
        let table = PrimeTable::up_to(20_000).unwrap();
        for n in 1..=20_000 {
            assert_eq!(table.number(&table.exponents(n).unwrap()), Some(n));
        }
        for n in [1, 2, 97, 1024, 9973, 65_536, 99_991] {
            assert_eq!(bohr_number(&bohr_exponents(n).unwrap()), Some(n));
        }
        assert!(bohr_exponents(MAX_BOHR_INPUT + 1).is_err());
    }

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn dirichlet_examples() {
        let smooth: BTreeSet<u64> = [1, 2, 3, 4, 6, 8, 9, 12, 16, 18, 24, 27].into();
        let v = dirichlet_set_classify(&smooth, 30).unwrap();
        assert_eq!(
            v.reason,
            Reason::DirichletConsistent {
                allowed_primes: vec![2, 3]
            }
        );
        assert_eq!(v.status, Status::UndecidableFromTruncation);

        let v = dirichlet_set_classify(&[2, 4, 8, 16].into(), 16).unwrap();
        assert_eq!(v.status, Status::NotContractive);
        assert_eq!(
            v.reason,
            Reason::DirichletOffending {
                n: 1,
                allowed_primes: vec![2]
            }
        );

        for bound in [1, 10, 1000] {
            let v = dirichlet_set_classify(&[1].into(), bound).unwrap();
            assert_eq!(
                v.reason,
                Reason::DirichletConsistent {
                    allowed_primes: vec![]
                }
            );
        }
        assert!(dirichlet_set_classify(&[31].into(), 30).is_err());
    }
}
