use super::falsify::{falsify_contractivity_with, FalsifyConfig};
use super::index_set::{box_points, IndexSet};
use crate::error::{invalid, Result};
use crate::hardy::{MultiIndex, MultiPoly};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Contractive,
    NotContractive,
    UndecidableFromTruncation,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Contractive => "Contractive",
            Status::NotContractive => "NotContractive",
            Status::UndecidableFromTruncation => "UndecidableFromTruncation",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructuralCheck {
    ContainsZero,
    SemigroupClosure,
    RayCompletion,
}

/// The first failure found by a structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    MissingZero,
    /// `alpha + beta` lies in the box but not in `Γ`.
    Sum {
        alpha: MultiIndex,
        beta: MultiIndex,
        sum: MultiIndex,
    },
    /// `beta` with coordinate `coordinate` (1-based) replaced by `k` is missing.
    Ray {
        beta: MultiIndex,
        coordinate: usize,
        k: u32,
        missing: MultiIndex,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: StructuralCheck,
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    /// `Γ = ℕ_J`, contractive for every `0 < p < 1`.
    SymbolicNj {
        j: Vec<usize>,
    },
    /// The explicit set is `ℕ_{J*} ∩ box`.
    ConsistentWithNj {
        j_star: Vec<usize>,
    },
    StructuralCheckFailed(CheckResult),
    /// All checks pass but `alpha ∈ ℕ_{J*} ∩ box` is missing.
    MissingFromNj {
        j_star: Vec<usize>,
        alpha: MultiIndex,
    },
    /// The integer set is `{n ≤ bound : every prime divisor of n is allowed}`.
    DirichletConsistent {
        allowed_primes: Vec<u64>,
    },
    /// `n ≤ bound` has all its prime divisors allowed but is not a member.
    DirichletOffending {
        n: u64,
        allowed_primes: Vec<u64>,
    },
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::SymbolicNj { j } => write!(f, "Γ = ℕ_J with J = {j:?}"),
            Reason::ConsistentWithNj { j_star } => write!(
                f,
                "consistent with ℕ_{{J*}} for J* = {j_star:?}; contractivity holds iff the full set equals ℕ_{{J*}}"
            ),
            Reason::StructuralCheckFailed(r) => write!(f, "{:?} fails: {:?}", r.check, r.counterexample),
            Reason::MissingFromNj { j_star, alpha } => {
                write!(f, "{alpha:?} lies in ℕ_{{J*}} for J* = {j_star:?} but not in Γ")
            }
            Reason::DirichletConsistent { allowed_primes } => {
                write!(f, "consistent with the primes {allowed_primes:?}")
            }
            Reason::DirichletOffending { n, allowed_primes } => write!(
                f,
                "{n} is missing although all its prime divisors lie in {allowed_primes:?}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub polynomial: MultiPoly,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub reason: Reason,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn new(status: Status, reason: Reason) -> Self {
        Self {
            status,
            reason,
            witness: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// Search for a numeric witness when the set is not contractive.
    pub falsify: Option<FalsifyConfig>,
}

pub fn classify(gamma: &IndexSet, p: f64) -> Result<Verdict> {
    classify_with(gamma, p, &ClassifyOptions::default())
}

pub fn classify_with(gamma: &IndexSet, p: f64, options: &ClassifyOptions) -> Result<Verdict> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("p = {p} must lie in (0, 1)")));
    }
    let (d, members, bounds) = match gamma {
        IndexSet::Symbolic { j, .. } => {
            return Ok(Verdict::new(
                Status::Contractive,
                Reason::SymbolicNj {
                    j: j.iter().copied().collect(),
                },
            ))
        }
        IndexSet::Explicit { d, members, bounds } => (*d, members, bounds),
    };
    let j_star = zero_coordinates(d, members);
    let expected = IndexSet::truncate_symbolic(d, &j_star, bounds.clone())?;
    let j_star: Vec<usize> = j_star.into_iter().collect();
    if &expected == gamma {
        return Ok(Verdict::new(
            Status::UndecidableFromTruncation,
            Reason::ConsistentWithNj { j_star },
        ));
    }
    let reason = match structural_checks(gamma)?.into_iter().find(|c| !c.pass) {
        Some(failed) => Reason::StructuralCheckFailed(failed),
        None => {
            let alpha = box_points(bounds)
                .find(|a| expected.contains(a) && !members.contains(a))
                .expect("sets differ, so some point of ℕ_J* ∩ box is missing");
            Reason::MissingFromNj { j_star, alpha }
        }
    };
    let mut verdict = Verdict::new(Status::NotContractive, reason);
    if let Some(config) = &options.falsify {
        let found = falsify_contractivity_with(gamma, p, config)?;
        if found.ratio > 1.0 && !found.inconclusive {
            verdict.witness = Some(Witness {
                polynomial: found.polynomial,
                ratio: found.ratio,
            });
        }
    }
    Ok(verdict)
}

/// `J* = {j : α_j = 0 for every α ∈ members}`, 1-based.
fn zero_coordinates(d: usize, members: &BTreeSet<MultiIndex>) -> BTreeSet<usize> {
    (1..=d)
        .filter(|&j| members.iter().all(|a| a[j - 1] == 0))
        .collect()
}

/// Zero membership, semigroup closure and ray completion inside the box.
pub fn structural_checks(gamma: &IndexSet) -> Result<Vec<CheckResult>> {
    let IndexSet::Explicit {
        members, bounds, ..
    } = gamma
    else {
        return Err(invalid("structural checks need an explicit index set"));
    };
    let in_box = |a: &[u32]| a.iter().zip(bounds).all(|(x, b)| x <= b);
    let result = |check, counterexample: Option<Counterexample>| CheckResult {
        check,
        pass: counterexample.is_none(),
        counterexample,
    };

    let zero = vec![0u32; bounds.len()];
    let contains_zero = (!members.contains(&zero)).then_some(Counterexample::MissingZero);

    let list: Vec<&MultiIndex> = members.iter().collect();
    let sum_of = |a: &MultiIndex, b: &MultiIndex| -> Option<Counterexample> {
        let sum: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
        (in_box(&sum) && !members.contains(&sum)).then(|| Counterexample::Sum {
            alpha: a.clone(),
            beta: b.clone(),
            sum,
        })
    };
    // Distinct pairs first, then doubles.
    let semigroup = list
        .iter()
        .enumerate()
        .flat_map(|(i, a)| list[i + 1..].iter().map(move |b| (*a, *b)))
        .find_map(|(a, b)| sum_of(a, b))
        .or_else(|| list.iter().find_map(|a| sum_of(a, a)));

    let ray = list.iter().find_map(|beta| {
        (0..beta.len()).filter(|&i| beta[i] != 0).find_map(|i| {
            (0..=bounds[i]).find_map(|k| {
                let mut moved = (*beta).clone();
                moved[i] = k;
                (!members.contains(&moved)).then(|| Counterexample::Ray {
                    beta: (*beta).clone(),
                    coordinate: i + 1,
                    k,
                    missing: moved,
                })
            })
        })
    });

    Ok(vec![
        result(StructuralCheck::ContainsZero, contains_zero),
        result(StructuralCheck::SemigroupClosure, semigroup),
        result(StructuralCheck::RayCompletion, ray),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::Dimension;

    fn evens() -> IndexSet {
        IndexSet::explicit(1, vec![10], (0..=10).step_by(2).map(|k| vec![k])).unwrap()
    }

    #[test]
    fn symbolic_is_contractive() {
        let g = IndexSet::symbolic(Dimension::Finite(3), [1, 3]).unwrap();
        assert_eq!(classify(&g, 0.5).unwrap().status, Status::Contractive);
        let g = IndexSet::symbolic(Dimension::Infinite, [2, 5]).unwrap();
        assert_eq!(classify(&g, 0.1).unwrap().status, Status::Contractive);
    }

    #[test]
    fn evens_fail_ray_completion() {
        let v = classify(&evens(), 0.5).unwrap();
        assert_eq!(v.status, Status::NotContractive);
        match v.reason {
            Reason::StructuralCheckFailed(CheckResult {
                check: StructuralCheck::RayCompletion,
                counterexample:
                    Some(Counterexample::Ray {
                        beta, k, missing, ..
                    }),
                ..
            }) => {
                assert_eq!((beta, k, missing), (vec![2], 1, vec![1]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn full_box_is_undecidable() {
        let g = IndexSet::explicit(1, vec![10], (0..=10).map(|k| vec![k])).unwrap();
        let v = classify(&g, 0.5).unwrap();
        assert_eq!(v.status, Status::UndecidableFromTruncation);
        assert_eq!(v.reason, Reason::ConsistentWithNj { j_star: vec![] });
        let zero = IndexSet::explicit(2, vec![3, 3], [vec![0, 0]]).unwrap();
        assert_eq!(
            classify(&zero, 0.5).unwrap().reason,
            Reason::ConsistentWithNj { j_star: vec![1, 2] }
        );
    }

    #[test]
    fn check_examples() {
        let checks = structural_checks(&evens()).unwrap();
        assert!(checks[0].pass && checks[1].pass && !checks[2].pass);

        let nj = IndexSet::truncate_symbolic(2, &BTreeSet::from([2]), vec![4, 4]).unwrap();
        assert!(structural_checks(&nj).unwrap().iter().all(|c| c.pass));

        let corner =
            IndexSet::explicit(2, vec![2, 2], [vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let checks = structural_checks(&corner).unwrap();
        assert!(checks[0].pass && !checks[1].pass);
        match &checks[1].counterexample {
            Some(Counterexample::Sum { alpha, beta, sum }) => {
                let pair = BTreeSet::from([alpha.clone(), beta.clone()]);
                assert_eq!(pair, BTreeSet::from([vec![1, 0], vec![0, 1]]));
                assert_eq!(sum, &vec![1, 1]);
            }
            other => panic!("{other:?}"),
        }

        let no_zero = IndexSet::explicit(1, vec![3], [vec![1]]).unwrap();
        assert_eq!(
            structural_checks(&no_zero).unwrap()[0].counterexample,
            Some(Counterexample::MissingZero)
        );
    }

    #[test]
    fn verdict_json_round_trip() {
        let v = classify(&evens(), 0.5).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.contains("\"status\":\"NotContractive\""));
        assert_eq!(serde_json::from_str::<Verdict>(&json).unwrap(), v);
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(classify(&evens(), 1.0).is_err());
    }
}
