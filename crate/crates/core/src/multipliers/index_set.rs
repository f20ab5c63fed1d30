use crate::error::{invalid, Error, Result};
use crate::hardy::{MultiIndex, MultiPoly};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Number of torus variables; `Infinite` is only meaningful symbolically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(d) => write!(f, "{d}"),
            Dimension::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dimension::Finite(d) => s.serialize_u64(*d as u64),
            Dimension::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Dimension {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) if n > 0 => Ok(Dimension::Finite(n)),
            Raw::Text(t) if t == "infinite" || t == "inf" => Ok(Dimension::Infinite),
            _ => Err(serde::de::Error::custom(
                "dimension must be a positive integer or \"infinite\"",
            )),
        }
    }
}

/// A set `Γ` of multi-indices.
///
/// `Symbolic` is `ℕ_J = {α : α_j = 0 for all j ∈ J}` with 1-based coordinates.
/// `Explicit` is a finite set that is exhaustive inside the box
/// `∏ [0, bounds_i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawIndexSet", into = "RawIndexSet")]
pub enum IndexSet {
    Symbolic {
        d: Dimension,
        j: BTreeSet<usize>,
    },
    Explicit {
        d: usize,
        members: BTreeSet<MultiIndex>,
        bounds: Vec<u32>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawIndexSet {
    Symbolic {
        d: Dimension,
        #[serde(rename = "J")]
        j: Vec<usize>,
    },
    Explicit {
        d: usize,
        #[serde(rename = "box")]
        bounds: Vec<u32>,
        members: Vec<MultiIndex>,
    },
}

impl TryFrom<RawIndexSet> for IndexSet {
    type Error = Error;
    fn try_from(raw: RawIndexSet) -> Result<Self> {
        match raw {
            RawIndexSet::Symbolic { d, j } => IndexSet::symbolic(d, j),
            RawIndexSet::Explicit { d, bounds, members } => IndexSet::explicit(d, bounds, members),
        }
    }
}

impl From<IndexSet> for RawIndexSet {
    fn from(s: IndexSet) -> Self {
        match s {
            IndexSet::Symbolic { d, j } => RawIndexSet::Symbolic {
                d,
                j: j.into_iter().collect(),
            },
            IndexSet::Explicit { d, members, bounds } => RawIndexSet::Explicit {
                d,
                bounds,
                members: members.into_iter().collect(),
            },
        }
    }
}

impl IndexSet {
    pub fn symbolic(d: Dimension, j: impl IntoIterator<Item = usize>) -> Result<Self> {
        let j: BTreeSet<usize> = j.into_iter().collect();
        if let Dimension::Finite(0) = d {
            return Err(invalid("dimension must be positive"));
        }
        for &idx in &j {
            let out_of_range = match d {
                Dimension::Finite(n) => idx == 0 || idx > n,
                Dimension::Infinite => idx == 0,
            };
            if out_of_range {
                return Err(invalid(format!("coordinate {idx} is outside 1..={d}")));
            }
        }
        Ok(IndexSet::Symbolic { d, j })
    }

    pub fn explicit(
        d: usize,
        bounds: Vec<u32>,
        members: impl IntoIterator<Item = MultiIndex>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if bounds.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bounds.len(),
            });
        }
        let members: BTreeSet<MultiIndex> = members.into_iter().collect();
        if members.is_empty() {
            return Err(invalid("an index set must be nonempty"));
        }
        for alpha in &members {
            if alpha.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: alpha.len(),
                });
            }
            if alpha.iter().zip(&bounds).any(|(a, b)| a > b) {
                return Err(Error::SupportOutsideBox(alpha.clone()));
            }
        }
        Ok(IndexSet::Explicit { d, members, bounds })
    }

    /// `ℕ_J ∩ box` as an explicit set.
    pub fn truncate_symbolic(d: usize, j: &BTreeSet<usize>, bounds: Vec<u32>) -> Result<Self> {
        let members = box_points(&bounds)
            .filter(|alpha| j.iter().all(|&c| alpha[c - 1] == 0))
            .collect::<Vec<_>>();
        Self::explicit(d, bounds, members)
    }

    /// Finite dimension, when there is one.
    pub fn finite_dim(&self) -> Option<usize> {
        match self {
            IndexSet::Symbolic {
                d: Dimension::Finite(d),
                ..
            } => Some(*d),
            IndexSet::Symbolic { .. } => None,
            IndexSet::Explicit { d, .. } => Some(*d),
        }
    }

    pub fn contains(&self, alpha: &[u32]) -> bool {
        match self {
            IndexSet::Symbolic { j, .. } => {
                j.iter().all(|&c| alpha.get(c - 1).is_none_or(|&a| a == 0))
            }
            IndexSet::Explicit { members, .. } => members.contains(alpha),
        }
    }

    /// The box of an explicit set.
    pub fn bounds(&self) -> Option<&[u32]> {
        match self {
            IndexSet::Explicit { bounds, .. } => Some(bounds),
            IndexSet::Symbolic { .. } => None,
        }
    }
}

/// Every multi-index in `∏ [0, bounds_i]`, lexicographic order.
pub fn box_points(bounds: &[u32]) -> impl Iterator<Item = MultiIndex> + '_ {
    let total: usize = bounds.iter().map(|&b| b as usize + 1).product();
    (0..total).map(move |mut idx| {
        let mut alpha = vec![0u32; bounds.len()];
        for (slot, &b) in alpha.iter_mut().zip(bounds).rev() {
            let width = b as usize + 1;
            *slot = (idx % width) as u32;
            idx /= width;
        }
        alpha
    })
}

/// `P_Γ f`: keeps exactly the terms of `f` indexed by `Γ`.
pub fn apply_multiplier(gamma: &IndexSet, f: &MultiPoly) -> Result<MultiPoly> {
    match gamma {
        IndexSet::Symbolic { d, .. } => {
            if let Dimension::Finite(n) = d {
                if *n != f.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: *n,
                        found: f.dim(),
                    });
                }
            }
        }
        IndexSet::Explicit { d, bounds, .. } => {
            if *d != f.dim() {
                return Err(Error::DimensionMismatch {
                    expected: *d,
                    found: f.dim(),
                });
            }
            if let Some(alpha) = f
                .terms()
                .keys()
                .find(|a| a.iter().zip(bounds).any(|(x, b)| x > b))
            {
                return Err(Error::SupportOutsideBox(alpha.clone()));
            }
        }
    }
    Ok(f.filter(|alpha| gamma.contains(alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn apply_examples() {
        let gamma = IndexSet::symbolic(Dimension::Finite(2), [2]).unwrap();
        let f = MultiPoly::from_terms(
            2,
            [
                (vec![0, 0], one()),
                (vec![1, 0], one()),
                (vec![0, 1], one()),
                (vec![1, 1], one()),
            ],
        )
        .unwrap();
        let kept = apply_multiplier(&gamma, &f).unwrap();
        assert_eq!(
            kept,
            MultiPoly::from_terms(2, [(vec![0, 0], one()), (vec![1, 0], one())]).unwrap()
        );

        let all = IndexSet::symbolic(Dimension::Finite(2), []).unwrap();
        assert_eq!(apply_multiplier(&all, &f).unwrap(), f);

        let single = IndexSet::explicit(1, vec![4], [vec![1]]).unwrap();
        let binom = MultiPoly::from_terms(
            1,
            [1.0, 4.0, 6.0, 4.0, 1.0]
                .iter()
                .enumerate()
                .map(|(k, &c)| (vec![k as u32], Complex64::new(c, 0.0))),
        )
        .unwrap();
        let out = apply_multiplier(&single, &binom).unwrap();
        assert_eq!(
            out,
            MultiPoly::from_terms(1, [(vec![1], Complex64::new(4.0, 0.0))]).unwrap()
        );
    }

    #[test]
    fn support_outside_box() {
        let single = IndexSet::explicit(1, vec![2], [vec![1]]).unwrap();
        let f = MultiPoly::from_terms(1, [(vec![3], one())]).unwrap();
        assert!(matches!(
            apply_multiplier(&single, &f),
            Err(Error::SupportOutsideBox(_))
        ));
    }

    #[test]
    fn construction_validation() {
        assert!(IndexSet::symbolic(Dimension::Finite(2), [3]).is_err());
        assert!(IndexSet::symbolic(Dimension::Infinite, [0]).is_err());
        assert!(IndexSet::symbolic(Dimension::Infinite, [7, 100]).is_ok());
        assert!(IndexSet::explicit(1, vec![3], [vec![4]]).is_err());
        assert!(IndexSet::explicit(1, vec![3], Vec::<MultiIndex>::new()).is_err());
        assert!(IndexSet::explicit(2, vec![3], [vec![1, 1]]).is_err());
    }

    #[test]
    fn json_forms() {
        let s: IndexSet = serde_json::from_str(r#"{"kind":"symbolic","d":3,"J":[1,3]}"#).unwrap();
        assert_eq!(s, IndexSet::symbolic(Dimension::Finite(3), [1, 3]).unwrap());
        let e: IndexSet =
            serde_json::from_str(r#"{"kind":"explicit","d":1,"box":[10],"members":[[0],[2],[4]]}"#)
                .unwrap();
        assert!(e.contains(&[2]) && !e.contains(&[1]));
        let inf: IndexSet =
            serde_json::from_str(r#"{"kind":"symbolic","d":"infinite","J":[2]}"#).unwrap();
        assert_eq!(inf.finite_dim(), None);
        let back: IndexSet = serde_json::from_str(&serde_json::to_string(&inf).unwrap()).unwrap();
        assert_eq!(back, inf);
    }

    #[test]
    fn box_enumeration() {
        let pts: Vec<_> = box_points(&[1, 2]).collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![0, 0]);
        assert_eq!(pts[1], vec![0, 1]);
        assert_eq!(pts[5], vec![1, 2]);
    }
}
