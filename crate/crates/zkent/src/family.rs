//! Commuting generator families, probability distributions on the generators,
//! and exact composition of generator words.
//!
//! A family holds the `k` pairwise-commuting integer matrices that generate
//! the action. Validation is exact: commutativity and determinant checks run
//! in integer arithmetic and fail loudly, matrix by matrix and pair by pair.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::IntMatrix;

/// Whether the generators form a group action (all unimodular) or only a
/// semigroup of endomorphisms (nonzero determinants).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    /// Every generator has determinant ±1, so each is invertible over ℤ and
    /// the family generates a group of toral automorphisms.
    Invertible,
    /// Determinants are nonzero but not necessarily ±1; the generators induce
    /// surjective toral endomorphisms (a semigroup action).
    Endomorphism,
}

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("family must contain at least one generator")]
    EmptyFamily,
    #[error("generator {index} is not a square matrix")]
    NonSquare { index: usize },
    #[error("generator {index} has dimension {found}, expected {expected}")]
    DimMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("generators {i} and {j} do not commute; A{i}*A{j} - A{j}*A{i} =\n{difference}")]
    NonCommuting {
        i: usize,
        j: usize,
        difference: IntMatrix,
    },
    #[error("generator {index} is singular (determinant 0)")]
    SingularGenerator { index: usize },
    #[error("generator {index} has determinant {determinant}, not ±1 as required for an invertible action")]
    DeterminantNotUnit { index: usize, determinant: BigInt },
}

/// A validated family of `k` pairwise-commuting nonsingular integer matrices.
#[derive(Clone, Debug)]
pub struct GeneratorFamily {
    dim: usize,
    kind: ActionKind,
    names: Vec<String>,
    generators: Vec<IntMatrix>,
    determinants: Vec<BigInt>,
}

impl GeneratorFamily {
    /// Validates a list of matrices as a generator family. Checks, in exact
    /// integer arithmetic: matching dimensions, pairwise commutativity,
    /// nonsingularity, and (for [`ActionKind::Invertible`]) unimodularity.
    pub fn validate(matrices: Vec<IntMatrix>, kind: ActionKind) -> Result<Self, FamilyError> {
        let names = (1..=matrices.len()).map(|i| format!("A{i}")).collect();
        Self::validate_named(matrices, names, kind)
    }

    /// As [`GeneratorFamily::validate`], with caller-supplied generator names
    /// (used in diagnostics and reports).
    pub fn validate_named(
        matrices: Vec<IntMatrix>,
        names: Vec<String>,
        kind: ActionKind,
    ) -> Result<Self, FamilyError> {
        if matrices.is_empty() {
            return Err(FamilyError::EmptyFamily);
        }
        assert_eq!(matrices.len(), names.len(), "one name per generator");
        let dim = matrices[0].dim();
        for (idx, m) in matrices.iter().enumerate() {
            if m.dim() != dim {
                return Err(FamilyError::DimMismatch {
                    index: idx + 1,
                    expected: dim,
                    found: m.dim(),
                });
            }
        }
        let determinants: Vec<BigInt> = matrices.iter().map(|m| m.determinant()).collect();
        for (idx, det) in determinants.iter().enumerate() {
            if det.is_zero() {
                return Err(FamilyError::SingularGenerator { index: idx + 1 });
            }
            if kind == ActionKind::Invertible && !det.abs().is_one() {
                return Err(FamilyError::DeterminantNotUnit {
                    index: idx + 1,
                    determinant: det.clone(),
                });
            }
        }
        for i in 0..matrices.len() {
            for j in i + 1..matrices.len() {
                let ab = matrices[i].mul(&matrices[j]);
                let ba = matrices[j].mul(&matrices[i]);
                if ab != ba {
                    return Err(FamilyError::NonCommuting {
                        i: i + 1,
                        j: j + 1,
                        difference: ab.sub(&ba),
                    });
                }
            }
        }
        Ok(Self {
            dim,
            kind,
            names,
            generators: matrices,
            determinants,
        })
    }

    /// Validates raw row data, reporting non-square matrices by index.
    pub fn validate_rows(
        raw: &[Vec<Vec<i64>>],
        kind: ActionKind,
    ) -> Result<Self, FamilyError> {
        let mut matrices = Vec::with_capacity(raw.len());
        for (idx, rows) in raw.iter().enumerate() {
            let m =
                IntMatrix::from_rows(rows).ok_or(FamilyError::NonSquare { index: idx + 1 })?;
            matrices.push(m);
        }
        Self::validate(matrices, kind)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators `k`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        false // validation rejects empty families
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    pub fn generator(&self, i: usize) -> &IntMatrix {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn determinant(&self, i: usize) -> &BigInt {
        &self.determinants[i]
    }

    pub fn determinants(&self) -> &[BigInt] {
        &self.determinants
    }
}

#[derive(Debug, Error)]
pub enum DistributionError {
    #[error("distribution entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },
    #[error("distribution entries sum to {sum}, which differs from 1 by more than 1e-12")]
    SumNotOne { sum: f64 },
    #[error("distribution has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Tolerance on |Σνᵢ − 1|. Inputs outside it are rejected, never renormalized.
pub const DISTRIBUTION_SUM_TOL: f64 = 1e-12;

/// A probability vector ν on the generators: the i.i.d. law of the random
/// composition. Entry `i` is the probability of applying generator `i` at
/// each step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates a probability vector of expected length `k`.
    pub fn validate(probs: &[f64], k: usize) -> Result<Self, DistributionError> {
        if probs.len() != k {
            return Err(DistributionError::LengthMismatch {
                expected: k,
                found: probs.len(),
            });
        }
        for (index, &value) in probs.iter().enumerate() {
            if value < 0.0 || value.is_nan() {
                return Err(DistributionError::NegativeEntry { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > DISTRIBUTION_SUM_TOL {
            return Err(DistributionError::SumNotOne { sum });
        }
        Ok(Self {
            probs: probs.to_vec(),
        })
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k > 0);
        Self {
            probs: vec![1.0 / k as f64; k],
        }
    }

    /// The vertex distribution concentrated on generator `i`.
    pub fn point_mass(k: usize, i: usize) -> Self {
        assert!(i < k);
        let mut probs = vec![0.0; k];
        probs[i] = 1.0;
        Self { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// Shannon entropy H(ν) = −Σ νᵢ log νᵢ in nats, with 0·log 0 = 0.
    pub fn shannon_entropy(&self) -> f64 {
        -self
            .probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = DistributionError;
    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        let k = v.len();
        Distribution::validate(&v, k)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Vec<f64> {
        d.probs
    }
}

/// A finite word over the generator alphabet, letters as 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word(Vec<usize>);

impl Word {
    /// Validates letters against the family size `k`.
    pub fn new(letters: Vec<usize>, k: usize) -> Option<Self> {
        if letters.iter().all(|&l| l < k) {
            Some(Self(letters))
        } else {
            None
        }
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Exact matrix of the composition along `word`: letters are applied in
/// sequence, a later letter acting after (hence multiplied to the left of)
/// the earlier ones. The empty word yields the identity.
pub fn word_product(family: &GeneratorFamily, word: &Word) -> IntMatrix {
    let mut acc = IntMatrix::identity(family.dim());
    for &letter in word.letters() {
        acc = family.generator(letter).mul(&acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2_family() -> GeneratorFamily {
        let a1 = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let a2 = IntMatrix::from_rows(&[vec![1, -1], vec![-1, 2]]).unwrap();
        GeneratorFamily::validate(vec![a1, a2], ActionKind::Invertible).unwrap()
    }

    #[test]
    fn validates_commuting_hyperbolic_pair() {
        let fam = t2_family();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam.dim(), 2);
        assert_eq!(fam.kind(), ActionKind::Invertible);
    }

    #[test]
    fn single_identity_generator_is_valid() {
        let fam = GeneratorFamily::validate(
            vec![IntMatrix::from_rows(&[vec![1]]).unwrap()],
            ActionKind::Invertible,
        )
        .unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.dim(), 1);
    }

    #[test]
    fn rejects_noncommuting_pair() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        let err = GeneratorFamily::validate(vec![a, b], ActionKind::Invertible).unwrap_err();
        match err {
            FamilyError::NonCommuting { i, j, difference } => {
                assert_eq!((i, j), (1, 2));
                // A1*A2 - A2*A1 = [[1,0],[0,-1]]
                assert_eq!(
                    difference,
                    IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]]).unwrap()
                );
            }
            other => panic!("expected NonCommuting, got {other:?}"),
        }
    }

    #[test]
    fn rejects_singular_and_non_unit_determinants() {
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(matches!(
            GeneratorFamily::validate(vec![singular], ActionKind::Endomorphism),
            Err(FamilyError::SingularGenerator { index: 1 })
        ));
        let doubling = IntMatrix::from_rows(&[vec![2]]).unwrap();
        assert!(matches!(
            GeneratorFamily::validate(vec![doubling.clone()], ActionKind::Invertible),
            Err(FamilyError::DeterminantNotUnit { index: 1, .. })
        ));
        // the same matrix is fine as an endomorphism generator
        assert!(GeneratorFamily::validate(vec![doubling], ActionKind::Endomorphism).is_ok());
    }

    #[test]
    fn rejects_shape_problems() {
        assert!(matches!(
            GeneratorFamily::validate_rows(&[vec![vec![1, 2]]], ActionKind::Invertible),
            Err(FamilyError::NonSquare { index: 1 })
        ));
        let a = IntMatrix::from_rows(&[vec![1]]).unwrap();
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            GeneratorFamily::validate(vec![a, b], ActionKind::Invertible),
            Err(FamilyError::DimMismatch { index: 2, .. })
        ));
        assert!(matches!(
            GeneratorFamily::validate(vec![], ActionKind::Invertible),
            Err(FamilyError::EmptyFamily)
        ));
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::validate(&[0.5, 0.5], 2).is_ok());
        assert!(Distribution::validate(&[0.7, 0.3], 2).is_ok());
        assert!(matches!(
            Distribution::validate(&[0.5, 0.6], 2),
            Err(DistributionError::SumNotOne { .. })
        ));
        assert!(matches!(
            Distribution::validate(&[-0.1, 1.1], 2),
            Err(DistributionError::NegativeEntry { index: 0, .. })
        ));
        assert!(matches!(
            Distribution::validate(&[1.0], 2),
            Err(DistributionError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn shannon_entropy_handles_zeros() {
        let point = Distribution::point_mass(3, 1);
        assert_eq!(point.shannon_entropy(), 0.0);
        let uniform = Distribution::uniform(2);
        assert!((uniform.shannon_entropy() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn word_product_examples() {
        let fam = t2_family();
        assert!(word_product(&fam, &Word::empty()).is_identity());
        let w12 = Word::new(vec![0, 1], 2).unwrap();
        assert!(word_product(&fam, &w12).is_identity()); // A2 = A1⁻¹
        let w11 = Word::new(vec![0, 0], 2).unwrap();
        assert_eq!(
            word_product(&fam, &w11),
            IntMatrix::from_rows(&[vec![5, 3], vec![3, 2]]).unwrap()
        );
    }

    #[test]
    fn word_product_depends_only_on_letter_multiset() {
        let fam = t2_family();
        let w = Word::new(vec![0, 1, 0, 0, 1], 2).unwrap();
        let p = word_product(&fam, &w);
        let perm = Word::new(vec![1, 1, 0, 0, 0], 2).unwrap();
        assert_eq!(p, word_product(&fam, &perm));
    }

    #[test]
    fn word_determinant_multiplicativity() {
        let d2 = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let d3 = IntMatrix::from_rows(&[vec![3, 0], vec![0, 2]]).unwrap();
        let fam = GeneratorFamily::validate(vec![d2, d3], ActionKind::Endomorphism).unwrap();
        let w = Word::new(vec![0, 1, 1], 2).unwrap();
        let det = word_product(&fam, &w).determinant();
        assert_eq!(det, fam.determinant(0) * fam.determinant(1) * fam.determinant(1));
    }
}
