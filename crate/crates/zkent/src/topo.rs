//! Topological-entropy formulas and bounds for random actions of
//! non-smooth or non-invertible generators.
//!
//! Every quantity here is a ν-average of a per-generator topological
//! constant: Lipschitz constants, operator norms, covering degrees, or
//! branch counts. The variational lower bound from the measure-theoretic
//! side completes the sandwich.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{Distribution, GeneratorFamily};
use crate::matrix::bigint_log_abs;

#[derive(Debug, Error)]
pub enum TopoError {
    #[error("constant {index} is {value}, but must be positive")]
    NonPositiveConstant { index: usize, value: f64 },
    #[error("generator {index} has degree 0")]
    ZeroDegree { index: usize },
    #[error("generator {index} has branch count 0; piecewise monotone maps have at least one branch")]
    BadBranchCount { index: usize },
    #[error("distribution has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Which rule produced a bound in a [`TopoBoundsReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundRule {
    /// Measure-theoretic entropy lower-bounds topological entropy.
    VariationalLower,
    /// Ball-dimension times the ν-average of log⁺ Lipschitz constants.
    LipschitzUpper,
    /// Manifold dimension times the ν-average of log⁺ derivative sup-norms.
    SmoothUpper,
    /// Exact value for expanding maps: ν-average of log |degree|.
    ExpandingDegreeFormula,
    /// Exact value for monotone circle maps: same degree average.
    CircleMonotoneFormula,
    /// Upper bound for piecewise monotone interval maps: ν-average of
    /// log(branch count).
    IntervalBranchBound,
    /// Homeomorphisms of a finite graph generate zero entropy.
    GraphHomeomorphismZero,
}

/// Bundle of topological-entropy information for one family and ν.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TopoBoundsReport {
    /// Measure-theoretic entropy of the random action (variational lower
    /// bound for the topological entropy).
    pub lower: f64,
    pub lipschitz_upper: Option<f64>,
    pub smooth_upper: Option<f64>,
    /// Exact value when the expanding/monotone degree formula applies.
    pub degree_value: Option<f64>,
    pub interval_upper: Option<f64>,
    /// The rules that produced the numbers above, in field order.
    pub rules: Vec<BoundRule>,
}

fn check_len(nu: &Distribution, len: usize) -> Result<(), TopoError> {
    if nu.len() != len {
        return Err(TopoError::LengthMismatch {
            expected: len,
            found: nu.len(),
        });
    }
    Ok(())
}

/// D(X) · Σ_i ν_i log⁺ L_i for Lipschitz generators with constants `l` on a
/// space of ball dimension `ball_dim`.
pub fn lipschitz_bound(l: &[f64], ball_dim: f64, nu: &Distribution) -> Result<f64, TopoError> {
    check_len(nu, l.len())?;
    assert!(ball_dim >= 0.0, "ball dimension is nonnegative");
    for (index, &value) in l.iter().enumerate() {
        if !(value > 0.0) {
            return Err(TopoError::NonPositiveConstant { index, value });
        }
    }
    Ok(ball_dim
        * l.iter()
            .zip(nu.probs())
            .map(|(&li, &p)| p * li.max(1.0).ln())
            .sum::<f64>())
}

/// d · Σ_i ν_i log⁺ ‖Df_i‖ for C¹ generators on a d-manifold.
pub fn smooth_bound(
    opnorms: &[f64],
    manifold_dim: usize,
    nu: &Distribution,
) -> Result<f64, TopoError> {
    lipschitz_bound(opnorms, manifold_dim as f64, nu)
}

/// Σ_i ν_i log |deg_i|: the exact entropy of random compositions of
/// expanding maps, and of monotone circle maps. Degrees of absolute value 1
/// are allowed (they contribute zero); degree 0 is rejected.
pub fn expanding_entropy(degrees: &[i64], nu: &Distribution) -> Result<f64, TopoError> {
    check_len(nu, degrees.len())?;
    for (index, &d) in degrees.iter().enumerate() {
        if d == 0 {
            return Err(TopoError::ZeroDegree { index });
        }
    }
    Ok(degrees
        .iter()
        .zip(nu.probs())
        .map(|(&d, &p)| p * (d.unsigned_abs() as f64).ln())
        .sum())
}

/// Σ_i ν_i log N_i for piecewise monotone interval maps with `branches[i]`
/// laps each.
pub fn interval_bound(branches: &[u32], nu: &Distribution) -> Result<f64, TopoError> {
    check_len(nu, branches.len())?;
    for (index, &n) in branches.iter().enumerate() {
        if n == 0 {
            return Err(TopoError::BadBranchCount { index });
        }
    }
    Ok(branches
        .iter()
        .zip(nu.probs())
        .map(|(&n, &p)| p * (n as f64).ln())
        .sum())
}

/// Topological constants of a linear family: per-generator operator norms
/// (largest singular values) and exact integer degrees (determinants of the
/// induced toral endomorphisms).
#[derive(Clone, Debug)]
pub struct FamilyConstants {
    pub opnorms: Vec<f64>,
    pub degrees: Vec<BigInt>,
}

impl FamilyConstants {
    /// Degrees as logs of absolute values, for use in the degree formulas.
    pub fn log_degrees(&self) -> Vec<f64> {
        self.degrees.iter().map(bigint_log_abs).collect()
    }
}

pub fn family_constants(family: &GeneratorFamily) -> FamilyConstants {
    let opnorms = family
        .generators()
        .iter()
        .map(|g| {
            g.to_f64()
                .singular_values()
                .iter()
                .cloned()
                .fold(0.0f64, f64::max)
        })
        .collect();
    FamilyConstants {
        opnorms,
        degrees: family.determinants().to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::ActionKind;
    use crate::family::GeneratorFamily;
    use crate::matrix::IntMatrix;
    use approx::assert_relative_eq;

    fn nu(v: &[f64]) -> Distribution {
        Distribution::validate(v, v.len()).unwrap()
    }

    #[test]
    fn lipschitz_examples() {
        let rho = (3.0 + 5.0f64.sqrt()) / 2.0;
        let b = lipschitz_bound(&[rho, rho], 2.0, &nu(&[0.5, 0.5])).unwrap();
        assert_relative_eq!(b, 2.0 * rho.ln(), epsilon = 1e-12);
        assert_relative_eq!(b, 1.9248473002, epsilon = 1e-9);

        // contracting generators contribute nothing
        let zero = lipschitz_bound(&[1.0, 0.5], 3.0, &nu(&[0.4, 0.6])).unwrap();
        assert_eq!(zero, 0.0);

        let mixed = lipschitz_bound(&[2.0, 3.0], 1.0, &nu(&[0.4, 0.6])).unwrap();
        assert_relative_eq!(mixed, 0.4 * 2.0f64.ln() + 0.6 * 3.0f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(mixed, 0.9364262454, epsilon = 1e-9);

        assert!(matches!(
            lipschitz_bound(&[0.0, 1.0], 1.0, &nu(&[0.5, 0.5])),
            Err(TopoError::NonPositiveConstant { index: 0, .. })
        ));
    }

    #[test]
    fn smooth_bound_is_dimension_weighted() {
        let rho = (3.0 + 5.0f64.sqrt()) / 2.0;
        let b = smooth_bound(&[rho, rho], 2, &nu(&[1.0, 0.0])).unwrap();
        assert_relative_eq!(b, 2.0 * rho.ln(), epsilon = 1e-12);
        // sandwich against the known entropy of A1
        assert!(b >= 0.9624236501 - 1e-9);
        let id = smooth_bound(&[1.0], 5, &nu(&[1.0])).unwrap();
        assert_eq!(id, 0.0);
    }

    #[test]
    fn expanding_degree_formula() {
        let half = nu(&[0.5, 0.5]);
        let v = expanding_entropy(&[2, 3], &half).unwrap();
        assert_relative_eq!(v, 6.0f64.sqrt().ln(), epsilon = 1e-12);
        assert_relative_eq!(v, 0.8958797346, epsilon = 1e-9);

        let constant = expanding_entropy(&[5, 5], &nu(&[0.3, 0.7])).unwrap();
        assert_relative_eq!(constant, 5.0f64.ln(), epsilon = 1e-12);

        let skew = expanding_entropy(&[2, 3], &nu(&[0.4, 0.6])).unwrap();
        assert_relative_eq!(skew, 0.9364262454, epsilon = 1e-9);

        assert!(matches!(
            expanding_entropy(&[2, 0], &half),
            Err(TopoError::ZeroDegree { index: 1 })
        ));
    }

    #[test]
    fn interval_branch_bound() {
        let tent = interval_bound(&[2, 2], &nu(&[0.9, 0.1])).unwrap();
        assert_relative_eq!(tent, 2.0f64.ln(), epsilon = 1e-12);
        let mixed = interval_bound(&[2, 3], &nu(&[0.5, 0.5])).unwrap();
        assert_relative_eq!(mixed, 6.0f64.sqrt().ln(), epsilon = 1e-12);
        let monotone = interval_bound(&[1, 1], &nu(&[0.5, 0.5])).unwrap();
        assert_eq!(monotone, 0.0);
        assert!(matches!(
            interval_bound(&[0], &nu(&[1.0])),
            Err(TopoError::BadBranchCount { index: 0 })
        ));
    }

    #[test]
    fn family_constants_of_t2_and_diag() {
        let a1 = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let a2 = IntMatrix::from_rows(&[vec![1, -1], vec![-1, 2]]).unwrap();
        let fam = GeneratorFamily::validate(vec![a1, a2], ActionKind::Invertible).unwrap();
        let fc = family_constants(&fam);
        let rho = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert_relative_eq!(fc.opnorms[0], rho, epsilon = 1e-10);
        assert_relative_eq!(fc.opnorms[1], rho, epsilon = 1e-10);
        assert_eq!(fc.degrees[0], BigInt::from(1));
        assert_eq!(fc.degrees[1], BigInt::from(1));

        let diag = GeneratorFamily::validate(
            vec![IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap()],
            ActionKind::Endomorphism,
        )
        .unwrap();
        let dc = family_constants(&diag);
        assert_relative_eq!(dc.opnorms[0], 3.0, epsilon = 1e-12);
        assert_eq!(dc.degrees[0], BigInt::from(6));

        let id = GeneratorFamily::validate(
            vec![IntMatrix::identity(2)],
            ActionKind::Invertible,
        )
        .unwrap();
        let ic = family_constants(&id);
        assert_relative_eq!(ic.opnorms[0], 1.0, epsilon = 1e-12);
        assert_eq!(ic.degrees[0], BigInt::from(1));
    }

    #[test]
    fn bounds_are_affine_in_nu_with_classical_vertices() {
        // vertex values equal the single-map quantities; midpoints average
        let degrees = [2i64, 3];
        let at0 = expanding_entropy(&degrees, &nu(&[1.0, 0.0])).unwrap();
        let at1 = expanding_entropy(&degrees, &nu(&[0.0, 1.0])).unwrap();
        assert_relative_eq!(at0, 2.0f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(at1, 3.0f64.ln(), epsilon = 1e-12);
        for t in [0.25, 0.5, 0.75] {
            let v = expanding_entropy(&degrees, &nu(&[t, 1.0 - t])).unwrap();
            assert_relative_eq!(v, t * at0 + (1.0 - t) * at1, epsilon = 1e-12);
        }
    }
}
