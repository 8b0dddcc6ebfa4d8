//! Friedland entropy of a linear action: the topological entropy of the
//! shift on the space of full orbits, where at every step any generator may
//! act.
//!
//! For constant spectra the value is a subset maximum of pressures,
//!
//! ```text
//! h(σ) = max over J ⊆ {1..s} of log Σ_i exp(Σ_{j∈J} d_j λ_{i,j}),
//! ```
//!
//! attained together with a Gibbs distribution ν* over the generators.
//! The formula is an upper bound in general; it becomes an equality when
//! pairwise coincidence sets are null and the reference measure is ergodic,
//! which this module certifies through exact integer criteria:
//! det(A_i − A_j) ≠ 0 forces a finite coincidence set on the torus, and a
//! generator without zero exponents makes Lebesgue measure ergodic for it.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::random_entropy;
use crate::family::{Distribution, GeneratorFamily};
use crate::spectral::Spectrum;

#[derive(Debug, Error)]
pub enum FriedlandError {
    #[error("subset contains block index {index}, but the spectrum has {s} blocks")]
    BadSubset { index: usize, s: usize },
    #[error("distribution has {found} entries but the spectrum has k = {expected} generators")]
    LengthMismatch { expected: usize, found: usize },
    #[error("spectrum has {s} blocks; subset enumeration is limited to s ≤ {max}")]
    TooManyBlocks { s: usize, max: usize },
}

/// Hard cap on the number of blocks for the 2^s enumeration.
pub const MAX_ENUMERATED_BLOCKS: usize = 30;

/// Pressures within this absolute tolerance of the maximum count as tied.
pub const PRESSURE_TIE_TOL: f64 = 1e-9;

/// Exponents with |λ| above this count as nonzero when testing a generator
/// for hyperbolicity.
pub const HYPERBOLICITY_TOL: f64 = 1e-9;

/// Exact status of the coincidence set of a generator pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoincidenceStatus {
    /// det(A_i − A_j) ≠ 0: the generators agree only on a finite set of
    /// torus points, which is Lebesgue-null.
    MeasureZeroCertified,
    /// A_i = A_j: the coincidence set is everything.
    IdenticalGenerators,
    /// det(A_i − A_j) = 0 with A_i ≠ A_j: this sufficient test cannot decide.
    Inconclusive,
}

/// Per-pair certificate that the coincidence set is Lebesgue-null.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoincidenceCertificate {
    /// 1-based generator indices (i, j) with i < j.
    pub pair: (usize, usize),
    /// Exact integer det(A_i − A_j), serialized as a decimal string.
    #[serde(with = "crate::friedland::bigint_string")]
    pub det_difference: BigInt,
    pub status: CoincidenceStatus,
}

/// Pressure of one subset of blocks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubsetPressure {
    /// Block indices, ascending.
    pub subset: Vec<usize>,
    pub pressure: f64,
}

/// Full output of the Friedland computation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FriedlandReport {
    /// max_J P(J), in nats.
    pub value: f64,
    /// First maximizing subset in the fixed enumeration order.
    pub best_subset: Vec<usize>,
    /// Every subset within [`PRESSURE_TIE_TOL`] of the maximum.
    pub tied_subsets: Vec<Vec<usize>>,
    /// Pressures of all 2^s subsets, in enumeration order (bitmask ascending).
    pub pressures: Vec<SubsetPressure>,
    /// The Gibbs distribution attached to the best subset.
    pub maximizing_nu: Distribution,
    /// |H(ν*) + h(ν*) − value|; the identity holds analytically, so this is
    /// a pure floating-point diagnostic.
    pub consistency_residual: f64,
    /// Pairwise coincidence certificates; empty until attached from a family.
    pub coincidence: Vec<CoincidenceCertificate>,
    /// True when every pair is measure-zero-certified and some generator is
    /// hyperbolic (no zero exponent), the checkable sufficient condition for
    /// the formula to be an equality rather than an upper bound.
    pub equality_certified: bool,
}

/// Per-generator potential values Σ_{j∈J} d_j λ_{i,j}.
fn subset_potentials(spec: &Spectrum, subset: &[usize]) -> Result<Vec<f64>, FriedlandError> {
    for &j in subset {
        if j >= spec.num_blocks() {
            return Err(FriedlandError::BadSubset {
                index: j,
                s: spec.num_blocks(),
            });
        }
    }
    Ok((0..spec.k)
        .map(|i| {
            subset
                .iter()
                .map(|&j| spec.blocks[j].block_dim as f64 * spec.exponent(i, j))
                .sum()
        })
        .collect())
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

fn softmax(values: &[f64]) -> Vec<f64> {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = values.iter().map(|v| (v - m).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.iter().map(|e| e / z).collect()
}

/// Pressure of the subset `J`: log Σ_i exp(Σ_{j∈J} d_j λ_{i,j}), evaluated
/// overflow-safely. The empty subset gives log k.
pub fn pressure(spec: &Spectrum, subset: &[usize]) -> Result<f64, FriedlandError> {
    let potentials = subset_potentials(spec, subset)?;
    Ok(log_sum_exp(&potentials))
}

/// The Gibbs distribution attached to a subset:
/// ν_i ∝ exp(Σ_{j∈J} d_j λ_{i,j}). Sums to one within float accuracy.
pub fn maximizing_distribution(
    spec: &Spectrum,
    subset: &[usize],
) -> Result<Distribution, FriedlandError> {
    let potentials = subset_potentials(spec, subset)?;
    let probs = softmax(&potentials);
    Ok(Distribution::validate(&probs, spec.k).expect("softmax output is a distribution"))
}

/// The skew-product entropy H(ν) + h(ν) of the product measure built from ν.
///
/// By the variational principle this never exceeds the subset-max value of
/// [`friedland_entropy`], and it attains it exactly at the Gibbs
/// distribution of a maximizing subset. Evaluated at that ν*, the quantity
/// is the upper bound for the true orbit-space entropy that remains valid
/// even when the equality certificates fail.
pub fn friedland_upper_bound(spec: &Spectrum, nu: &Distribution) -> Result<f64, FriedlandError> {
    if nu.len() != spec.k {
        return Err(FriedlandError::LengthMismatch {
            expected: spec.k,
            found: nu.len(),
        });
    }
    let h = random_entropy(spec, nu).expect("length checked").value;
    Ok(nu.shannon_entropy() + h)
}

/// Computes the Friedland entropy by enumerating all 2^s subsets.
///
/// The report lists every pressure, the first maximizing subset in bitmask
/// order together with all ties, the Gibbs distribution of the winner, and
/// the consistency residual of the variational identity. Coincidence
/// certificates are not attached here; see [`certified_friedland`].
pub fn friedland_entropy(spec: &Spectrum) -> Result<FriedlandReport, FriedlandError> {
    let s = spec.num_blocks();
    if s > MAX_ENUMERATED_BLOCKS {
        return Err(FriedlandError::TooManyBlocks {
            s,
            max: MAX_ENUMERATED_BLOCKS,
        });
    }
    let mut pressures = Vec::with_capacity(1usize << s);
    let mut best = f64::NEG_INFINITY;
    for mask in 0u64..(1u64 << s) {
        let subset: Vec<usize> = (0..s).filter(|j| mask >> j & 1 == 1).collect();
        let p = pressure(spec, &subset)?;
        if p > best {
            best = p;
        }
        pressures.push(SubsetPressure {
            subset,
            pressure: p,
        });
    }
    let tied_subsets: Vec<Vec<usize>> = pressures
        .iter()
        .filter(|sp| sp.pressure >= best - PRESSURE_TIE_TOL)
        .map(|sp| sp.subset.clone())
        .collect();
    let best_subset = tied_subsets[0].clone();
    let value = pressures
        .iter()
        .find(|sp| sp.subset == best_subset)
        .expect("winner is present")
        .pressure;
    let maximizing_nu = maximizing_distribution(spec, &best_subset)?;
    let bound = friedland_upper_bound(spec, &maximizing_nu)?;
    let consistency_residual = (bound - value).abs();
    Ok(FriedlandReport {
        value,
        best_subset,
        tied_subsets,
        pressures,
        maximizing_nu,
        consistency_residual,
        coincidence: Vec::new(),
        equality_certified: false,
    })
}

/// Exact pairwise coincidence certificates for a family: for each i < j the
/// integer determinant of A_i − A_j decides the status.
pub fn coincidence_certificate(family: &GeneratorFamily) -> Vec<CoincidenceCertificate> {
    let k = family.len();
    let mut out = Vec::with_capacity(k * (k.saturating_sub(1)) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let diff = family.generator(i).sub(family.generator(j));
            let det = diff.determinant();
            let status = if !det.is_zero() {
                CoincidenceStatus::MeasureZeroCertified
            } else if family.generator(i) == family.generator(j) {
                CoincidenceStatus::IdenticalGenerators
            } else {
                CoincidenceStatus::Inconclusive
            };
            out.push(CoincidenceCertificate {
                pair: (i + 1, j + 1),
                det_difference: det,
                status,
            });
        }
    }
    out
}

/// True when some generator has no exponent within [`HYPERBOLICITY_TOL`]
/// of zero.
pub fn has_hyperbolic_generator(spec: &Spectrum) -> bool {
    (0..spec.k).any(|i| {
        spec.blocks
            .iter()
            .all(|b| b.exponents[i].abs() > HYPERBOLICITY_TOL)
    })
}

/// [`friedland_entropy`] with coincidence certificates attached and the
/// equality flag decided: certified when every pair has a null coincidence
/// set and the spectrum contains a hyperbolic generator.
pub fn certified_friedland(
    family: &GeneratorFamily,
    spec: &Spectrum,
) -> Result<FriedlandReport, FriedlandError> {
    let mut report = friedland_entropy(spec)?;
    report.coincidence = coincidence_certificate(family);
    report.equality_certified = report
        .coincidence
        .iter()
        .all(|c| c.status == CoincidenceStatus::MeasureZeroCertified)
        && has_hyperbolic_generator(spec);
    Ok(report)
}

/// Serde adapter storing `BigInt` as a decimal string, so arbitrarily large
/// determinants survive JSON round-trips.
pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let raw = String::deserialize(d)?;
        BigInt::from_str(&raw).map_err(D::Error::custom)
    }
}
