//! Independent verification oracles.
//!
//! Each closed formula in this crate is the n → ∞ limit of a finite-n
//! functional that can be evaluated directly, either by exact weighted
//! enumeration over all words of length n or by seeded Monte Carlo sampling.
//! The oracles implement those finite-n functionals without going through
//! the formulas they check:
//!
//! * [`block_word_oracle`] — the Birkhoff running-maximum functional over
//!   the spectrum blocks, whose almost-sure limit is the entropy value;
//! * [`singular_value_oracle`] — positive log singular values of exact
//!   integer word products, the volume-growth route to the same limit;
//! * [`circle_cover_oracle`] — exact separated-set counts for random
//!   compositions of expanding circle maps.
//!
//! Monte Carlo runs draw every sample from its own counter-derived ChaCha
//! substream, and reductions are fixed-shape pairwise sums over the sample
//! index, so results are bit-identical for any worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::family::{Distribution, GeneratorFamily};
use crate::matrix::{bigint_log_abs, IntMatrix};
use crate::spectral::Spectrum;

/// Exact enumeration is limited to kⁿ ≤ 2²⁴ words.
pub const ENUMERATION_CAP: u64 = 1 << 24;

/// Compound-matrix dimensions are capped at C(d, ⌊d/2⌋) ≤ 252, i.e. d ≤ 10.
pub const MAX_SVD_DIMENSION: usize = 10;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("exact enumeration needs k^n = {k}^{n} ≤ {cap} words")]
    EnumerationTooLarge { k: usize, n: usize, cap: u64 },
    #[error("Monte Carlo mode needs at least one sample")]
    BadSampleCount,
    #[error("epsilon is {eps}, but must lie strictly between 0 and 1")]
    BadEpsilon { eps: f64 },
    #[error("degree {degree} at index {index}: expanding circle maps need |degree| ≥ 2")]
    BadDegree { index: usize, degree: i64 },
    #[error("distribution has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension {dim} exceeds the compound-matrix cap ({max})")]
    UnsupportedDimension { dim: usize, max: usize },
    #[error("floating-point overflow: {0}")]
    Overflow(String),
}

/// How an oracle explores word space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Weighted enumeration of every word (deterministic, no sampling error).
    Exact,
    /// Seeded i.i.d. sampling of words under ν.
    MonteCarlo { samples: usize, seed: u64 },
}

/// A finite-n estimate produced by one of the oracles.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub estimate: f64,
    /// Word length.
    pub n: usize,
    /// Sample count; 0 means exact enumeration.
    pub samples: usize,
    /// Standard error of the mean; present exactly in Monte Carlo mode.
    pub std_error: Option<f64>,
    /// RNG seed; 0 in exact mode.
    pub seed: u64,
}

/// Fixed-shape pairwise summation: depends only on the slice contents, never
/// on thread scheduling.
fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        len => {
            let mid = len / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// One ChaCha substream per sample index: reproducible for any parallel
/// schedule, and mutually independent across samples.
fn sample_rng(seed: u64, sample_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample_index);
    rng
}

fn cumulative(nu: &Distribution) -> Vec<f64> {
    let mut acc = 0.0;
    nu.probs()
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn draw_letter(rng: &mut ChaCha8Rng, cum: &[f64]) -> usize {
    let u: f64 = rng.random();
    cum.iter().position(|&c| u < c).unwrap_or(cum.len() - 1)
}

fn check_exact_cap(k: usize, n: usize) -> Result<(), OracleError> {
    let mut total = 1u64;
    for _ in 0..n {
        total = total.saturating_mul(k as u64);
        if total > ENUMERATION_CAP {
            return Err(OracleError::EnumerationTooLarge {
                k,
                n,
                cap: ENUMERATION_CAP,
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// block word oracle
// ---------------------------------------------------------------------------

/// The finite-n running-maximum functional of the entropy proof:
///
/// ```text
/// (1/n) · E_ω [ Σ_j max(0, max_{0≤t≤n−1} Σ_{r=0}^{t} d_j λ_{ω_r, j}) ]
/// ```
///
/// whose limit in n is the entropy value at ν. The running maximum genuinely
/// depends on letter order, so exact mode walks the full word tree.
pub fn block_word_oracle(
    spec: &Spectrum,
    nu: &Distribution,
    n: usize,
    mode: OracleMode,
) -> Result<OracleEstimate, OracleError> {
    if nu.len() != spec.k {
        return Err(OracleError::LengthMismatch {
            expected: spec.k,
            found: nu.len(),
        });
    }
    assert!(n >= 1, "word length must be positive");
    // per-letter increments of the block sums
    let steps: Vec<Vec<f64>> = (0..spec.k)
        .map(|i| {
            spec.blocks
                .iter()
                .map(|b| b.block_dim as f64 * b.exponents[i])
                .collect()
        })
        .collect();
    let s = spec.num_blocks();
    match mode {
        OracleMode::Exact => {
            check_exact_cap(spec.k, n)?;
            let mut walker = WordWalker {
                steps: &steps,
                probs: nu.probs(),
                n,
                sums: vec![0.0; s],
                maxes: vec![0.0; s],
                total: 0.0,
            };
            walker.walk(0, 1.0);
            Ok(OracleEstimate {
                estimate: walker.total / n as f64,
                n,
                samples: 0,
                std_error: None,
                seed: 0,
            })
        }
        OracleMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(OracleError::BadSampleCount);
            }
            let cum = cumulative(nu);
            let values: Vec<f64> = (0..samples as u64)
                .into_par_iter()
                .map(|idx| {
                    let mut rng = sample_rng(seed, idx);
                    let mut sums = vec![0.0f64; s];
                    let mut maxes = vec![0.0f64; s];
                    for _ in 0..n {
                        let letter = draw_letter(&mut rng, &cum);
                        for j in 0..s {
                            sums[j] += steps[letter][j];
                            if sums[j] > maxes[j] {
                                maxes[j] = sums[j];
                            }
                        }
                    }
                    maxes.iter().sum::<f64>() / n as f64
                })
                .collect();
            let (mean, std_error) = mean_and_std_error(&values);
            Ok(OracleEstimate {
                estimate: mean,
                n,
                samples,
                std_error: Some(std_error),
                seed,
            })
        }
    }
}

/// Depth-first enumeration of all words, sharing prefix partial sums.
struct WordWalker<'a> {
    steps: &'a [Vec<f64>],
    probs: &'a [f64],
    n: usize,
    sums: Vec<f64>,
    maxes: Vec<f64>,
    total: f64,
}

impl WordWalker<'_> {
    fn walk(&mut self, depth: usize, weight: f64) {
        if depth == self.n {
            let value: f64 = self.maxes.iter().sum();
            self.total += weight * value;
            return;
        }
        let s = self.sums.len();
        for letter in 0..self.steps.len() {
            let p = self.probs[letter];
            if p == 0.0 {
                continue;
            }
            let saved_sums = self.sums.clone();
            let saved_maxes = self.maxes.clone();
            for j in 0..s {
                self.sums[j] += self.steps[letter][j];
                if self.sums[j] > self.maxes[j] {
                    self.maxes[j] = self.sums[j];
                }
            }
            self.walk(depth + 1, weight * p);
            self.sums = saved_sums;
            self.maxes = saved_maxes;
        }
    }
}

// ---------------------------------------------------------------------------
// singular value oracle
// ---------------------------------------------------------------------------

/// Monte Carlo mean of `(1/n) Σ_l max(log σ_l(P_ω), 0)` over exact integer
/// word products `P_ω` of length n, which converges to the entropy value.
///
/// The positive log singular values of huge integer matrices come out of the
/// exterior powers: the product of the top r singular values is the largest
/// singular value of the r-th compound matrix, whose entries are exact r×r
/// minors.  Each compound is rescaled by a power of two before the float SVD,
/// so conditioning never mixes magnitudes across the enormous dynamic range.
pub fn singular_value_oracle(
    family: &GeneratorFamily,
    nu: &Distribution,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<OracleEstimate, OracleError> {
    if nu.len() != family.len() {
        return Err(OracleError::LengthMismatch {
            expected: family.len(),
            found: nu.len(),
        });
    }
    if samples == 0 {
        return Err(OracleError::BadSampleCount);
    }
    if family.dim() > MAX_SVD_DIMENSION {
        return Err(OracleError::UnsupportedDimension {
            dim: family.dim(),
            max: MAX_SVD_DIMENSION,
        });
    }
    assert!(n >= 1, "word length must be positive");
    let cum = cumulative(nu);
    let k = family.len();
    let values: Vec<Result<f64, OracleError>> = (0..samples as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rng = sample_rng(seed, idx);
            let mut counts = vec![0u64; k];
            for _ in 0..n {
                counts[draw_letter(&mut rng, &cum)] += 1;
            }
            // commutativity is validated, so the product only depends on counts
            let mut product = IntMatrix::identity(family.dim());
            for (i, &c) in counts.iter().enumerate() {
                if c > 0 {
                    product = product.mul(&family.generator(i).pow(c));
                }
            }
            Ok(positive_log_singular_sum(&product)? / n as f64)
        })
        .collect();
    let values: Vec<f64> = values.into_iter().collect::<Result<_, _>>()?;
    let (mean, std_error) = mean_and_std_error(&values);
    Ok(OracleEstimate {
        estimate: mean,
        n,
        samples,
        std_error: Some(std_error),
        seed,
    })
}

/// Σ_l max(log σ_l, 0) = max_{0≤r≤d} log σ₁(Λʳ P), with Λ⁰ giving 0.
pub(crate) fn positive_log_singular_sum(p: &IntMatrix) -> Result<f64, OracleError> {
    let d = p.dim();
    let mut best = 0.0f64;
    for r in 1..=d {
        let compound = compound_matrix(p, r);
        let (scaled, log_scale) = compound.to_f64_scaled();
        if scaled.iter().any(|v| !v.is_finite()) {
            return Err(OracleError::Overflow(format!(
                "compound matrix of order {r} did not fit f64 after rescaling"
            )));
        }
        let sigma1 = scaled
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0f64, f64::max);
        let log_sigma = sigma1.ln() + log_scale;
        if log_sigma > best {
            best = log_sigma;
        }
    }
    Ok(best)
}

/// The r-th compound (exterior power) of `p`: entries are the r×r minors,
/// indexed by lexicographic r-subsets of rows and columns.
pub(crate) fn compound_matrix(p: &IntMatrix, r: usize) -> IntMatrix {
    let d = p.dim();
    if r == 1 {
        return p.clone();
    }
    let subsets = lex_subsets(d, r);
    let rows: Vec<Vec<BigInt>> = subsets
        .iter()
        .map(|ri| {
            subsets
                .iter()
                .map(|ci| p.submatrix_determinant(ri, ci))
                .collect()
        })
        .collect();
    IntMatrix::from_bigint_rows(rows).expect("compound matrix is square")
}

fn lex_subsets(d: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    fn rec(start: usize, d: usize, r: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == r {
            out.push(current.clone());
            return;
        }
        for i in start..d {
            current.push(i);
            rec(i + 1, d, r, current, out);
            current.pop();
        }
    }
    rec(0, d, r, &mut current, &mut out);
    out
}

// ---------------------------------------------------------------------------
// circle cover oracle
// ---------------------------------------------------------------------------

/// Exact separated-set counting for random compositions of expanding circle
/// maps x ↦ p·x (mod 1).
///
/// Along a word ω the n-step metric stretches by Π_{r<n} p_{ω_r}, so the
/// largest ε-separated set has exactly `floor(Π p / ε)` points; the count is
/// evaluated in integer arithmetic by writing ε as the dyadic rational its
/// f64 bit pattern encodes. The oracle returns `(1/n)·E_ω[log count]`, which
/// converges to Σ_i ν_i log p_i for fixed ε.
///
/// The count depends on the word only through its letter multiset, so exact
/// mode enumerates letter counts with multinomial weights (the kⁿ cap is
/// still enforced, matching the word-enumeration contract).
pub fn circle_cover_oracle(
    degrees: &[i64],
    nu: &Distribution,
    n: usize,
    eps: f64,
    mode: OracleMode,
) -> Result<OracleEstimate, OracleError> {
    if nu.len() != degrees.len() {
        return Err(OracleError::LengthMismatch {
            expected: degrees.len(),
            found: nu.len(),
        });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(OracleError::BadEpsilon { eps });
    }
    for (index, &degree) in degrees.iter().enumerate() {
        if degree.abs() < 2 {
            return Err(OracleError::BadDegree { index, degree });
        }
    }
    assert!(n >= 1, "word length must be positive");
    let k = degrees.len();
    let log_count = |counts: &[u64]| -> f64 {
        let mut product = BigInt::one();
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 {
                product *= BigInt::from(degrees[i].unsigned_abs()).pow(c as u32);
            }
        }
        bigint_log_abs(&separated_count(&product, eps))
    };
    match mode {
        OracleMode::Exact => {
            check_exact_cap(k, n)?;
            let mut total = 0.0f64;
            let mut counts = vec![0u64; k];
            enumerate_compositions(n as u64, 0, &mut counts, &mut |counts| {
                let weight = multinomial_weight(counts, nu.probs());
                if weight > 0.0 {
                    total += weight * log_count(counts);
                }
            });
            Ok(OracleEstimate {
                estimate: total / n as f64,
                n,
                samples: 0,
                std_error: None,
                seed: 0,
            })
        }
        OracleMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(OracleError::BadSampleCount);
            }
            let cum = cumulative(nu);
            let values: Vec<f64> = (0..samples as u64)
                .into_par_iter()
                .map(|idx| {
                    let mut rng = sample_rng(seed, idx);
                    let mut counts = vec![0u64; k];
                    for _ in 0..n {
                        counts[draw_letter(&mut rng, &cum)] += 1;
                    }
                    log_count(&counts) / n as f64
                })
                .collect();
            let (mean, std_error) = mean_and_std_error(&values);
            Ok(OracleEstimate {
                estimate: mean,
                n,
                samples,
                std_error: Some(std_error),
                seed,
            })
        }
    }
}

/// `floor(product / eps)` exactly: eps is decomposed into the dyadic rational
/// `mantissa · 2^exponent` its bit pattern encodes, so the division is pure
/// integer arithmetic.
fn separated_count(product: &BigInt, eps: f64) -> BigInt {
    let (mantissa, exponent) = dyadic_parts(eps);
    debug_assert!(exponent < 0, "eps < 1 always has a negative exponent");
    (product << ((-exponent) as u64)) / BigInt::from(mantissa)
}

/// Exact dyadic decomposition of a positive finite f64: x = mantissa · 2^exp.
fn dyadic_parts(x: f64) -> (u64, i64) {
    assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let exp_bits = (bits >> 52) & 0x7ff;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits as i64 - 1075)
    }
}

fn enumerate_compositions(
    remaining: u64,
    index: usize,
    counts: &mut Vec<u64>,
    visit: &mut impl FnMut(&[u64]),
) {
    if index == counts.len() - 1 {
        counts[index] = remaining;
        visit(counts);
        counts[index] = 0;
        return;
    }
    for c in 0..=remaining {
        counts[index] = c;
        enumerate_compositions(remaining - c, index + 1, counts, visit);
        counts[index] = 0;
    }
}

/// Multinomial weight n!/(c₁!…c_k!) · Π νᵢ^cᵢ of a letter-count vector.
fn multinomial_weight(counts: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = counts.iter().sum();
    let mut coeff = BigInt::one();
    let mut denom = BigInt::one();
    let mut acc = 0u64;
    for &c in counts {
        for i in 1..=c {
            acc += 1;
            coeff *= BigInt::from(acc);
            denom *= BigInt::from(i);
        }
    }
    debug_assert_eq!(acc, n);
    let coeff = (coeff / denom).to_f64().expect("multinomial fits f64");
    let mut weight = coeff;
    for (&c, &p) in counts.iter().zip(probs) {
        if c > 0 {
            weight *= p.powi(c as i32);
        } else if p == 0.0 {
            continue;
        }
    }
    weight
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::random_entropy;
    use crate::family::ActionKind;
    use crate::spectral::{joint_spectrum, SpectralTolerances};
    use approx::assert_relative_eq;

    fn log_golden() -> f64 {
        ((3.0 + 5.0f64.sqrt()) / 2.0).ln()
    }

    fn t2_spectrum() -> Spectrum {
        let c = log_golden();
        Spectrum::from_parts(2, &[(1, vec![c, -c]), (1, vec![-c, c])])
    }

    fn t2_family() -> GeneratorFamily {
        let a1 = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let a2 = IntMatrix::from_rows(&[vec![1, -1], vec![-1, 2]]).unwrap();
        GeneratorFamily::validate(vec![a1, a2], ActionKind::Invertible).unwrap()
    }

    fn nu(v: &[f64]) -> Distribution {
        Distribution::validate(v, v.len()).unwrap()
    }

    #[test]
    fn deterministic_word_gives_pesin_value() {
        let c = log_golden();
        let spec = Spectrum::from_parts(1, &[(1, vec![c]), (1, vec![-c])]);
        for n in [1, 5, 9] {
            let est = block_word_oracle(&spec, &nu(&[1.0]), n, OracleMode::Exact).unwrap();
            assert_relative_eq!(est.estimate, c, epsilon = 1e-13);
            assert_eq!(est.samples, 0);
            assert!(est.std_error.is_none());
        }
    }

    #[test]
    fn t2_exact_enumeration_approaches_formula() {
        // the running-max functional carries an intrinsic ≈1.4c/n excess at
        // finite n (two ruin-probability terms of ≈0.75c each), so the gaps
        // shrink like 1/n; the exact values are frozen as regression anchors
        let spec = t2_spectrum();
        let dist = nu(&[0.7, 0.3]);
        let target = random_entropy(&spec, &dist).unwrap().value;
        let mut gaps = Vec::new();
        for n in [6, 10, 14] {
            let est = block_word_oracle(&spec, &dist, n, OracleMode::Exact).unwrap();
            gaps.push((est.estimate - target).abs());
        }
        assert_relative_eq!(gaps[0], 0.1922210259437085, epsilon = 1e-10);
        assert_relative_eq!(gaps[1], 0.1296962319939065, epsilon = 1e-10);
        assert_relative_eq!(gaps[2], 0.0973919078636391, epsilon = 1e-10);
        assert!(gaps[2] < gaps[1] && gaps[1] < gaps[0], "gaps {gaps:?} shrink");
        // gap · n stays bounded: the decay really is O(1/n)
        assert!(gaps[2] * 14.0 < 1.5);
    }

    #[test]
    fn driftless_walk_shrinks_toward_zero() {
        let spec = t2_spectrum();
        let dist = nu(&[0.5, 0.5]);
        let at6 = block_word_oracle(&spec, &dist, 6, OracleMode::Exact).unwrap();
        let at14 = block_word_oracle(&spec, &dist, 14, OracleMode::Exact).unwrap();
        assert!(at14.estimate > 0.0);
        assert!(at14.estimate < at6.estimate);
        // running maxima of a driftless ±c walk scale like c·√(8/(πn))
        assert_relative_eq!(at14.estimate, 0.3488584331643563, epsilon = 1e-10);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let spec = t2_spectrum();
        let err =
            block_word_oracle(&spec, &nu(&[0.5, 0.5]), 25, OracleMode::Exact).unwrap_err();
        assert!(matches!(err, OracleError::EnumerationTooLarge { .. }));
    }

    #[test]
    fn monte_carlo_is_seed_deterministic_across_pools() {
        let spec = t2_spectrum();
        let dist = nu(&[0.7, 0.3]);
        let mode = OracleMode::MonteCarlo {
            samples: 500,
            seed: 7,
        };
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| block_word_oracle(&spec, &dist, 20, mode).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(
            a.std_error.unwrap().to_bits(),
            b.std_error.unwrap().to_bits()
        );
        // a different seed moves the estimate
        let c = block_word_oracle(
            &spec,
            &dist,
            20,
            OracleMode::MonteCarlo {
                samples: 500,
                seed: 8,
            },
        )
        .unwrap();
        assert_ne!(a.estimate.to_bits(), c.estimate.to_bits());
    }

    #[test]
    fn monte_carlo_matches_exact_at_same_n() {
        let spec = t2_spectrum();
        let dist = nu(&[0.7, 0.3]);
        let exact = block_word_oracle(&spec, &dist, 10, OracleMode::Exact).unwrap();
        let mc = block_word_oracle(
            &spec,
            &dist,
            10,
            OracleMode::MonteCarlo {
                samples: 100_000,
                seed: 42,
            },
        )
        .unwrap();
        let sigma = mc.std_error.unwrap();
        assert!(
            (mc.estimate - exact.estimate).abs() <= 3.0 * sigma,
            "MC {} vs exact {} (3σ = {})",
            mc.estimate,
            exact.estimate,
            3.0 * sigma
        );
    }

    #[test]
    fn multiset_full_sum_matches_word_enumeration() {
        // the n-th full sum (no running max) depends only on letter counts,
        // so multinomial weighting must agree with the word walk
        let spec = t2_spectrum();
        let dist = nu(&[0.7, 0.3]);
        let n = 8usize;
        let steps: Vec<Vec<f64>> = (0..2)
            .map(|i| {
                spec.blocks
                    .iter()
                    .map(|b| b.block_dim as f64 * b.exponents[i])
                    .collect()
            })
            .collect();
        // word enumeration
        let mut word_total = 0.0f64;
        for mask in 0u32..(1 << n) {
            let mut weight = 1.0;
            let mut sums = [0.0f64; 2];
            for r in 0..n {
                let letter = (mask >> r & 1) as usize;
                weight *= dist.prob(letter);
                sums[0] += steps[letter][0];
                sums[1] += steps[letter][1];
            }
            word_total += weight * (sums[0].max(0.0) + sums[1].max(0.0));
        }
        // multiset enumeration
        let mut multi_total = 0.0f64;
        let mut counts = vec![0u64; 2];
        enumerate_compositions(n as u64, 0, &mut counts, &mut |counts| {
            let weight = multinomial_weight(counts, dist.probs());
            let mut sums = [0.0f64; 2];
            for (i, &c) in counts.iter().enumerate() {
                sums[0] += c as f64 * steps[i][0];
                sums[1] += c as f64 * steps[i][1];
            }
            multi_total += weight * (sums[0].max(0.0) + sums[1].max(0.0));
        });
        assert_relative_eq!(word_total, multi_total, epsilon = 1e-12);
    }

    #[test]
    fn singular_values_of_deterministic_powers() {
        let a1 = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let fam = GeneratorFamily::validate(vec![a1], ActionKind::Invertible).unwrap();
        for n in [10usize, 100, 400] {
            let est = singular_value_oracle(&fam, &nu(&[1.0]), n, 3, 1).unwrap();
            assert_relative_eq!(est.estimate, log_golden(), epsilon = 1e-9);
        }
    }

    #[test]
    fn identity_products_have_zero_growth() {
        let fam = GeneratorFamily::validate(
            vec![IntMatrix::identity(3)],
            ActionKind::Invertible,
        )
        .unwrap();
        let est = singular_value_oracle(&fam, &nu(&[1.0]), 50, 2, 9).unwrap();
        assert_eq!(est.estimate, 0.0);
    }

    #[test]
    fn t2_singular_value_oracle_close_to_formula() {
        let fam = t2_family();
        let spec = joint_spectrum(&fam, SpectralTolerances::default()).unwrap();
        let dist = nu(&[0.7, 0.3]);
        let target = random_entropy(&spec, &dist).unwrap().value;
        let est = singular_value_oracle(&fam, &dist, 400, 400, 2024).unwrap();
        assert!(
            (est.estimate - target).abs() < 0.02,
            "estimate {} vs target {target}",
            est.estimate
        );
    }

    #[test]
    fn compound_matrices_recover_all_singular_values() {
        // 3x3 with known singular values 6, 2, 1 (diagonal times rotation-free)
        let p = IntMatrix::from_rows(&[vec![6, 0, 0], vec![0, 2, 0], vec![0, 0, 1]]).unwrap();
        let total = positive_log_singular_sum(&p).unwrap();
        assert_relative_eq!(total, (12.0f64).ln(), epsilon = 1e-12);
        // mixed signs: only σ > 1 contribute
        let q = IntMatrix::from_rows(&[vec![4, 0], vec![0, 1]]).unwrap();
        assert_relative_eq!(
            positive_log_singular_sum(&q).unwrap(),
            4.0f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn circle_counts_are_exact() {
        // degrees (2,2), eps = 0.5: count = 2^(n+1) exactly
        let dist = nu(&[0.5, 0.5]);
        for n in [3usize, 8] {
            let est = circle_cover_oracle(&[2, 2], &dist, n, 0.5, OracleMode::Exact).unwrap();
            let expected = 2.0f64.ln() + 2.0f64.ln() / n as f64;
            assert_relative_eq!(est.estimate, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn circle_oracle_approaches_degree_formula() {
        // at fixed ε the estimate is Σν log p + |log ε|/n up to a floor
        // correction, so the ε-offset dominates at small n and fades as 1/n
        let dist = nu(&[0.5, 0.5]);
        let target = 6.0f64.sqrt().ln();
        let eps = 0.01f64;
        let est = circle_cover_oracle(&[2, 3], &dist, 12, eps, OracleMode::Exact).unwrap();
        assert_relative_eq!(est.estimate, 1.2796438939613668, epsilon = 1e-10);
        assert_relative_eq!(
            est.estimate - (1.0 / eps).ln() / 12.0,
            target,
            epsilon = 1e-6
        );
        let further = circle_cover_oracle(&[2, 3], &dist, 24, eps, OracleMode::Exact).unwrap();
        assert!((further.estimate - target).abs() < (est.estimate - target).abs());
        // at n = 400 the offset has decayed below 0.02
        let mc = circle_cover_oracle(
            &[2, 3],
            &dist,
            400,
            eps,
            OracleMode::MonteCarlo {
                samples: 500,
                seed: 11,
            },
        )
        .unwrap();
        assert!(
            (mc.estimate - target).abs() < 0.02,
            "estimate {} vs target {target}",
            mc.estimate
        );
        // single degree: deterministic, converges to log p
        let single =
            circle_cover_oracle(&[5], &nu(&[1.0]), 40, 0.25, OracleMode::Exact).unwrap();
        assert!((single.estimate - 5.0f64.ln()).abs() < 0.05);
    }

    #[test]
    fn circle_oracle_rejects_bad_inputs() {
        let dist = nu(&[0.5, 0.5]);
        assert!(matches!(
            circle_cover_oracle(&[2, 3], &dist, 5, 1.5, OracleMode::Exact),
            Err(OracleError::BadEpsilon { .. })
        ));
        assert!(matches!(
            circle_cover_oracle(&[2, 1], &dist, 5, 0.1, OracleMode::Exact),
            Err(OracleError::BadDegree { index: 1, .. })
        ));
        assert!(matches!(
            circle_cover_oracle(&[2], &dist, 5, 0.1, OracleMode::Exact),
            Err(OracleError::LengthMismatch { .. })
        ));
        assert!(matches!(
            block_word_oracle(
                &t2_spectrum(),
                &dist,
                5,
                OracleMode::MonteCarlo {
                    samples: 0,
                    seed: 0
                }
            ),
            Err(OracleError::BadSampleCount)
        ));
    }

    #[test]
    fn dyadic_decomposition_is_exact() {
        for x in [0.5, 0.01, 0.1, 0.25, 1e-300, 0.9999999] {
            let (m, e) = dyadic_parts(x);
            // reconstruct in two power-of-two steps so the scale factors
            // themselves stay representable
            let half = e / 2;
            let back = m as f64 * 2.0f64.powi(half as i32) * 2.0f64.powi((e - half) as i32);
            assert_eq!(back.to_bits(), x.to_bits(), "roundtrip for {x}");
        }
    }
}

