//! Entropy of the i.i.d. random action, as a function of the spectrum and the
//! generator distribution ν.
//!
//! With constant spectrum {(λ_{i,j}, d_j)}, the entropy of the random action
//! is the best subset of block contributions,
//!
//! ```text
//! h(ν) = max over J ⊆ {1..s} of Σ_{j∈J} Σ_i ν_i d_j λ_{i,j},
//! ```
//!
//! and because the blocks contribute independently, the maximum is attained
//! on the set of blocks with strictly positive terms. This module evaluates
//! the formula, the per-generator mixture bound, and the extremal
//! distributions of h over the probability simplex.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::Distribution;
use crate::simplex;
use crate::spectral::{generator_pesin_entropy, Spectrum};

#[derive(Debug, Error)]
pub enum EntropyError {
    #[error("distribution has {found} entries but the spectrum has k = {expected} generators")]
    LengthMismatch { expected: usize, found: usize },
}

/// Block terms with magnitude at most this are treated as zero ties and kept
/// out of the reported maximizing subset, so reports are deterministic.
pub const ZERO_TERM_TOL: f64 = 1e-12;

/// Result of evaluating the entropy formula at a distribution ν.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntropyReport {
    /// Entropy value in nats.
    pub value: f64,
    /// Maximizing subset J*: indices of blocks with positive contribution
    /// (zero-tied blocks excluded by convention).
    pub best_subset: Vec<usize>,
    /// Per-block contributions Σ_i ν_i d_j λ_{i,j}.
    pub block_terms: Vec<f64>,
    /// Mixture bound Σ_i ν_i h(f_i); the entropy never exceeds it.
    pub mixture_bound: f64,
    /// Lipschitz-type upper bound from operator norms, when the caller has
    /// the family at hand to compute one (the spectrum alone does not).
    pub lipschitz_bound: Option<f64>,
}

impl EntropyReport {
    pub fn with_lipschitz_bound(mut self, bound: f64) -> Self {
        self.lipschitz_bound = Some(bound);
        self
    }
}

/// Evaluates the entropy formula at `nu`.
pub fn random_entropy(spec: &Spectrum, nu: &Distribution) -> Result<EntropyReport, EntropyError> {
    let block_terms = block_terms(spec, nu)?;
    let best_subset: Vec<usize> = block_terms
        .iter()
        .enumerate()
        .filter(|(_, &t)| t > ZERO_TERM_TOL)
        .map(|(j, _)| j)
        .collect();
    // + 0.0 normalizes the empty sum, which std's Sum folds from -0.0
    let value: f64 = best_subset.iter().map(|&j| block_terms[j]).sum::<f64>() + 0.0;
    let mixture_bound = generator_mixture_bound(spec, nu)?;
    Ok(EntropyReport {
        value,
        best_subset,
        block_terms,
        mixture_bound,
        lipschitz_bound: None,
    })
}

/// The per-block terms Σ_i ν_i d_j λ_{i,j}, in block order.
pub fn block_terms(spec: &Spectrum, nu: &Distribution) -> Result<Vec<f64>, EntropyError> {
    if nu.len() != spec.k {
        return Err(EntropyError::LengthMismatch {
            expected: spec.k,
            found: nu.len(),
        });
    }
    Ok(spec
        .blocks
        .iter()
        .map(|b| {
            b.block_dim as f64
                * b.exponents
                    .iter()
                    .zip(nu.probs())
                    .map(|(l, p)| p * l)
                    .sum::<f64>()
        })
        .collect())
}

/// The ν-mixture of the generators' individual entropies,
/// Σ_i ν_i h(f_i). Always an upper bound for [`random_entropy`]; equality
/// holds when no block carries exponents of both signs across generators.
pub fn generator_mixture_bound(spec: &Spectrum, nu: &Distribution) -> Result<f64, EntropyError> {
    if nu.len() != spec.k {
        return Err(EntropyError::LengthMismatch {
            expected: spec.k,
            found: nu.len(),
        });
    }
    let mut bound = 0.0;
    for i in 0..spec.k {
        let h = generator_pesin_entropy(spec, i).expect("index in range");
        bound += nu.prob(i) * h;
    }
    Ok(bound)
}

/// Direction of the extremization in [`extremal_distribution`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizeSense {
    Maximize,
    Minimize,
}

/// Vertex entropies closer than this count as tied; ties resolve to the
/// smallest generator index.
pub const VERTEX_TIE_TOL: f64 = 1e-9;

/// Extremizes ν ↦ h(ν) over the probability simplex.
///
/// The objective is a maximum of linear functions of ν, hence convex and
/// piecewise linear: its maximum over the simplex sits at a vertex (the
/// generator with the largest single-map entropy, smallest index on ties),
/// while its minimum is found by the epigraph linear program
/// min Σ_j u_j with u_j ≥ 0, u_j ≥ Σ_i ν_i d_j λ_{i,j}, ν in the simplex.
/// Both senses report the entropy value recomputed at the chosen ν.
pub fn extremal_distribution(spec: &Spectrum, sense: OptimizeSense) -> (Distribution, f64) {
    let k = spec.k;
    match sense {
        OptimizeSense::Maximize => {
            let mut best_i = 0;
            let mut best_h = f64::NEG_INFINITY;
            for i in 0..k {
                let h = generator_pesin_entropy(spec, i).expect("index in range");
                if h > best_h + VERTEX_TIE_TOL {
                    best_h = h;
                    best_i = i;
                }
            }
            (Distribution::point_mass(k, best_i), best_h)
        }
        OptimizeSense::Minimize => {
            let s = spec.num_blocks();
            // variables: ν (k) | u (s) | slack w (s)
            let n = k + 2 * s;
            let mut cost = vec![0.0f64; n];
            for j in 0..s {
                cost[k + j] = 1.0;
            }
            let mut rows: Vec<Vec<f64>> = Vec::with_capacity(s + 1);
            let mut rhs = Vec::with_capacity(s + 1);
            let mut simplex_row = vec![0.0f64; n];
            simplex_row[..k].fill(1.0);
            rows.push(simplex_row);
            rhs.push(1.0);
            for (j, block) in spec.blocks.iter().enumerate() {
                // u_j − Σ_i d_j λ_{i,j} ν_i − w_j = 0
                let mut row = vec![0.0f64; n];
                for i in 0..k {
                    row[i] = -(block.block_dim as f64) * block.exponents[i];
                }
                row[k + j] = 1.0;
                row[k + s + j] = -1.0;
                rows.push(row);
                rhs.push(0.0);
            }
            let (x, _lp_value) = simplex::solve_standard_form(&cost, &rows, &rhs)
                .expect("epigraph LP is feasible and bounded");
            let nu = Distribution::validate(&x[..k], k)
                .expect("LP solution satisfies the simplex constraints");
            // report the true objective at the minimizer, not the LP's
            // epigraph value (identical up to pivoting roundoff)
            let value = random_entropy(spec, &nu).expect("lengths match").value;
            (nu, value)
        }
    }
}

/// Explicit maximum over all 2^s subsets, summing terms in block order.
/// This is the brute-force route for cross-checking [`random_entropy`];
/// callers must keep s small.
pub fn subset_max_by_enumeration(block_terms: &[f64]) -> (f64, Vec<usize>) {
    let s = block_terms.len();
    assert!(s <= 24, "enumeration over 2^s subsets needs small s");
    let mut best = 0.0f64;
    let mut best_subset = Vec::new();
    for mask in 0u64..(1u64 << s) {
        let mut sum = 0.0;
        let mut subset = Vec::new();
        for (j, &t) in block_terms.iter().enumerate() {
            if mask >> j & 1 == 1 {
                sum += t;
                subset.push(j);
            }
        }
        if sum > best {
            best = sum;
            best_subset = subset;
        }
    }
    (best, best_subset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Spectrum;
    use approx::assert_relative_eq;

    fn log_golden() -> f64 {
        ((3.0 + 5.0f64.sqrt()) / 2.0).ln()
    }

    fn t2_spectrum() -> Spectrum {
        let c = log_golden();
        Spectrum::from_parts(2, &[(1, vec![c, -c]), (1, vec![-c, c])])
    }

    fn nu(v: &[f64]) -> Distribution {
        Distribution::validate(v, v.len()).unwrap()
    }

    #[test]
    fn t2_closed_form() {
        let spec = t2_spectrum();
        let report = random_entropy(&spec, &nu(&[0.7, 0.3])).unwrap();
        assert_relative_eq!(report.value, 0.4 * log_golden(), epsilon = 1e-14);
        assert_relative_eq!(report.value, 0.3849694600, epsilon = 1e-10);
        assert_eq!(report.best_subset, vec![0]);

        let balanced = random_entropy(&spec, &nu(&[0.5, 0.5])).unwrap();
        assert_eq!(balanced.value, 0.0);
        assert!(balanced.best_subset.is_empty());
    }

    #[test]
    fn single_generator_reduces_to_pesin() {
        let c = log_golden();
        let spec = Spectrum::from_parts(1, &[(1, vec![c]), (1, vec![-c])]);
        let report = random_entropy(&spec, &nu(&[1.0])).unwrap();
        assert_relative_eq!(report.value, c, epsilon = 1e-14);
        assert_relative_eq!(report.value, 0.9624236501, epsilon = 1e-9);
        assert_relative_eq!(report.mixture_bound, report.value, epsilon = 1e-14);
    }

    #[test]
    fn mixture_bound_examples() {
        let spec = t2_spectrum();
        let b = generator_mixture_bound(&spec, &nu(&[0.5, 0.5])).unwrap();
        assert_relative_eq!(b, log_golden(), epsilon = 1e-12);
        let e = random_entropy(&spec, &nu(&[0.5, 0.5])).unwrap().value;
        assert!(e <= b + 1e-9);

        // all-positive exponents: the bound is attained
        let diag = Spectrum::from_parts(
            2,
            &[
                (1, vec![2.0f64.ln(), 3.0f64.ln()]),
                (1, vec![3.0f64.ln(), 2.0f64.ln()]),
            ],
        );
        let bound = generator_mixture_bound(&diag, &nu(&[0.5, 0.5])).unwrap();
        let value = random_entropy(&diag, &nu(&[0.5, 0.5])).unwrap().value;
        assert_relative_eq!(bound, 6.0f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(value, bound, epsilon = 1e-12);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let spec = t2_spectrum();
        assert!(matches!(
            random_entropy(&spec, &nu(&[1.0])),
            Err(EntropyError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn maximize_picks_best_vertex() {
        let spec = t2_spectrum();
        let (dist, value) = extremal_distribution(&spec, OptimizeSense::Maximize);
        assert_eq!(dist.probs(), &[1.0, 0.0]);
        assert_relative_eq!(value, log_golden(), epsilon = 1e-12);

        let single = Spectrum::from_parts(1, &[(1, vec![log_golden()])]);
        let (d1, v1) = extremal_distribution(&single, OptimizeSense::Maximize);
        assert_eq!(d1.probs(), &[1.0]);
        assert_relative_eq!(v1, log_golden(), epsilon = 1e-12);
    }

    #[test]
    fn minimize_finds_balanced_zero() {
        let spec = t2_spectrum();
        let (dist, value) = extremal_distribution(&spec, OptimizeSense::Minimize);
        assert_relative_eq!(value, 0.0, epsilon = 1e-9);
        assert!((dist.prob(0) - dist.prob(1)).abs() <= 1e-9);

        // one-point simplex: both senses agree
        let single = Spectrum::from_parts(1, &[(1, vec![log_golden()])]);
        let (d1, v1) = extremal_distribution(&single, OptimizeSense::Minimize);
        assert_eq!(d1.probs(), &[1.0]);
        assert_relative_eq!(v1, log_golden(), epsilon = 1e-9);
    }

    #[test]
    fn greedy_value_matches_enumeration() {
        let spec = t2_spectrum();
        for dist in [nu(&[0.7, 0.3]), nu(&[1.0, 0.0]), nu(&[0.2, 0.8])] {
            let report = random_entropy(&spec, &dist).unwrap();
            let (enumerated, _) = subset_max_by_enumeration(&report.block_terms);
            assert_eq!(report.value, enumerated);
        }
    }

    #[test]
    fn convexity_spot_checks() {
        let spec = Spectrum::from_parts(
            3,
            &[
                (1, vec![0.7, -0.2, 0.1]),
                (2, vec![-0.3, 0.5, -0.9]),
                (1, vec![0.2, 0.2, 0.4]),
            ],
        );
        let a = nu(&[0.6, 0.3, 0.1]);
        let b = nu(&[0.1, 0.2, 0.7]);
        let va = random_entropy(&spec, &a).unwrap().value;
        let vb = random_entropy(&spec, &b).unwrap().value;
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let mix: Vec<f64> = a
                .probs()
                .iter()
                .zip(b.probs())
                .map(|(x, y)| t * x + (1.0 - t) * y)
                .collect();
            let vm = random_entropy(&spec, &nu(&mix)).unwrap().value;
            assert!(vm <= t * va + (1.0 - t) * vb + 1e-9);
        }
    }

    #[test]
    fn scaling_law_on_exponents() {
        // multiplying every exponent by m (the spectrum of the m-th powers)
        // multiplies the entropy by m
        let spec = t2_spectrum();
        let dist = nu(&[0.7, 0.3]);
        let base = random_entropy(&spec, &dist).unwrap().value;
        for m in [2usize, 3, 5] {
            let scaled = Spectrum::from_parts(
                2,
                &spec
                    .blocks
                    .iter()
                    .map(|b| {
                        (
                            b.block_dim,
                            b.exponents.iter().map(|l| l * m as f64).collect(),
                        )
                    })
                    .collect::<Vec<_>>(),
            );
            let v = random_entropy(&scaled, &dist).unwrap().value;
            assert_relative_eq!(v, m as f64 * base, epsilon = 1e-12);
        }
    }

    #[test]
    fn lp_minimum_matches_grid_search() {
        let spec = Spectrum::from_parts(
            2,
            &[(1, vec![0.9, -0.4]), (1, vec![-0.7, 0.6]), (1, vec![0.1, 0.05])],
        );
        let (_, lp_value) = extremal_distribution(&spec, OptimizeSense::Minimize);
        let mut grid_best = f64::INFINITY;
        for t in 0..=200 {
            let p = t as f64 / 200.0;
            let v = random_entropy(&spec, &nu(&[p, 1.0 - p])).unwrap().value;
            grid_best = grid_best.min(v);
        }
        assert!((lp_value - grid_best).abs() <= 1e-6 + 1.0 / 200.0);
        assert!(lp_value <= grid_best + 1e-9);
    }
}
