//! Joint spectral decomposition of a commuting family.
//!
//! For commuting nonsingular integer matrices A₁,…,A_k there is a direct sum
//! ℝ^d = V₁ ⊕ … ⊕ V_s of subspaces, invariant under every generator, such
//! that on each V_j the eigenvalues of every restricted generator share a
//! single modulus. The collection {(λ_{i,j}, d_j)} of per-block log-moduli
//! and block dimensions is the spectrum of the action, and it is the only
//! input the entropy formulas need.
//!
//! No closed-form procedure is available, so the decomposition is computed by
//! iterative refinement: starting from the whole space, each generator splits
//! every current block along the modulus clusters of its restriction (via an
//! ordered real Schur form), and the loop runs until no generator splits
//! anything. Commutativity makes the per-generator splits compatible, and the
//! result is validated a posteriori through an invariance residual.
//!
//! Convention: the paper trail for toral actions usually states the common
//! eigenvalue *modulus* per block; this module stores its natural logarithm
//! (the Lyapunov exponent, a "log-modulus") everywhere.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::GeneratorFamily;
use crate::schur::{RealSchur, SchurError};

/// Tolerances steering the decomposition.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SpectralTolerances {
    /// Relative modulus gap below which eigenvalues are grouped into one
    /// block. Integer matrices of modest size have well-separated moduli, so
    /// the default is conservative.
    pub grouping: f64,
    /// Maximum acceptable invariance defect of the computed blocks.
    pub invariance: f64,
}

impl Default for SpectralTolerances {
    fn default() -> Self {
        Self {
            grouping: 1e-8,
            invariance: 1e-8,
        }
    }
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("modulus clustering is ambiguous: generator {generator} sees a chained cluster with relative spread {spread:.3e} > grouping tolerance; offending moduli {moduli:?}")]
    GroupingAmbiguous {
        generator: usize,
        spread: f64,
        moduli: Vec<f64>,
    },
    #[error("invariance residual {residual:.3e} exceeds tolerance {tolerance:.3e}; worst offender: generator {generator}, block {block}")]
    ResidualExceeded {
        residual: f64,
        tolerance: f64,
        generator: usize,
        block: usize,
    },
    #[error("family and spectrum dimensions differ: {family_dim} vs {spectrum_dim}")]
    DimMismatch {
        family_dim: usize,
        spectrum_dim: usize,
    },
    #[error("generator index {index} out of range for k = {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl From<SchurError> for SpectralError {
    fn from(e: SchurError) -> Self {
        SpectralError::Numerical(e.to_string())
    }
}

/// One invariant block of the decomposition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumBlock {
    /// Dimension d_j of the block.
    pub block_dim: usize,
    /// Per-generator log-moduli λ_{i,j}, indexed by generator.
    pub exponents: Vec<f64>,
    /// Orthonormal basis of the block, as a d × d_j matrix of columns.
    pub basis: DMatrix<f64>,
    /// Largest relative modulus deviation inside the block, over generators.
    pub modulus_spread: f64,
}

/// The spectrum of the action: every generator's Lyapunov exponents, arranged
/// along a common invariant block decomposition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Spectrum {
    pub dim: usize,
    /// Number of generators.
    pub k: usize,
    /// Blocks sorted lexicographically by exponent vector, descending.
    pub blocks: Vec<SpectrumBlock>,
    /// Invariance defect of the decomposition (see [`spectrum_residual`]).
    pub residual: f64,
}

impl Spectrum {
    /// Number of blocks `s`.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The exponent λ_{i,j} for generator `i` on block `j`.
    pub fn exponent(&self, i: usize, j: usize) -> f64 {
        self.blocks[j].exponents[i]
    }

    /// Builds a spectrum directly from block data `(d_j, [λ_{i,j}])`,
    /// attaching coordinate-axis bases. Useful for synthetic spectra in
    /// closed-form tests; `joint_spectrum` is the road for real families.
    pub fn from_parts(k: usize, blocks: &[(usize, Vec<f64>)]) -> Self {
        let dim: usize = blocks.iter().map(|(d, _)| d).sum();
        let mut out = Vec::with_capacity(blocks.len());
        let mut offset = 0;
        for (d_j, exps) in blocks {
            assert_eq!(exps.len(), k, "one exponent per generator");
            let mut basis = DMatrix::zeros(dim, *d_j);
            for c in 0..*d_j {
                basis[(offset + c, c)] = 1.0;
            }
            offset += d_j;
            out.push(SpectrumBlock {
                block_dim: *d_j,
                exponents: exps.clone(),
                basis,
                modulus_spread: 0.0,
            });
        }
        let mut spec = Spectrum {
            dim,
            k,
            blocks: out,
            residual: 0.0,
        };
        sort_blocks(&mut spec.blocks);
        spec
    }
}

/// Computes the joint spectrum of a validated family.
///
/// The output is deterministic: blocks are sorted lexicographically by
/// exponent vector (descending) and each basis column has its
/// largest-magnitude entry made positive.
pub fn joint_spectrum(
    family: &GeneratorFamily,
    tol: SpectralTolerances,
) -> Result<Spectrum, SpectralError> {
    let d = family.dim();
    let k = family.len();
    let gens_f64: Vec<DMatrix<f64>> = family.generators().iter().map(|g| g.to_f64()).collect();

    let mut bases: Vec<DMatrix<f64>> = vec![DMatrix::identity(d, d)];
    loop {
        let mut split_any = false;
        for a in &gens_f64 {
            let mut next = Vec::with_capacity(bases.len());
            for basis in bases.drain(..) {
                if basis.ncols() == 1 {
                    next.push(basis);
                    continue;
                }
                let restricted = basis.transpose() * a * &basis;
                let schur = RealSchur::new(&restricted)?;
                let moduli: Vec<f64> = schur.blocks().iter().map(|b| b.modulus).collect();
                let clusters = cluster_by_modulus(&moduli, tol.grouping);
                if clusters.len() == 1 {
                    next.push(basis);
                    continue;
                }
                split_any = true;
                for cluster in clusters {
                    let sub = schur.invariant_basis(&cluster)?;
                    next.push(reorthonormalize(&(&basis * sub)));
                }
            }
            bases = next;
        }
        if !split_any {
            break;
        }
    }

    let mut blocks = Vec::with_capacity(bases.len());
    for basis in &bases {
        let d_j = basis.ncols();
        let mut exponents = Vec::with_capacity(k);
        let mut spread: f64 = 0.0;
        for (gi, a) in gens_f64.iter().enumerate() {
            let restricted = basis.transpose() * a * basis;
            let det = restricted.determinant();
            exponents.push(det.abs().ln() / d_j as f64);
            let moduli: Vec<f64> = RealSchur::new(&restricted)?
                .blocks()
                .iter()
                .map(|b| b.modulus)
                .collect();
            let hi = moduli.iter().cloned().fold(f64::MIN, f64::max);
            let lo = moduli.iter().cloned().fold(f64::MAX, f64::min);
            let rel = (hi - lo) / hi.max(f64::MIN_POSITIVE);
            if rel > spread {
                spread = rel;
            }
            if rel > tol.grouping {
                return Err(SpectralError::GroupingAmbiguous {
                    generator: gi + 1,
                    spread: rel,
                    moduli,
                });
            }
        }
        blocks.push(SpectrumBlock {
            block_dim: d_j,
            exponents,
            basis: sign_fix(basis),
            modulus_spread: spread,
        });
    }
    sort_blocks(&mut blocks);

    let spectrum = Spectrum {
        dim: d,
        k,
        blocks,
        residual: 0.0,
    };
    let (residual, worst) = residual_detail(family, &spectrum)?;
    if residual > tol.invariance {
        return Err(SpectralError::ResidualExceeded {
            residual,
            tolerance: tol.invariance,
            generator: worst.0 + 1,
            block: worst.1 + 1,
        });
    }
    Ok(Spectrum { residual, ..spectrum })
}

/// Classical single-map entropy read off the spectrum: the sum of positive
/// exponents of generator `i`, with block multiplicity.
pub fn generator_pesin_entropy(spec: &Spectrum, i: usize) -> Result<f64, SpectralError> {
    if i >= spec.k {
        return Err(SpectralError::IndexOutOfRange { index: i, k: spec.k });
    }
    Ok(spec
        .blocks
        .iter()
        .map(|b| b.block_dim as f64 * b.exponents[i].max(0.0))
        .sum())
}

/// Invariance defect of a decomposition: the largest, over generators and
/// blocks, of ‖A·Q − Q·(QᵀAQ)‖_F / ‖QᵀAQ‖_F — the component of the mapped
/// basis that leaks out of its block, relative to the part that stays in.
pub fn spectrum_residual(
    family: &GeneratorFamily,
    spec: &Spectrum,
) -> Result<f64, SpectralError> {
    residual_detail(family, spec).map(|(r, _)| r)
}

fn residual_detail(
    family: &GeneratorFamily,
    spec: &Spectrum,
) -> Result<(f64, (usize, usize)), SpectralError> {
    if family.dim() != spec.dim {
        return Err(SpectralError::DimMismatch {
            family_dim: family.dim(),
            spectrum_dim: spec.dim,
        });
    }
    let mut worst = 0.0;
    let mut at = (0, 0);
    for (gi, g) in family.generators().iter().enumerate() {
        let a = g.to_f64();
        for (bi, block) in spec.blocks.iter().enumerate() {
            let q = &block.basis;
            let restricted = q.transpose() * &a * q;
            let defect = &a * q - q * &restricted;
            let inside = restricted.norm();
            let rel = if inside > 0.0 {
                defect.norm() / inside
            } else if defect.norm() > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            if rel > worst {
                worst = rel;
                at = (gi, bi);
            }
        }
    }
    Ok((worst, at))
}

/// Single-linkage clustering of moduli by relative gap. Returns clusters of
/// indices into `moduli`, ordered by decreasing modulus. A chained cluster
/// (internal spread above the tolerance) is kept whole here; the caller's
/// final spread check decides whether any generator resolves it.
fn cluster_by_modulus(moduli: &[f64], rel_gap: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..moduli.len()).collect();
    order.sort_by(|&a, &b| moduli[b].partial_cmp(&moduli[a]).expect("finite moduli"));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        match clusters.last_mut() {
            Some(cluster) => {
                let prev = moduli[*cluster.last().expect("non-empty")];
                let cur = moduli[idx];
                if (prev - cur) / prev.max(f64::MIN_POSITIVE) > rel_gap {
                    clusters.push(vec![idx]);
                } else {
                    cluster.push(idx);
                }
            }
            None => clusters.push(vec![idx]),
        }
    }
    for cluster in &mut clusters {
        cluster.sort_unstable();
    }
    clusters
}

fn reorthonormalize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let qr = m.clone().qr();
    let q = qr.q();
    q.columns(0, m.ncols()).clone_owned()
}

/// Makes each column's largest-magnitude entry positive (first index wins
/// ties), so repeated runs produce identical bases.
fn sign_fix(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    for mut col in out.column_iter_mut() {
        let mut pivot = 0;
        let mut best = 0.0f64;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > best {
                best = v.abs();
                pivot = i;
            }
        }
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
    }
    out
}

fn sort_blocks(blocks: &mut [SpectrumBlock]) {
    blocks.sort_by(|a, b| {
        for (x, y) in a.exponents.iter().zip(&b.exponents) {
            match y.partial_cmp(x).expect("finite exponents") {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{ActionKind, GeneratorFamily};
    use crate::matrix::IntMatrix;
    use approx::assert_relative_eq;

    pub(crate) fn t2_family() -> GeneratorFamily {
        let a1 = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let a2 = IntMatrix::from_rows(&[vec![1, -1], vec![-1, 2]]).unwrap();
        GeneratorFamily::validate(vec![a1, a2], ActionKind::Invertible).unwrap()
    }

    fn spectrum(family: &GeneratorFamily) -> Spectrum {
        joint_spectrum(family, SpectralTolerances::default()).unwrap()
    }

    #[test]
    fn hyperbolic_pair_splits_into_two_lines() {
        let spec = spectrum(&t2_family());
        assert_eq!(spec.num_blocks(), 2);
        assert_eq!(spec.blocks[0].block_dim, 1);
        assert_eq!(spec.blocks[1].block_dim, 1);
        let c = ((3.0 + 5.0f64.sqrt()) / 2.0).ln();
        // descending lexicographic: block with exponents (+c, −c) first
        assert_relative_eq!(spec.exponent(0, 0), c, epsilon = 1e-10);
        assert_relative_eq!(spec.exponent(1, 0), -c, epsilon = 1e-10);
        assert_relative_eq!(spec.exponent(0, 1), -c, epsilon = 1e-10);
        assert_relative_eq!(spec.exponent(1, 1), c, epsilon = 1e-10);
        assert!(spec.residual <= 1e-8);
        assert_relative_eq!(c, 0.9624236501192069, epsilon = 1e-12);
    }

    #[test]
    fn identity_family_is_one_zero_block() {
        let fam = GeneratorFamily::validate(
            vec![IntMatrix::identity(3)],
            ActionKind::Invertible,
        )
        .unwrap();
        let spec = spectrum(&fam);
        assert_eq!(spec.num_blocks(), 1);
        assert_eq!(spec.blocks[0].block_dim, 3);
        assert_eq!(spec.exponent(0, 0), 0.0);
        assert_eq!(spec.residual, 0.0);
    }

    #[test]
    fn diagonal_pair_splits_by_both_generators() {
        let d23 = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let d32 = IntMatrix::from_rows(&[vec![3, 0], vec![0, 2]]).unwrap();
        let fam = GeneratorFamily::validate(vec![d23, d32], ActionKind::Endomorphism).unwrap();
        let spec = spectrum(&fam);
        assert_eq!(spec.num_blocks(), 2);
        // sorted descending: (log3, log2) before (log2, log3)
        assert_relative_eq!(spec.exponent(0, 0), 3.0f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(spec.exponent(1, 0), 2.0f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(spec.exponent(0, 1), 2.0f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(spec.exponent(1, 1), 3.0f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn pesin_entropy_from_spectrum() {
        let spec = spectrum(&t2_family());
        let h = generator_pesin_entropy(&spec, 0).unwrap();
        assert_relative_eq!(h, 0.9624236501192069, epsilon = 1e-10);
        let h2 = generator_pesin_entropy(&spec, 1).unwrap();
        assert_relative_eq!(h2, h, epsilon = 1e-10);
        assert!(matches!(
            generator_pesin_entropy(&spec, 2),
            Err(SpectralError::IndexOutOfRange { .. })
        ));

        let diag = GeneratorFamily::validate(
            vec![IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap()],
            ActionKind::Endomorphism,
        )
        .unwrap();
        let h6 = generator_pesin_entropy(&spectrum(&diag), 0).unwrap();
        assert_relative_eq!(h6, 6.0f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn residual_flags_wrong_basis() {
        let fam = t2_family();
        let spec = spectrum(&fam);
        assert!(spectrum_residual(&fam, &spec).unwrap() <= 1e-8);

        let mut broken = spec.clone();
        let mut wrong = DMatrix::zeros(2, 1);
        wrong[(0, 0)] = 1.0; // e1 is not an invariant line of A1
        broken.blocks[0].basis = wrong;
        assert!(spectrum_residual(&fam, &broken).unwrap() > 0.1);
    }

    #[test]
    fn determinant_consistency_and_dimension_conservation() {
        for fam in [
            t2_family(),
            GeneratorFamily::validate(
                vec![
                    IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).unwrap(),
                    IntMatrix::from_rows(&[vec![5, 3, 0], vec![3, 2, 0], vec![0, 0, 1]]).unwrap(),
                ],
                ActionKind::Invertible,
            )
            .unwrap(),
        ] {
            let spec = spectrum(&fam);
            let total: usize = spec.blocks.iter().map(|b| b.block_dim).sum();
            assert_eq!(total, fam.dim());
            for i in 0..fam.len() {
                let sum: f64 = spec
                    .blocks
                    .iter()
                    .map(|b| b.block_dim as f64 * b.exponents[i])
                    .sum();
                let det_log = crate::matrix::bigint_log_abs(fam.determinant(i));
                assert_relative_eq!(sum, det_log, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn inverse_pair_has_antisymmetric_exponents() {
        let spec = spectrum(&t2_family());
        for block in &spec.blocks {
            assert_relative_eq!(block.exponents[0], -block.exponents[1], epsilon = 1e-9);
        }
    }

    #[test]
    fn generator_order_only_permutes_exponent_columns() {
        let a1 = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let a2 = IntMatrix::from_rows(&[vec![1, -1], vec![-1, 2]]).unwrap();
        let fwd =
            GeneratorFamily::validate(vec![a1.clone(), a2.clone()], ActionKind::Invertible)
                .unwrap();
        let rev = GeneratorFamily::validate(vec![a2, a1], ActionKind::Invertible).unwrap();
        let s1 = spectrum(&fwd);
        let s2 = spectrum(&rev);
        assert_eq!(s1.num_blocks(), s2.num_blocks());
        // swapping the generators permutes exponent columns; after undoing
        // the permutation the block sets must coincide (sort may reorder)
        for b1 in &s1.blocks {
            let matched = s2.blocks.iter().find(|b2| {
                b2.block_dim == b1.block_dim
                    && (b2.exponents[1] - b1.exponents[0]).abs() < 1e-9
                    && (b2.exponents[0] - b1.exponents[1]).abs() < 1e-9
            });
            let b2 = matched.expect("column-permuted block present");
            // identical subspaces: projectors agree
            let p1 = &b1.basis * b1.basis.transpose();
            let p2 = &b2.basis * b2.basis.transpose();
            assert!((p1 - p2).norm() < 1e-8);
        }
    }

    #[test]
    fn blocks_have_homogeneous_moduli() {
        // complex-pair block: rotation-by-90° times 2 has eigenvalues ±2i
        let rot2 = IntMatrix::from_rows(&[vec![0, -2], vec![2, 0]]).unwrap();
        let fam = GeneratorFamily::validate(vec![rot2], ActionKind::Endomorphism).unwrap();
        let spec = spectrum(&fam);
        assert_eq!(spec.num_blocks(), 1);
        assert_eq!(spec.blocks[0].block_dim, 2);
        assert_relative_eq!(spec.exponent(0, 0), 2.0f64.ln(), epsilon = 1e-12);
        assert!(spec.blocks[0].modulus_spread <= 1e-8);
    }

    #[test]
    fn non_orthogonal_invariant_lines_are_found() {
        // upper-triangular generator: invariant lines e1 and (1,-1)/√2
        let tri = IntMatrix::from_rows(&[vec![2, 1], vec![0, 1]]).unwrap();
        let fam = GeneratorFamily::validate(vec![tri], ActionKind::Endomorphism).unwrap();
        let spec = spectrum(&fam);
        assert_eq!(spec.num_blocks(), 2);
        assert!(spec.residual <= 1e-8);
        assert_relative_eq!(spec.exponent(0, 0), 2.0f64.ln(), epsilon = 1e-10);
        assert_relative_eq!(spec.exponent(0, 1), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn iterated_refinement_across_generators() {
        // gen1 distinguishes {1,2} from {3}; gen2 then splits {1,2}
        let g1 = IntMatrix::from_rows(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]).unwrap();
        let g2 = IntMatrix::from_rows(&[vec![5, 0, 0], vec![0, 7, 0], vec![0, 0, 7]]).unwrap();
        let fam = GeneratorFamily::validate(vec![g1, g2], ActionKind::Endomorphism).unwrap();
        let spec = spectrum(&fam);
        assert_eq!(spec.num_blocks(), 3);
        let dims: Vec<usize> = spec.blocks.iter().map(|b| b.block_dim).collect();
        assert_eq!(dims, vec![1, 1, 1]);
    }
}
