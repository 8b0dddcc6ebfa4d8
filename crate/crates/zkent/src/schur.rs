//! Ordered real Schur decomposition.
//!
//! nalgebra's Schur produces the factorization but leaves the eigenvalues in
//! an arbitrary order along the quasi-triangular factor. Splitting a space
//! into spectral subspaces needs more: given any subset of the diagonal
//! blocks, we reorder the factorization by a sequence of adjacent-block swaps
//! (the direct-swap method: solve a small Sylvester equation, then apply the
//! orthogonal factor of a QR) until the subset sits in the leading position,
//! at which point the leading Schur vectors span its invariant subspace.

use nalgebra::DMatrix;
use thiserror::Error;

/// A 1×1 or 2×2 diagonal block of the quasi-triangular factor. 2×2 blocks
/// carry a complex-conjugate eigenvalue pair, so a single modulus per block
/// is well defined.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DiagBlock {
    pub start: usize,
    pub size: usize,
    pub modulus: f64,
}

#[derive(Debug, Error)]
pub(crate) enum SchurError {
    #[error("Schur iteration failed to converge for a {0}x{0} operator")]
    NoConvergence(usize),
    #[error("invariant-subspace swap hit a singular Sylvester system (eigenvalue moduli {0} and {1})")]
    SwapFailed(f64, f64),
}

pub(crate) struct RealSchur {
    t: DMatrix<f64>,
    q: DMatrix<f64>,
    blocks: Vec<DiagBlock>,
}

impl RealSchur {
    pub fn new(m: &DMatrix<f64>) -> Result<Self, SchurError> {
        let n = m.nrows();
        let schur = m
            .clone()
            .try_schur(f64::EPSILON, 0)
            .ok_or(SchurError::NoConvergence(n))?;
        let (q, t) = schur.unpack();
        let mut out = Self {
            t,
            q,
            blocks: Vec::new(),
        };
        out.standardize_and_scan();
        Ok(out)
    }

    pub fn blocks(&self) -> &[DiagBlock] {
        &self.blocks
    }

    /// Splits any 2×2 diagonal block with real eigenvalues into two 1×1
    /// blocks by a plane rotation, then records the block layout.
    fn standardize_and_scan(&mut self) {
        let n = self.t.nrows();
        let mut l = 0;
        while l < n {
            if l + 1 < n && self.subdiag_nonzero(l) {
                let (a, b) = (self.t[(l, l)], self.t[(l, l + 1)]);
                let (c, d) = (self.t[(l + 1, l)], self.t[(l + 1, l + 1)]);
                let half_tr = 0.5 * (a + d);
                let disc = 0.25 * (a - d) * (a - d) + b * c;
                if disc >= 0.0 {
                    // real pair: rotate the larger-modulus eigenvector into e1
                    let sq = disc.sqrt();
                    let lambda = if half_tr >= 0.0 {
                        half_tr + sq
                    } else {
                        half_tr - sq
                    };
                    self.split_real_block(l, lambda);
                    self.blocks.push(DiagBlock {
                        start: l,
                        size: 1,
                        modulus: self.t[(l, l)].abs(),
                    });
                    self.blocks.push(DiagBlock {
                        start: l + 1,
                        size: 1,
                        modulus: self.t[(l + 1, l + 1)].abs(),
                    });
                } else {
                    let det = a * d - b * c;
                    self.blocks.push(DiagBlock {
                        start: l,
                        size: 2,
                        modulus: det.abs().sqrt(),
                    });
                }
                l += 2;
            } else {
                self.blocks.push(DiagBlock {
                    start: l,
                    size: 1,
                    modulus: self.t[(l, l)].abs(),
                });
                l += 1;
            }
        }
    }

    fn subdiag_nonzero(&self, l: usize) -> bool {
        let scale = self.t[(l, l)].abs() + self.t[(l + 1, l + 1)].abs();
        self.t[(l + 1, l)].abs() > f64::EPSILON * scale.max(1.0)
    }

    fn split_real_block(&mut self, l: usize, lambda: f64) {
        let (a, b) = (self.t[(l, l)], self.t[(l, l + 1)]);
        let (c, d) = (self.t[(l + 1, l)], self.t[(l + 1, l + 1)]);
        // eigenvector of the 2x2 block for `lambda`; pick the better-scaled form
        let v1 = (b, lambda - a);
        let v2 = (lambda - d, c);
        let (x, y) = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) {
            v1
        } else {
            v2
        };
        let norm = x.hypot(y);
        let (cs, sn) = if norm == 0.0 { (1.0, 0.0) } else { (x / norm, y / norm) };
        let g = nalgebra::Matrix2::new(cs, -sn, sn, cs);
        self.apply_local_orthogonal(l, 2, &DMatrix::from_iterator(2, 2, g.iter().copied()));
        self.t[(l + 1, l)] = 0.0;
    }

    /// T ← EᵀTE and Q ← QE for E = identity except the `size`×`size`
    /// orthogonal `g` at offset `l`.
    fn apply_local_orthogonal(&mut self, l: usize, size: usize, g: &DMatrix<f64>) {
        let n = self.t.nrows();
        let cols = self.t.columns(l, size) * g;
        self.t.columns_mut(l, size).copy_from(&cols);
        let rows = g.transpose() * self.t.rows(l, size);
        self.t.rows_mut(l, size).copy_from(&rows);
        let qcols = self.q.columns(l, size) * g;
        self.q.columns_mut(l, size).copy_from(&qcols);
        let _ = n;
    }

    /// Swaps the adjacent diagonal blocks at positions `idx` and `idx + 1`
    /// in the block list, updating T, Q, and the layout.
    fn swap_adjacent(&mut self, idx: usize) -> Result<(), SchurError> {
        let b1 = self.blocks[idx];
        let b2 = self.blocks[idx + 1];
        let (l, p, q) = (b1.start, b1.size, b2.size);
        debug_assert_eq!(b2.start, l + p);

        let a = self.t.view((l, l), (p, p)).clone_owned();
        let bm = self.t.view((l, l + p), (p, q)).clone_owned();
        let c = self.t.view((l + p, l + p), (q, q)).clone_owned();

        // Solve A X - X C = B as a Kronecker system (column-major vec).
        let mut k = DMatrix::<f64>::zeros(p * q, p * q);
        for j in 0..q {
            for i in 0..p {
                let row = j * p + i;
                for ii in 0..p {
                    k[(row, j * p + ii)] += a[(i, ii)];
                }
                for jj in 0..q {
                    k[(row, jj * p + i)] -= c[(jj, j)];
                }
            }
        }
        let mut rhs = DMatrix::<f64>::zeros(p * q, 1);
        for j in 0..q {
            for i in 0..p {
                rhs[(j * p + i, 0)] = bm[(i, j)];
            }
        }
        let sol = k
            .lu()
            .solve(&rhs)
            .ok_or(SchurError::SwapFailed(b1.modulus, b2.modulus))?;
        let mut x = DMatrix::<f64>::zeros(p, q);
        for j in 0..q {
            for i in 0..p {
                x[(i, j)] = sol[(j * p + i, 0)];
            }
        }

        // Columns of [-X; I] span the invariant subspace carrying spec(C);
        // an orthonormal completion rotates it into the leading position.
        let mut m = DMatrix::<f64>::zeros(p + q, q);
        m.view_mut((0, 0), (p, q)).copy_from(&(-&x));
        m.view_mut((p, 0), (q, q)).fill_with_identity();
        let g = orthonormal_completion(&m);

        self.apply_local_orthogonal(l, p + q, &g);
        // enforce the new quasi-triangular zero structure
        for r in q..p + q {
            for cc in 0..q {
                self.t[(l + r, l + cc)] = 0.0;
            }
        }
        self.blocks[idx] = DiagBlock {
            start: l,
            size: q,
            modulus: b2.modulus,
        };
        self.blocks[idx + 1] = DiagBlock {
            start: l + q,
            size: p,
            modulus: b1.modulus,
        };
        Ok(())
    }

    /// Returns an orthonormal basis (as columns) of the invariant subspace
    /// spanned by the diagonal blocks selected by `targets` (indices into the
    /// current block list, strictly increasing). Reorders a scratch copy of
    /// the factorization so the targets lead, then reads off Schur vectors.
    pub fn invariant_basis(&self, targets: &[usize]) -> Result<DMatrix<f64>, SchurError> {
        let mut scratch = Self {
            t: self.t.clone(),
            q: self.q.clone(),
            blocks: self.blocks.clone(),
        };
        let mut ids: Vec<usize> = (0..scratch.blocks.len()).collect();
        let mut placed = 0usize;
        for &target in targets {
            let mut pos = ids.iter().position(|&id| id == target).expect("valid id");
            while pos > placed {
                scratch.swap_adjacent(pos - 1)?;
                ids.swap(pos - 1, pos);
                pos -= 1;
            }
            placed += 1;
        }
        let width: usize = targets
            .iter()
            .map(|&t| self.blocks[t].size)
            .sum();
        Ok(scratch.q.columns(0, width).clone_owned())
    }
}

/// Full orthonormal basis whose leading columns span the column space of `m`
/// (which must have full column rank). Modified Gram–Schmidt with
/// re-orthogonalization, completed by coordinate vectors. Deterministic.
fn orthonormal_completion(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(n);
    let push_orthonormalized = |basis: &mut Vec<nalgebra::DVector<f64>>,
                                    mut v: nalgebra::DVector<f64>|
     -> bool {
        for _ in 0..2 {
            for b in basis.iter() {
                let proj = b.dot(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-10 {
            basis.push(v / norm);
            true
        } else {
            false
        }
    };
    for j in 0..m.ncols() {
        let ok = push_orthonormalized(&mut basis, m.column(j).clone_owned());
        debug_assert!(ok, "swap basis must have full column rank");
    }
    let mut e = 0;
    while basis.len() < n {
        let mut v = nalgebra::DVector::zeros(n);
        v[e] = 1.0;
        push_orthonormalized(&mut basis, v);
        e += 1;
    }
    DMatrix::from_columns(&basis)
}
