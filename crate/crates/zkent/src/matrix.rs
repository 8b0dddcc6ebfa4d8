//! Exact arbitrary-precision integer matrices.
//!
//! Generator words grow exponentially fast, so every structural computation
//! (products, determinants, inverses of unimodular matrices) is done in
//! `BigInt` arithmetic. Floating point enters only downstream, in the
//! spectral and entropy layers.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A square integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Builds a matrix from rows of `i64` entries. Returns `None` unless the
    /// rows form a non-empty square array.
    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| BigInt::from(v)))
            .collect();
        Some(Self { dim, entries })
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Option<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// Exact matrix product. Panics if dimensions differ.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let d = self.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for l in 0..d {
                let a = &self.entries[i * d + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * &rhs.entries[l * d + j];
                }
            }
        }
        Self { dim: d, entries }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix difference");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    /// Exact power by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        result
    }

    /// Exact determinant via the Bareiss fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        let d = self.dim;
        if d == 1 {
            return self.entries[0].clone();
        }
        let mut m = self.entries.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for p in 0..d - 1 {
            if m[p * d + p].is_zero() {
                match (p + 1..d).find(|&r| !m[r * d + p].is_zero()) {
                    Some(r) => {
                        for c in 0..d {
                            m.swap(p * d + c, r * d + c);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for r in p + 1..d {
                for c in p + 1..d {
                    let num = &m[r * d + c] * &m[p * d + p] - &m[r * d + p] * &m[p * d + c];
                    m[r * d + c] = num / &prev;
                }
                m[r * d + p] = BigInt::zero();
            }
            prev = m[p * d + p].clone();
        }
        let det = m[(d - 1) * d + (d - 1)].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Exact inverse, defined only for unimodular matrices (|det| = 1), where
    /// the inverse is again an integer matrix (the signed adjugate).
    pub fn inverse(&self) -> Option<Self> {
        let det = self.determinant();
        if !det.abs().is_one() {
            return None;
        }
        let d = self.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                let minor = self.minor(i, j);
                let cof = if (i + j) % 2 == 0 { minor } else { -minor };
                // adjugate transposes the cofactor matrix
                entries[j * d + i] = if det.is_negative() { -cof } else { cof };
            }
        }
        Some(Self { dim: d, entries })
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> BigInt {
        let d = self.dim;
        if d == 1 {
            return BigInt::one();
        }
        let rows: Vec<usize> = (0..d).filter(|&r| r != skip_row).collect();
        let cols: Vec<usize> = (0..d).filter(|&c| c != skip_col).collect();
        self.submatrix_determinant(&rows, &cols)
    }

    /// Exact determinant of the submatrix selected by `rows` × `cols`
    /// (equal-length index lists). These are the minors that make up the
    /// exterior-power (compound) matrices used by the singular-value oracle.
    pub fn submatrix_determinant(&self, rows: &[usize], cols: &[usize]) -> BigInt {
        assert_eq!(rows.len(), cols.len());
        let sub: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect())
            .collect();
        IntMatrix::from_bigint_rows(sub)
            .expect("index lists are equal-length and non-empty")
            .determinant()
    }

    /// Lossy conversion to a float matrix. Intended for generator matrices of
    /// moderate entry size; word products should go through
    /// [`IntMatrix::to_f64_scaled`] instead.
    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_row_iterator(
            self.dim,
            self.dim,
            self.entries.iter().map(|e| e.to_f64().unwrap_or(f64::NAN)),
        )
    }

    /// Converts to floats after a global power-of-two rescale, returning the
    /// scaled matrix and `log(scale)` so that callers can reconstruct
    /// logarithmic magnitudes of entries that overflow `f64`.
    pub fn to_f64_scaled(&self) -> (DMatrix<f64>, f64) {
        let max_bits = self.entries.iter().map(|e| e.bits()).max().unwrap_or(0);
        // keep the largest entry near 2^512: far from both overflow and underflow
        let shift = max_bits.saturating_sub(512);
        if shift == 0 {
            return (self.to_f64(), 0.0);
        }
        let scaled = DMatrix::from_row_iterator(
            self.dim,
            self.dim,
            self.entries
                .iter()
                .map(|e| (e >> shift).to_f64().unwrap_or(f64::NAN)),
        );
        (scaled, shift as f64 * std::f64::consts::LN_2)
    }

    /// Largest entry magnitude as a logarithm, exact up to float rounding.
    pub fn max_entry_log(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| bigint_log_abs(e))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Natural logarithm of |x| for a big integer; −∞ for zero.
pub fn bigint_log_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().expect("fits in f64 range").ln();
    }
    let shift = bits - 64;
    let head = (x.abs() >> shift).to_f64().expect("64-bit head");
    head.ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{:?}", self.dim, self.dim, self.rows_i128())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            write!(f, "[")?;
            for c in 0..self.dim {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl IntMatrix {
    fn rows_i128(&self) -> Vec<Vec<i128>> {
        (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| self.get(r, c).to_i128().unwrap_or(i128::MAX))
                    .collect()
            })
            .collect()
    }
}
