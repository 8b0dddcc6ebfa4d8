//! Dense two-phase simplex solver for the small linear programs that arise
//! when extremizing entropy over the distribution simplex.
//!
//! Problem sizes here are a handful of rows and columns, so a plain dense
//! tableau with Bland's anti-cycling rule is the right tool: deterministic
//! pivoting, no external solver, no degeneracy surprises.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub(crate) enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
}

const EPS: f64 = 1e-9;

/// Minimizes c·x subject to A x = b, x ≥ 0. Returns (x, value).
pub(crate) fn solve_standard_form(
    c: &[f64],
    a: &[Vec<f64>],
    b: &[f64],
) -> Result<(Vec<f64>, f64), LpError> {
    let m = a.len();
    let n = c.len();
    assert!(a.iter().all(|row| row.len() == n));
    assert_eq!(b.len(), m);

    // tableau: m rows × (n + m artificials + 1 rhs column)
    let width = n + m + 1;
    let mut t = vec![vec![0.0f64; width]; m];
    for (i, row) in a.iter().enumerate() {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            t[i][j] = flip * v;
        }
        t[i][n + i] = 1.0;
        t[i][width - 1] = flip * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase 1: minimize the sum of artificials
    let mut phase1_cost = vec![0.0f64; width - 1];
    for j in n..n + m {
        phase1_cost[j] = 1.0;
    }
    let p1 = run_simplex(&mut t, &mut basis, &phase1_cost, n + m)?;
    if p1 > 1e-7 {
        return Err(LpError::Infeasible);
    }
    // drive any residual artificials out of the basis
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[i][j].abs() > EPS) {
                pivot(&mut t, &mut basis, i, j);
            }
            // a row with no eligible pivot is redundant; its rhs is ~0
        }
    }

    // phase 2: original objective over the structural columns only
    let mut phase2_cost = vec![0.0f64; width - 1];
    phase2_cost[..n].copy_from_slice(c);
    let value = run_simplex(&mut t, &mut basis, &phase2_cost, n)?;

    let mut x = vec![0.0f64; n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = t[i][width - 1];
        }
    }
    Ok((x, value))
}

/// Runs Bland-rule simplex on the tableau in place; columns ≥ `limit` are
/// never entered. Returns the objective value.
fn run_simplex(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    limit: usize,
) -> Result<f64, LpError> {
    let m = t.len();
    let width = t[0].len();
    loop {
        // reduced costs via the current basis
        let mut y = vec![0.0f64; m]; // multipliers: y_i = cost of basic var in row i
        for i in 0..m {
            y[i] = cost[basis[i]];
        }
        let mut entering = None;
        for j in 0..limit {
            if basis.contains(&j) {
                continue;
            }
            let mut reduced = cost[j];
            for i in 0..m {
                reduced -= y[i] * t[i][j];
            }
            if reduced < -EPS {
                entering = Some(j); // Bland: smallest index
                break;
            }
        }
        let Some(j) = entering else {
            let mut value = 0.0;
            for i in 0..m {
                value += cost[basis[i]] * t[i][width - 1];
            }
            return Ok(value);
        };
        // ratio test; Bland tie-break on the smallest basis index
        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][j] > EPS {
                let ratio = t[i][width - 1] / t[i][j];
                match leaving {
                    None => leaving = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - EPS
                            || ((ratio - lr).abs() <= EPS && basis[i] < basis[li])
                        {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((i, _)) = leaving else {
            return Err(LpError::Unbounded);
        };
        pivot(t, basis, i, j);
    }
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize) {
    let width = t[0].len();
    let pv = t[row][col];
    for v in t[row].iter_mut() {
        *v /= pv;
    }
    for i in 0..t.len() {
        if i != row && t[i][col].abs() > 0.0 {
            let factor = t[i][col];
            for j in 0..width {
                let delta = factor * t[row][j];
                t[i][j] -= delta;
            }
            t[i][col] = 0.0;
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solves_textbook_lp() {
        // min -x - 2y s.t. x + y + s1 = 4, 2x + y - s2 = 2, all ≥ 0
        let c = vec![-1.0, -2.0, 0.0, 0.0];
        let a = vec![
            vec![1.0, 1.0, 1.0, 0.0],
            vec![2.0, 1.0, 0.0, -1.0],
        ];
        let b = vec![4.0, 2.0];
        let (x, v) = solve_standard_form(&c, &a, &b).unwrap();
        assert_relative_eq!(v, -8.0, epsilon = 1e-9);
        assert_relative_eq!(x[0], 0.0, epsilon = 1e-9);
        assert_relative_eq!(x[1], 4.0, epsilon = 1e-9);
    }

    #[test]
    fn detects_infeasibility() {
        // x = -1 with x >= 0
        let err = solve_standard_form(&[1.0], &[vec![1.0]], &[-1.0]).unwrap_err();
        assert_eq!(err, LpError::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        // min -x s.t. x - y = 1 (x can grow with y)
        let err =
            solve_standard_form(&[-1.0, 0.0], &[vec![1.0, -1.0]], &[1.0]).unwrap_err();
        assert_eq!(err, LpError::Unbounded);
    }

    #[test]
    fn handles_negative_rhs_rows() {
        // -x = -3  →  x = 3
        let (x, v) = solve_standard_form(&[1.0], &[vec![-1.0]], &[-3.0]).unwrap();
        assert_relative_eq!(x[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(v, 3.0, epsilon = 1e-12);
    }
}
