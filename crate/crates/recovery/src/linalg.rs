//! Dense row-major matrices and a conjugate-gradient least-squares solver.

use crate::error::{RecoveryError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(RecoveryError::DimensionMismatch(format!(
                "{} entries for {rows}×{cols}",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        self.data.chunks_exact(self.cols).map(|row| dot(row, x)).collect()
    }

    pub fn mul_transpose(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (row, &yi) in self.data.chunks_exact(self.cols).zip(y) {
            for (o, &a) in out.iter_mut().zip(row) {
                *o += a * yi;
            }
        }
        out
    }

    /// Column-major copy of the listed columns.
    pub fn columns(&self, idx: &[usize]) -> Vec<Vec<f64>> {
        idx.iter()
            .map(|&c| (0..self.rows).map(|r| self.get(r, c)).collect())
            .collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Outcome of [`least_squares_cg`].
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub solution: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `‖A b - y‖` for `A` given by its columns, running conjugate
/// gradients on `AᵀA b = Aᵀy` from `b = 0`.
///
/// Starting from zero keeps every iterate in the row space of `A`, so a
/// rank-deficient system converges to its minimum-norm solution.
pub fn least_squares_cg(columns: &[Vec<f64>], y: &[f64], tol: f64, max_iter: usize) -> LeastSquares {
    let m = columns.len();
    let apply = |v: &[f64]| -> Vec<f64> {
        let mut av = vec![0.0; y.len()];
        for (col, &vj) in columns.iter().zip(v) {
            for (a, &c) in av.iter_mut().zip(col) {
                *a += c * vj;
            }
        }
        columns.iter().map(|col| dot(col, &av)).collect()
    };
    let mut b = vec![0.0; m];
    let mut r: Vec<f64> = columns.iter().map(|col| dot(col, y)).collect();
    let rhs_norm = norm(&r);
    if m == 0 || rhs_norm == 0.0 {
        return LeastSquares {
            solution: b,
            iterations: 0,
            converged: true,
        };
    }
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for it in 1..=max_iter {
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return LeastSquares {
                solution: b,
                iterations: it,
                converged: rr.sqrt() <= tol * rhs_norm,
            };
        }
        let alpha = rr / pap;
        for j in 0..m {
            b[j] += alpha * p[j];
            r[j] -= alpha * ap[j];
        }
        let next = dot(&r, &r);
        if next.sqrt() <= tol * rhs_norm {
            return LeastSquares {
                solution: b,
                iterations: it,
                converged: true,
            };
        }
        let beta = next / rr;
        rr = next;
        for j in 0..m {
            p[j] = r[j] + beta * p[j];
        }
    }
    LeastSquares {
        solution: b,
        iterations: max_iter,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        let a = Matrix::from_row_major(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(a.mul(&[1.0, 0.0, -1.0]), vec![-2.0, -2.0]);
        assert_eq!(a.mul_transpose(&[1.0, 1.0]), vec![5.0, 7.0, 9.0]);
        assert_eq!(a.columns(&[2]), vec![vec![3.0, 6.0]]);
        assert!(Matrix::from_row_major(2, 2, vec![1.0]).is_err());
    }

    #[test]
    fn cg_solves_square_system() {
        let cols = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let ls = least_squares_cg(&cols, &[3.0, 5.0], 1e-12, 50);
        assert!(ls.converged);
        assert!((ls.solution[0] - 0.8).abs() < 1e-9 && (ls.solution[1] - 1.4).abs() < 1e-9);
    }

    #[test]
    fn cg_returns_minimum_norm_for_duplicate_columns() {
        let cols = vec![vec![1.0, 0.0], vec![1.0, 0.0]];
        let ls = least_squares_cg(&cols, &[2.0, 0.0], 1e-12, 50);
        assert!((ls.solution[0] - 1.0).abs() < 1e-9 && (ls.solution[1] - 1.0).abs() < 1e-9);
    }
}
