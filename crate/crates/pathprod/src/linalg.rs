//! Small exact linear algebra over the coefficient field: row reduction,
//! rank, kernel bases and inverses. Degree-by-degree problems in this
//! engine stay tiny (tens of rows), so dense Gaussian elimination with
//! exact division is the right tool.

use crate::error::{EngineError, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![vec![field.zero(); cols]; rows],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.data[i][i] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, data: Vec<Vec<Scalar>>) -> Matrix {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        debug_assert!(data.iter().all(|r| r.len() == cols));
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i][j] = v;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.data[r][col].is_zero()) else {
                continue;
            };
            self.data.swap(row, p);
            let inv = self.data[row][col]
                .inverse()
                .expect("pivot is nonzero by construction");
            for j in col..self.cols {
                self.data[row][j] = self.data[row][j].mul(&inv);
            }
            for r in 0..self.rows {
                if r != row && !self.data[r][col].is_zero() {
                    let f = self.data[r][col].clone();
                    for j in col..self.cols {
                        let delta = f.mul(&self.data[row][j]);
                        self.data[r][j] = self.data[r][j].sub(&delta);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// A basis of the right kernel {x : Ax = 0}, one vector per free column,
    /// in ascending free-column order (deterministic).
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut x = vec![self.field.zero(); self.cols];
            x[free] = self.field.one();
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = m.data[r][free].neg();
            }
            basis.push(x);
        }
        basis
    }

    /// Exact inverse; errors on singular input.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(EngineError::InvalidInput(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][n + i] = self.field.one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(k, &c)| c != k) {
            return Err(EngineError::DegeneratePairing(format!(
                "singular {n}x{n} matrix"
            )));
        }
        let mut inv = Matrix::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i][j] = aug.data[i][n + j].clone();
            }
        }
        Ok(inv)
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    if !self.data[i][j].is_zero() && !x[j].is_zero() {
                        acc = acc.add(&self.data[i][j].mul(&x[j]));
                    }
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[&[i64]]) -> Matrix {
        let f = Field::Rationals;
        Matrix::from_rows(
            f,
            rows.iter()
                .map(|r| r.iter().map(|&n| f.integer(n)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel_satisfy_rank_nullity() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = qm(&[&[2, 1, 0], &[1, 1, 1], &[0, 3, 1]]);
        let inv = m.inverse().unwrap();
        // m * inv = identity, checked column by column.
        for j in 0..3 {
            let col: Vec<Scalar> = (0..3).map(|i| inv.get(i, j).clone()).collect();
            let e = m.mul_vec(&col);
            for (i, s) in e.iter().enumerate() {
                assert_eq!(s.is_one(), i == j);
                assert_eq!(s.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = qm(&[&[1, 2], &[2, 4]]);
        assert!(matches!(
            m.inverse(),
            Err(EngineError::DegeneratePairing(_))
        ));
    }

    #[test]
    fn kernel_over_prime_field() {
        let f = Field::prime(5).unwrap();
        // Row (1, 2) over F5: kernel spanned by (-2, 1) = (3, 1).
        let m = Matrix::from_rows(f, vec![vec![f.integer(1), f.integer(2)]]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0][0], f.integer(3));
        assert_eq!(ker[0][1], f.integer(1));
    }
}
