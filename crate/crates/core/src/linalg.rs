//! Dense linear algebra over a prime field: rank and kernel extraction by
//! plain Gaussian elimination with deterministic pivoting.

use crate::field::PrimeField;

#[derive(Debug, Clone)]
pub struct MatFp {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>, // row-major
}

impl MatFp {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        MatFp {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form in place. Pivot choice is deterministic: the
    /// first nonzero entry scanning columns left to right, rows top down.
    /// Returns the pivot columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0usize;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.at(i, col) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self.at(r, col));
            for j in col..self.cols {
                let v = f.mul(self.at(r, j), inv);
                self.data[r * self.cols + j] = v;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.at(i, col);
                if factor == 0 {
                    continue;
                }
                for j in col..self.cols {
                    let v = f.sub(self.at(i, j), f.mul(factor, self.at(r, j)));
                    self.data[i * self.cols + j] = v;
                }
            }
            pivot_cols.push(col);
            r += 1;
        }
        pivot_cols
    }

    pub fn rank(mut self) -> usize {
        self.rref().len()
    }

    /// A deterministic nonzero kernel vector: the first free column is pinned
    /// to 1, all other free columns to 0, and pivots are back-substituted.
    /// Returns `None` when the matrix has full column rank.
    pub fn nullspace_vector(mut self) -> Option<Vec<u64>> {
        let f = self.field.clone();
        let pivot_cols = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let free = (0..self.cols).find(|&c| !is_pivot[c])?;
        let mut x = vec![0u64; self.cols];
        x[free] = 1;
        for (row, &pcol) in pivot_cols.iter().enumerate() {
            // row reads: x[pcol] + M[row][free] * x[free] = 0
            x[pcol] = f.neg(self.at(row, free));
        }
        Some(x)
    }
}
