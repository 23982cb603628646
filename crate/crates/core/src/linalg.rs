//! Dense linear algebra over a [`RealAlgebraicField`].
//!
//! Exact Gaussian elimination with first-nonzero pivoting; deterministic
//! results throughout (reduced echelon forms are pivot-normalized).

use std::fmt;
use std::sync::Arc;

use crate::scalar::{FieldElement, RealAlgebraicField};

/// A rows x cols matrix of field elements.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Arc<RealAlgebraicField>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl FieldMatrix {
    pub fn zero(field: &Arc<RealAlgebraicField>, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field: Arc::clone(field),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Arc<RealAlgebraicField>, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Arc<RealAlgebraicField>, rows: Vec<Vec<FieldElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        FieldMatrix {
            field: Arc::clone(field),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(
        field: &Arc<RealAlgebraicField>,
        dim: usize,
        columns: &[Vec<FieldElement>],
    ) -> Self {
        assert!(columns.iter().all(|c| c.len() == dim), "ragged columns");
        let mut m = Self::zero(field, dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &Arc<RealAlgebraicField> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<FieldElement> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElement>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zero(&self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(r, k) * other.get(k, c));
                }
                m.set(r, c, acc);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for c in 0..self.cols {
                    acc = &acc + &(self.get(r, c) * &v[c]);
                }
                acc
            })
            .collect()
    }

    /// In-place reduction to reduced row echelon form; returns the pivot
    /// columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row >= self.rows {
                break;
            }
            let Some(r) = (pivot_row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            for c in 0..self.cols {
                self.data.swap(pivot_row * self.cols + c, r * self.cols + c);
            }
            let inv = self
                .get(pivot_row, col)
                .inv()
                .expect("pivot with nonzero coefficients must be invertible");
            for c in col..self.cols {
                let v = self.get(pivot_row, c) * &inv;
                self.set(pivot_row, c, v);
            }
            for r2 in 0..self.rows {
                if r2 == pivot_row || self.get(r2, col).is_zero() {
                    continue;
                }
                let factor = self.get(r2, col).clone();
                for c in col..self.cols {
                    let v = self.get(r2, c) - &(&factor * self.get(pivot_row, c));
                    self.set(r2, c, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn det(&self) -> FieldElement {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let mut det = self.field.one();
        for col in 0..m.cols {
            let Some(r) = (col..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                return self.field.zero();
            };
            if r != col {
                for c in 0..m.cols {
                    m.data.swap(col * m.cols + c, r * m.cols + c);
                }
                det = -&det;
            }
            let pivot = m.get(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r2 in col + 1..m.rows {
                if m.get(r2, col).is_zero() {
                    continue;
                }
                let factor = m.get(r2, col) * &inv;
                for c in col..m.cols {
                    let v = m.get(r2, c) - &(&factor * m.get(col, c));
                    m.set(r2, c, v);
                }
            }
        }
        det
    }

    /// Solves `self * x = b`; returns `None` when inconsistent. With full
    /// column rank the solution is unique; otherwise free variables are set
    /// to zero.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let mut aug = Self::zero(&self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Self::zero(&self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, self.field.one());
        }
        let pivots = aug.rref();
        // singular matrices leak pivots into the augmented block
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut inv = Self::zero(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    /// Deterministic kernel basis from the reduced echelon form: one vector
    /// per free column, with that coordinate set to one.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElement>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = -m.get(row, free);
            }
            basis.push(v);
        }
        basis
    }
}
