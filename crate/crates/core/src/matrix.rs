//! Dense matrices and vectors over a table-backed finite field.

use thiserror::Error;

use crate::field::{Field, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A vector of canonical element indices bound to a field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldVector {
    field: Field,
    data: Vec<u32>,
}

impl std::fmt::Debug for FieldVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}{:?}", self.field, self.data)
    }
}

impl FieldVector {
    /// Wraps raw values, checking that each is a field element.
    pub fn new(field: &Field, data: Vec<u32>) -> Result<Self, MatrixError> {
        if let Some(&bad) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(FieldError::OutOfRange {
                value: bad as u64,
                order: field.order(),
            }
            .into());
        }
        Ok(Self {
            field: field.clone(),
            data,
        })
    }

    pub(crate) fn from_raw(field: &Field, data: Vec<u32>) -> Self {
        debug_assert!(data.iter().all(|&v| field.contains(v)));
        Self {
            field: field.clone(),
            data,
        }
    }

    pub fn zeros(field: &Field, len: usize) -> Self {
        Self::from_raw(field, vec![0; len])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.data
    }

    pub fn get(&self, i: usize) -> u32 {
        self.data[i]
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &FieldVector) -> Result<FieldVector, MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch);
        }
        if self.len() != other.len() {
            return Err(MatrixError::DimensionMismatch(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Self::from_raw(f, data))
    }

    pub fn sub(&self, other: &FieldVector) -> Result<FieldVector, MatrixError> {
        let neg = Self::from_raw(
            &other.field,
            other.data.iter().map(|&v| other.field.neg(v)).collect(),
        );
        self.add(&neg)
    }
}

/// Row-major dense matrix over a field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:?} {}x{}", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major values, checking every entry.
    pub fn from_rows(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        FieldVector::new(field, data).map(|v| Self {
            field: field.clone(),
            rows,
            cols,
            data: v.data,
        })
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        debug_assert!(data.iter().all(|&v| field.contains(v)));
        Self {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> FieldMatrix {
        Self::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn add(&self, other: &FieldMatrix) -> Result<FieldMatrix, MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        Ok(Self {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        })
    }

    pub fn mul_vec(&self, x: &FieldVector) -> Result<FieldVector, MatrixError> {
        if self.field != x.field {
            return Err(MatrixError::FieldMismatch);
        }
        if x.len() != self.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} matrix times length-{} vector",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let f = &self.field;
        let out = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(&x.data)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect();
        Ok(FieldVector::from_raw(f, out))
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix, MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = f.add(*d, f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_block(&self, start: usize, end: usize) -> FieldMatrix {
        Self::from_fn(&self.field, self.rows, end - start, |r, c| self.get(r, start + c))
    }

    /// Row echelon form in place; returns the pivot columns.
    fn eliminate(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..self.cols {
                    self.data.swap(piv * self.cols + c, row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in 0..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().len()
    }

    pub fn inverse(&self) -> Result<FieldMatrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(&self.field, n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c)
            } else {
                u32::from(c - n == r)
            }
        });
        let pivots = aug.eliminate();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(MatrixError::Singular);
        }
        Ok(aug.column_block(n, 2 * n))
    }
}
