//! Coordinate-list sparse matrices.
//!
//! Entries are kept sorted by `(row, col)` without duplicates, which makes
//! row-wise reductions a single scan.

use std::fmt::{Display, Write as _};
use std::ops::{AddAssign, Mul};

use num_rational::Ratio;

/// Integer-valued matrix; Boolean matrices hold only ones.
pub type IntMatrix = SparseMatrix<i64>;

/// Matrix with exact rational weights.
pub type RatioMatrix = SparseMatrix<Ratio<i64>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Copy + PartialEq + Default> SparseMatrix<T> {
    /// Builds a matrix from triplets. Explicit zeros are dropped.
    ///
    /// Panics if a position is out of bounds or appears twice; callers in this
    /// crate construct entries from validated topology.
    pub fn from_triplets(rows: usize, cols: usize, mut entries: Vec<(usize, usize, T)>) -> Self {
        entries.retain(|e| e.2 != T::default());
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        for w in entries.windows(2) {
            assert!(
                (w[0].0, w[0].1) != (w[1].0, w[1].1),
                "duplicate entry at ({}, {})",
                w[0].0,
                w[0].1
            );
        }
        if let Some(&(r, c, _)) = entries.iter().find(|e| e.0 >= rows || e.1 >= cols) {
            panic!("entry ({r}, {c}) outside {rows}x{cols}");
        }
        SparseMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries
            .binary_search_by_key(&(row, col), |&(r, c, _)| (r, c))
            .map(|i| self.entries[i].2)
            .unwrap_or_default()
    }

    pub fn transpose(&self) -> Self {
        let entries = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        SparseMatrix::from_triplets(self.cols, self.rows, entries)
    }

    /// Dense copy, row-major. Test and debugging aid.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut dense = vec![vec![T::default(); self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            dense[r][c] = v;
        }
        dense
    }

    /// Number of stored entries in each row.
    pub fn row_nnz(&self) -> Vec<usize> {
        let mut counts = vec![0; self.rows];
        for &(r, _, _) in &self.entries {
            counts[r] += 1;
        }
        counts
    }

    /// Number of stored entries in each column.
    pub fn col_nnz(&self) -> Vec<usize> {
        let mut counts = vec![0; self.cols];
        for &(_, c, _) in &self.entries {
            counts[c] += 1;
        }
        counts
    }
}

impl<T> SparseMatrix<T>
where
    T: Copy + PartialEq + Default + AddAssign + Mul<Output = T>,
{
    /// `self · x`.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        let mut y = vec![T::default(); self.rows];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// `selfᵀ · x` without materializing the transpose.
    pub fn tr_mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.rows, "vector length must match row count");
        let mut y = vec![T::default(); self.cols];
        for &(r, c, v) in &self.entries {
            y[c] += v * x[r];
        }
        y
    }

    /// Sparse product `self · other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        // Row offsets of `other` for direct row access.
        let mut start = vec![0usize; other.rows + 1];
        for &(r, _, _) in &other.entries {
            start[r + 1] += 1;
        }
        for i in 0..other.rows {
            start[i + 1] += start[i];
        }
        let mut acc: std::collections::BTreeMap<(usize, usize), T> = Default::default();
        for &(r, k, a) in &self.entries {
            for &(_, c, b) in &other.entries[start[k]..start[k + 1]] {
                *acc.entry((r, c)).or_default() += a * b;
            }
        }
        let entries = acc.into_iter().map(|((r, c), v)| (r, c, v)).collect();
        SparseMatrix::from_triplets(self.rows, other.cols, entries)
    }

    /// Sum of every row.
    pub fn row_sums(&self) -> Vec<T> {
        let mut sums = vec![T::default(); self.rows];
        for &(r, _, v) in &self.entries {
            sums[r] += v;
        }
        sums
    }

    /// Sum of every column.
    pub fn col_sums(&self) -> Vec<T> {
        let mut sums = vec![T::default(); self.cols];
        for &(_, c, v) in &self.entries {
            sums[c] += v;
        }
        sums
    }
}

impl<T: Display> SparseMatrix<T> {
    /// `<row> <col> <value>` triplets, one per line.
    pub fn to_triplet_text(&self) -> String {
        let mut out = String::new();
        for (r, c, v) in &self.entries {
            let _ = writeln!(out, "{r} {c} {v}");
        }
        out
    }
}

impl RatioMatrix {
    pub fn to_f64_triplets(&self) -> Vec<(usize, usize, f64)> {
        self.entries
            .iter()
            .map(|&(r, c, v)| (r, c, *v.numer() as f64 / *v.denom() as f64))
            .collect()
    }
}
