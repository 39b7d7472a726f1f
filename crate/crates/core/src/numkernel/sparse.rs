use num_complex::Complex64 as C64;

use super::dense::ComplexMatrix;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Square complex matrix in compressed-sparse-row form.
///
/// Column indices are strictly increasing within each row and no stored
/// value is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseComplexMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl SparseComplexMatrix {
    /// Assembles a matrix from `(row, col, value)` triplets. Duplicates are
    /// summed and entries that end up exactly zero are dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            assert!(i < dim && j < dim, "triplet ({i}, {j}) outside a {dim}x{dim} matrix");
            if last == Some((i, j)) {
                *values.last_mut().expect("duplicate follows an entry") += v;
            } else {
                if let Some((pi, _)) = last {
                    if values.last() == Some(&ZERO) {
                        values.pop();
                        col_idx.pop();
                        row_ptr[pi + 1] -= 1;
                    }
                }
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        if let Some((pi, _)) = last {
            if values.last() == Some(&ZERO) {
                values.pop();
                col_idx.pop();
                row_ptr[pi + 1] -= 1;
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { dim, row_ptr, col_idx, values }
    }

    pub fn from_dense(m: &ComplexMatrix) -> Self {
        assert!(m.is_square(), "sparse matrices are square");
        let n = m.rows();
        let mut triplets = Vec::new();
        for i in 0..n {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v != ZERO {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, triplets)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Stored `(col, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(p) => self.values[range.start + p],
            Err(_) => ZERO,
        }
    }

    /// All stored entries as `(row, col, value)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    /// Copy with row `i` replaced by the given `(col, value)` entries.
    pub fn with_row_replaced(&self, i: usize, entries: &[(usize, C64)]) -> Self {
        let mut triplets: Vec<_> = self.triplets().filter(|&(r, _, _)| r != i).collect();
        triplets.extend(entries.iter().map(|&(j, v)| (i, j, v)));
        Self::from_triplets(self.dim, triplets)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim, "mul_vec shape mismatch");
        (0..self.dim).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// S · B for dense B.
    pub fn mul_dense(&self, b: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(b.rows(), self.dim, "mul_dense shape mismatch");
        let cols = b.cols();
        let mut out = ComplexMatrix::zeros(self.dim, cols);
        let data = out.as_mut_slice();
        for i in 0..self.dim {
            let out_row = &mut data[i * cols..(i + 1) * cols];
            for (k, v) in self.row(i) {
                for (o, &x) in out_row.iter_mut().zip(b.row(k)) {
                    *o += v * x;
                }
            }
        }
        out
    }

    /// B · S for dense B.
    pub fn dense_mul(&self, b: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(b.cols(), self.dim, "dense_mul shape mismatch");
        let rows = b.rows();
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(rows, n);
        let data = out.as_mut_slice();
        for r in 0..rows {
            let out_row = &mut data[r * n..(r + 1) * n];
            for (k, &x) in b.row(r).iter().enumerate() {
                if x == ZERO {
                    continue;
                }
                for (j, v) in self.row(k) {
                    out_row[j] += x * v;
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= factor;
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim).map(|i| self.row(i).map(|(_, v)| v.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    /// Column-major copy of the structure: `(col_ptr, row_idx, values)`.
    pub(crate) fn to_csc(&self) -> (Vec<usize>, Vec<usize>, Vec<C64>) {
        let n = self.dim;
        let mut col_ptr = vec![0usize; n + 1];
        for &j in &self.col_idx {
            col_ptr[j + 1] += 1;
        }
        for j in 0..n {
            col_ptr[j + 1] += col_ptr[j];
        }
        let mut next = col_ptr.clone();
        let mut row_idx = vec![0usize; self.nnz()];
        let mut values = vec![ZERO; self.nnz()];
        for i in 0..n {
            for (j, v) in self.row(i) {
                let p = next[j];
                row_idx[p] = i;
                values[p] = v;
                next[j] += 1;
            }
        }
        (col_ptr, row_idx, values)
    }
}

/// Stored entries of a dense matrix, skipping exact zeros.
pub fn nonzero_entries(m: &ComplexMatrix) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for (j, &v) in m.row(i).iter().enumerate() {
            if v != ZERO {
                out.push((i, j, v));
            }
        }
    }
    out
}

/// Appends the entries of `factor · (a ⊗ b)` to `out`, where `a` and `b` are
/// given as nonzero entry lists and `b` is `q` columns wide (square).
pub fn push_kron_triplets(
    out: &mut Vec<(usize, usize, C64)>,
    factor: C64,
    a: &[(usize, usize, C64)],
    b: &[(usize, usize, C64)],
    q: usize,
) {
    out.reserve(a.len() * b.len());
    for &(i, j, x) in a {
        let fx = factor * x;
        for &(k, l, y) in b {
            out.push((i * q + k, j * q + l, fx * y));
        }
    }
}
