//! Left-looking sparse LU factorization with threshold partial pivoting.
//!
//! Each column of `L` and `U` is produced by a sparse triangular solve
//! against the columns already factored (Gilbert–Peierls): a depth-first
//! search over the graph of `L` yields the nonzero pattern of the column in
//! topological order, so the work is proportional to the arithmetic
//! actually performed. Columns are taken in natural order; a row pivot is
//! chosen per column, preferring the diagonal when it is within
//! [`PIVOT_THRESHOLD`] of the largest candidate.

use num_complex::Complex64 as C64;

use super::dense::dense_solve;
use super::ordering::{nested_dissection, permute_symmetric};
use super::sparse::SparseComplexMatrix;
use super::{DENSE_CUTOFF, PIVOT_TOLERANCE};
use crate::error::{Error, Result};

/// Diagonal entries within this fraction of the column maximum are accepted
/// as pivots.
pub const PIVOT_THRESHOLD: f64 = 0.1;

const ZERO: C64 = C64::new(0.0, 0.0);
const NONE: usize = usize::MAX;

/// Factors `P A = L U` of a square sparse matrix.
#[derive(Debug, Clone)]
pub struct SparseLu {
    dim: usize,
    /// `pinv[row] = pivot step` of each original row.
    pinv: Vec<usize>,
    // Unit lower triangle, column-wise; the first entry of each column is the
    // unit diagonal. Row indices are pivot steps after factorization.
    l_ptr: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<C64>,
    // Upper triangle, column-wise; the last entry of each column is the diagonal.
    u_ptr: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<C64>,
}

impl SparseLu {
    pub fn factor(a: &SparseComplexMatrix) -> Result<Self> {
        let n = a.dim();
        let (a_ptr, a_idx, a_val) = a.to_csc();
        let tol = PIVOT_TOLERANCE * a.max_abs();

        let mut lu = SparseLu {
            dim: n,
            pinv: vec![NONE; n],
            l_ptr: Vec::with_capacity(n + 1),
            l_idx: Vec::with_capacity(4 * a.nnz()),
            l_val: Vec::with_capacity(4 * a.nnz()),
            u_ptr: Vec::with_capacity(n + 1),
            u_idx: Vec::with_capacity(4 * a.nnz()),
            u_val: Vec::with_capacity(4 * a.nnz()),
        };
        let mut x = vec![ZERO; n];
        // xi[top..n] holds the reach of the current column in topological order.
        let mut xi = vec![0usize; n];
        let mut stack: Vec<(usize, usize)> = Vec::with_capacity(n);
        let mut mark = vec![NONE; n];

        for k in 0..n {
            lu.l_ptr.push(lu.l_idx.len());
            lu.u_ptr.push(lu.u_idx.len());
            let col = a_ptr[k]..a_ptr[k + 1];

            // Symbolic: rows reachable from the pattern of A(:, k) through L.
            let mut top = n;
            for &start in &a_idx[col.clone()] {
                if mark[start] == k {
                    continue;
                }
                mark[start] = k;
                stack.push((start, lu.first_child(start)));
                while let Some(&mut (node, ref mut next)) = stack.last_mut() {
                    let end = lu.child_end(node);
                    let mut pushed = None;
                    while *next < end {
                        let child = lu.l_idx[*next];
                        *next += 1;
                        if mark[child] != k {
                            mark[child] = k;
                            pushed = Some(child);
                            break;
                        }
                    }
                    match pushed {
                        Some(child) => stack.push((child, lu.first_child(child))),
                        None => {
                            stack.pop();
                            top -= 1;
                            xi[top] = node;
                        }
                    }
                }
            }

            // Numeric: x = L \ A(:, k) restricted to the reach.
            for &i in &xi[top..n] {
                x[i] = ZERO;
            }
            for (&i, &v) in a_idx[col.clone()].iter().zip(&a_val[col]) {
                x[i] = v;
            }
            for &j in &xi[top..n] {
                let step = lu.pinv[j];
                if step == NONE {
                    continue;
                }
                let xj = x[j];
                if xj == ZERO {
                    continue;
                }
                for p in lu.l_ptr[step] + 1..lu.l_ptr[step + 1] {
                    x[lu.l_idx[p]] -= lu.l_val[p] * xj;
                }
            }

            // Pivot choice among rows not yet pivoted.
            let mut ipiv = NONE;
            let mut best = -1.0;
            for &i in &xi[top..n] {
                if lu.pinv[i] == NONE {
                    let mag = x[i].norm();
                    if mag > best {
                        best = mag;
                        ipiv = i;
                    }
                } else if x[i] != ZERO {
                    lu.u_idx.push(lu.pinv[i]);
                    lu.u_val.push(x[i]);
                }
            }
            if ipiv == NONE || best <= tol {
                return Err(Error::SingularMatrix { step: k, pivot: best.max(0.0) });
            }
            if lu.pinv[k] == NONE && mark[k] == k && x[k].norm() >= PIVOT_THRESHOLD * best {
                ipiv = k;
            }
            let pivot = x[ipiv];
            lu.u_idx.push(k);
            lu.u_val.push(pivot);
            lu.pinv[ipiv] = k;
            lu.l_idx.push(ipiv);
            lu.l_val.push(C64::new(1.0, 0.0));
            for &i in &xi[top..n] {
                if lu.pinv[i] == NONE && x[i] != ZERO {
                    lu.l_idx.push(i);
                    lu.l_val.push(x[i] / pivot);
                }
                x[i] = ZERO;
            }
        }
        lu.l_ptr.push(lu.l_idx.len());
        lu.u_ptr.push(lu.u_idx.len());
        for i in lu.l_idx.iter_mut() {
            *i = lu.pinv[*i];
        }
        Ok(lu)
    }

    // Children of row `i` in the graph of L: the off-diagonal rows of the L
    // column where `i` was pivoted. Unpivoted rows have none.
    #[inline]
    fn first_child(&self, i: usize) -> usize {
        match self.pinv[i] {
            NONE => 0,
            step => self.l_ptr[step] + 1,
        }
    }

    #[inline]
    fn child_end(&self, i: usize) -> usize {
        match self.pinv[i] {
            NONE => 0,
            step => self.l_ptr[step + 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stored entries in `L` and `U` together.
    pub fn factor_nnz(&self) -> usize {
        self.l_idx.len() + self.u_idx.len()
    }

    pub fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        let n = self.dim;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rhs.len() });
        }
        let mut x = vec![ZERO; n];
        for (i, &b) in rhs.iter().enumerate() {
            x[self.pinv[i]] = b;
        }
        for j in 0..n {
            let xj = x[j];
            if xj == ZERO {
                continue;
            }
            for p in self.l_ptr[j] + 1..self.l_ptr[j + 1] {
                x[self.l_idx[p]] -= self.l_val[p] * xj;
            }
        }
        for j in (0..n).rev() {
            let diag = self.u_ptr[j + 1] - 1;
            x[j] /= self.u_val[diag];
            let xj = x[j];
            if xj == ZERO {
                continue;
            }
            for p in self.u_ptr[j]..diag {
                x[self.u_idx[p]] -= self.u_val[p] * xj;
            }
        }
        Ok(x)
    }
}

/// Solves `m x = rhs` by direct factorization.
///
/// Systems of dimension at most 64 are densified and solved by dense
/// elimination; larger ones go through [`SparseLu`].
pub fn sparse_solve(m: &SparseComplexMatrix, rhs: &[C64]) -> Result<Vec<C64>> {
    if rhs.len() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: rhs.len() });
    }
    if m.dim() <= DENSE_CUTOFF {
        return dense_solve(&m.to_dense(), rhs);
    }
    let blocks = structural_blocks(m);
    if blocks.len() == 1 {
        return solve_reordered(m, rhs);
    }
    let mut x = vec![C64::new(0.0, 0.0); m.dim()];
    let mut local = vec![usize::MAX; m.dim()];
    for block in &blocks {
        for (k, &g) in block.iter().enumerate() {
            local[g] = k;
        }
        let triplets = block
            .iter()
            .enumerate()
            .flat_map(|(k, &g)| m.row(g).map(move |(j, v)| (k, j, v)))
            .map(|(k, j, v)| (k, local[j], v))
            .collect();
        let sub = SparseComplexMatrix::from_triplets(block.len(), triplets);
        let sub_rhs: Vec<C64> = block.iter().map(|&g| rhs[g]).collect();
        let solved = if block.len() <= DENSE_CUTOFF {
            dense_solve(&sub.to_dense(), &sub_rhs)
        } else {
            solve_reordered(&sub, &sub_rhs)
        }
        .map_err(|e| match e {
            Error::SingularMatrix { step, pivot } => Error::SingularMatrix { step: block[step], pivot },
            other => other,
        })?;
        for (k, &g) in block.iter().enumerate() {
            x[g] = solved[k];
        }
    }
    Ok(x)
}

/// Sparse LU on the nested-dissection reordering of `m`. Singular pivots
/// are reported at their original index.
fn solve_reordered(m: &SparseComplexMatrix, rhs: &[C64]) -> Result<Vec<C64>> {
    let perm = nested_dissection(m);
    let lu = SparseLu::factor(&permute_symmetric(m, &perm)).map_err(|e| match e {
        Error::SingularMatrix { step, pivot } => Error::SingularMatrix { step: perm[step], pivot },
        other => other,
    })?;
    let permuted: Vec<C64> = perm.iter().map(|&i| rhs[i]).collect();
    let y = lu.solve(&permuted)?;
    let mut x = vec![C64::new(0.0, 0.0); m.dim()];
    for (k, &i) in perm.iter().enumerate() {
        x[i] = y[k];
    }
    Ok(x)
}

/// Index sets of the connected components of the (symmetrized) sparsity
/// graph, each sorted ascending and ordered by smallest member. A matrix
/// that splits this way is block diagonal up to a permutation, so each block
/// can be factored on its own with much less fill.
pub fn structural_blocks(m: &SparseComplexMatrix) -> Vec<Vec<usize>> {
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let n = m.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for (j, _) in m.row(i) {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut block_of_root = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if block_of_root[r] == usize::MAX {
            block_of_root[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of_root[r]].push(i);
    }
    blocks
}
