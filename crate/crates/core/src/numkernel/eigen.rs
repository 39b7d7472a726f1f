use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::dense::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative asymmetry accepted by [`hermitian_eigen`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Eigenvalues at or above `-PSD_CLIP` are treated as zero by
/// [`psd_matrix_function`]; anything lower is an error.
pub const PSD_CLIP: f64 = 1e-8;

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// V f(Λ) V†.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        self.reconstruct_from_weights(&weights)
    }

    /// V diag(weights) V†, Hermitized.
    pub fn reconstruct_from_weights(&self, weights: &[f64]) -> ComplexMatrix {
        assert_eq!(weights.len(), self.dim(), "one weight per eigenvalue");
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                if vik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out.hermitian_part()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is Hermitized before decomposition; asymmetry larger than
/// `1e-10 * ‖a‖∞` is rejected.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = a.ensure_square()?;
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOLERANCE * a.norm_inf() {
        return Err(Error::NotHermitian { asymmetry: defect });
    }
    let h = a.hermitian_part();
    let eig = SymmetricEigen::new(DMatrix::from_row_slice(n, n, h.as_slice()));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok(HermitianEigen { eigenvalues, eigenvectors })
}

/// f(A) for Hermitian A, applied through the spectral decomposition.
pub fn hermitian_matrix_function(
    a: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix> {
    Ok(hermitian_eigen(a)?.reconstruct_with(f))
}

/// f(A) for positive semidefinite A. Eigenvalues in `[-1e-8, 0)` are
/// clipped to zero before `f` is applied.
pub fn psd_matrix_function(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(a)?;
    check_psd(&eig.eigenvalues)?;
    Ok(eig.reconstruct_with(|x| f(x.max(0.0))))
}

pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_matrix_function(a, f64::sqrt)
}

pub(crate) fn check_psd(eigenvalues: &[f64]) -> Result<()> {
    match eigenvalues.first() {
        Some(&min) if min < -PSD_CLIP => Err(Error::NegativeEigenvalue { value: min }),
        _ => Ok(()),
    }
}
