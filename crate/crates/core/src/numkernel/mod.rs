//! Complex linear algebra: dense and compressed-sparse-row matrices,
//! Kronecker products, Hermitian spectral decomposition and functions of
//! Hermitian matrices, and direct solves.

mod dense;
mod eigen;
mod lu;
mod ordering;
mod sparse;

pub use dense::{dense_solve, kron, ComplexMatrix};
pub use eigen::{
    hermitian_eigen, hermitian_matrix_function, psd_matrix_function, psd_sqrt, HermitianEigen,
    HERMITIAN_TOLERANCE, PSD_CLIP,
};
pub(crate) use eigen::check_psd;
pub use lu::{sparse_solve, structural_blocks, SparseLu, PIVOT_THRESHOLD};
pub use ordering::{nested_dissection, permute_symmetric};
pub use sparse::{nonzero_entries, push_kron_triplets, SparseComplexMatrix};

/// Pivots below this fraction of the largest matrix entry mark the system
/// as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Square systems up to this dimension are solved densely.
pub const DENSE_CUTOFF: usize = 64;
