//! Lindblad models and their superoperators.
//!
//! A model describes
//!
//! ```text
//! dρ/dt = −i[H, ρ] + Σ_k r_k (L_k ρ L_k† − ½{L_k†L_k, ρ})
//! ```
//!
//! with nonnegative rates `r_k`. Density matrices are vectorized row-major,
//! `vec(ρ)[m·N + n] = ρ[m, n]`, so that `A ρ B ↦ (A ⊗ Bᵀ) vec(ρ)`. The first
//! tensor factor is the system, the second the ancilla.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numkernel::{
    check_psd, hermitian_eigen, nonzero_entries, push_kron_triplets, ComplexMatrix,
    SparseComplexMatrix,
};

const I: C64 = C64::new(0.0, 1.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Relative Hermiticity tolerance for model Hamiltonians.
pub const HAMILTONIAN_TOLERANCE: f64 = 1e-12;

/// Trace and Hermiticity tolerance of [`DensityMatrix`].
pub const STATE_TOLERANCE: f64 = 1e-10;

/// One dissipative term `r (L ρ L† − ½{L†L, ρ})`.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipationChannel {
    rate: f64,
    jump: ComplexMatrix,
}

impl DissipationChannel {
    pub fn new(rate: f64, jump: ComplexMatrix) -> Result<Self> {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::InvalidParams(format!("channel rate must be finite and >= 0, got {rate}")));
        }
        jump.ensure_square()?;
        Ok(Self { rate, jump })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn jump_operator(&self) -> &ComplexMatrix {
        &self.jump
    }
}

/// Hamiltonian plus dissipation channels, all on the same N-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladModel {
    hamiltonian: ComplexMatrix,
    channels: Vec<DissipationChannel>,
}

impl LindbladModel {
    pub fn new(hamiltonian: ComplexMatrix, channels: Vec<DissipationChannel>) -> Result<Self> {
        let n = hamiltonian.ensure_square()?;
        let defect = hamiltonian.hermitian_defect();
        if defect > HAMILTONIAN_TOLERANCE * hamiltonian.norm_inf() {
            return Err(Error::NotHermitian { asymmetry: defect });
        }
        for ch in &channels {
            if ch.jump.rows() != n {
                return Err(Error::DimensionMismatch { expected: n, found: ch.jump.rows() });
            }
        }
        Ok(Self { hamiltonian, channels })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[DissipationChannel] {
        &self.channels
    }

    fn active_channels(&self) -> impl Iterator<Item = &DissipationChannel> {
        self.channels.iter().filter(|c| c.rate > 0.0)
    }

    /// Non-Hermitian part of the Schrödinger-like generator,
    /// `H − (i/2) Σ r_k L_k†L_k`.
    pub fn damped_hamiltonian(&self) -> ComplexMatrix {
        let mut out = self.hamiltonian.clone();
        for ch in self.active_channels() {
            let ldl = ch.jump.adjoint().matmul(&ch.jump);
            out = &out - &ldl.scale(I * (0.5 * ch.rate));
        }
        out
    }

    fn check_dim(&self, m: &ComplexMatrix) -> Result<()> {
        let n = self.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if m.rows() != n { m.rows() } else { m.cols() },
            });
        }
        Ok(())
    }
}

/// Row-major index of ρ[m, n] in the vectorized state.
#[inline]
pub fn vec_index(dim: usize, m: usize, n: usize) -> usize {
    m * dim + n
}

pub fn vectorize(rho: &ComplexMatrix) -> Vec<C64> {
    rho.as_slice().to_vec()
}

pub fn unvectorize(dim: usize, v: &[C64]) -> Result<ComplexMatrix> {
    ComplexMatrix::from_row_major(dim, dim, v.to_vec())
}

/// N²×N² generator acting on vectorized density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    system_dim: usize,
    matrix: SparseComplexMatrix,
}

impl Superoperator {
    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &SparseComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SparseComplexMatrix {
        self.matrix
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.mul_vec(v)
    }

    /// Applies the generator to a matrix and returns the result as a matrix.
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.system_dim || rho.cols() != self.system_dim {
            return Err(Error::DimensionMismatch { expected: self.system_dim, found: rho.rows() });
        }
        unvectorize(self.system_dim, &self.apply(rho.as_slice()))
    }

    /// Σ_m row(m·N + m): the trace functional applied from the left. Zero for
    /// a trace-preserving generator.
    pub fn trace_row_sum(&self) -> Vec<C64> {
        let n = self.system_dim;
        let mut sum = vec![C64::new(0.0, 0.0); self.dim()];
        for m in 0..n {
            for (j, v) in self.matrix.row(vec_index(n, m, m)) {
                sum[j] += v;
            }
        }
        sum
    }
}

/// Assembles the Liouvillian
///
/// ```text
/// 𝓛 = −i(H ⊗ I − I ⊗ Hᵀ) + Σ_k r_k [L_k ⊗ L̄_k − ½ L_k†L_k ⊗ I − ½ I ⊗ (L_k†L_k)ᵀ]
/// ```
///
/// so that `d vec(ρ)/dt = 𝓛 vec(ρ)`.
pub fn build_superoperator(model: &LindbladModel) -> Superoperator {
    let n = model.dim();
    let id = nonzero_entries(&ComplexMatrix::identity(n));
    let h = nonzero_entries(model.hamiltonian());
    let h_t = nonzero_entries(&model.hamiltonian().transpose());

    let mut t = Vec::new();
    push_kron_triplets(&mut t, -I, &h, &id, n);
    push_kron_triplets(&mut t, I, &id, &h_t, n);
    for ch in model.active_channels() {
        let r = C64::new(ch.rate, 0.0);
        let ldl = ch.jump.adjoint().matmul(&ch.jump);
        push_kron_triplets(&mut t, r, &nonzero_entries(&ch.jump), &nonzero_entries(&ch.jump.conj()), n);
        push_kron_triplets(&mut t, -0.5 * r, &nonzero_entries(&ldl), &id, n);
        push_kron_triplets(&mut t, -0.5 * r, &id, &nonzero_entries(&ldl.transpose()), n);
    }
    Superoperator { system_dim: n, matrix: SparseComplexMatrix::from_triplets(n * n, t) }
}

/// Assembles the effective Hamiltonian of the doubled (system ⊗ ancilla)
/// space,
///
/// ```text
/// 𝓗_eff = 𝓗 ⊗ I − I ⊗ 𝓗^A + i Σ_k r_k L_k ⊗ L_k^A,   𝓗 = H − (i/2) Σ_k r_k L_k†L_k
/// ```
///
/// where an ancilla operator has entries `⟨m|O^A|n⟩ = ⟨n|O†|m⟩`, i.e. it is
/// the entrywise complex conjugate of `O`. The result equals `i` times
/// [`build_superoperator`], and its zero mode is the vectorized steady state.
pub fn build_effective_hamiltonian(model: &LindbladModel) -> Superoperator {
    let n = model.dim();
    let id = nonzero_entries(&ComplexMatrix::identity(n));
    let damped = model.damped_hamiltonian();

    let mut t = Vec::new();
    push_kron_triplets(&mut t, ONE, &nonzero_entries(&damped), &id, n);
    push_kron_triplets(&mut t, -ONE, &id, &nonzero_entries(&ancilla(&damped)), n);
    for ch in model.active_channels() {
        let jump_a = nonzero_entries(&ancilla(&ch.jump));
        push_kron_triplets(&mut t, I * ch.rate, &nonzero_entries(&ch.jump), &jump_a, n);
    }
    Superoperator { system_dim: n, matrix: SparseComplexMatrix::from_triplets(n * n, t) }
}

/// Ancilla counterpart of a system operator: `(O^A)[m, n] = conj(O[m, n])`.
fn ancilla(op: &ComplexMatrix) -> ComplexMatrix {
    let dag = op.adjoint();
    ComplexMatrix::from_fn(op.rows(), op.cols(), |m, n| dag[(n, m)])
}

/// Matrix-form right-hand side of the master equation, never materializing
/// the superoperator.
pub fn apply_rhs(model: &LindbladModel, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    model.check_dim(rho)?;
    Ok(LindbladRhs::new(model).apply(rho))
}

/// Precomputed sparse operators for repeated evaluation of dρ/dt.
#[derive(Debug, Clone)]
pub struct LindbladRhs {
    /// −i(H − (i/2)Σ r L†L)
    generator: SparseComplexMatrix,
    /// +i(H + (i/2)Σ r L†L), applied from the right.
    generator_right: SparseComplexMatrix,
    /// (√r L, √r L†)
    jumps: Vec<(SparseComplexMatrix, SparseComplexMatrix)>,
}

impl LindbladRhs {
    pub fn new(model: &LindbladModel) -> Self {
        let damped = model.damped_hamiltonian();
        let generator = SparseComplexMatrix::from_dense(&damped.scale(-I));
        let generator_right = SparseComplexMatrix::from_dense(&damped.adjoint().scale(I));
        let jumps = model
            .active_channels()
            .map(|ch| {
                let scaled = ch.jump.scale_real(ch.rate.sqrt());
                (SparseComplexMatrix::from_dense(&scaled), SparseComplexMatrix::from_dense(&scaled.adjoint()))
            })
            .collect();
        Self { generator, generator_right, jumps }
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.generator.mul_dense(rho);
        let right = self.generator_right.dense_mul(rho);
        add_assign(&mut out, &right);
        for (l, l_dag) in &self.jumps {
            let term = l_dag.dense_mul(&l.mul_dense(rho));
            add_assign(&mut out, &term);
        }
        out
    }
}

fn add_assign(acc: &mut ComplexMatrix, other: &ComplexMatrix) {
    for (a, b) in acc.as_mut_slice().iter_mut().zip(other.as_slice()) {
        *a += b;
    }
}

/// Trace-one, Hermitian, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates trace (1 ± 1e-10), Hermiticity (1e-10) and positivity
    /// (eigenvalues ≥ −1e-8).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.ensure_square()?;
        let tr = matrix.trace();
        if (tr - ONE).norm() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let defect = matrix.hermitian_defect();
        if defect > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("Hermiticity defect {defect:.3e}")));
        }
        let eig = hermitian_eigen(&matrix)?;
        check_psd(&eig.eigenvalues).map_err(|e| Error::InvalidState(e.to_string()))?;
        Ok(Self { matrix })
    }

    /// Hermitizes, clips eigenvalues in `[-1e-8, 0)` to zero and renormalizes
    /// the trace before validating.
    pub fn from_approximate(matrix: &ComplexMatrix) -> Result<Self> {
        matrix.ensure_square()?;
        let h = matrix.hermitian_part();
        let eig = hermitian_eigen(&h)?;
        check_psd(&eig.eigenvalues).map_err(|e| Error::InvalidState(e.to_string()))?;
        let cleaned = if eig.eigenvalues[0] < 0.0 { eig.reconstruct_with(|x| x.max(0.0)) } else { h };
        let tr = cleaned.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr} cannot be normalized")));
        }
        Self::new(cleaned.scale_real(1.0 / tr))
    }

    /// |ψ⟩⟨ψ| for a normalized copy of `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Real diagonal ρ[m, m].
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    /// |0⟩⟨1| in a two-dimensional space.
    fn lowering() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn pure_commutator_case() {
        let h = sigma_z().scale_real(0.5);
        let model = LindbladModel::new(h.clone(), vec![]).unwrap();
        let lv = build_superoperator(&model);
        let got = lv.apply_matrix(&sigma_x()).unwrap();
        let expected = h.commutator(&sigma_x()).scale(-I);
        assert!(got.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn closed_system_effective_hamiltonian() {
        let h = ComplexMatrix::from_row_major(2, 2, vec![c(0.3), C64::new(0.1, -0.2), C64::new(0.1, 0.2), c(-0.7)])
            .unwrap();
        let model = LindbladModel::new(h.clone(), vec![]).unwrap();
        let heff = build_effective_hamiltonian(&model).matrix().to_dense();
        let id = ComplexMatrix::identity(2);
        let expected = &crate::numkernel::kron(&h, &id) - &crate::numkernel::kron(&id, &h.transpose());
        assert!(heff.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn single_decay_channel_on_maximally_mixed_state() {
        let gamma = 0.4;
        let h = sigma_z().scale_real(0.5);
        let model = LindbladModel::new(h, vec![DissipationChannel::new(gamma, lowering()).unwrap()]).unwrap();
        let rho = ComplexMatrix::identity(2).scale_real(0.5);
        let d = apply_rhs(&model, &rho).unwrap();
        // L ρ L† − ½{L†L, ρ} with ρ = I/2 and L = |0⟩⟨1|:
        // ½|0⟩⟨0| − ½|1⟩⟨1| times γ.
        let expected = ComplexMatrix::from_real_diagonal(&[gamma / 2.0, -gamma / 2.0]);
        assert!(d.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn closed_system_leaves_functions_of_h_invariant() {
        let h = sigma_z().scale_real(0.5);
        let model = LindbladModel::new(h, vec![]).unwrap();
        let rho = ComplexMatrix::from_real_diagonal(&[0.3, 0.7]);
        assert_eq!(apply_rhs(&model, &rho).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn zero_rate_channels_emit_no_entries() {
        let h = sigma_z().scale_real(0.5);
        let with = LindbladModel::new(h.clone(), vec![DissipationChannel::new(0.0, sigma_x()).unwrap()]).unwrap();
        let without = LindbladModel::new(h, vec![]).unwrap();
        assert_eq!(build_superoperator(&with), build_superoperator(&without));
    }

    #[test]
    fn model_validation() {
        let skew = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!(matches!(LindbladModel::new(skew, vec![]), Err(Error::NotHermitian { .. })));
        let bad = DissipationChannel::new(1.0, ComplexMatrix::identity(3)).unwrap();
        assert!(matches!(
            LindbladModel::new(sigma_z(), vec![bad]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(DissipationChannel::new(-1.0, sigma_x()).is_err());
        assert!(DissipationChannel::new(f64::NAN, sigma_x()).is_err());
        let model = LindbladModel::new(sigma_z(), vec![]).unwrap();
        assert!(matches!(
            apply_rhs(&model, &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap()).is_err());
        let ok = DensityMatrix::from_approximate(&ComplexMatrix::from_real_diagonal(&[2.0, -1e-9])).unwrap();
        assert_eq!(ok.populations(), vec![1.0, 0.0]);
        let psi = DensityMatrix::pure(&[c(3.0), c(4.0)]).unwrap();
        assert!((psi.matrix()[(0, 1)] - c(0.48)).norm() < 1e-15);
    }
}
