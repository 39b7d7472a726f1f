//! Steady-state thermodynamics and state comparisons.
//!
//! Units: ħ = k_B = 1. Energies are measured in the reference frequency of
//! the model (Ω, Ω₁ or ω) and temperatures in the same unit.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::liouville::{DensityMatrix, LindbladModel};
use crate::numkernel::{check_psd, hermitian_eigen, psd_sqrt, ComplexMatrix};
use crate::steady::solve_steady_state;

/// Eigenvalues below this weight contribute nothing to the entropy.
pub const ENTROPY_FLOOR: f64 = 1e-14;

/// Eigenvalue gap below which levels count as degenerate in the
/// zero-temperature Gibbs state.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

/// Bath temperature, `k_B T` in energy units. Zero is allowed and treated as
/// the exact limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Temperature(f64);

impl Temperature {
    pub const ZERO: Temperature = Temperature(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidParams(format!("temperature must be finite and >= 0, got {value}")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Temperature {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// Bose–Einstein occupation `1/(e^{ω/T} − 1)`.
pub fn mean_occupation(t: Temperature, omega: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::NonpositiveFrequency(omega));
    }
    let t = t.value();
    if t == 0.0 {
        return Ok(0.0);
    }
    let x = omega / t;
    Ok(if x > 700.0 {
        0.0
    } else if x < 1e-8 {
        1.0 / x - 0.5
    } else {
        1.0 / x.exp_m1()
    })
}

/// `U = Tr(ρ H)`.
pub fn internal_energy(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<f64> {
    let m = rho.matrix();
    if h.rows() != m.rows() || h.cols() != m.cols() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: h.rows() });
    }
    let n = m.rows();
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            tr += m[(i, k)] * h[(k, i)];
        }
    }
    debug_assert!(tr.im.abs() <= 1e-10 * (1.0 + h.norm_inf()), "Tr(ρH) has imaginary part {}", tr.im);
    Ok(tr.re)
}

/// `S = −Tr ρ ln ρ`, clamped to `[0, ln N]`.
///
/// Evaluated as `ln N − Σ p ln(N p)`, which is exact for the maximally mixed
/// state. Eigenvalues below 1e-14 are dropped, and a state with an
/// eigenvalue within 1e-14 of 1 is pure and has entropy exactly 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = hermitian_eigen(rho.matrix())?;
    check_psd(&eig.eigenvalues).map_err(|e| Error::InvalidState(e.to_string()))?;
    let n = rho.dim() as f64;
    if eig.eigenvalues.last().is_some_and(|&p| p >= 1.0 - ENTROPY_FLOOR) {
        return Ok(0.0);
    }
    let excess: f64 = eig
        .eigenvalues
        .iter()
        .filter(|&&p| p >= ENTROPY_FLOOR)
        .map(|&p| p * (n * p).ln())
        .sum();
    Ok((n.ln() - excess).clamp(0.0, n.ln()))
}

/// Uhlmann fidelity `F = Tr √(√ρ₁ ρ₂ √ρ₁)`.
pub fn uhlmann_fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch { expected: rho1.dim(), found: rho2.dim() });
    }
    let s = psd_sqrt(rho1.matrix()).map_err(|e| Error::InvalidState(e.to_string()))?;
    let inner = s.matmul(rho2.matrix()).matmul(&s).hermitian_part();
    let eig = hermitian_eigen(&inner)?;
    check_psd(&eig.eigenvalues).map_err(|e| Error::InvalidState(e.to_string()))?;
    Ok(eig.eigenvalues.iter().map(|&x| x.max(0.0).sqrt()).sum())
}

/// Trace distance `½ ‖ρ − σ‖₁`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let diff = a.matrix() - b.matrix();
    let eig = hermitian_eigen(&diff)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}

/// Boltzmann state `e^{−H/T}/Z`; at `T = 0` the uniform mixture over the
/// ground eigenspace.
pub fn gibbs_state(h: &ComplexMatrix, t: Temperature) -> Result<DensityMatrix> {
    let eig = hermitian_eigen(h)?;
    let e_min = eig.eigenvalues[0];
    let weights: Vec<f64> = if t.value() == 0.0 {
        eig.eigenvalues
            .iter()
            .map(|&e| if e - e_min <= DEGENERACY_TOLERANCE { 1.0 } else { 0.0 })
            .collect()
    } else {
        eig.eigenvalues.iter().map(|&e| (-(e - e_min) / t.value()).exp()).collect()
    };
    let z: f64 = weights.iter().sum();
    let probabilities: Vec<f64> = weights.iter().map(|w| w / z).collect();
    DensityMatrix::new(eig.reconstruct_from_weights(&probabilities))
}

/// One Hamiltonian eigenstate and its occupation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPopulation {
    pub energy: f64,
    pub population: f64,
}

/// Populations `⟨v_k|ρ|v_k⟩` of the Hamiltonian eigenstates, ordered by
/// ascending energy.
pub fn eigenbasis_populations(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<Vec<LevelPopulation>> {
    if h.rows() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: h.rows() });
    }
    let eig = hermitian_eigen(h)?;
    Ok((0..eig.dim())
        .map(|k| {
            let v = eig.eigenvector(k);
            LevelPopulation { energy: eig.eigenvalues[k], population: rho.matrix().sandwich(&v, &v).re }
        })
        .collect())
}

/// Which bath a derivative is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bath {
    First,
    Second,
}

/// A model parameterized by the two bath temperatures.
pub trait ModelFamily {
    fn model_at(&self, t1: Temperature, t2: Temperature) -> Result<LindbladModel>;
}

/// Steady-state energy of `family` at the given temperatures.
pub fn steady_energy<F: ModelFamily + ?Sized>(family: &F, t1: Temperature, t2: Temperature) -> Result<f64> {
    let model = family.model_at(t1, t2)?;
    let rho = solve_steady_state(&model)?;
    internal_energy(&rho, model.hamiltonian())
}

/// Finite-difference step used by [`specific_heat`].
pub fn specific_heat_step(t: f64) -> f64 {
    (1e-4 * t).max(1e-6)
}

/// `C = ∂U/∂T_i` by a central difference of the re-solved steady-state
/// energy, with step `h = max(1e-4·T_i, 1e-6)`.
pub fn specific_heat<F: ModelFamily + Sync + ?Sized>(
    family: &F,
    bath: Bath,
    t1: Temperature,
    t2: Temperature,
) -> Result<f64> {
    specific_heat_with_step(family, bath, t1, t2, None)
}

/// [`specific_heat`] with an explicit step.
pub fn specific_heat_with_step<F: ModelFamily + Sync + ?Sized>(
    family: &F,
    bath: Bath,
    t1: Temperature,
    t2: Temperature,
    step: Option<f64>,
) -> Result<f64> {
    let t = match bath {
        Bath::First => t1.value(),
        Bath::Second => t2.value(),
    };
    if !(t > 0.0) {
        return Err(Error::InvalidParams(format!(
            "specific heat needs a positive temperature for the differentiated bath, got {t}"
        )));
    }
    let h = step.unwrap_or_else(|| specific_heat_step(t));
    if !(h > 0.0 && h < t) {
        return Err(Error::InvalidParams(format!("finite-difference step {h} is invalid at T = {t}")));
    }
    let at = |tv: f64| -> Result<f64> {
        let tv = Temperature::new(tv)?;
        match bath {
            Bath::First => steady_energy(family, tv, t2),
            Bath::Second => steady_energy(family, t1, tv),
        }
    };
    let (up, down) = join(|| at(t + h), || at(t - h));
    Ok((up? - down?) / (2.0 * h))
}

#[cfg(feature = "parallel")]
fn join<A: Send, B: Send>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B) {
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
fn join<A, B>(a: impl FnOnce() -> A, b: impl FnOnce() -> B) -> (A, B) {
    (a(), b())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: f64) -> Temperature {
        Temperature::new(x).unwrap()
    }

    fn two_level_h() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[-0.5, 0.5])
    }

    #[test]
    fn occupation_limits() {
        assert_eq!(mean_occupation(Temperature::ZERO, 1.0).unwrap(), 0.0);
        assert!((mean_occupation(t(1.0 / 2f64.ln()), 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((mean_occupation(t(1.0), 1.0).unwrap() - 0.581_976_706_869_326_5).abs() < 1e-15);
        assert_eq!(mean_occupation(t(1e-3), 1.0).unwrap(), 0.0);
        let hot = mean_occupation(t(1e10), 1.0).unwrap();
        assert!((hot - (1e10 - 0.5)).abs() / 1e10 < 1e-15);
        assert!(matches!(mean_occupation(t(1.0), 0.0), Err(Error::NonpositiveFrequency(_))));
        assert!(matches!(mean_occupation(t(1.0), -2.0), Err(Error::NonpositiveFrequency(_))));
    }

    #[test]
    fn occupation_is_continuous_across_the_small_argument_switch() {
        // Both branches agree with the series 1/x − 1/2 + x/12 next to the switch.
        for x in [0.999_999e-8, 1.000_001e-8] {
            let n = mean_occupation(t(1.0 / x), 1.0).unwrap();
            let series = 1.0 / x - 0.5 + x / 12.0;
            assert!((n - series).abs() / series < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn temperature_validation() {
        assert!(Temperature::new(-1.0).is_err());
        assert!(Temperature::new(f64::NAN).is_err());
        assert!(Temperature::try_from(0.0).is_ok());
    }

    #[test]
    fn energy_of_simple_states() {
        let h = two_level_h();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_eq!(internal_energy(&mixed, &h).unwrap(), 0.0);
        let excited = DensityMatrix::pure(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        assert_eq!(internal_energy(&excited, &h).unwrap(), 0.5);
        assert!(internal_energy(&excited, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn entropy_of_pure_and_mixed_states() {
        let pure = DensityMatrix::pure(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        assert_eq!(von_neumann_entropy(&pure).unwrap(), 0.0);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((von_neumann_entropy(&mixed).unwrap() - 2f64.ln()).abs() < 1e-15);
        let d = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.44224, 0.55776])).unwrap();
        // −Σ p ln p evaluated directly.
        let expected = -(0.44224f64 * 0.44224f64.ln() + 0.55776f64 * 0.55776f64.ln());
        assert!((von_neumann_entropy(&d).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.686_460).abs() < 1e-6);
    }

    #[test]
    fn fidelity_examples() {
        let a = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.5])).unwrap();
        let b = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.9, 0.1])).unwrap();
        assert!((uhlmann_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-14);
        let expected = 0.45f64.sqrt() + 0.05f64.sqrt();
        assert!((uhlmann_fidelity(&a, &b).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.894_427).abs() < 1e-6);

        let up = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let down = DensityMatrix::pure(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        assert!(uhlmann_fidelity(&up, &down).unwrap().abs() < 1e-7);
        assert!(matches!(
            uhlmann_fidelity(&up, &DensityMatrix::maximally_mixed(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gibbs_limits() {
        let h = two_level_h();
        let g = gibbs_state(&h, t(1.0)).unwrap();
        let p0 = 1.0 / (1.0 + (-1.0f64).exp());
        assert!((g.matrix()[(0, 0)].re - p0).abs() < 1e-15);
        assert!((p0 - 0.731_059).abs() < 1e-6);

        let hot = gibbs_state(&h, t(1e12)).unwrap();
        assert!(hot.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-10);

        let cold = gibbs_state(&h, Temperature::ZERO).unwrap();
        assert_eq!(cold.populations(), vec![1.0, 0.0]);

        let degenerate = ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0]);
        let cold = gibbs_state(&degenerate, Temperature::ZERO).unwrap();
        assert_eq!(cold.populations(), vec![0.5, 0.5, 0.0]);
    }

    #[test]
    fn populations_of_gibbs_and_mixed_states() {
        let h = ComplexMatrix::from_real(2, 2, &[0.0, 0.3, 0.3, 1.0]).unwrap();
        let g = gibbs_state(&h, t(0.7)).unwrap();
        let pops = eigenbasis_populations(&g, &h).unwrap();
        let eig = hermitian_eigen(&h).unwrap();
        let z: f64 = eig.eigenvalues.iter().map(|e| (-e / 0.7).exp()).sum();
        for (p, e) in pops.iter().zip(&eig.eigenvalues) {
            assert!((p.population - (-e / 0.7).exp() / z).abs() < 1e-14);
            assert_eq!(p.energy, *e);
        }
        let mixed = eigenbasis_populations(&DensityMatrix::maximally_mixed(2), &h).unwrap();
        assert!(mixed.iter().all(|p| (p.population - 0.5).abs() < 1e-15));
        assert!(eigenbasis_populations(&g, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        let up = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let down = DensityMatrix::pure(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        assert!((trace_distance(&up, &down).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(trace_distance(&up, &up).unwrap(), 0.0);
    }
}
