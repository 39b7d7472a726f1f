//! Example systems coupled to two baths.
//!
//! Basis conventions:
//! - qubits: `|g⟩` is index 0, `|e⟩` is index 1, and `σ^z = |e⟩⟨e| − |g⟩⟨g|`;
//! - two qubits: qubit 1 is the major (first) tensor factor;
//! - oscillator: Fock states `|0⟩ … |N−1⟩`, with `a|n⟩ = √n |n−1⟩` and the
//!   truncated `a†` taken as the conjugate transpose of the truncated `a`.
//!
//! Rates follow the thermal prescriptions `γ n̄₁` (absorption),
//! `γ (n̄₁ + 1)` (emission) and `Γ (2 n̄₂ + 1)` for the second bath, with
//! `n̄_i` the Bose occupation at the relevant transition frequency.

use crate::error::{Error, Result};
use crate::liouville::{DensityMatrix, DissipationChannel, LindbladModel};
use crate::numkernel::{kron, ComplexMatrix};
use crate::thermo::{mean_occupation, ModelFamily, Temperature};

pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).expect("static operator")
}

pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).expect("static operator")
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("static operator")
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[-1.0, 1.0])
}

/// `|e⟩⟨e|`.
pub fn excited_projector() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[0.0, 1.0])
}

/// Truncated annihilation operator on `cutoff` Fock states.
pub fn annihilation(cutoff: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(cutoff, cutoff, |i, j| {
        if j == i + 1 {
            (j as f64).sqrt().into()
        } else {
            0.0.into()
        }
    })
}

pub fn creation(cutoff: usize) -> ComplexMatrix {
    annihilation(cutoff).adjoint()
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive, got {x}")))
    }
}

fn check_rate(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be finite and >= 0, got {x}")))
    }
}

/// Two-level system `H = (Ω/2) σ^z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelParams {
    pub omega: f64,
    pub gamma: f64,
    pub big_gamma: f64,
    pub t1: Temperature,
    pub t2: Temperature,
}

impl TwoLevelParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("omega", self.omega)?;
        check_rate("gamma", self.gamma)?;
        check_rate("big_gamma", self.big_gamma)
    }

    /// `(γ n̄₁, γ (n̄₁ + 1), Γ (2 n̄₂ + 1))`.
    pub fn rates(&self) -> Result<(f64, f64, f64)> {
        self.validate()?;
        let n1 = mean_occupation(self.t1, self.omega)?;
        let n2 = mean_occupation(self.t2, self.omega)?;
        Ok((self.gamma * n1, self.gamma * (n1 + 1.0), self.big_gamma * (2.0 * n2 + 1.0)))
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        sigma_z().scale_real(0.5 * self.omega)
    }
}

/// Channels `(γn̄₁, σ⁺)`, `(γ(n̄₁+1), σ⁻)`, `(Γ(2n̄₂+1), σ^x)`.
pub fn make_two_level(p: &TwoLevelParams) -> Result<LindbladModel> {
    let (up, down, second) = p.rates()?;
    LindbladModel::new(
        p.hamiltonian(),
        vec![
            DissipationChannel::new(up, sigma_plus())?,
            DissipationChannel::new(down, sigma_minus())?,
            DissipationChannel::new(second, sigma_x())?,
        ],
    )
}

/// Closed-form two-level steady state: diagonal, with
/// `ρ_ee / ρ_gg = (γ₁ + Γ₁)/(γ₂ + Γ₁)`.
pub fn two_level_closed_form(p: &TwoLevelParams) -> Result<DensityMatrix> {
    let (up, down, second) = p.rates()?;
    let total = up + down + 2.0 * second;
    if total == 0.0 {
        return Err(Error::AllRatesZero);
    }
    let excited = (up + second) / total;
    DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.0 - excited, excited]))
}

/// Two coupled qubits,
/// `H = Ω₁|e⟩₁⟨e| + Ω₂|e⟩₂⟨e| + J σ₁^x σ₂^x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledQubitsParams {
    pub omega1: f64,
    pub omega2: f64,
    pub j: f64,
    pub gamma: f64,
    pub big_gamma: f64,
    pub t1: Temperature,
    pub t2: Temperature,
}

impl CoupledQubitsParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("omega1", self.omega1)?;
        check_positive("omega2", self.omega2)?;
        if !self.j.is_finite() {
            return Err(Error::InvalidParams(format!("j must be finite, got {}", self.j)));
        }
        check_rate("gamma", self.gamma)?;
        check_rate("big_gamma", self.big_gamma)
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2);
        let e = excited_projector();
        let h1 = kron(&e, &id).scale_real(self.omega1);
        let h2 = kron(&id, &e).scale_real(self.omega2);
        let coupling = kron(&sigma_x(), &sigma_x()).scale_real(self.j);
        &(&h1 + &h2) + &coupling
    }
}

/// Channels `(γ(n̄₁+1), σ₁⁻)`, `(γn̄₁, σ₁⁺)`, `(Γ(2n̄₂+1), σ₂^x)`; `n̄₁` is
/// taken at Ω₁ and `n̄₂` at Ω₂.
pub fn make_coupled_qubits(p: &CoupledQubitsParams) -> Result<LindbladModel> {
    p.validate()?;
    let n1 = mean_occupation(p.t1, p.omega1)?;
    let n2 = mean_occupation(p.t2, p.omega2)?;
    let id = ComplexMatrix::identity(2);
    LindbladModel::new(
        p.hamiltonian(),
        vec![
            DissipationChannel::new(p.gamma * (n1 + 1.0), kron(&sigma_minus(), &id))?,
            DissipationChannel::new(p.gamma * n1, kron(&sigma_plus(), &id))?,
            DissipationChannel::new(p.big_gamma * (2.0 * n2 + 1.0), kron(&id, &sigma_x()))?,
        ],
    )
}

/// Damped oscillator `H = ω a†a` on a truncated Fock space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub omega: f64,
    pub gamma: f64,
    pub big_gamma: f64,
    pub t1: Temperature,
    pub t2: Temperature,
    pub cutoff: usize,
}

impl OscillatorParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("omega", self.omega)?;
        check_rate("gamma", self.gamma)?;
        check_rate("big_gamma", self.big_gamma)?;
        if self.cutoff < 2 {
            return Err(Error::InvalidParams(format!("cutoff must be >= 2, got {}", self.cutoff)));
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        let diag: Vec<f64> = (0..self.cutoff).map(|n| self.omega * n as f64).collect();
        ComplexMatrix::from_real_diagonal(&diag)
    }
}

/// Channels `(γn̄₁, a†)`, `(γ(n̄₁+1), a)`, `(Γ(2n̄₂+1), a + a†)`.
pub fn make_damped_oscillator(p: &OscillatorParams) -> Result<LindbladModel> {
    p.validate()?;
    let n1 = mean_occupation(p.t1, p.omega)?;
    let n2 = mean_occupation(p.t2, p.omega)?;
    let a = annihilation(p.cutoff);
    let a_dag = a.adjoint();
    let x = &a + &a_dag;
    LindbladModel::new(
        p.hamiltonian(),
        vec![
            DissipationChannel::new(p.gamma * n1, a_dag)?,
            DissipationChannel::new(p.gamma * (n1 + 1.0), a)?,
            DissipationChannel::new(p.big_gamma * (2.0 * n2 + 1.0), x)?,
        ],
    )
}

/// Any of the example systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    TwoLevel(TwoLevelParams),
    CoupledQubits(CoupledQubitsParams),
    Oscillator(OscillatorParams),
}

impl ModelParams {
    /// Short name used in CSV and JSON output.
    pub fn name(&self) -> &'static str {
        match self {
            ModelParams::TwoLevel(_) => "two-level",
            ModelParams::CoupledQubits(_) => "coupled-qubits",
            ModelParams::Oscillator(_) => "oscillator",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ModelParams::TwoLevel(_) => 2,
            ModelParams::CoupledQubits(_) => 4,
            ModelParams::Oscillator(p) => p.cutoff,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::TwoLevel(p) => p.validate(),
            ModelParams::CoupledQubits(p) => p.validate(),
            ModelParams::Oscillator(p) => p.validate(),
        }
    }

    pub fn build(&self) -> Result<LindbladModel> {
        match self {
            ModelParams::TwoLevel(p) => make_two_level(p),
            ModelParams::CoupledQubits(p) => make_coupled_qubits(p),
            ModelParams::Oscillator(p) => make_damped_oscillator(p),
        }
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        match self {
            ModelParams::TwoLevel(p) => p.hamiltonian(),
            ModelParams::CoupledQubits(p) => p.hamiltonian(),
            ModelParams::Oscillator(p) => p.hamiltonian(),
        }
    }

    pub fn temperatures(&self) -> (Temperature, Temperature) {
        match self {
            ModelParams::TwoLevel(p) => (p.t1, p.t2),
            ModelParams::CoupledQubits(p) => (p.t1, p.t2),
            ModelParams::Oscillator(p) => (p.t1, p.t2),
        }
    }

    pub fn with_temperatures(mut self, t1: Temperature, t2: Temperature) -> Self {
        match &mut self {
            ModelParams::TwoLevel(p) => (p.t1, p.t2) = (t1, t2),
            ModelParams::CoupledQubits(p) => (p.t1, p.t2) = (t1, t2),
            ModelParams::Oscillator(p) => (p.t1, p.t2) = (t1, t2),
        }
        self
    }

    /// Qubit–qubit coupling; zero for models without one.
    pub fn coupling(&self) -> f64 {
        match self {
            ModelParams::CoupledQubits(p) => p.j,
            _ => 0.0,
        }
    }

    pub fn with_coupling(mut self, j: f64) -> Result<Self> {
        match &mut self {
            ModelParams::CoupledQubits(p) => p.j = j,
            other => {
                return Err(Error::InvalidParams(format!("model {} has no coupling J", other.name())))
            }
        }
        Ok(self)
    }

    /// Second-bath strength Γ.
    pub fn big_gamma(&self) -> f64 {
        match self {
            ModelParams::TwoLevel(p) => p.big_gamma,
            ModelParams::CoupledQubits(p) => p.big_gamma,
            ModelParams::Oscillator(p) => p.big_gamma,
        }
    }
}

impl ModelFamily for ModelParams {
    fn model_at(&self, t1: Temperature, t2: Temperature) -> Result<LindbladModel> {
        self.with_temperatures(t1, t2).build()
    }
}
