//! Named parameter sets with their default sweep grids.
//!
//! Energies are in units of the reference frequency (Ω, Ω₁ or ω) and
//! temperatures in the same units over k_B.

use crate::error::{Error, Result};
use crate::models::{CoupledQubitsParams, ModelParams, OscillatorParams, TwoLevelParams};
use crate::sweep::{Axis, AxisName, OutputSet, SweepSpec};
use crate::thermo::Temperature;

/// A named model plus the grid it is usually swept over.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub params: ModelParams,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub outputs: OutputSet,
}

impl Preset {
    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        SweepSpec::new(self.params, self.axis1, self.axis2, self.outputs)
    }
}

pub const PRESET_NAMES: [&str; 10] =
    ["fig2", "fig3", "fig4a", "fig4b", "fig5", "fig6a", "fig6b", "fig6c", "fig6d", "fig7"];

fn temp(x: f64) -> Temperature {
    Temperature::new(x).expect("preset temperature")
}

fn axis(name: AxisName, start: f64, stop: f64, points: usize) -> Axis {
    Axis::new(name, start, stop, points).expect("preset axis")
}

fn outputs(list: &str) -> OutputSet {
    list.parse().expect("preset outputs")
}

/// Ω = 1, γ = 0.2, Γ = 0.3.
pub fn two_level_params() -> TwoLevelParams {
    TwoLevelParams { omega: 1.0, gamma: 0.2, big_gamma: 0.3, t1: temp(1.0), t2: temp(1.0) }
}

/// Ω₁ = Ω₂ = 1, γ = 0.2, J = 0.2, Γ = 0.3.
pub fn coupled_qubits_params() -> CoupledQubitsParams {
    CoupledQubitsParams {
        omega1: 1.0,
        omega2: 1.0,
        j: 0.2,
        gamma: 0.2,
        big_gamma: 0.3,
        t1: temp(1.0),
        t2: temp(1.0),
    }
}

/// ω = 1, γ = 0.3, Γ = 0.2, 100 Fock levels.
pub fn oscillator_params() -> OscillatorParams {
    OscillatorParams { omega: 1.0, gamma: 0.3, big_gamma: 0.2, t1: temp(1.0), t2: temp(1.0), cutoff: 100 }
}

pub fn preset(name: &str) -> Result<Preset> {
    use AxisName::{T1, T2, J};
    let qubits = coupled_qubits_params();
    let osc = oscillator_params();
    let (name, description, params, axis1, axis2, outs) = match name {
        "fig2" => (
            "fig2",
            "two-level system: U, S and both specific heats over (T1, T2)",
            ModelParams::TwoLevel(two_level_params()),
            axis(T1, 0.05, 10.0, 50),
            Some(axis(T2, 0.05, 10.0, 50)),
            "U,S,C_T1,C_T2",
        ),
        "fig3" => (
            "fig3",
            "coupled qubits: both specific heats over (T1, T2)",
            ModelParams::CoupledQubits(qubits),
            axis(T1, 0.05, 5.0, 30),
            Some(axis(T2, 0.05, 5.0, 30)),
            "C_T1,C_T2",
        ),
        "fig4a" => (
            "fig4a",
            "coupled qubits at T2 = 1.5: specific heats over (T1, J)",
            ModelParams::CoupledQubits(CoupledQubitsParams { t2: temp(1.5), ..qubits }),
            axis(T1, 0.05, 5.0, 30),
            Some(axis(J, 0.0, 2.0, 30)),
            "C_T1,C_T2",
        ),
        "fig4b" => (
            "fig4b",
            "coupled qubits at T1 = 1.5: specific heats over (T2, J)",
            ModelParams::CoupledQubits(CoupledQubitsParams { t1: temp(1.5), ..qubits }),
            axis(T2, 0.05, 5.0, 30),
            Some(axis(J, 0.0, 2.0, 30)),
            "C_T1,C_T2",
        ),
        "fig5" => (
            "fig5",
            "damped oscillator, 100 levels: U and S over (T1, T2)",
            ModelParams::Oscillator(osc),
            axis(T1, 0.05, 2.5, 30),
            Some(axis(T2, 0.05, 2.5, 30)),
            "U,S",
        ),
        "fig6a" => (
            "fig6a",
            "damped oscillator: fidelity with both Gibbs states over (T1, T2)",
            ModelParams::Oscillator(osc),
            axis(T1, 0.05, 2.5, 20),
            Some(axis(T2, 0.05, 2.5, 20)),
            "F_T1,F_T2",
        ),
        "fig6b" => (
            "fig6b",
            "coupled qubits: fidelity with both Gibbs states over (T1, T2)",
            ModelParams::CoupledQubits(qubits),
            axis(T1, 0.05, 10.0, 30),
            Some(axis(T2, 0.05, 10.0, 30)),
            "F_T1,F_T2",
        ),
        "fig6c" => (
            "fig6c",
            "damped oscillator without the second bath: fidelity with the Gibbs state",
            ModelParams::Oscillator(OscillatorParams { big_gamma: 0.0, cutoff: 60, ..osc }),
            axis(T1, 0.05, 2.0, 40),
            None,
            "F_T1,F_T2",
        ),
        "fig6d" => (
            "fig6d",
            "coupled qubits without the second bath: fidelity with the Gibbs state",
            ModelParams::CoupledQubits(CoupledQubitsParams { big_gamma: 0.0, ..qubits }),
            axis(T1, 0.05, 10.0, 40),
            None,
            "F_T1,F_T2",
        ),
        "fig7" => (
            "fig7",
            "coupled qubits: eigenstate populations over (T1, T2)",
            ModelParams::CoupledQubits(qubits),
            axis(T1, 0.05, 5.0, 30),
            Some(axis(T2, 0.05, 5.0, 30)),
            "populations",
        ),
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown preset {other:?}; known presets: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(Preset { name, description, params, axis1, axis2, outputs: outputs(outs) })
}

pub fn all_presets() -> Vec<Preset> {
    PRESET_NAMES.iter().map(|n| preset(n).expect("known preset")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_builds_a_valid_spec() {
        for p in all_presets() {
            let spec = p.sweep_spec().unwrap();
            assert!(spec.len() >= 2, "{}", p.name);
            p.params.build().unwrap();
        }
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(preset("fig2").unwrap().sweep_spec().unwrap().len(), 2500);
        assert_eq!(preset("fig5").unwrap().sweep_spec().unwrap().len(), 900);
        assert!(preset("fig9").is_err());
    }

    #[test]
    fn second_bath_is_off_where_expected() {
        for name in ["fig6c", "fig6d"] {
            assert_eq!(preset(name).unwrap().params.big_gamma(), 0.0);
        }
        assert_eq!(preset("fig6a").unwrap().params.big_gamma(), 0.2);
    }
}
