//! Non-equilibrium steady states of open quantum systems driven by two
//! thermal baths, with the thermodynamic quantities derived from them.
//!
//! Models are described by a Hamiltonian and a set of rated jump operators
//! ([`LindbladModel`]). The steady state is the normalized zero mode of the
//! Liouvillian and is found by a direct sparse solve. [`thermo`] turns steady
//! states into energies, entropies, fidelities and specific heats, and
//! [`sweep`] evaluates those over temperature and coupling grids.

// `!(x > 0.0)` is used deliberately so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod liouville;
pub mod models;
pub mod numkernel;
pub mod presets;
pub mod steady;
pub mod sweep;
pub mod thermo;

pub use error::{Error, Result};
pub use liouville::{
    apply_rhs, build_effective_hamiltonian, build_superoperator, DensityMatrix, DissipationChannel,
    LindbladModel, LindbladRhs, Superoperator,
};
pub use models::{
    make_coupled_qubits, make_damped_oscillator, make_two_level, two_level_closed_form,
    CoupledQubitsParams, ModelParams, OscillatorParams, TwoLevelParams,
};
pub use numkernel::{ComplexMatrix, SparseComplexMatrix};
pub use presets::{preset, Preset};
pub use steady::{propagate_to_steady, solve_steady_state, PropagationOptions};
pub use sweep::{run_sweep, write_csv, Axis, AxisName, Execution, OutputSet, SweepRecord, SweepSpec};
pub use thermo::{
    eigenbasis_populations, gibbs_state, internal_energy, mean_occupation, specific_heat,
    uhlmann_fidelity, von_neumann_entropy, Bath, ModelFamily, Temperature,
};
