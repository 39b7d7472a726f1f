//! Steady states: the zero mode of the generator by a direct sparse solve,
//! plus a Runge–Kutta propagator used as an independent check.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::liouville::{
    build_superoperator, unvectorize, vec_index, DensityMatrix, LindbladModel, LindbladRhs,
};
use crate::numkernel::{sparse_solve, ComplexMatrix};

/// Accepted steady-state residual, relative to ‖𝓛‖∞.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Propagation stops once max|dρ/dt| falls below this.
pub const STATIONARY_DERIVATIVE: f64 = 1e-10;

/// Propagation that reaches `t_max` with max|dρ/dt| at or above this fails.
pub const CONVERGENCE_FAILURE: f64 = 1e-8;

/// A solved steady state with its quality measures.
#[derive(Debug, Clone)]
pub struct SteadySolution {
    pub state: DensityMatrix,
    /// max |(𝓛 vec ρ)_i| for the returned state.
    pub residual: f64,
    /// ‖𝓛‖∞.
    pub generator_norm: f64,
}

/// Steady state of `model`, from `𝓛 vec(ρ) = 0` with the trace condition.
pub fn solve_steady_state(model: &LindbladModel) -> Result<DensityMatrix> {
    Ok(solve_steady_state_detailed(model)?.state)
}

/// Same as [`solve_steady_state`], also reporting the residual.
///
/// The row of 𝓛 belonging to ρ[0, 0] is redundant (the diagonal rows sum to
/// zero), so it is replaced by the trace functional and the square system is
/// solved against e₀. The residual is then measured against the unmodified
/// 𝓛: if the replaced row was not actually redundant the zero mode is
/// degenerate and the result is rejected.
pub fn solve_steady_state_detailed(model: &LindbladModel) -> Result<SteadySolution> {
    let n = model.dim();
    let lv = build_superoperator(model);
    let trace_row: Vec<(usize, C64)> =
        (0..n).map(|m| (vec_index(n, m, m), C64::new(1.0, 0.0))).collect();
    let system = lv.matrix().with_row_replaced(0, &trace_row);
    let mut rhs = vec![C64::new(0.0, 0.0); n * n];
    rhs[0] = C64::new(1.0, 0.0);

    let x = sparse_solve(&system, &rhs).map_err(|e| match e {
        Error::SingularMatrix { step, pivot } => Error::NonUniqueSteadyState(format!(
            "generator has a degenerate zero mode (pivot {pivot:.3e} at step {step})"
        )),
        other => other,
    })?;
    let raw = unvectorize(n, &x)
        .map_err(|_| Error::NonUniqueSteadyState("solution is not finite".into()))?
        .hermitian_part();

    let norm = lv.matrix().norm_inf();
    let tolerance = RESIDUAL_TOLERANCE * norm;
    let raw_residual = max_abs(&lv.apply(raw.as_slice()));
    if !(raw_residual <= tolerance) {
        return Err(Error::NonUniqueSteadyState(format!(
            "residual {raw_residual:.3e} exceeds {tolerance:.3e}"
        )));
    }

    let state = DensityMatrix::from_approximate(&raw)?;
    let residual = max_abs(&lv.apply(state.matrix().as_slice()));
    Ok(SteadySolution { state, residual, generator_norm: norm })
}

fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Step size and horizon for [`propagate_to_steady`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationOptions {
    pub dt: f64,
    pub t_max: f64,
}

impl PropagationOptions {
    /// `dt = 0.01 / max(‖H‖∞, Σ r_k ‖L_k†L_k‖∞)` and `t_max = 50 / r_min`,
    /// where `r_min` is the smallest nonzero channel rate.
    pub fn for_model(model: &LindbladModel) -> Self {
        let dissipative: f64 = model
            .channels()
            .iter()
            .map(|c| c.rate() * c.jump_operator().adjoint().matmul(c.jump_operator()).norm_inf())
            .sum();
        let scale = model.hamiltonian().norm_inf().max(dissipative);
        let dt = if scale > 0.0 { 0.01 / scale } else { 0.01 };
        let r_min = model
            .channels()
            .iter()
            .map(|c| c.rate())
            .filter(|&r| r > 0.0)
            .fold(f64::INFINITY, f64::min);
        let t_max = if r_min.is_finite() { 50.0 / r_min } else { 1e3 };
        Self { dt, t_max }
    }
}

fn rk4_step(rhs: &LindbladRhs, rho: &ComplexMatrix, k1: &ComplexMatrix, h: f64) -> ComplexMatrix {
    let axpy = |a: &ComplexMatrix, s: f64, b: &ComplexMatrix| {
        let mut out = a.clone();
        for (o, x) in out.as_mut_slice().iter_mut().zip(b.as_slice()) {
            *o += x * s;
        }
        out
    };
    let k2 = rhs.apply(&axpy(rho, 0.5 * h, k1));
    let k3 = rhs.apply(&axpy(rho, 0.5 * h, &k2));
    let k4 = rhs.apply(&axpy(rho, h, &k3));
    let mut out = rho.clone();
    let w = h / 6.0;
    for (i, o) in out.as_mut_slice().iter_mut().enumerate() {
        *o += (k1.as_slice()[i] + 2.0 * k2.as_slice()[i] + 2.0 * k3.as_slice()[i] + k4.as_slice()[i]) * w;
    }
    out
}

fn check_step(dt: f64, horizon: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParams(format!("time step must be positive, got {dt}")));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParams(format!("time horizon must be finite and >= 0, got {horizon}")));
    }
    Ok(())
}

/// Integrates the master equation from `rho0` for time `t` with classic
/// fourth-order Runge–Kutta steps of size `dt` (the last step is shortened
/// to land on `t`). The result is returned as-is, without re-normalization.
pub fn evolve(model: &LindbladModel, rho0: &DensityMatrix, t: f64, dt: f64) -> Result<ComplexMatrix> {
    check_step(dt, t)?;
    if rho0.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: rho0.dim() });
    }
    let rhs = LindbladRhs::new(model);
    let mut rho = rho0.matrix().clone();
    let mut now = 0.0;
    while now < t {
        let h = dt.min(t - now);
        let k1 = rhs.apply(&rho);
        rho = rk4_step(&rhs, &rho, &k1, h);
        now += h;
    }
    Ok(rho)
}

/// Runs Runge–Kutta steps until max|dρ/dt| < 1e-10 or `t_max` is reached.
///
/// Reaching `t_max` with max|dρ/dt| ≥ 1e-8 is reported as
/// [`Error::NotConverged`]. The final state is Hermitized and renormalized.
pub fn propagate_to_steady(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t_max: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    check_step(dt, t_max)?;
    if rho0.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: rho0.dim() });
    }
    let rhs = LindbladRhs::new(model);
    let mut rho = rho0.matrix().clone();
    let mut now = 0.0;
    loop {
        let k1 = rhs.apply(&rho);
        let derivative = k1.max_abs();
        if derivative < STATIONARY_DERIVATIVE {
            break;
        }
        if now >= t_max {
            if derivative >= CONVERGENCE_FAILURE {
                return Err(Error::NotConverged { t: now, derivative });
            }
            break;
        }
        let h = dt.min(t_max - now);
        rho = rk4_step(&rhs, &rho, &k1, h);
        now += h;
    }
    DensityMatrix::from_approximate(&rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::DissipationChannel;

    fn decay_model(gamma: f64) -> LindbladModel {
        let h = ComplexMatrix::from_real_diagonal(&[-0.5, 0.5]);
        let lower = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        LindbladModel::new(h, vec![DissipationChannel::new(gamma, lower).unwrap()]).unwrap()
    }

    #[test]
    fn pure_decay_relaxes_to_ground_state() {
        let rho = solve_steady_state(&decay_model(0.3)).unwrap();
        assert!((rho.populations()[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn excited_population_decays_exponentially() {
        let gamma = 0.2;
        let model = decay_model(gamma);
        let excited = DensityMatrix::pure(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let rho = evolve(&model, &excited, 1.0 / gamma, 1e-3).unwrap();
        assert!((rho[(1, 1)].re - (-1.0f64).exp()).abs() < 1e-10);
        assert!((rho[(1, 1)].re - 0.367_879).abs() < 1e-6);
    }

    #[test]
    fn fixed_point_is_returned_unchanged() {
        let model = decay_model(0.5);
        let ground = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let out = propagate_to_steady(&model, &ground, 10.0, 0.01).unwrap();
        assert!(out.matrix().max_abs_diff(ground.matrix()) < 1e-10);
    }

    #[test]
    fn closed_system_has_no_unique_steady_state() {
        let h = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let model = LindbladModel::new(h, vec![]).unwrap();
        assert!(matches!(solve_steady_state(&model), Err(Error::NonUniqueSteadyState(_))));
    }

    #[test]
    fn short_horizon_reports_non_convergence() {
        let model = decay_model(0.1);
        let excited = DensityMatrix::pure(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        assert!(matches!(
            propagate_to_steady(&model, &excited, 1.0, 0.01),
            Err(Error::NotConverged { .. })
        ));
        assert!(propagate_to_steady(&model, &excited, 1.0, 0.0).is_err());
    }

    #[test]
    fn default_options_follow_the_rates() {
        let opts = PropagationOptions::for_model(&decay_model(0.25));
        // ‖H‖∞ = 0.5, r‖L†L‖∞ = 0.25.
        assert!((opts.dt - 0.02).abs() < 1e-15);
        assert!((opts.t_max - 200.0).abs() < 1e-12);
    }
}
