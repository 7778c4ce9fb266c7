//! Shared inputs for the benchmarks: the unit-coupling lattice, its
//! evolution circuits and a mid-evolution noisy state.

use dqpt_core::circuits::{build_evolution, Circuit};
use dqpt_core::noise::{run_density_matrix, NoiseModelSpec};
use dqpt_core::qcore::DensityMatrix;
use dqpt_core::schwinger::ModelParams;

pub const DT: f64 = 0.1;

pub fn unit_params() -> ModelParams {
    ModelParams::new(1.0, 1.0).expect("valid parameters")
}

/// The default noise model of the command-line tool.
pub fn default_noise() -> NoiseModelSpec {
    NoiseModelSpec::split_xz(0.01, 0.016).expect("valid probabilities")
}

/// Ground-state preparation followed by `steps` quenched Trotter steps.
pub fn evolution(steps: usize) -> Circuit {
    build_evolution(&unit_params(), DT, steps).expect("valid circuit")
}

/// Noisy state after `steps` steps, a generic full-rank input.
pub fn noisy_state(steps: usize) -> DensityMatrix {
    run_density_matrix(
        &evolution(steps),
        &default_noise(),
        &DensityMatrix::zero_state(4),
        steps.max(1),
    )
    .expect("noisy run")
    .states
    .pop()
    .expect("at least one sample")
}
