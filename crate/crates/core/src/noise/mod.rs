//! Pauli-flip noise: Kraus channels per gate class, exact density-matrix
//! and sampled-trajectory execution, noisy readout and Pauli-basis state
//! tomography.

mod exec;
mod model;
mod tomo;

pub use exec::{apply_readout_flips, run_density_matrix, sample_trajectories, Trajectory};
pub use model::{make_flip_channel, make_two_qubit_channel, FlipProbs, NoiseModelSpec, Preset};
pub use tomo::{
    linear_inversion, linear_inversion_from_probabilities, outcome_probabilities, project_psd,
    reconstruct_exact, reconstruct_state, simulate_readout, simulate_tomography,
    tomography_settings, CountsTable, TomographySetting,
};
