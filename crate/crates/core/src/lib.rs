//! Noisy quantum-circuit simulation of a mass quench in the two-site
//! Z2 lattice Schwinger model.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`]: dense states, gates, Kraus channels and distance measures.
//! * [`schwinger`]: the physical-subspace Hamiltonian, its parity-sector
//!   diagonalization, the analytic Loschmidt amplitude, rate function and
//!   winding numbers.
//! * [`circuits`]: the ground-state preparation and Trotter-step circuits,
//!   moment scheduling, layout checks and OpenQASM 2.0 export/import.
//! * [`noise`]: bit/phase-flip noise models, exact channel and trajectory
//!   execution, readout sampling and Pauli-basis tomography.
//! * [`fit`]: trace-distance objective surfaces over noise-parameter grids.

pub mod circuits;
pub mod error;
pub mod fit;
pub mod noise;
pub mod qcore;
pub mod schwinger;

pub use error::{Error, Result};

pub use circuits::{
    build_evolution, build_ground_prep, build_trotter_step, export_qasm, moments, parse_qasm,
    run_statevector, validate_layout, Circuit, CouplingMap, LayoutReport, MomentSchedule, Op,
    ScheduleMode,
};
pub use fit::{
    averaged_trace_distance, grid_sweep, locate_minimum, DistanceSurface, FitResult, GridSpec,
    SweepConfig,
};
pub use noise::{
    make_flip_channel, make_two_qubit_channel, reconstruct_state, run_density_matrix,
    sample_trajectories, simulate_readout, tomography_settings, CountsTable, FlipProbs,
    NoiseModelSpec, Preset, TomographySetting, Trajectory,
};
pub use qcore::{
    apply_channel, fidelity, pauli_expectation, trace_distance, CMatrix, DensityMatrix, Gate,
    GateKind, KrausChannel, Pauli, PauliString, QuantumState, StateVector, C64,
};
pub use schwinger::{
    analytic_loschmidt, build_physical_hamiltonian, diagonalize, dqpt_times, gauss_check,
    quenched_block_hamiltonian, rate_function, winding_number, BasisState, LoschmidtSeries,
    ModelParams, PhaseField, Spectrum, WindingLoop,
};
