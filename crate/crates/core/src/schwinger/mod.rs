//! Two-site Z2 lattice Schwinger model: physical-subspace Hamiltonian,
//! parity-sector diagonalization, the mass quench `H(m,J) → H(−m,J)` and
//! the resulting Loschmidt amplitude, rate function and phase vortices.

mod basis;
mod loschmidt;
mod params;
mod spectrum;
mod winding;

pub use basis::{embed_physical, gauss_check, physical_population, BasisState, GaussCheck};
pub use loschmidt::{
    analytic_amplitude, analytic_loschmidt, analytic_loschmidt_with, dqpt_times,
    quenched_amplitudes, rate_function, wrap_phase, LoschmidtSeries, RateSeries, DEFAULT_N_DOF,
    ECHO_FLOOR,
};
pub use params::ModelParams;
pub use spectrum::{
    build_physical_hamiltonian, diagonalize, quenched_block_hamiltonian, EigenLabel, Eigenstate,
    Parity, QuenchBlocks, Spectrum,
};
pub use winding::{
    scan_plaquettes, winding_number, PhaseField, PlaquetteWinding, WindingLoop, PHASE_EPS,
};
