//! Gate-level circuits for the two-site lattice: ground-state preparation,
//! Cartan-decomposed Trotter steps, noiseless execution, moment scheduling,
//! connectivity checks and OpenQASM 2.0 exchange.

mod build;
mod ir;
mod qasm;
mod schedule;

pub use build::{
    build_evolution, build_ground_prep, build_trotter_step, build_trotter_steps, ground_prep_angle,
    hopping_block, N_QUBITS,
};
pub use ir::{run_marked, run_statevector, Circuit, CircuitMeta, Op};
pub use qasm::{export_qasm, parse_qasm};
pub use schedule::{
    moments, validate_layout, CouplingMap, LayoutReport, MomentSchedule, ScheduleMode,
};
