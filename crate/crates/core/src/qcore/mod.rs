//! Dense complex linear algebra for small qubit registers: states, gates,
//! Kraus channels and distance measures.
//!
//! Qubit `q0` is the leftmost label of a ket and the most significant bit
//! of the basis index, so `|q0 q1 q2 q3> = |1011>` is index 11.

mod channel;
mod gate;
pub(crate) mod kernel;
mod metrics;
mod pauli;
mod state;

pub use channel::{apply_channel, KrausChannel};
pub use gate::{Gate, GateKind};
pub use metrics::{fidelity, hermitian_eigen, trace_distance};
pub use pauli::{pauli_expectation, Pauli, PauliString};
pub use state::{DensityMatrix, QuantumState, StateVector};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Largest register handled by the dense backends.
pub const MAX_QUBITS: usize = 8;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn check_targets(n_qubits: usize, targets: &[usize], arity: usize) -> crate::Result<()> {
    use crate::Error;
    if targets.len() != arity {
        return Err(Error::InvalidTarget {
            targets: targets.to_vec(),
            reason: format!("expected {arity} targets"),
        });
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(Error::InvalidTarget {
                targets: targets.to_vec(),
                reason: format!("qubit {t} out of range for {n_qubits} qubits"),
            });
        }
        if targets[..i].contains(&t) {
            return Err(Error::InvalidTarget {
                targets: targets.to_vec(),
                reason: format!("qubit {t} repeated"),
            });
        }
    }
    Ok(())
}
