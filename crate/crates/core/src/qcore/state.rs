use serde::{Deserialize, Serialize};

use super::kernel::{apply_on_bits, conjugate_by, qubit_bits};
use super::{check_targets, hermitian_eigen, CMatrix, Gate, C64, MAX_QUBITS};
use crate::{Error, Result};

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidState(format!(
            "{n} qubits outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(n)
}

/// Common interface of pure and mixed register states.
pub trait QuantumState: Sized + Clone {
    fn n_qubits(&self) -> usize;

    /// Applies `gate` to `targets` in place.
    fn apply_gate_mut(&mut self, gate: &Gate, targets: &[usize]) -> Result<()>;

    /// Returns the state after `gate` acts on `targets`.
    fn apply_gate(&self, gate: &Gate, targets: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.apply_gate_mut(gate, targets)?;
        Ok(out)
    }
}

/// Pure state of `n` qubits as `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    n_qubits: usize,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state with the given index.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!(
            (1..=MAX_QUBITS).contains(&n_qubits),
            "unsupported register size"
        );
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self {
            amplitudes,
            n_qubits,
        }
    }

    /// Builds a state from amplitudes; the squared norm must be 1 within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_dim(amplitudes.len())?;
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("squared norm {norm2} != 1")));
        }
        Ok(Self {
            amplitudes,
            n_qubits,
        })
    }

    /// Builds a state from amplitudes after rescaling them to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::from_amplitudes(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies an arbitrary `2^k` matrix to `targets` without unitarity checks.
    pub(crate) fn apply_matrix_mut(&mut self, m: &CMatrix, targets: &[usize]) {
        let bits = qubit_bits(self.n_qubits, targets);
        apply_on_bits(&mut self.amplitudes, &bits, m);
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

impl QuantumState for StateVector {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_gate_mut(&mut self, gate: &Gate, targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets, gate.arity())?;
        if gate.is_identity() {
            return Ok(());
        }
        self.apply_matrix_mut(gate.matrix(), targets);
        Ok(())
    }
}

/// Mixed state of `n` qubits as a dense `2^n × 2^n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    n_qubits: usize,
}

impl DensityMatrix {
    /// Numerical slack accepted on negative eigenvalues.
    pub const PSD_SLACK: f64 = 1e-9;
    /// Tolerance on hermiticity and unit trace.
    pub const TOLERANCE: f64 = 1e-10;

    pub fn from_pure(psi: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Self {
            entries: &v * v.adjoint(),
            n_qubits: psi.n_qubits,
        }
    }

    /// `𝟙 / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        Self {
            entries: CMatrix::identity(d, d) / C64::new(d as f64, 0.0),
            n_qubits,
        }
    }

    pub fn zero_state(n_qubits: usize) -> Self {
        Self::from_pure(&StateVector::zero(n_qubits))
    }

    /// Validates hermiticity, unit trace and positivity.
    pub fn from_matrix(entries: CMatrix) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(entries)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Only checks the shape.
    pub fn from_matrix_unchecked(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidState("matrix is not square".into()));
        }
        let n_qubits = qubits_for_dim(entries.nrows())?;
        Ok(Self { entries, n_qubits })
    }

    pub fn validate(&self) -> Result<()> {
        let herm = super::max_abs_diff(&self.entries, &self.entries.adjoint());
        if herm > Self::TOLERANCE {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > Self::TOLERANCE || tr.im.abs() > Self::TOLERANCE {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -Self::PSD_SLACK {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.entries).0
    }

    /// Diagonal element `<i|ρ|i>`.
    pub fn population(&self, index: usize) -> f64 {
        self.entries[(index, index)].re
    }

    /// `<ψ|ρ|ψ>` as a real number.
    pub fn expectation_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: psi.dim(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Ok((v.adjoint() * &self.entries * &v)[(0, 0)].re)
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `K ρ K†` on `targets`, without any trace bookkeeping.
    pub(crate) fn conjugate_mut(&mut self, k: &CMatrix, targets: &[usize]) {
        conjugate_by(self.entries.as_mut_slice(), self.n_qubits, targets, k);
    }

    pub(crate) fn entries_mut(&mut self) -> &mut CMatrix {
        &mut self.entries
    }
}

impl QuantumState for DensityMatrix {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_gate_mut(&mut self, gate: &Gate, targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets, gate.arity())?;
        if gate.is_identity() {
            return Ok(());
        }
        self.conjugate_mut(gate.matrix(), targets);
        Ok(())
    }
}
