use std::collections::BTreeMap;

use crate::qcore::{check_targets, CMatrix, Gate, QuantumState, StateVector};
use crate::{Error, Result};

/// A gate applied to specific qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    pub gate: Gate,
    pub targets: Vec<usize>,
}

/// Descriptive metadata carried with a circuit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CircuitMeta {
    pub name: String,
    pub m: Option<f64>,
    pub j: Option<f64>,
    pub dt: Option<f64>,
}

/// Ordered gate list with optional scheduling barriers and step marks.
///
/// A barrier at position `i` separates `ops[..i]` from `ops[i..]`; a step
/// mark at `i` records that the state after `ops[..i]` is a sample point of
/// the evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Op>,
    barriers: Vec<usize>,
    step_marks: Vec<usize>,
    pub meta: CircuitMeta,
}

impl Circuit {
    pub fn new(n_qubits: usize, name: impl Into<String>) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
            barriers: Vec::new(),
            step_marks: Vec::new(),
            meta: CircuitMeta {
                name: name.into(),
                ..CircuitMeta::default()
            },
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn barriers(&self) -> &[usize] {
        &self.barriers
    }

    pub fn step_marks(&self) -> &[usize] {
        &self.step_marks
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, gate: Gate, targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets, gate.arity())?;
        self.ops.push(Op {
            gate,
            targets: targets.to_vec(),
        });
        Ok(())
    }

    /// Builder form of [`Circuit::push`] for targets known to be valid.
    pub(crate) fn with(&mut self, gate: Gate, targets: &[usize]) -> &mut Self {
        self.push(gate, targets)
            .expect("builder targets are in range");
        self
    }

    pub fn barrier(&mut self) {
        let at = self.ops.len();
        if self.barriers.last() != Some(&at) {
            self.barriers.push(at);
        }
    }

    pub fn mark_step(&mut self) {
        let at = self.ops.len();
        if self.step_marks.last() != Some(&at) {
            self.step_marks.push(at);
        }
    }

    /// Appends `other`, shifting its barriers and marks.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        let offset = self.ops.len();
        for &b in &other.barriers {
            if self.barriers.last() != Some(&(b + offset)) {
                self.barriers.push(b + offset);
            }
        }
        for &s in &other.step_marks {
            if self.step_marks.last() != Some(&(s + offset)) {
                self.step_marks.push(s + offset);
            }
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(())
    }

    /// The adjoint circuit (reversed order, inverted gates). Step marks are
    /// dropped; barriers are mirrored.
    pub fn inverse(&self) -> Circuit {
        let n = self.ops.len();
        Circuit {
            n_qubits: self.n_qubits,
            ops: self
                .ops
                .iter()
                .rev()
                .map(|op| Op {
                    gate: op.gate.inverse(),
                    targets: op.targets.clone(),
                })
                .collect(),
            barriers: self.barriers.iter().rev().map(|b| n - b).collect(),
            step_marks: Vec::new(),
            meta: CircuitMeta {
                name: format!("{}_dg", self.meta.name),
                ..self.meta.clone()
            },
        }
    }

    /// Number of gates by name.
    pub fn gate_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for op in &self.ops {
            *counts.entry(op.gate.name().to_string()).or_insert(0) += 1;
        }
        counts
    }

    /// Applies every op in order.
    pub fn apply<S: QuantumState>(&self, state: &mut S) -> Result<()> {
        self.apply_range(state, 0, self.ops.len())
    }

    pub(crate) fn apply_range<S: QuantumState>(
        &self,
        state: &mut S,
        from: usize,
        to: usize,
    ) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: state.n_qubits(),
            });
        }
        for op in &self.ops[from..to] {
            state.apply_gate_mut(&op.gate, &op.targets)?;
        }
        Ok(())
    }

    /// Dense unitary, column `k` being the image of basis state `k`.
    pub fn unitary(&self) -> CMatrix {
        let d = 1usize << self.n_qubits;
        let mut u = CMatrix::zeros(d, d);
        for k in 0..d {
            let mut psi = StateVector::basis(self.n_qubits, k);
            self.apply(&mut psi).expect("ops validated on insertion");
            for (r, a) in psi.amplitudes().iter().enumerate() {
                u[(r, k)] = *a;
            }
        }
        u
    }
}

/// Noiseless execution.
pub fn run_statevector(c: &Circuit, input: &StateVector) -> Result<StateVector> {
    let mut psi = input.clone();
    c.apply(&mut psi)?;
    Ok(psi)
}

/// States at every step mark, in order.
pub fn run_marked<S: QuantumState>(c: &Circuit, input: &S) -> Result<Vec<S>> {
    let mut state = input.clone();
    let mut out = Vec::with_capacity(c.step_marks.len());
    let mut at = 0;
    for &mark in &c.step_marks {
        c.apply_range(&mut state, at, mark)?;
        at = mark;
        out.push(state.clone());
    }
    // also validates dimensions when there are no marks
    c.apply_range(&mut state, at, at)?;
    Ok(out)
}
