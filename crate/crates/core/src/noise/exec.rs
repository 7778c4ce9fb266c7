use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::model::{FlipProbs, NoiseModelSpec};
use crate::circuits::Circuit;
use crate::qcore::{CMatrix, DensityMatrix, Gate, GateKind, QuantumState, StateVector, C64};
use crate::{Error, Result};

/// Density matrices sampled along an evolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<DensityMatrix>,
    pub dt: f64,
    pub label: String,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<DensityMatrix>, dt: f64) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                actual: states.len(),
            });
        }
        if times
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::TimeGridMismatch(
                "times must be strictly increasing".into(),
            ));
        }
        if let Some(first) = states.first() {
            if let Some(bad) = states.iter().find(|s| s.dim() != first.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    actual: bad.dim(),
                });
            }
        }
        Ok(Self {
            times,
            states,
            dt,
            label: String::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// First `k` samples.
    pub fn truncated(&self, k: usize) -> Trajectory {
        let k = k.min(self.len());
        Trajectory {
            times: self.times[..k].to_vec(),
            states: self.states[..k].to_vec(),
            dt: self.dt,
            label: self.label.clone(),
        }
    }
}

/// `ρ ↦ p_I ρ + p_X XρX + p_Y YρY + p_Z ZρZ` on qubit `q`, in one pass:
/// an entry pairs only with its partner having bit `q` flipped in both
/// indices, with weights depending on whether the two bits agree.
fn flip_channel_mut(rho: &mut DensityMatrix, p: &FlipProbs, q: usize) {
    if p.is_zero() {
        return;
    }
    let [w0, wx, wy, wz] = p.weights();
    let (same_keep, same_swap) = (w0 + wz, wx + wy);
    let (diff_keep, diff_swap) = (w0 - wz, wx - wy);
    let mask = 1usize << (rho.n_qubits() - 1 - q);
    let d = rho.dim();
    let m = rho.entries_mut();
    for c in 0..d {
        for r in 0..d {
            if r & mask != 0 {
                continue;
            }
            let (r2, c2) = (r | mask, c ^ mask);
            let (keep, swap) = if c & mask == 0 {
                (same_keep, same_swap)
            } else {
                (diff_keep, diff_swap)
            };
            let (a, b) = (m[(r, c)], m[(r2, c2)]);
            m[(r, c)] = a * keep + b * swap;
            m[(r2, c2)] = b * keep + a * swap;
        }
    }
}

/// Classical bit flip with probability `p` on every qubit, the only error
/// at reset and readout.
pub fn apply_readout_flips(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    let probs = FlipProbs::new(p, 0.0, 0.0)?;
    let mut out = rho.clone();
    for q in 0..rho.n_qubits() {
        flip_channel_mut(&mut out, &probs, q);
    }
    Ok(out)
}

/// Sample times and their spacing; circuits without a time step count steps.
fn sample_times(c: &Circuit, n: usize, record_every: usize) -> (Vec<f64>, f64) {
    let dt = c.meta.dt.unwrap_or(1.0) * record_every.max(1) as f64;
    ((0..n).map(|i| i as f64 * dt).collect(), dt)
}

fn record_points(c: &Circuit, record_every: usize) -> Vec<usize> {
    let every = record_every.max(1);
    if c.step_marks().is_empty() {
        return vec![c.len()];
    }
    c.step_marks().iter().copied().step_by(every).collect()
}

/// Exact channel evolution: reset flips on the input, then each gate
/// followed by the flip channel of its class on each of its qubits (the
/// two-qubit channel `Σ (K_i⊗K_j) ρ (K_i⊗K_j)†` factorizes into one flip
/// channel per qubit). Records `ρ` at every `record_every`-th step mark,
/// or only at the end when the circuit has no marks.
pub fn run_density_matrix(
    c: &Circuit,
    nm: &NoiseModelSpec,
    input: &DensityMatrix,
    record_every: usize,
) -> Result<Trajectory> {
    nm.validate()?;
    if input.n_qubits() != c.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: c.n_qubits(),
            actual: input.n_qubits(),
        });
    }
    let points = record_points(c, record_every);
    let mut rho = apply_readout_flips(input, nm.readout_flip)?;
    let mut states = Vec::with_capacity(points.len());
    let mut next = points.iter().peekable();
    for (i, op) in c.ops().iter().enumerate() {
        while next.next_if(|&&p| p == i).is_some() {
            states.push(rho.clone());
        }
        rho.apply_gate_mut(&op.gate, &op.targets)?;
        if op.gate.is_identity() {
            continue;
        }
        let p = nm.probs_for_arity(op.gate.arity());
        for &q in &op.targets {
            flip_channel_mut(&mut rho, &p, q);
        }
    }
    while next.next().is_some() {
        states.push(rho.clone());
    }
    let (times, dt) = sample_times(c, states.len(), record_every);
    let mut traj = Trajectory::new(times, states, dt)?;
    traj.label = c.meta.name.clone();
    Ok(traj)
}

fn sample_pauli(rng: &mut ChaCha8Rng, p: &FlipProbs) -> usize {
    if p.is_zero() {
        return 0;
    }
    let u: f64 = rng.random();
    let w = p.weights();
    let mut acc = 0.0;
    for (i, wi) in w.iter().enumerate().skip(1) {
        acc += wi;
        if u < acc {
            return i;
        }
    }
    0
}

const CHUNK: usize = 32;

/// Average of `realizations` pure-state trajectories, each drawing one
/// Pauli error per gate qubit with the model's probabilities. Realization
/// `r` uses the ChaCha stream `r` of `seed`; chunks are reduced in a fixed
/// order, so the result does not depend on the thread count.
pub fn sample_trajectories(
    c: &Circuit,
    nm: &NoiseModelSpec,
    input: &StateVector,
    realizations: usize,
    seed: u64,
    record_every: usize,
) -> Result<Trajectory> {
    nm.validate()?;
    if realizations == 0 {
        return Err(Error::InvalidParams("need at least one realization".into()));
    }
    if input.n_qubits() != c.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: c.n_qubits(),
            actual: input.n_qubits(),
        });
    }
    let points = record_points(c, record_every);
    let dim = input.dim();
    let paulis: [Gate; 3] = [GateKind::X, GateKind::Y, GateKind::Z].map(Gate::new);

    let run_one = |r: usize, acc: &mut [CMatrix]| -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let mut psi = input.clone();
        let reset = FlipProbs::new(nm.readout_flip, 0.0, 0.0)?;
        for q in 0..psi.n_qubits() {
            if sample_pauli(&mut rng, &reset) == 1 {
                psi.apply_gate_mut(&paulis[0], &[q])?;
            }
        }
        let mut next = points.iter().enumerate().peekable();
        let mut record = |psi: &StateVector, slot: usize| {
            let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
            acc[slot] += &v * v.adjoint();
        };
        for (i, op) in c.ops().iter().enumerate() {
            while let Some((slot, _)) = next.next_if(|(_, &p)| p == i) {
                record(&psi, slot);
            }
            psi.apply_gate_mut(&op.gate, &op.targets)?;
            if op.gate.is_identity() {
                continue;
            }
            let p = nm.probs_for_arity(op.gate.arity());
            for &q in &op.targets {
                let k = sample_pauli(&mut rng, &p);
                if k > 0 {
                    psi.apply_gate_mut(&paulis[k - 1], &[q])?;
                }
            }
        }
        for (slot, _) in next {
            record(&psi, slot);
        }
        Ok(())
    };

    let n_chunks = realizations.div_ceil(CHUNK);
    let partials = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = vec![CMatrix::zeros(dim, dim); points.len()];
            for r in chunk * CHUNK..((chunk + 1) * CHUNK).min(realizations) {
                run_one(r, &mut acc)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = vec![CMatrix::zeros(dim, dim); points.len()];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    let scale = C64::new(1.0 / realizations as f64, 0.0);
    let states = total
        .into_iter()
        .map(|m| DensityMatrix::from_matrix_unchecked(m * scale))
        .collect::<Result<Vec<_>>>()?;
    let (times, dt) = sample_times(c, states.len(), record_every);
    let mut traj = Trajectory::new(times, states, dt)?;
    traj.label = format!("{} (sampled x{realizations})", c.meta.name);
    Ok(traj)
}
