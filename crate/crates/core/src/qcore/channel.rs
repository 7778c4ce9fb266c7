use super::{check_targets, max_abs_diff, CMatrix, DensityMatrix, QuantumState, C64};
use crate::{Error, Result};

/// Completely positive trace-preserving map `ρ ↦ Σ K ρ K†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<CMatrix>,
}

impl KrausChannel {
    /// Tolerance on `Σ K†K = 𝟙`.
    pub const TRACE_TOL: f64 = 1e-12;

    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let d = first.nrows();
        if !matches!(d, 2 | 4) {
            return Err(Error::InvalidChannel(format!(
                "operator dimension {d} unsupported"
            )));
        }
        if operators.iter().any(|k| k.shape() != (d, d)) {
            return Err(Error::InvalidChannel("operators differ in shape".into()));
        }
        let sum = operators
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        let dev = max_abs_diff(&sum, &CMatrix::identity(d, d));
        if dev > Self::TRACE_TOL {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving (deviation {dev:e})"
            )));
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// Number of qubits the channel acts on.
    pub fn arity(&self) -> usize {
        if self.operators[0].nrows() == 4 {
            2
        } else {
            1
        }
    }

    /// Operators with a nonzero entry.
    pub fn nonzero_operators(&self) -> impl Iterator<Item = &CMatrix> {
        self.operators
            .iter()
            .filter(|k| k.iter().any(|z| *z != C64::new(0.0, 0.0)))
    }

    pub(crate) fn apply_mut(&self, rho: &mut DensityMatrix, targets: &[usize]) -> Result<()> {
        check_targets(rho.n_qubits(), targets, self.arity())?;
        let mut nonzero = self.nonzero_operators();
        let first = match nonzero.next() {
            Some(k) => k,
            None => return Ok(()),
        };
        let original = rho.clone();
        rho.conjugate_mut(first, targets);
        for k in nonzero {
            let mut term = original.clone();
            term.conjugate_mut(k, targets);
            *rho.entries_mut() += term.entries();
        }
        Ok(())
    }
}

/// Applies `ch` to the qubits `targets` of `rho`.
pub fn apply_channel(
    rho: &DensityMatrix,
    ch: &KrausChannel,
    targets: &[usize],
) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    ch.apply_mut(&mut out, targets)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{c, Gate, GateKind, StateVector};

    fn pauli_channel(px: f64, py: f64, pz: f64) -> KrausChannel {
        let sc = |p: f64, g: GateKind| Gate::new(g).matrix() * c(p.sqrt(), 0.0);
        KrausChannel::new(vec![
            sc(1.0 - px - py - pz, GateKind::Id),
            sc(px, GateKind::X),
            sc(py, GateKind::Y),
            sc(pz, GateKind::Z),
        ])
        .unwrap()
    }

    #[test]
    fn deterministic_bit_flip() {
        let rho = DensityMatrix::zero_state(1);
        let out = apply_channel(&rho, &pauli_channel(1.0, 0.0, 0.0), &[0]).unwrap();
        assert!((out.population(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_probabilities_leave_state_unchanged() {
        let psi = StateVector::normalized(vec![c(0.3, 0.1), c(-0.2, 0.9)]).unwrap();
        let rho = psi.to_density_matrix();
        let out = apply_channel(&rho, &pauli_channel(0.0, 0.0, 0.0), &[0]).unwrap();
        assert!(max_abs_diff(out.entries(), rho.entries()) < 1e-15);
    }

    #[test]
    fn flip_channel_shrinks_plus_coherence() {
        // K0 keeps weight 1/2 and X keeps |+><+|; only the Z branch (1/4)
        // maps to |-><-|, so the coherence goes 1/2 -> 3/4·1/2 - 1/4·1/2 = 1/4.
        let plus = StateVector::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let rho = plus.to_density_matrix();
        assert!((rho.entries()[(0, 1)].re - 0.5).abs() < 1e-15);
        let out = apply_channel(&rho, &pauli_channel(0.25, 0.0, 0.25), &[0]).unwrap();
        assert!((out.entries()[(0, 1)] - c(0.25, 0.0)).norm() < 1e-15);
        assert!((out.trace().re - 1.0).abs() < 1e-12);
        // an even |+>/|-> split needs half the weight on Z
        let out = apply_channel(&rho, &pauli_channel(0.25, 0.0, 0.5), &[0]).unwrap();
        assert!(out.entries()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let k = CMatrix::identity(2, 2) * c(0.9, 0.0);
        assert!(matches!(
            KrausChannel::new(vec![k]),
            Err(Error::InvalidChannel(_))
        ));
        assert!(KrausChannel::new(vec![]).is_err());
    }

    #[test]
    fn channel_dimension_must_match_targets() {
        let rho = DensityMatrix::zero_state(2);
        assert!(apply_channel(&rho, &pauli_channel(0.1, 0.0, 0.0), &[0, 1]).is_err());
    }
}
