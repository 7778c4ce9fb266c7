use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{c, CMatrix, DensityMatrix, Gate, GateKind, QuantumState, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMatrix {
        let kind = match self {
            Pauli::I => GateKind::Id,
            Pauli::X => GateKind::X,
            Pauli::Y => GateKind::Y,
            Pauli::Z => GateKind::Z,
        };
        Gate::new(kind).matrix().clone()
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(ch: char) -> Option<Self> {
        match ch.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Phase picked up when acting on a basis qubit with value `bit`.
    fn phase(self, bit: bool) -> C64 {
        match (self, bit) {
            (Pauli::I | Pauli::X, _) => c(1.0, 0.0),
            (Pauli::Y, false) => c(0.0, 1.0),
            (Pauli::Y, true) => c(0.0, -1.0),
            (Pauli::Z, false) => c(1.0, 0.0),
            (Pauli::Z, true) => c(-1.0, 0.0),
        }
    }
}

/// Tensor product of single-qubit Paulis; letter `k` acts on qubit `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Pauli::I; n])
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&q| self.letters[q] != Pauli::I)
            .collect()
    }

    /// All `4^n` strings, ordered I < X < Y < Z with qubit 0 most significant.
    pub fn all(n: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * n)).map(move |code| {
            PauliString::new(
                (0..n)
                    .map(|q| Pauli::ALL[(code >> (2 * (n - 1 - q))) & 3])
                    .collect(),
            )
        })
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn matrix(&self) -> CMatrix {
        self.letters
            .iter()
            .fold(CMatrix::identity(1, 1), |acc, p| acc.kronecker(&p.matrix()))
    }

    /// Image of basis state `index`: `P|index> = phase |flipped>`.
    fn act_on_basis(&self, index: usize) -> (usize, C64) {
        let n = self.len();
        let mut out = index;
        let mut phase = c(1.0, 0.0);
        for (q, &p) in self.letters.iter().enumerate() {
            let bit = (index >> (n - 1 - q)) & 1 == 1;
            phase *= p.phase(bit);
            if p.flips() {
                out ^= 1 << (n - 1 - q);
            }
        }
        (out, phase)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters
            .iter()
            .try_for_each(|p| write!(f, "{}", p.letter()))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| {
                Pauli::from_letter(ch)
                    .ok_or_else(|| Error::InvalidState(format!("bad Pauli letter `{ch}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString::new)
    }
}

/// `Tr(P ρ)`.
pub fn pauli_expectation(rho: &DensityMatrix, p: &PauliString) -> Result<f64> {
    if p.len() != rho.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_qubits(),
            actual: p.len(),
        });
    }
    let m = rho.entries();
    let mut acc = c(0.0, 0.0);
    for j in 0..rho.dim() {
        let (i, phase) = p.act_on_basis(j);
        acc += phase * m[(j, i)];
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::StateVector;

    #[test]
    fn identity_expectation_is_trace() {
        let rho = DensityMatrix::maximally_mixed(4);
        let p: PauliString = "IIII".parse().unwrap();
        assert!((pauli_expectation(&rho, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn z_on_zero() {
        let rho = DensityMatrix::zero_state(1);
        assert_eq!(pauli_expectation(&rho, &"Z".parse().unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn xx_on_bell_pair() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell =
            StateVector::from_amplitudes(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)])
                .unwrap()
                .to_density_matrix();
        let xx = pauli_expectation(&bell, &"XX".parse().unwrap()).unwrap();
        assert!((xx - 1.0).abs() < 1e-12);
        let yy = pauli_expectation(&bell, &"YY".parse().unwrap()).unwrap();
        assert!((yy + 1.0).abs() < 1e-12);
    }

    #[test]
    fn fast_path_matches_dense_trace() {
        let psi = StateVector::normalized(
            (0..8)
                .map(|k| c((k as f64).sin(), (k as f64 * 0.7).cos()))
                .collect(),
        )
        .unwrap();
        let rho = psi.to_density_matrix();
        for p in PauliString::all(3) {
            let dense = (p.matrix() * rho.entries()).trace();
            assert!(
                (dense.re - pauli_expectation(&rho, &p).unwrap()).abs() < 1e-12,
                "{p}"
            );
            assert!(dense.im.abs() < 1e-12);
        }
    }

    #[test]
    fn length_mismatch() {
        let rho = DensityMatrix::zero_state(2);
        assert!(pauli_expectation(&rho, &"Z".parse().unwrap()).is_err());
        assert!("XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn enumeration_order() {
        let all: Vec<String> = PauliString::all(2).map(|p| p.to_string()).collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0], "II");
        assert_eq!(all[1], "IX");
        assert_eq!(all[15], "ZZ");
    }
}
