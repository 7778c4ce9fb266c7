use std::f64::consts::FRAC_1_SQRT_2;

use super::{c, max_abs_diff, CMatrix, C64};
use crate::{Error, Result};

/// Built-in gate families.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    Id,
    X,
    Y,
    Z,
    H,
    /// `exp(-i Y θ/2)`.
    Ry(f64),
    /// `exp(-i Z α/2)`.
    Rz(f64),
    /// Control is the first target.
    Cnot,
    /// Arbitrary one- or two-qubit unitary.
    Custom(String),
}

/// A unitary gate together with its matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    matrix: CMatrix,
}

impl Gate {
    /// Tolerance of the unitarity check for custom gates.
    pub const UNITARITY_TOL: f64 = 1e-12;

    /// Builds a built-in gate. Panics on [`GateKind::Custom`]; use [`Gate::custom`].
    pub fn new(kind: GateKind) -> Self {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let s = c(FRAC_1_SQRT_2, 0.0);
        let m2 = |a: [C64; 4]| CMatrix::from_row_slice(2, 2, &a);
        let matrix = match &kind {
            GateKind::Id => CMatrix::identity(2, 2),
            GateKind::X => m2([z, one, one, z]),
            GateKind::Y => m2([z, c(0.0, -1.0), c(0.0, 1.0), z]),
            GateKind::Z => m2([one, z, z, -one]),
            GateKind::H => m2([s, s, s, -s]),
            GateKind::Ry(theta) => {
                let (sn, cs) = (theta / 2.0).sin_cos();
                m2([c(cs, 0.0), c(-sn, 0.0), c(sn, 0.0), c(cs, 0.0)])
            }
            GateKind::Rz(alpha) => {
                let h = alpha / 2.0;
                m2([C64::from_polar(1.0, -h), z, z, C64::from_polar(1.0, h)])
            }
            GateKind::Cnot => {
                let mut m = CMatrix::zeros(4, 4);
                m[(0, 0)] = one;
                m[(1, 1)] = one;
                m[(2, 3)] = one;
                m[(3, 2)] = one;
                m
            }
            GateKind::Custom(_) => panic!("custom gates need a matrix; use Gate::custom"),
        };
        Self { kind, matrix }
    }

    /// Wraps a 2×2 or 4×4 unitary.
    pub fn custom(name: impl Into<String>, matrix: CMatrix) -> Result<Self> {
        let name = name.into();
        if !matches!(matrix.shape(), (2, 2) | (4, 4)) {
            return Err(Error::InvalidGate(format!(
                "`{name}` has shape {:?}, expected 2x2 or 4x4",
                matrix.shape()
            )));
        }
        let dev = unitarity_deviation(&matrix);
        if dev > Self::UNITARITY_TOL {
            return Err(Error::InvalidGate(format!(
                "`{name}` is not unitary (deviation {dev:e})"
            )));
        }
        Ok(Self {
            kind: GateKind::Custom(name),
            matrix,
        })
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        if self.matrix.nrows() == 4 {
            2
        } else {
            1
        }
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            GateKind::Id => "id",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
            GateKind::Cnot => "cx",
            GateKind::Custom(name) => name,
        }
    }

    /// Rotation angle for parametrised gates.
    pub fn params(&self) -> Option<f64> {
        match self.kind {
            GateKind::Ry(a) | GateKind::Rz(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kind == GateKind::Id
    }

    /// Adjoint gate, staying inside the built-in set where possible.
    pub fn inverse(&self) -> Self {
        match &self.kind {
            GateKind::Ry(a) => Self::new(GateKind::Ry(-a)),
            GateKind::Rz(a) => Self::new(GateKind::Rz(-a)),
            GateKind::Custom(name) => Self {
                kind: GateKind::Custom(format!("{name}_dg")),
                matrix: self.matrix.adjoint(),
            },
            other => Self::new(other.clone()),
        }
    }
}

/// `‖U†U − 𝟙‖_max`.
pub(crate) fn unitarity_deviation(u: &CMatrix) -> f64 {
    let d = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(d, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtins() -> Vec<Gate> {
        let mut v: Vec<Gate> = [
            GateKind::Id,
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::H,
            GateKind::Cnot,
        ]
        .into_iter()
        .map(Gate::new)
        .collect();
        for a in [-3.0, -0.05, 0.0, 0.1, 1.234, 7.0] {
            v.push(Gate::new(GateKind::Ry(a)));
            v.push(Gate::new(GateKind::Rz(a)));
        }
        v
    }

    #[test]
    fn builtin_gates_are_unitary() {
        for g in builtins() {
            assert!(unitarity_deviation(g.matrix()) < 1e-12, "{}", g.name());
        }
    }

    #[test]
    fn inverse_undoes_gate() {
        for g in builtins() {
            let prod = g.inverse().matrix() * g.matrix();
            let d = prod.nrows();
            assert!(max_abs_diff(&prod, &CMatrix::identity(d, d)) < 1e-12);
        }
    }

    #[test]
    fn rz_matches_exponential_convention() {
        let g = Gate::new(GateKind::Rz(0.3));
        assert!((g.matrix()[(0, 0)] - C64::from_polar(1.0, -0.15)).norm() < 1e-15);
    }

    #[test]
    fn custom_rejects_non_unitary() {
        let m = CMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(Gate::custom("bad", m).is_err());
        assert!(Gate::custom("bad", CMatrix::identity(3, 3)).is_err());
    }
}
