use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::Serialize;

use super::basis::{embed_physical, BasisState};
use super::ModelParams;
use crate::qcore::{StateVector, C64};

/// Physical-subspace Hamiltonian over `(vac−, vac+, L, R)`.
///
/// Diagonal `quench_sign · m · (−1, −1, +1, +1)`; each vacuum couples to
/// each meson with `J/2`.
pub fn build_physical_hamiltonian(p: &ModelParams) -> Matrix4<f64> {
    let mut h = Matrix4::zeros();
    for (i, s) in BasisState::ALL.iter().enumerate() {
        h[(i, i)] = p.signed_mass() * s.mass_sign();
    }
    for vac in 0..2 {
        for meson in 2..4 {
            h[(vac, meson)] = p.j / 2.0;
            h[(meson, vac)] = p.j / 2.0;
        }
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

/// Names of the four eigenstates of `H(m, J)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EigenLabel {
    /// Odd, energy `−m`.
    E,
    /// Odd, energy `+m`.
    EBar,
    /// Even ground state, energy `−√(m²+J²)`.
    G,
    /// Even, energy `+√(m²+J²)`.
    GBar,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenstate {
    pub label: EigenLabel,
    pub energy: f64,
    pub parity: Parity,
    /// Amplitudes over `(vac−, vac+, L, R)`.
    pub amplitudes: [f64; 4],
}

impl Eigenstate {
    pub fn vector(&self) -> Vector4<f64> {
        Vector4::from(self.amplitudes)
    }

    /// The eigenstate embedded in the 4-qubit register.
    pub fn embedded(&self) -> StateVector {
        embed_physical(self.amplitudes.map(|a| C64::new(a, 0.0)))
    }
}

/// Closed-form eigen-decomposition of the (pre-quench) Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Ordered `(e, ē, g, ḡ)`.
    pub states: [Eigenstate; 4],
}

impl Spectrum {
    pub fn state(&self, label: EigenLabel) -> &Eigenstate {
        self.states
            .iter()
            .find(|s| s.label == label)
            .expect("all labels present")
    }

    pub fn ground(&self) -> &Eigenstate {
        self.state(EigenLabel::G)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut e = self.states.each_ref().map(|s| s.energy);
        e.sort_by(f64::total_cmp);
        e
    }

    /// Vacuum amplitude of the ground state.
    pub fn a_g(&self) -> f64 {
        self.ground().amplitudes[1]
    }

    /// Meson amplitude of the ground state.
    pub fn b_g(&self) -> f64 {
        self.ground().amplitudes[2]
    }

    /// Ratio `b_g / a_g = (m − √(m²+J²))/J`.
    pub fn p_g(&self) -> f64 {
        self.b_g() / self.a_g()
    }

    /// Columns are the eigenvectors in `(e, ē, g, ḡ)` order.
    pub fn unitary(&self) -> Matrix4<f64> {
        Matrix4::from_columns(&self.states.each_ref().map(|s| s.vector()))
    }
}

/// Even/odd eigenstates of `H(m, J)`. Uses the sign of `m` before any
/// quench, i.e. the spectrum of the pre-quench Hamiltonian.
pub fn diagonalize(p: &ModelParams) -> Spectrum {
    let (m, j) = (p.m, p.j);
    let s = p.gap();
    // b/a = (m − s)/J, written so that J = 0 is regular
    let ratio = -j / (m + s);
    let a_g = 1.0 / (2.0 * (1.0 + ratio * ratio)).sqrt();
    let b_g = a_g * ratio;
    // ḡ is orthogonal within the even sector: (a, b) -> (−b, a)
    let (a_gbar, b_gbar) = (-b_g, a_g);
    let h = FRAC_1_SQRT_2;
    Spectrum {
        states: [
            Eigenstate {
                label: EigenLabel::E,
                energy: -m,
                parity: Parity::Odd,
                amplitudes: [-h, h, 0.0, 0.0],
            },
            Eigenstate {
                label: EigenLabel::EBar,
                energy: m,
                parity: Parity::Odd,
                amplitudes: [0.0, 0.0, h, -h],
            },
            Eigenstate {
                label: EigenLabel::G,
                energy: -s,
                parity: Parity::Even,
                amplitudes: [a_g, a_g, b_g, b_g],
            },
            Eigenstate {
                label: EigenLabel::GBar,
                energy: s,
                parity: Parity::Even,
                amplitudes: [a_gbar, a_gbar, b_gbar, b_gbar],
            },
        ],
    }
}

/// `U†H(−m,J)U` split into parity blocks, `U` the eigenbasis of `H(m,J)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchBlocks {
    /// Basis `(ψ_e, ψ_ē)`.
    pub odd: Matrix2<f64>,
    /// Basis `(ψ_g, ψ_ḡ)`.
    pub even: Matrix2<f64>,
}

pub fn quenched_block_hamiltonian(p: &ModelParams) -> QuenchBlocks {
    let (m, j) = (p.m, p.j);
    let s = p.gap();
    let diag = (j * j - m * m) / s;
    let off = 2.0 * j * m / s;
    QuenchBlocks {
        odd: Matrix2::new(m, 0.0, 0.0, -m),
        even: Matrix2::new(-diag, off, off, diag),
    }
}
