use std::f64::consts::PI;

use crate::qcore::{DensityMatrix, StateVector, C64};

/// Physical (Gauss-law satisfying) basis states of the two-site lattice.
///
/// Register layout `|q0 q1 q2 q3>`: `q0` holds link `E_{0,1}`, `q3` holds
/// link `E_{1,0}`, `q1` and `q2` the matter sites 0 and 1. A qubit in `|1>`
/// is an occupied site or a link with field `−√π/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisState {
    VacMinus,
    VacPlus,
    MesonL,
    MesonR,
}

impl BasisState {
    /// Ordering used for every 4×4 matrix in this module.
    pub const ALL: [BasisState; 4] = [
        BasisState::VacMinus,
        BasisState::VacPlus,
        BasisState::MesonL,
        BasisState::MesonR,
    ];

    /// Computational-basis index of the 4-qubit encoding.
    pub fn encoding(self) -> usize {
        match self {
            BasisState::VacMinus => 0b1011,
            BasisState::VacPlus => 0b0010,
            BasisState::MesonL => 0b0101,
            BasisState::MesonR => 0b1100,
        }
    }

    pub fn ket(self) -> String {
        format!("|{:04b}>", self.encoding())
    }

    pub fn label(self) -> &'static str {
        match self {
            BasisState::VacMinus => "vac-",
            BasisState::VacPlus => "vac+",
            BasisState::MesonL => "meson_L",
            BasisState::MesonR => "meson_R",
        }
    }

    /// Diagonal mass energy in units of `m` (vacua −1, mesons +1).
    pub(crate) fn mass_sign(self) -> f64 {
        match self {
            BasisState::VacMinus | BasisState::VacPlus => -1.0,
            BasisState::MesonL | BasisState::MesonR => 1.0,
        }
    }
}

/// Outcome of the Gauss-law test on a basis label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussCheck {
    pub satisfied: bool,
    /// `G_x` at sites 0 and 1, reduced modulo the gauge order.
    pub residuals: [f64; 2],
}

/// Electric field of a link qubit.
pub fn link_field(bit: bool) -> f64 {
    if bit {
        -PI.sqrt() / 2.0
    } else {
        PI.sqrt() / 2.0
    }
}

/// Evaluates `G_x = √(n/2π)(E_{x,x+1} − E_{x−1,x}) − n_x − ((−1)^x − 1)/2`
/// for `n = 2` at both sites of a 4-bit label. Z_2 charges are only
/// defined modulo 2, so residuals are reduced to `[0, 2)`.
pub fn gauss_check(label: usize) -> GaussCheck {
    assert!(label < 16, "label {label} is not a 4-bit state");
    let bit = |q: usize| (label >> (3 - q)) & 1 == 1;
    let gauge_n = 2.0_f64;
    let scale = (gauge_n / (2.0 * PI)).sqrt();
    let e01 = link_field(bit(0));
    let e10 = link_field(bit(3));
    let occupation = [f64::from(u8::from(bit(1))), f64::from(u8::from(bit(2)))];
    let mut residuals = [0.0; 2];
    for (x, r) in residuals.iter_mut().enumerate() {
        let (right, left) = if x == 0 { (e01, e10) } else { (e10, e01) };
        let stagger = if x % 2 == 0 { 0.0 } else { -1.0 };
        let g = scale * (right - left) - occupation[x] - stagger;
        // g is integer-valued up to rounding of √π
        *r = g.round().rem_euclid(gauge_n);
    }
    GaussCheck {
        satisfied: residuals.iter().all(|&r| r == 0.0),
        residuals,
    }
}

/// Embeds amplitudes over `(vac−, vac+, L, R)` into the 16-dim register.
pub fn embed_physical(amplitudes: [C64; 4]) -> StateVector {
    let mut amps = vec![C64::new(0.0, 0.0); 16];
    for (state, a) in BasisState::ALL.iter().zip(amplitudes) {
        amps[state.encoding()] = a;
    }
    StateVector::normalized(amps).expect("physical amplitudes must not vanish")
}

/// Total population on the four physical basis states.
pub fn physical_population(rho: &DensityMatrix) -> f64 {
    BasisState::ALL
        .iter()
        .map(|s| rho.population(s.encoding()))
        .sum()
}
