use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Lattice parameters. Only `N = 2` matter sites and the `Z_2` gauge group
/// are supported; the electric energy is a constant for `Z_2` and is
/// dropped (additive constant 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Fermion mass.
    pub m: f64,
    /// Hopping coupling `J = 1/a`.
    pub j: f64,
    pub n_sites: usize,
    pub gauge_n: usize,
    /// `+1` before the quench, `−1` after.
    pub quench_sign: i8,
}

impl ModelParams {
    /// Pre-quench parameters. Requires `m > 0` and `J >= 0`.
    pub fn new(m: f64, j: f64) -> Result<Self> {
        let p = Self {
            m,
            j,
            n_sites: 2,
            gauge_n: 2,
            quench_sign: 1,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m.is_finite() && self.m > 0.0) {
            return Err(Error::InvalidParams(format!(
                "mass must be positive, got {}",
                self.m
            )));
        }
        if !(self.j.is_finite() && self.j >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "coupling must be non-negative, got {}",
                self.j
            )));
        }
        if self.n_sites != 2 {
            return Err(Error::InvalidParams(format!(
                "only N = 2 sites supported, got {}",
                self.n_sites
            )));
        }
        if self.gauge_n != 2 {
            return Err(Error::InvalidParams(format!(
                "only Z_2 supported, got Z_{}",
                self.gauge_n
            )));
        }
        if self.quench_sign != 1 && self.quench_sign != -1 {
            return Err(Error::InvalidParams(format!(
                "quench sign must be ±1, got {}",
                self.quench_sign
            )));
        }
        Ok(())
    }

    /// The same lattice with the mass sign inverted.
    pub fn quenched(&self) -> Self {
        Self {
            quench_sign: -self.quench_sign,
            ..*self
        }
    }

    /// `quench_sign · m`.
    pub fn signed_mass(&self) -> f64 {
        f64::from(self.quench_sign) * self.m
    }

    /// `√(m² + J²)`, the even-sector eigenvalue magnitude.
    pub fn gap(&self) -> f64 {
        self.m.hypot(self.j)
    }
}
