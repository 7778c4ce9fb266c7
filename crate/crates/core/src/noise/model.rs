use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qcore::{kron, CMatrix, Gate, GateKind, KrausChannel, C64};
use crate::{Error, Result};

/// Probabilities of X, Y and Z errors on one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FlipProbs {
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl FlipProbs {
    pub const ZERO: FlipProbs = FlipProbs {
        px: 0.0,
        py: 0.0,
        pz: 0.0,
    };

    pub fn new(px: f64, py: f64, pz: f64) -> Result<Self> {
        let p = Self { px, py, pz };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.px, self.py, self.pz]
            .iter()
            .all(|p| p.is_finite() && *p >= 0.0)
            && self.px + self.py + self.pz <= 1.0 + 1e-12;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidProbability {
                px: self.px,
                py: self.py,
                pz: self.pz,
            })
        }
    }

    /// Weight of the no-error branch.
    pub fn p_identity(&self) -> f64 {
        (1.0 - self.px - self.py - self.pz).max(0.0)
    }

    /// `(p_I, p_X, p_Y, p_Z)`.
    pub fn weights(&self) -> [f64; 4] {
        [self.p_identity(), self.px, self.py, self.pz]
    }

    pub fn is_zero(&self) -> bool {
        self.px == 0.0 && self.py == 0.0 && self.pz == 0.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            px: self.px * factor,
            py: self.py * factor,
            pz: self.pz * factor,
        }
    }
}

fn flip_operators(p: &FlipProbs) -> [CMatrix; 4] {
    let kinds = [GateKind::Id, GateKind::X, GateKind::Y, GateKind::Z];
    let w = p.weights();
    std::array::from_fn(|i| Gate::new(kinds[i].clone()).matrix() * C64::new(w[i].sqrt(), 0.0))
}

/// `K0 = √(1−p_x−p_y−p_z) 𝟙, K1 = √p_x X, K2 = √p_y Y, K3 = √p_z Z`.
pub fn make_flip_channel(p: FlipProbs) -> Result<KrausChannel> {
    p.validate()?;
    KrausChannel::new(flip_operators(&p).to_vec())
}

/// The 16 products `K_i ⊗ K_j` of the single-qubit flip operators.
pub fn make_two_qubit_channel(p: FlipProbs) -> Result<KrausChannel> {
    p.validate()?;
    let ks = flip_operators(&p);
    let mut ops = Vec::with_capacity(16);
    for a in &ks {
        for b in &ks {
            ops.push(kron(a, b));
        }
    }
    KrausChannel::new(ops)
}

/// How the fitted parameters map onto gate classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// One `(p_x, p_y, p_z)` triple shared by all gates.
    AbcShared,
    /// Isotropic `p₁` on one-qubit gates, `p₂` on each CNOT factor.
    SplitXyz,
    /// `(p₁, 0, p₁)` on one-qubit gates, `(p₂, 0, p₂)` on CNOT factors.
    SplitXz,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::AbcShared, Preset::SplitXyz, Preset::SplitXz];

    pub fn name(self) -> &'static str {
        match self {
            Preset::AbcShared => "abc_shared",
            Preset::SplitXyz => "split_xyz",
            Preset::SplitXz => "split_xz",
        }
    }

    /// Names of the two swept axes.
    pub fn axis_names(self) -> [&'static str; 2] {
        match self {
            Preset::AbcShared => ["p_x", "p_z"],
            Preset::SplitXyz | Preset::SplitXz => ["p1", "p2"],
        }
    }

    /// Noise model for a point of a two-axis sweep; `p_y` only enters the
    /// shared preset.
    pub fn model(self, a1: f64, a2: f64, p_y: f64) -> Result<NoiseModelSpec> {
        match self {
            Preset::AbcShared => NoiseModelSpec::abc_shared(FlipProbs::new(a1, p_y, a2)?),
            Preset::SplitXyz => NoiseModelSpec::split_xyz(a1, a2),
            Preset::SplitXz => NoiseModelSpec::split_xz(a1, a2),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abc_shared" | "a" => Ok(Preset::AbcShared),
            "split_xyz" | "b" => Ok(Preset::SplitXyz),
            "split_xz" | "c" => Ok(Preset::SplitXz),
            other => Err(Error::InvalidPreset(other.to_string())),
        }
    }
}

/// Per-gate-class flip probabilities plus the classical flip applied at
/// reset and readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModelSpec {
    pub single_qubit: FlipProbs,
    /// Per tensor factor of the two-qubit channel.
    pub two_qubit: FlipProbs,
    pub readout_flip: f64,
    pub preset: Preset,
}

impl NoiseModelSpec {
    pub fn noiseless() -> Self {
        Self {
            single_qubit: FlipProbs::ZERO,
            two_qubit: FlipProbs::ZERO,
            readout_flip: 0.0,
            preset: Preset::AbcShared,
        }
    }

    /// Readout flip defaults to the single-qubit `p_x`.
    pub fn abc_shared(p: FlipProbs) -> Result<Self> {
        Self::build(p, p, Preset::AbcShared)
    }

    pub fn split_xyz(p1: f64, p2: f64) -> Result<Self> {
        Self::build(
            FlipProbs::new(p1, p1, p1)?,
            FlipProbs::new(p2, p2, p2)?,
            Preset::SplitXyz,
        )
    }

    pub fn split_xz(p1: f64, p2: f64) -> Result<Self> {
        Self::build(
            FlipProbs::new(p1, 0.0, p1)?,
            FlipProbs::new(p2, 0.0, p2)?,
            Preset::SplitXz,
        )
    }

    fn build(single: FlipProbs, two: FlipProbs, preset: Preset) -> Result<Self> {
        let spec = Self {
            single_qubit: single,
            two_qubit: two,
            readout_flip: single.px,
            preset,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_readout_flip(mut self, p: f64) -> Result<Self> {
        self.readout_flip = p;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.single_qubit.validate()?;
        self.two_qubit.validate()?;
        if !(0.0..=1.0).contains(&self.readout_flip) {
            return Err(Error::InvalidProbability {
                px: self.readout_flip,
                py: 0.0,
                pz: 0.0,
            });
        }
        Ok(())
    }

    /// All probabilities multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let s = Self {
            single_qubit: self.single_qubit.scaled(factor),
            two_qubit: self.two_qubit.scaled(factor),
            readout_flip: self.readout_flip * factor,
            preset: self.preset,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn is_noiseless(&self) -> bool {
        self.single_qubit.is_zero() && self.two_qubit.is_zero() && self.readout_flip == 0.0
    }

    /// Flip probabilities attached to a gate of the given arity.
    pub fn probs_for_arity(&self, arity: usize) -> FlipProbs {
        if arity == 2 {
            self.two_qubit
        } else {
            self.single_qubit
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{apply_channel, max_abs_diff, DensityMatrix, StateVector};

    #[test]
    fn zero_channel_is_identity() {
        let ch = make_flip_channel(FlipProbs::ZERO).unwrap();
        assert_eq!(ch.nonzero_operators().count(), 1);
        assert!(max_abs_diff(&ch.operators()[0], &CMatrix::identity(2, 2)) < 1e-15);
        let two = make_two_qubit_channel(FlipProbs::ZERO).unwrap();
        assert_eq!(two.operators().len(), 16);
        assert_eq!(two.nonzero_operators().count(), 1);
    }

    #[test]
    fn operator_counts() {
        let ch = make_flip_channel(FlipProbs::new(0.01, 0.0, 0.015).unwrap()).unwrap();
        assert_eq!(ch.nonzero_operators().count(), 3);
        let two = make_two_qubit_channel(FlipProbs::new(0.01, 0.02, 0.015).unwrap()).unwrap();
        assert_eq!(two.operators().len(), 16);
    }

    #[test]
    fn rejects_invalid_probabilities() {
        assert!(matches!(
            FlipProbs::new(0.6, 0.3, 0.2),
            Err(Error::InvalidProbability { .. })
        ));
        assert!(FlipProbs::new(-0.1, 0.0, 0.0).is_err());
        assert!(NoiseModelSpec::split_xz(0.6, 0.0).is_err());
    }

    #[test]
    fn quarter_probabilities_depolarize_each_factor() {
        let psi = StateVector::normalized(
            (0..4)
                .map(|i| C64::new(1.0 + i as f64, 0.5 * i as f64))
                .collect(),
        )
        .unwrap();
        let ch = make_two_qubit_channel(FlipProbs::new(0.25, 0.25, 0.25).unwrap()).unwrap();
        let out = apply_channel(&psi.to_density_matrix(), &ch, &[0, 1]).unwrap();
        assert!(max_abs_diff(out.entries(), DensityMatrix::maximally_mixed(2).entries()) < 1e-14);
    }

    #[test]
    fn presets() {
        let xz = NoiseModelSpec::split_xz(0.01, 0.016).unwrap();
        assert_eq!(xz.single_qubit, FlipProbs::new(0.01, 0.0, 0.01).unwrap());
        assert_eq!(xz.two_qubit.pz, 0.016);
        assert_eq!(xz.readout_flip, 0.01);
        let a = Preset::AbcShared.model(0.011, 0.015, 0.0).unwrap();
        assert_eq!(a.single_qubit, FlipProbs::new(0.011, 0.0, 0.015).unwrap());
        assert_eq!(a.two_qubit, a.single_qubit);
        assert_eq!("c".parse::<Preset>().unwrap(), Preset::SplitXz);
        assert!(matches!(
            "d".parse::<Preset>(),
            Err(Error::InvalidPreset(_))
        ));
    }
}
