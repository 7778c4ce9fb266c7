use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::qcore::{
    hermitian_eigen, CMatrix, DensityMatrix, Gate, GateKind, Pauli, PauliString, QuantumState, C64,
};
use crate::{Error, Result};

/// Measurement basis per qubit, letters over `{X, Y, Z}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TomographySetting(Vec<Pauli>);

impl TomographySetting {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.contains(&Pauli::I) {
            return Err(Error::InvalidTomography(
                "settings measure X, Y or Z only".into(),
            ));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every non-identity letter of `p` is measured by this setting.
    pub fn measures(&self, p: &PauliString) -> bool {
        p.letters()
            .iter()
            .zip(&self.0)
            .all(|(a, b)| *a == Pauli::I || a == b)
    }
}

impl fmt::Display for TomographySetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.letter()))
    }
}

impl FromStr for TomographySetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| {
                Pauli::from_letter(c).ok_or_else(|| {
                    Error::InvalidTomography(format!("bad basis letter `{c}` in `{s}`"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

/// All `3^n` settings in lexicographic order (`XX…X` first).
pub fn tomography_settings(n: usize) -> Vec<TomographySetting> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Pauli>| {
                [Pauli::X, Pauli::Y, Pauli::Z].map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(TomographySetting).collect()
}

/// Shot counts for one setting, outcome strings written `q0 q1 …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsTable {
    pub setting: String,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl CountsTable {
    pub fn validate(&self) -> Result<()> {
        let setting: TomographySetting = self.setting.parse()?;
        let total: u64 = self.counts.values().sum();
        if total != self.shots {
            return Err(Error::InvalidTomography(format!(
                "{}: counts sum to {total}, expected {} shots",
                self.setting, self.shots
            )));
        }
        if let Some(k) = self
            .counts
            .keys()
            .find(|k| k.len() != setting.len() || !k.chars().all(|c| c == '0' || c == '1'))
        {
            return Err(Error::InvalidTomography(format!(
                "{}: bad outcome `{k}`",
                self.setting
            )));
        }
        Ok(())
    }

    /// Outcome frequencies indexed by basis label.
    pub fn frequencies(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.setting.len();
        let mut f = vec![0.0; 1 << n];
        for (k, &v) in &self.counts {
            let idx = usize::from_str_radix(k, 2).expect("validated outcome");
            f[idx] = v as f64 / self.shots as f64;
        }
        Ok(f)
    }
}

fn outcome_label(idx: usize, n: usize) -> String {
    format!("{idx:0n$b}")
}

/// Outcome distribution after rotating into `setting` (X via H, Y via H·S†)
/// and flipping each reported bit with probability `flip`.
pub fn outcome_probabilities(
    rho: &DensityMatrix,
    setting: &TomographySetting,
    flip: f64,
) -> Result<Vec<f64>> {
    let n = rho.n_qubits();
    if setting.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: setting.len(),
        });
    }
    if !(0.0..=1.0).contains(&flip) {
        return Err(Error::InvalidProbability {
            px: flip,
            py: 0.0,
            pz: 0.0,
        });
    }
    let mut r = rho.clone();
    let h = Gate::new(GateKind::H);
    let sdg = Gate::new(GateKind::Rz(-std::f64::consts::FRAC_PI_2));
    for (q, p) in setting.letters().iter().enumerate() {
        match p {
            Pauli::X => r.apply_gate_mut(&h, &[q])?,
            Pauli::Y => {
                r.apply_gate_mut(&sdg, &[q])?;
                r.apply_gate_mut(&h, &[q])?;
            }
            _ => {}
        }
    }
    let mut probs: Vec<f64> = (0..r.dim()).map(|i| r.population(i).max(0.0)).collect();
    if flip > 0.0 {
        for bit in 0..n {
            let mask = 1 << bit;
            for i in 0..probs.len() {
                if i & mask == 0 {
                    let (a, b) = (probs[i], probs[i | mask]);
                    probs[i] = (1.0 - flip) * a + flip * b;
                    probs[i | mask] = flip * a + (1.0 - flip) * b;
                }
            }
        }
    }
    let total: f64 = probs.iter().sum();
    Ok(probs.into_iter().map(|p| p / total).collect())
}

/// Samples `shots` outcomes from [`outcome_probabilities`].
pub fn simulate_readout(
    rho: &DensityMatrix,
    setting: &TomographySetting,
    flip: f64,
    shots: u64,
    seed: u64,
) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::InvalidTomography("shots must be positive".into()));
    }
    let probs = outcome_probabilities(rho, setting, flip)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    let (mut left, mut mass) = (shots, 1.0);
    let n = setting.len();
    for (i, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        let k = if i + 1 == probs.len() || p >= mass {
            left
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q)
                .expect("probability clamped to [0, 1]")
                .sample(&mut rng)
        };
        if k > 0 {
            counts.insert(outcome_label(i, n), k);
        }
        left -= k;
        mass -= p;
    }
    Ok(CountsTable {
        setting: setting.to_string(),
        shots,
        counts,
    })
}

/// Settings of all `3^n` tables, each with its own derived seed.
pub fn simulate_tomography(
    rho: &DensityMatrix,
    flip: f64,
    shots: u64,
    seed: u64,
) -> Result<Vec<CountsTable>> {
    tomography_settings(rho.n_qubits())
        .iter()
        .enumerate()
        .map(|(i, s)| {
            simulate_readout(
                rho,
                s,
                flip,
                shots,
                seed.wrapping_mul(0x9E37_79B9).wrapping_add(i as u64),
            )
        })
        .collect()
}

/// `P|i⟩ = phase · |i ⊕ mask⟩` for a Pauli string on `n` qubits.
fn pauli_action(p: &PauliString, i: usize) -> (usize, C64) {
    let n = p.len();
    let mut row = i;
    let mut phase = C64::new(1.0, 0.0);
    for (q, letter) in p.letters().iter().enumerate() {
        let bit = n - 1 - q;
        let set = (i >> bit) & 1 == 1;
        match letter {
            Pauli::I => {}
            Pauli::X => row ^= 1 << bit,
            Pauli::Y => {
                row ^= 1 << bit;
                phase *= if set {
                    C64::new(0.0, -1.0)
                } else {
                    C64::new(0.0, 1.0)
                };
            }
            Pauli::Z => {
                if set {
                    phase = -phase;
                }
            }
        }
    }
    (row, phase)
}

/// `ρ̂ = 2^{-n} Σ_P ⟨P⟩ P` from per-setting outcome distributions. Strings
/// containing `I` average the parity over every compatible setting.
pub fn linear_inversion_from_probabilities(
    n: usize,
    probs: &BTreeMap<TomographySetting, Vec<f64>>,
) -> Result<CMatrix> {
    let settings = tomography_settings(n);
    for s in &settings {
        match probs.get(s) {
            None => return Err(Error::MissingSetting(s.to_string())),
            Some(p) if p.len() != 1 << n => {
                return Err(Error::DimensionMismatch {
                    expected: 1 << n,
                    actual: p.len(),
                })
            }
            _ => {}
        }
    }
    let d = 1usize << n;
    let mut rho = CMatrix::zeros(d, d);
    for p in PauliString::all(n) {
        let support_mask: usize = p.support().iter().map(|&q| 1usize << (n - 1 - q)).sum();
        let (mut sum, mut count) = (0.0, 0usize);
        for s in settings.iter().filter(|s| s.measures(&p)) {
            let dist = &probs[s];
            sum += dist
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    if (i & support_mask).count_ones().is_multiple_of(2) {
                        *f
                    } else {
                        -*f
                    }
                })
                .sum::<f64>();
            count += 1;
        }
        let expectation = sum / count as f64 / d as f64;
        for col in 0..d {
            let (row, phase) = pauli_action(&p, col);
            rho[(row, col)] += phase * expectation;
        }
    }
    Ok(rho)
}

fn check_tables(tables: &[CountsTable]) -> Result<(usize, BTreeMap<TomographySetting, Vec<f64>>)> {
    let first = tables
        .first()
        .ok_or_else(|| Error::InvalidTomography("no counts tables".into()))?;
    let n = first.setting.len();
    let mut probs = BTreeMap::new();
    for t in tables {
        if t.shots != first.shots {
            return Err(Error::InvalidTomography(format!(
                "{} has {} shots, expected {}",
                t.setting, t.shots, first.shots
            )));
        }
        let setting: TomographySetting = t.setting.parse()?;
        if setting.len() != n {
            return Err(Error::InvalidTomography(format!(
                "{} has the wrong length",
                t.setting
            )));
        }
        if probs.insert(setting, t.frequencies()?).is_some() {
            return Err(Error::InvalidTomography(format!(
                "duplicate setting {}",
                t.setting
            )));
        }
    }
    Ok((n, probs))
}

/// Unconstrained linear-inversion estimate (Hermitian, unit trace, possibly
/// not positive).
pub fn linear_inversion(tables: &[CountsTable]) -> Result<CMatrix> {
    let (n, probs) = check_tables(tables)?;
    linear_inversion_from_probabilities(n, &probs)
}

/// Nearest positive semidefinite unit-trace matrix by eigenvalue clipping.
pub fn project_psd(m: &CMatrix) -> Result<DensityMatrix> {
    let (vals, vecs) = hermitian_eigen(m);
    let clipped: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidTomography(
            "estimate has no positive weight".into(),
        ));
    }
    let d = nalgebra::DVector::from_iterator(
        clipped.len(),
        clipped.iter().map(|v| C64::new(v / total, 0.0)),
    );
    let rho = &vecs * CMatrix::from_diagonal(&d) * vecs.adjoint();
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::from_matrix_unchecked(rho)
}

/// Linear inversion followed by [`project_psd`].
pub fn reconstruct_state(tables: &[CountsTable]) -> Result<DensityMatrix> {
    project_psd(&linear_inversion(tables)?)
}

/// Reconstruction from exact outcome distributions (the infinite-shot limit).
pub fn reconstruct_exact(rho: &DensityMatrix, flip: f64) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    let probs = tomography_settings(n)
        .into_iter()
        .map(|s| {
            let p = outcome_probabilities(rho, &s, flip)?;
            Ok((s, p))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    project_psd(&linear_inversion_from_probabilities(n, &probs)?)
}
