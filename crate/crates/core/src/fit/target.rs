use serde::{Deserialize, Serialize};

use crate::noise::{reconstruct_state, simulate_tomography, Trajectory};
use crate::qcore::{CMatrix, DensityMatrix, C64};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Entry {
    t: f64,
    rho: Vec<[f64; 2]>,
}

/// `[{"t": .., "rho": [[re, im], …]}]` with `ρ` row-major.
pub fn target_to_json(traj: &Trajectory) -> String {
    let entries: Vec<Entry> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, rho)| {
            let m = rho.entries();
            let d = m.nrows();
            let rho = (0..d * d)
                .map(|k| {
                    let z = m[(k / d, k % d)];
                    [z.re, z.im]
                })
                .collect();
            Entry { t, rho }
        })
        .collect();
    serde_json::to_string(&entries).expect("plain numbers serialize")
}

/// Parses a target trajectory; errors name the offending entry.
pub fn target_from_json(text: &str) -> Result<Trajectory> {
    let entries: Vec<Entry> =
        serde_json::from_str(text).map_err(|e| Error::TargetFormat(e.to_string()))?;
    if entries.is_empty() {
        return Err(Error::TargetFormat("no entries".into()));
    }
    let mut times = Vec::with_capacity(entries.len());
    let mut states = Vec::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        let d = (e.rho.len() as f64).sqrt().round() as usize;
        if d * d != e.rho.len() || !d.is_power_of_two() || d < 2 {
            return Err(Error::TargetFormat(format!(
                "entry {i}: rho has {} elements, expected a power-of-four length such as 256",
                e.rho.len()
            )));
        }
        if let Some(first) = states.first().map(DensityMatrix::dim) {
            if first != d {
                return Err(Error::TargetFormat(format!(
                    "entry {i}: dimension {d}, expected {first}"
                )));
            }
        }
        let m = CMatrix::from_row_iterator(d, d, e.rho.iter().map(|[re, im]| C64::new(*re, *im)));
        let rho = DensityMatrix::from_matrix(m)
            .map_err(|err| Error::TargetFormat(format!("entry {i}: {err}")))?;
        if !e.t.is_finite() {
            return Err(Error::TargetFormat(format!(
                "entry {i}: time is not finite"
            )));
        }
        times.push(e.t);
        states.push(rho);
    }
    let dt = if times.len() > 1 {
        times[1] - times[0]
    } else {
        0.0
    };
    Trajectory::new(times, states, dt).map_err(|e| Error::TargetFormat(e.to_string()))
}

/// Replaces each state by its reconstruction from finite-shot Pauli
/// tomography with readout flips. Sample `i` uses seed `seed + i`.
pub fn tomographic_target(
    traj: &Trajectory,
    flip: f64,
    shots: u64,
    seed: u64,
) -> Result<Trajectory> {
    let states = traj
        .states
        .iter()
        .enumerate()
        .map(|(i, rho)| {
            reconstruct_state(&simulate_tomography(
                rho,
                flip,
                shots,
                seed.wrapping_add(i as u64),
            )?)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Trajectory::new(traj.times.clone(), states, traj.dt)?;
    out.label = format!("{} (tomography, {shots} shots)", traj.label);
    Ok(out)
}
