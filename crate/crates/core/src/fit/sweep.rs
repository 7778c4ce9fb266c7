use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::objective::averaged_trace_distance;
use crate::circuits::{build_evolution, Circuit};
use crate::noise::{
    apply_readout_flips, run_density_matrix, sample_trajectories, Preset, Trajectory,
};
use crate::qcore::{DensityMatrix, StateVector};
use crate::schwinger::ModelParams;
use crate::{Error, Result};

/// Two swept probability axes plus a fixed `p_y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axis_names: [String; 2],
    pub start: [f64; 2],
    pub step: [f64; 2],
    pub count: [usize; 2],
    /// Only used by the shared preset.
    pub fixed_py: f64,
}

impl GridSpec {
    /// Square grid with axes named after the preset.
    pub fn square(preset: Preset, start: [f64; 2], step: f64, count: usize) -> Self {
        Self {
            axis_names: preset.axis_names().map(String::from),
            start,
            step: [step; 2],
            count: [count; 2],
            fixed_py: 0.0,
        }
    }

    /// `count × count` grid of spacing `step` centred on `centre`.
    pub fn centred(preset: Preset, centre: [f64; 2], step: f64, count: usize) -> Self {
        let half = (count.saturating_sub(1) / 2) as f64 * step;
        Self::square(preset, [centre[0] - half, centre[1] - half], step, count)
    }

    pub fn values(&self, axis: usize) -> Vec<f64> {
        (0..self.count[axis])
            .map(|i| self.start[axis] + i as f64 * self.step[axis])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.count[0] * self.count[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks the geometry and that every node is a valid model.
    pub fn validate(&self, preset: Preset) -> Result<()> {
        if self.count.contains(&0) {
            return Err(Error::InvalidGrid("axes need at least one point".into()));
        }
        if self.step.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidGrid(format!(
                "steps {:?} must be positive",
                self.step
            )));
        }
        if self.start.iter().any(|s| !(s.is_finite() && *s >= -1e-12)) {
            return Err(Error::InvalidGrid(format!(
                "starts {:?} must be non-negative",
                self.start
            )));
        }
        let far = [self.values(0), self.values(1)].map(|v| *v.last().expect("non-empty"));
        preset
            .model(
                self.start[0].max(0.0),
                self.start[1].max(0.0),
                self.fixed_py,
            )
            .and_then(|_| preset.model(far[0], far[1], self.fixed_py))
            .map_err(|e| Error::InvalidGrid(format!("grid leaves the valid region: {e}")))?;
        Ok(())
    }
}

/// How a grid point is simulated and compared with the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub preset: Preset,
    pub params: ModelParams,
    pub dt: f64,
    /// Samples entering the averaged distance.
    pub k: usize,
    /// Pass simulated states through the readout flip channel, for targets
    /// that were themselves measured.
    pub measured: bool,
    /// `Some((R, seed))` samples R trajectories per point with the same
    /// seed everywhere (common random numbers); `None` uses exact channels.
    pub sampling: Option<(usize, u64)>,
    pub target_id: String,
}

impl SweepConfig {
    pub fn exact(preset: Preset, params: ModelParams, dt: f64, k: usize) -> Self {
        Self {
            preset,
            params,
            dt,
            k,
            measured: false,
            sampling: None,
            target_id: String::new(),
        }
    }

    /// The circuit program shared by targets and grid points: ground-state
    /// preparation then `k − 1` steps, giving samples at `t = 0 … (k−1)dt`.
    pub fn program(&self) -> Result<Circuit> {
        if self.k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        build_evolution(&self.params, self.dt, self.k - 1)
    }
}

/// Simulates `program` under the model at one grid node.
pub fn simulate_point(
    program: &Circuit,
    cfg: &SweepConfig,
    a1: f64,
    a2: f64,
    p_y: f64,
) -> Result<Trajectory> {
    let nm = cfg.preset.model(a1, a2, p_y)?;
    let mut traj = match cfg.sampling {
        None => run_density_matrix(
            program,
            &nm,
            &DensityMatrix::zero_state(program.n_qubits()),
            1,
        )?,
        Some((r, seed)) => sample_trajectories(
            program,
            &nm,
            &StateVector::zero(program.n_qubits()),
            r,
            seed,
            1,
        )?,
    };
    if cfg.measured {
        for s in &mut traj.states {
            *s = apply_readout_flips(s, nm.readout_flip)?;
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    SingleState,
    TimeAveraged { k: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub target: String,
    pub preset: Preset,
    pub realizations: Option<usize>,
    pub seed: Option<u64>,
    pub measured: bool,
}

/// Objective values on a grid; `values[i1][i2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSurface {
    pub grid: GridSpec,
    pub values: Vec<Vec<f64>>,
    pub objective: Objective,
    pub provenance: Provenance,
}

fn sig12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

impl DistanceSurface {
    pub fn axes(&self) -> [Vec<f64>; 2] {
        [self.grid.values(0), self.grid.values(1)]
    }

    pub fn value(&self, i1: usize, i2: usize) -> f64 {
        self.values[i1][i2]
    }

    /// `axis1,axis2,value`, axis 1 outermost, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let [a1, a2] = self.axes();
        let mut out = String::from("axis1,axis2,value\n");
        for (i, x) in a1.iter().enumerate() {
            for (j, y) in a2.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{}\n",
                    sig12(*x),
                    sig12(*y),
                    sig12(self.values[i][j])
                ));
            }
        }
        out
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: f64, y: f64) -> Option<f64> {
        let locate = |v: f64, axis: usize| -> Option<(usize, f64)> {
            let n = self.grid.count[axis];
            let u = (v - self.grid.start[axis]) / self.grid.step[axis];
            if !(-1e-9..=(n - 1) as f64 + 1e-9).contains(&u) {
                return None;
            }
            if n == 1 {
                return Some((0, 0.0));
            }
            let i = (u.floor().max(0.0) as usize).min(n - 2);
            Some((i, (u - i as f64).clamp(0.0, 1.0)))
        };
        let (i, fx) = locate(x, 0)?;
        let (j, fy) = locate(y, 1)?;
        let at = |a: usize, b: usize| {
            self.values[a.min(self.grid.count[0] - 1)][b.min(self.grid.count[1] - 1)]
        };
        let lo = at(i, j) * (1.0 - fx) + at(i + 1, j) * fx;
        let hi = at(i, j + 1) * (1.0 - fx) + at(i + 1, j + 1) * fx;
        Some(lo * (1.0 - fy) + hi * fy)
    }
}

/// Evaluates the averaged trace distance to `target` at every grid node.
/// Nodes run in parallel; the surface is assembled in index order.
pub fn grid_sweep(
    spec: &GridSpec,
    target: &Trajectory,
    cfg: &SweepConfig,
) -> Result<DistanceSurface> {
    spec.validate(cfg.preset)?;
    let program = cfg.program()?;
    if target.len() < cfg.k {
        return Err(Error::TimeGridMismatch(format!(
            "target has {} samples, k = {}",
            target.len(),
            cfg.k
        )));
    }
    let [xs, ys] = [spec.values(0), spec.values(1)];
    let nodes: Vec<(usize, usize)> = (0..xs.len())
        .flat_map(|i| (0..ys.len()).map(move |j| (i, j)))
        .collect();
    let flat = nodes
        .par_iter()
        .map(|&(i, j)| {
            let sim = simulate_point(&program, cfg, xs[i].max(0.0), ys[j].max(0.0), spec.fixed_py)?;
            averaged_trace_distance(&sim, target, cfg.k)
        })
        .collect::<Result<Vec<f64>>>()?;
    let values = flat.chunks(ys.len()).map(<[f64]>::to_vec).collect();
    Ok(DistanceSurface {
        grid: spec.clone(),
        values,
        objective: if cfg.k == 1 {
            Objective::SingleState
        } else {
            Objective::TimeAveraged { k: cfg.k }
        },
        provenance: Provenance {
            target: cfg.target_id.clone(),
            preset: cfg.preset,
            realizations: cfg.sampling.map(|s| s.0),
            seed: cfg.sampling.map(|s| s.1),
            measured: cfg.measured,
        },
    })
}
