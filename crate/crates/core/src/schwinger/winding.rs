use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::loschmidt::{analytic_amplitude, wrap_phase};
use super::ModelParams;
use crate::qcore::C64;
use crate::{Error, Result};

/// Echo below which `arg 𝒢` is treated as undefined.
pub const PHASE_EPS: f64 = 1e-8;

/// Phase of the Loschmidt amplitude sampled on a rectangular `(J, t)` grid.
/// Index `[i][k]` is `(j_axis[i], t_axis[k])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseField {
    pub j_axis: Vec<f64>,
    pub t_axis: Vec<f64>,
    pub phase: Vec<Vec<f64>>,
    pub echo: Vec<Vec<f64>>,
}

fn linspace(lo: f64, hi: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|i| lo + (hi - lo) * i as f64 / intervals as f64)
        .collect()
}

impl PhaseField {
    pub fn from_amplitudes(j_axis: Vec<f64>, t_axis: Vec<f64>, amps: &[Vec<C64>]) -> Result<Self> {
        if amps.len() != j_axis.len() {
            return Err(Error::DimensionMismatch {
                expected: j_axis.len(),
                actual: amps.len(),
            });
        }
        if let Some(row) = amps.iter().find(|r| r.len() != t_axis.len()) {
            return Err(Error::DimensionMismatch {
                expected: t_axis.len(),
                actual: row.len(),
            });
        }
        let phase = amps
            .iter()
            .map(|r| r.iter().map(|g| wrap_phase(g.arg())).collect())
            .collect();
        let echo = amps
            .iter()
            .map(|r| r.iter().map(|g| g.norm_sqr()).collect())
            .collect();
        Ok(Self {
            j_axis,
            t_axis,
            phase,
            echo,
        })
    }

    /// Samples the closed-form amplitude at mass `m` over
    /// `J ∈ [j_range.0, j_range.1]` and `t ∈ [t_range.0, t_range.1]`, split
    /// into `j_intervals × t_intervals` cells.
    pub fn analytic(
        m: f64,
        j_range: (f64, f64),
        t_range: (f64, f64),
        j_intervals: usize,
        t_intervals: usize,
    ) -> Result<Self> {
        if j_intervals == 0 || t_intervals == 0 {
            return Err(Error::InvalidGrid(
                "grid needs at least one cell per axis".into(),
            ));
        }
        if !(j_range.0 < j_range.1 && t_range.0 < t_range.1) {
            return Err(Error::InvalidGrid("axis ranges must be increasing".into()));
        }
        let j_axis = linspace(j_range.0, j_range.1, j_intervals);
        let t_axis = linspace(t_range.0, t_range.1, t_intervals);
        let amps = j_axis
            .par_iter()
            .map(|&j| {
                let p = ModelParams::new(m, j)?;
                Ok(t_axis.iter().map(|&t| analytic_amplitude(&p, t)).collect())
            })
            .collect::<Result<Vec<Vec<C64>>>>()?;
        Self::from_amplitudes(j_axis, t_axis, &amps)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.j_axis.len(), self.t_axis.len())
    }

    pub fn spacing(&self) -> (f64, f64) {
        let d = |a: &[f64]| if a.len() > 1 { a[1] - a[0] } else { 0.0 };
        (d(&self.j_axis), d(&self.t_axis))
    }

    fn defined_phase(&self, (i, k): (usize, usize)) -> Result<f64> {
        let echo = self.echo[i][k];
        if echo < PHASE_EPS {
            return Err(Error::UndefinedPhase {
                j_index: i,
                t_index: k,
                echo,
            });
        }
        Ok(self.phase[i][k])
    }
}

/// Closed path of grid indices `(j_index, t_index)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindingLoop {
    points: Vec<(usize, usize)>,
}

impl WindingLoop {
    pub fn new(points: Vec<(usize, usize)>) -> Result<Self> {
        if points.len() < 5 {
            return Err(Error::InvalidLoop(format!(
                "a closed loop needs at least 5 points, got {}",
                points.len()
            )));
        }
        if points.first() != points.last() {
            return Err(Error::InvalidLoop("first and last points differ".into()));
        }
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a.0.abs_diff(b.0) + a.1.abs_diff(b.1) != 1 {
                return Err(Error::InvalidLoop(format!(
                    "{a:?} and {b:?} are not grid neighbors"
                )));
            }
        }
        Ok(Self { points })
    }

    /// Counterclockwise boundary of the cell with lower-left corner `(i, k)`
    /// (J horizontal, t vertical).
    pub fn plaquette(i: usize, k: usize) -> Self {
        Self::rectangle((i, k), (i + 1, k + 1)).expect("unit cell is a valid loop")
    }

    /// Counterclockwise boundary of the rectangle with corners `lo`, `hi`.
    pub fn rectangle(lo: (usize, usize), hi: (usize, usize)) -> Result<Self> {
        if lo.0 >= hi.0 || lo.1 >= hi.1 {
            return Err(Error::InvalidLoop(format!(
                "degenerate rectangle {lo:?}..{hi:?}"
            )));
        }
        let mut pts = Vec::new();
        pts.extend((lo.0..hi.0).map(|i| (i, lo.1)));
        pts.extend((lo.1..hi.1).map(|k| (hi.0, k)));
        pts.extend((lo.0 + 1..=hi.0).rev().map(|i| (i, hi.1)));
        pts.extend((lo.1 + 1..=hi.1).rev().map(|k| (lo.0, k)));
        pts.push(lo);
        Self::new(pts)
    }

    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }
}

/// Circulation of the phase around `lp`, counterclockwise positive.
pub fn winding_number(field: &PhaseField, lp: &WindingLoop) -> Result<i64> {
    let (nj, nt) = field.shape();
    if let Some(p) = lp.points().iter().find(|p| p.0 >= nj || p.1 >= nt) {
        return Err(Error::InvalidLoop(format!(
            "point {p:?} outside {nj}×{nt} grid"
        )));
    }
    let phases = lp
        .points()
        .iter()
        .map(|&p| field.defined_phase(p))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = phases.windows(2).map(|w| wrap_phase(w[1] - w[0])).sum();
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Winding of one elementary cell; `winding` is `None` when a corner has
/// an undefined phase.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaquetteWinding {
    pub j_index: usize,
    pub t_index: usize,
    /// Cell centre.
    pub j: f64,
    pub t: f64,
    pub winding: Option<i64>,
}

/// Evaluates every elementary cell of the field.
pub fn scan_plaquettes(field: &PhaseField) -> Vec<PlaquetteWinding> {
    let (nj, nt) = field.shape();
    let mut out = Vec::with_capacity(nj.saturating_sub(1) * nt.saturating_sub(1));
    for i in 0..nj.saturating_sub(1) {
        for k in 0..nt.saturating_sub(1) {
            let winding = winding_number(field, &WindingLoop::plaquette(i, k)).ok();
            out.push(PlaquetteWinding {
                j_index: i,
                t_index: k,
                j: 0.5 * (field.j_axis[i] + field.j_axis[i + 1]),
                t: 0.5 * (field.t_axis[k] + field.t_axis[k + 1]),
                winding,
            });
        }
    }
    out
}
