use std::f64::consts::PI;

use serde::Serialize;

use super::{quenched_block_hamiltonian, ModelParams};
use crate::qcore::C64;
use crate::{Error, Result};

/// Echo values below this are clamped when taking the logarithm.
pub const ECHO_FLOOR: f64 = 1e-15;

/// Default number of degrees of freedom normalizing the rate function
/// (one per matter site).
pub const DEFAULT_N_DOF: usize = 2;

/// `𝒢(t) = ⟨ψ_g| e^{−i H(−m,J) t} |ψ_g⟩` in closed form.
///
/// Within the even sector the quenched Hamiltonian has eigenvalues
/// `±s`, `s = √(m²+J²)`, and `ψ_g` overlaps the `+s` state with weight
/// `m²/s²`, hence `𝒢 = (m² e^{−ist} + J² e^{ist}) / s²`.
pub fn analytic_amplitude(p: &ModelParams, t: f64) -> C64 {
    let s = p.gap();
    let (wp, wm) = (p.m * p.m / (s * s), p.j * p.j / (s * s));
    C64::from_polar(wp, -s * t) + C64::from_polar(wm, s * t)
}

/// `⟨k| e^{−i H(−m,J) t} |ψ_g⟩` for `k = (e, ē, g, ḡ)`, the pre-quench
/// eigenbasis. The odd amplitudes vanish; the even block is traceless with
/// eigenvalues `±s`, so its propagator is `cos(st) − i sin(st) H/s`.
pub fn quenched_amplitudes(p: &ModelParams, t: f64) -> [C64; 4] {
    let even = quenched_block_hamiltonian(p).even;
    let s = p.gap();
    let (c, sn) = ((s * t).cos(), (s * t).sin());
    let zero = C64::new(0.0, 0.0);
    [
        zero,
        zero,
        C64::new(c, -sn * even[(0, 0)] / s),
        C64::new(0.0, -sn * even[(1, 0)] / s),
    ]
}

/// Amplitude, echo, phase and rate on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoschmidtSeries {
    pub times: Vec<f64>,
    pub amplitude: Vec<C64>,
    pub echo: Vec<f64>,
    /// `arg 𝒢` in `(−π, π]`.
    pub phase: Vec<f64>,
    pub rate: RateSeries,
}

impl LoschmidtSeries {
    /// Builds the derived fields from raw amplitudes.
    pub fn from_amplitudes(times: Vec<f64>, amplitude: Vec<C64>, n_dof: usize) -> Result<Self> {
        if times.len() != amplitude.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                actual: amplitude.len(),
            });
        }
        let echo: Vec<f64> = amplitude.iter().map(|g| g.norm_sqr().min(1.0)).collect();
        let phase = amplitude.iter().map(|g| wrap_phase(g.arg())).collect();
        let rate = RateSeries::from_echo(&echo, n_dof)?;
        Ok(Self {
            times,
            amplitude,
            echo,
            phase,
            rate,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_dof(&self) -> usize {
        self.rate.n_dof
    }
}

/// `λ(t) = −ln ℒ(t) / n_dof`, clamped at [`ECHO_FLOOR`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateSeries {
    pub values: Vec<f64>,
    /// `true` where the echo fell below the floor (a divergence).
    pub clamped: Vec<bool>,
    pub n_dof: usize,
}

impl RateSeries {
    pub fn from_echo(echo: &[f64], n_dof: usize) -> Result<Self> {
        if n_dof == 0 {
            return Err(Error::InvalidParams("n_dof must be positive".into()));
        }
        let n = n_dof as f64;
        let mut values = Vec::with_capacity(echo.len());
        let mut clamped = Vec::with_capacity(echo.len());
        for &l in echo {
            if !(l.is_finite() && l <= 1.0 + 1e-9) {
                return Err(Error::InvalidState(format!("echo {l} outside [0, 1]")));
            }
            let floor = l < ECHO_FLOOR;
            let l = if floor { ECHO_FLOOR } else { l.min(1.0) };
            // -ln(1) is -0.0; report a clean zero
            values.push((-l.ln() / n).max(0.0));
            clamped.push(floor);
        }
        Ok(Self {
            values,
            clamped,
            n_dof,
        })
    }

    pub fn any_clamped(&self) -> bool {
        self.clamped.iter().any(|&c| c)
    }
}

/// Analytic series at the default `n_dof`.
pub fn analytic_loschmidt(p: &ModelParams, times: &[f64]) -> Result<LoschmidtSeries> {
    analytic_loschmidt_with(p, times, DEFAULT_N_DOF)
}

pub fn analytic_loschmidt_with(
    p: &ModelParams,
    times: &[f64],
    n_dof: usize,
) -> Result<LoschmidtSeries> {
    p.validate()?;
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidParams(format!(
            "time {t} must be finite and non-negative"
        )));
    }
    let amps = times.iter().map(|&t| analytic_amplitude(p, t)).collect();
    LoschmidtSeries::from_amplitudes(times.to_vec(), amps, n_dof)
}

/// Recomputes the rate function of a series.
pub fn rate_function(series: &LoschmidtSeries) -> RateSeries {
    RateSeries::from_echo(&series.echo, series.n_dof()).expect("series echo already validated")
}

/// Time of the `index`-th exact zero of the echo. Exact zeros exist only
/// for `J = m`.
pub fn dqpt_times(p: &ModelParams, index: usize) -> Result<f64> {
    p.validate()?;
    if (p.j - p.m).abs() > 1e-12 * p.m.max(1.0) {
        return Err(Error::NoExactDqpt { m: p.m, j: p.j });
    }
    Ok((2 * index + 1) as f64 * PI / (2.0 * p.gap()))
}

/// Maps an angle into `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ModelParams {
        ModelParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn quenched_amplitudes_carry_the_loschmidt_amplitude() {
        for (m, j) in [(1.0, 1.0), (0.4, 2.5), (3.0, 0.2)] {
            let p = ModelParams::new(m, j).unwrap();
            for t in [0.0, 0.3, 1.7, 6.0] {
                let a = quenched_amplitudes(&p, t);
                assert!((a[2] - analytic_amplitude(&p, t)).norm() < 1e-13);
                let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn echo_at_transition() {
        let s = analytic_loschmidt(&unit(), &[0.0, 0.5]).unwrap();
        assert!((s.amplitude[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(s.phase[0].abs() < 1e-12);
        assert!(s.rate.values[0].abs() < 1e-12);
        // 0.5779718..., quoted elsewhere as 0.577973
        assert!((s.echo[1] - 0.577973).abs() < 2e-6);
        assert!((s.echo[1] - (2f64.sqrt() * 0.5).cos().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn dqpt_time_values() {
        assert!((dqpt_times(&unit(), 0).unwrap() - 1.110721).abs() < 1e-6);
        assert!((dqpt_times(&unit(), 1).unwrap() - 3.332162).abs() < 1e-6);
        let p2 = ModelParams::new(2.0, 2.0).unwrap();
        assert!((dqpt_times(&p2, 0).unwrap() - 0.555360).abs() < 1e-6);
        let off = ModelParams::new(1.0, 1.1).unwrap();
        assert!(matches!(
            dqpt_times(&off, 0),
            Err(Error::NoExactDqpt { .. })
        ));
    }

    #[test]
    fn rate_definition_and_clamp() {
        let r = RateSeries::from_echo(&[1.0, (-2.0f64).exp(), 0.0], 2).unwrap();
        assert_eq!(r.values[0], 0.0);
        assert!((r.values[1] - 1.0).abs() < 1e-15);
        assert!(r.clamped[2] && !r.clamped[1]);
        assert!((r.values[2] - (-ECHO_FLOOR.ln() / 2.0)).abs() < 1e-12);
        let t0 = dqpt_times(&unit(), 0).unwrap();
        let s = analytic_loschmidt(&unit(), &[t0]).unwrap();
        assert!(s.rate.clamped[0]);
        assert!(RateSeries::from_echo(&[1.5], 2).is_err());
    }

    #[test]
    fn rejects_negative_time() {
        assert!(analytic_loschmidt(&unit(), &[-0.1]).is_err());
    }

    #[test]
    fn phase_wrapping() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_phase(0.1) - 0.1).abs() < 1e-15);
    }
}
