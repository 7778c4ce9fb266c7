use crate::noise::Trajectory;
use crate::qcore::trace_distance;
use crate::{Error, Result};

/// Time grids are compared to this absolute tolerance.
pub const TIME_TOL: f64 = 1e-9;

/// `(1/k) Σ_{i<k} T(ρ_a(t_i), ρ_b(t_i))` over the first `k` samples.
pub fn averaged_trace_distance(a: &Trajectory, b: &Trajectory, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if a.len() < k || b.len() < k {
        return Err(Error::TimeGridMismatch(format!(
            "need {k} samples, trajectories have {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut total = 0.0;
    for i in 0..k {
        if (a.times[i] - b.times[i]).abs() > TIME_TOL {
            return Err(Error::TimeGridMismatch(format!(
                "sample {i}: t = {} vs {}",
                a.times[i], b.times[i]
            )));
        }
        total += trace_distance(&a.states[i], &b.states[i])?;
    }
    Ok(total / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::build_evolution;
    use crate::noise::{run_density_matrix, FlipProbs, NoiseModelSpec};
    use crate::qcore::DensityMatrix;
    use crate::schwinger::ModelParams;

    fn traj(nm: &NoiseModelSpec) -> Trajectory {
        let c = build_evolution(&ModelParams::new(1.0, 1.0).unwrap(), 0.1, 4).unwrap();
        run_density_matrix(&c, nm, &DensityMatrix::zero_state(4), 1).unwrap()
    }

    #[test]
    fn identical_trajectories_give_zero() {
        let t = traj(&NoiseModelSpec::split_xz(0.01, 0.02).unwrap());
        for k in 1..=5 {
            assert_eq!(averaged_trace_distance(&t, &t, k).unwrap(), 0.0);
        }
    }

    #[test]
    fn grows_with_window() {
        let clean = traj(&NoiseModelSpec::noiseless());
        let noisy =
            traj(&NoiseModelSpec::abc_shared(FlipProbs::new(0.011, 0.0, 0.015).unwrap()).unwrap());
        let k1 = averaged_trace_distance(&clean, &noisy, 1).unwrap();
        assert!((k1 - trace_distance(&clean.states[0], &noisy.states[0]).unwrap()).abs() < 1e-15);
        let mut prev = 0.0;
        for k in 1..=3 {
            let v = averaged_trace_distance(&clean, &noisy, k).unwrap();
            assert!(v > 0.0 && v >= prev);
            prev = v;
        }
    }

    #[test]
    fn mismatched_grids() {
        let a = traj(&NoiseModelSpec::noiseless());
        let mut b = a.clone();
        b.times[1] += 0.01;
        assert!(matches!(
            averaged_trace_distance(&a, &b, 3),
            Err(Error::TimeGridMismatch(_))
        ));
        assert!(averaged_trace_distance(&a, &a.truncated(2), 3).is_err());
        assert!(averaged_trace_distance(&a, &a, 0).is_err());
    }
}
