//! Noise-parameter estimation: trace-distance objectives between
//! trajectories, parallel grid sweeps over two flip probabilities,
//! surface export/interpolation and minimum location.

mod objective;
mod result;
mod sweep;
mod target;

pub use objective::{averaged_trace_distance, TIME_TOL};
pub use result::{locate_minimum, FitResult, ValleyCell, VALLEY_TOL};
pub use sweep::{
    grid_sweep, simulate_point, DistanceSurface, GridSpec, Objective, Provenance, SweepConfig,
};
pub use target::{target_from_json, target_to_json, tomographic_target};
