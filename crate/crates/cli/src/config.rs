use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use dqpt_core::noise::{NoiseModelSpec, Preset};
use dqpt_core::schwinger::ModelParams;

use crate::error::{CliError, CliResult};

/// How `evolve` produces the state at each time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Analytic,
    TrotterNoiseless,
    TrotterNoisy,
    TrotterSampled,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Analytic => "analytic",
            Mode::TrotterNoiseless => "trotter-noiseless",
            Mode::TrotterNoisy => "trotter-noisy",
            Mode::TrotterSampled => "trotter-sampled",
        }
    }
}

/// Every run option, as flat TOML keys. Missing keys take the defaults
/// below, which reproduce the headline run: `m = J = 1`, `Δt = 0.1`,
/// 40 steps, `split_xz` noise at `(p1, p2) = (0.01, 0.016)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub m: f64,
    pub j: f64,
    pub dt: f64,
    pub steps: usize,

    pub mode: Mode,
    pub preset: Preset,
    /// First and second preset axis (`p_x`, `p_z` for `abc_shared`).
    pub p1: f64,
    pub p2: f64,
    /// `p_y` of the `abc_shared` preset.
    pub p_y: f64,
    /// Reset/readout flip; defaults to the single-qubit `p_x`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub readout_flip: Option<f64>,
    /// Multiplies every noise probability.
    pub noise_scale: f64,

    pub seed: u64,
    pub realizations: usize,
    pub shots: u64,

    pub out: PathBuf,
    pub svg: bool,

    // fit
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<PathBuf>,
    pub k: usize,
    pub grid_start: [f64; 2],
    pub grid_step: f64,
    pub grid_count: usize,
    /// Trajectories per grid node; 0 uses exact channels.
    pub sweep_realizations: usize,
    /// Pass simulated states through the readout flips before comparing.
    pub measured: bool,

    // winding
    pub j_range: [f64; 2],
    pub t_range: [f64; 2],
    pub j_intervals: usize,
    pub t_intervals: usize,

    // export
    pub moments: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            m: 1.0,
            j: 1.0,
            dt: 0.1,
            steps: 40,
            mode: Mode::Analytic,
            preset: Preset::SplitXz,
            p1: 0.01,
            p2: 0.016,
            p_y: 0.0,
            readout_flip: None,
            noise_scale: 1.0,
            seed: 0,
            realizations: 10,
            shots: 8192,
            out: PathBuf::from("out"),
            svg: true,
            target: None,
            k: 3,
            grid_start: [0.0, 0.0],
            grid_step: 1e-3,
            grid_count: 31,
            sweep_realizations: 0,
            measured: false,
            j_range: [0.9, 1.1],
            t_range: [1.0, 1.25],
            j_intervals: 21,
            t_intervals: 25,
            moments: false,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl RunConfig {
    /// Layers `overrides` (already TOML values) over the file at `path`.
    pub fn load(path: Option<&Path>, overrides: toml::Table) -> CliResult<Self> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", p.display())))?;
                text.parse::<toml::Table>()
                    .map_err(|e| usage(format!("config {}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        table.extend(overrides);
        let cfg: RunConfig = toml::Value::Table(table).try_into().map_err(usage)?;
        cfg.validate()?;
        Ok(cfg)
    }

    #[cfg(test)]
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(usage)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical serialization: every key, fixed order.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> CliResult<()> {
        self.params()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(usage(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.noise_scale.is_finite() && self.noise_scale >= 0.0) {
            return Err(usage(format!(
                "noise_scale must be non-negative, got {}",
                self.noise_scale
            )));
        }
        self.noise()?;
        if self.realizations == 0 || self.shots == 0 {
            return Err(usage("realizations and shots must be positive"));
        }
        if self.k == 0
            || self.grid_count == 0
            || !(self.grid_step.is_finite() && self.grid_step > 0.0)
        {
            return Err(usage("k and grid_count must be positive, grid_step > 0"));
        }
        if !(self.j_range[0] < self.j_range[1] && self.t_range[0] < self.t_range[1]) {
            return Err(usage("j_range and t_range must be increasing"));
        }
        if self.j_range[0] < 0.0 || self.t_range[0] < 0.0 {
            return Err(usage("j_range and t_range must be non-negative"));
        }
        if self.j_intervals == 0 || self.t_intervals == 0 {
            return Err(usage("j_intervals and t_intervals must be positive"));
        }
        Ok(())
    }

    pub fn params(&self) -> CliResult<ModelParams> {
        ModelParams::new(self.m, self.j).map_err(usage)
    }

    pub fn noise(&self) -> CliResult<NoiseModelSpec> {
        let mut nm = self
            .preset
            .model(self.p1, self.p2, self.p_y)
            .map_err(usage)?;
        if let Some(r) = self.readout_flip {
            nm = nm.with_readout_flip(r).map_err(usage)?;
        }
        nm.scaled(self.noise_scale).map_err(usage)
    }

    /// Recorded times `0, Δt, …, steps·Δt`.
    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| i as f64 * self.dt).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn canonical_form_round_trips() {
        let cfg = RunConfig::from_toml(
            "m = 0.5\nmode = \"trotter-sampled\"\npreset = \"abc_shared\"\nreadout_flip = 0.02\ntarget = \"t.json\"\n",
        )
        .unwrap();
        let text = cfg.to_toml();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_toml(), text);
    }

    #[test]
    fn unknown_keys_and_modes_are_usage_errors() {
        for bad in [
            "colour = 1",
            "mode = \"trotter\"",
            "m = -1.0",
            "p1 = 0.9\np2 = 0.9",
        ] {
            assert!(
                matches!(RunConfig::from_toml(bad), Err(CliError::Usage(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn overrides_beat_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "steps = 7\ndt = 0.2\n").unwrap();
        let mut over = toml::Table::new();
        over.insert("steps".into(), toml::Value::Integer(3));
        let cfg = RunConfig::load(Some(&path), over).unwrap();
        assert_eq!((cfg.steps, cfg.dt), (3, 0.2));
    }
}
