use anyhow::Context;

use dqpt_core::fit::{grid_sweep, locate_minimum, target_from_json, GridSpec, SweepConfig};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{report, Outputs};
use crate::series::validate_surface_csv;
use crate::svg::map_plot;

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let path = cfg.target.as_ref().ok_or_else(|| {
        CliError::Usage("fit needs a target file (--target or `target` key)".into())
    })?;
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading target {}", path.display()))?;
    let target = target_from_json(&text).with_context(|| format!("target {}", path.display()))?;

    let mut grid = GridSpec::square(cfg.preset, cfg.grid_start, cfg.grid_step, cfg.grid_count);
    grid.fixed_py = cfg.p_y;
    let sweep = SweepConfig {
        measured: cfg.measured,
        sampling: (cfg.sweep_realizations > 0).then_some((cfg.sweep_realizations, cfg.seed)),
        target_id: path.display().to_string(),
        ..SweepConfig::exact(cfg.preset, cfg.params()?, cfg.dt, cfg.k)
    };
    let surface = grid_sweep(&grid, &target, &sweep)?;
    let fit = locate_minimum(&surface);

    let mut out = Outputs::default();
    let csv = surface.to_csv();
    validate_surface_csv(&csv, grid.len()).context("surface failed validation")?;
    out.add("surface.csv", csv);
    let mut json = fit.to_json();
    json.push('\n');
    print!("{json}");
    out.add("fit.json", json);
    if cfg.svg {
        let [xs, ys] = surface.axes();
        let [a, b] = &grid.axis_names;
        out.add(
            "surface.svg",
            map_plot(
                "Averaged trace distance",
                a,
                b,
                &xs,
                &ys,
                &surface.values,
                8,
                &[fit.point(&surface).into()],
            ),
        );
    }
    report(&out.write_all(&cfg.out)?);
    Ok(())
}
