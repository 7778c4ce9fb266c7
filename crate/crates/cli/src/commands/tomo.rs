use anyhow::Context;

use dqpt_core::circuits::build_evolution;
use dqpt_core::fit::{target_to_json, tomographic_target};
use dqpt_core::noise::run_density_matrix;
use dqpt_core::qcore::{trace_distance, DensityMatrix};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{report, Outputs};
use crate::series::{time_field, validate_tomo_csv, TOMO_HEADER};
use crate::svg::{line_plot, Series};

/// Noisy evolution followed by finite-shot tomography of every recorded
/// state, with readout flips at the model's rate.
pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let nm = cfg.noise()?;
    let c = build_evolution(&cfg.params()?, cfg.dt, cfg.steps)?;
    let exact = run_density_matrix(&c, &nm, &DensityMatrix::zero_state(4), 1)?;
    let measured = tomographic_target(&exact, nm.readout_flip, cfg.shots, cfg.seed)?;

    let mut csv = format!("{TOMO_HEADER}\n");
    let mut distance = Vec::with_capacity(exact.len());
    for ((t, rho), est) in exact.times.iter().zip(&exact.states).zip(&measured.states) {
        let d = trace_distance(rho, est)?;
        csv.push_str(&format!(
            "{},{d},{},{}\n",
            time_field(*t),
            rho.purity(),
            est.purity()
        ));
        distance.push((*t, d));
    }
    validate_tomo_csv(&csv).context("tomography table failed validation")?;

    let mut out = Outputs::default();
    out.add("tomo.csv", csv);
    out.add("tomo_target.json", target_to_json(&measured));
    if cfg.svg {
        let s = [Series {
            name: "T(rho, rho_est)",
            points: distance.clone(),
        }];
        out.add(
            "tomo.svg",
            line_plot("Tomography error", "t", "trace distance", &s, None),
        );
    }
    let worst = distance.iter().map(|d| d.1).fold(0.0, f64::max);
    println!(
        "{} states, {} shots per setting: max trace distance {worst:.4}",
        distance.len(),
        cfg.shots
    );
    report(&out.write_all(&cfg.out)?);
    Ok(())
}
