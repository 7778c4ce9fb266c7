use anyhow::anyhow;

use dqpt_core::circuits::{
    build_evolution, build_ground_prep, build_trotter_step, build_trotter_steps, export_qasm,
    moments, parse_qasm, validate_layout, Circuit, CouplingMap, ScheduleMode,
};
use dqpt_core::qcore::max_abs_diff;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{report, Outputs};

const ROUND_TRIP_TOL: f64 = 1e-10;

/// Exports `c` and checks the text parses back to the same unitary.
fn checked_qasm(c: &Circuit) -> CliResult<String> {
    let text = export_qasm(c)?;
    let back = parse_qasm(&text)?;
    let dev = max_abs_diff(&back.unitary(), &c.unitary());
    if dev >= ROUND_TRIP_TOL {
        return Err(anyhow!("{} does not round-trip (deviation {dev:e})", c.meta.name).into());
    }
    Ok(text)
}

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let p = cfg.params()?;
    let mut out = Outputs::default();
    out.add("ground_prep.qasm", checked_qasm(&build_ground_prep(&p)?)?);
    let evolution = build_evolution(&p, cfg.dt, cfg.steps)?;
    out.add(
        format!("evolution_{}.qasm", cfg.steps),
        checked_qasm(&evolution)?,
    );

    if cfg.moments {
        let q = p.quenched();
        let step = moments(
            &build_trotter_step(&q, cfg.dt)?,
            ScheduleMode::FigureFaithful,
        )
        .depth();
        println!("depth per Trotter step (figure_faithful): {step}");
        if cfg.steps > 0 {
            let all = moments(
                &build_trotter_steps(&q, cfg.dt, cfg.steps)?,
                ScheduleMode::FigureFaithful,
            )
            .depth();
            println!("depth of {} steps (figure_faithful): {all}", cfg.steps);
        }
        println!(
            "depth of full program (greedy): {}",
            moments(&evolution, ScheduleMode::Greedy).depth()
        );
        for (gate, n) in evolution.gate_counts() {
            println!("  {gate}: {n}");
        }
        let layout = validate_layout(&evolution, &CouplingMap::linear(4));
        println!(
            "two-qubit gates off a linear chain: {}",
            layout.violations.len()
        );
    }
    report(&out.write_all(&cfg.out)?);
    Ok(())
}
