use anyhow::Context;

use dqpt_core::circuits::{build_evolution, run_marked};
use dqpt_core::fit::target_to_json;
use dqpt_core::noise::{run_density_matrix, sample_trajectories, Trajectory};
use dqpt_core::qcore::{DensityMatrix, StateVector, C64};
use dqpt_core::schwinger::{
    diagonalize, quenched_amplitudes, EigenLabel, LoschmidtSeries, RateSeries, Spectrum,
    DEFAULT_N_DOF,
};

use crate::config::{Mode, RunConfig};
use crate::error::CliResult;
use crate::output::{report, Outputs};
use crate::series::{series_csv, validate_series_csv, SeriesRow};
use crate::svg::{line_plot, Series};

const LABELS: [EigenLabel; 4] = [
    EigenLabel::G,
    EigenLabel::E,
    EigenLabel::EBar,
    EigenLabel::GBar,
];

/// Overlaps in `(g, e, ē, ḡ)` order.
type Overlaps = [f64; 4];

fn pure_rows(
    times: &[f64],
    amplitude: Vec<C64>,
    overlaps: &[Overlaps],
) -> CliResult<Vec<SeriesRow>> {
    let series = LoschmidtSeries::from_amplitudes(times.to_vec(), amplitude, DEFAULT_N_DOF)?;
    Ok((0..times.len())
        .map(|i| SeriesRow {
            t: times[i],
            echo: series.echo[i],
            overlap_e: overlaps[i][1],
            overlap_ebar: overlaps[i][2],
            overlap_gbar: overlaps[i][3],
            phase: Some(series.phase[i]),
            rate: series.rate.values[i],
        })
        .collect())
}

fn analytic(cfg: &RunConfig) -> CliResult<Vec<SeriesRow>> {
    let p = cfg.params()?;
    let times = cfg.times();
    // amplitudes come in (e, ē, g, ḡ) order
    let amps: Vec<[C64; 4]> = times.iter().map(|&t| quenched_amplitudes(&p, t)).collect();
    let overlaps: Vec<Overlaps> = amps
        .iter()
        .map(|a| {
            [
                a[2].norm_sqr(),
                a[0].norm_sqr(),
                a[1].norm_sqr(),
                a[3].norm_sqr(),
            ]
        })
        .collect();
    pure_rows(&times, amps.iter().map(|a| a[2]).collect(), &overlaps)
}

fn noiseless(cfg: &RunConfig, spec: &Spectrum) -> CliResult<Vec<SeriesRow>> {
    let c = build_evolution(&cfg.params()?, cfg.dt, cfg.steps)?;
    let states = run_marked(&c, &StateVector::zero(4))?;
    let eig: Vec<StateVector> = LABELS.iter().map(|&l| spec.state(l).embedded()).collect();
    let start = states[0].clone();
    let amplitude = states
        .iter()
        .map(|s| start.inner(s))
        .collect::<Result<Vec<_>, _>>()?;
    let overlaps = states
        .iter()
        .map(|s| {
            let mut o = [0.0; 4];
            for (k, v) in eig.iter().enumerate() {
                o[k] = v.inner(s)?.norm_sqr();
            }
            Ok(o)
        })
        .collect::<CliResult<Vec<Overlaps>>>()?;
    pure_rows(&cfg.times(), amplitude, &overlaps)
}

fn noisy_trajectory(cfg: &RunConfig) -> CliResult<Trajectory> {
    let c = build_evolution(&cfg.params()?, cfg.dt, cfg.steps)?;
    let nm = cfg.noise()?;
    Ok(match cfg.mode {
        Mode::TrotterSampled => sample_trajectories(
            &c,
            &nm,
            &StateVector::zero(4),
            cfg.realizations,
            cfg.seed,
            1,
        )?,
        _ => run_density_matrix(&c, &nm, &DensityMatrix::zero_state(4), 1)?,
    })
}

fn mixed_rows(traj: &Trajectory, spec: &Spectrum) -> CliResult<Vec<SeriesRow>> {
    let eig: Vec<StateVector> = LABELS.iter().map(|&l| spec.state(l).embedded()).collect();
    let overlaps = traj
        .states
        .iter()
        .map(|rho| {
            let mut o = [0.0; 4];
            for (k, v) in eig.iter().enumerate() {
                o[k] = rho.expectation_pure(v)?;
            }
            Ok(o)
        })
        .collect::<CliResult<Vec<Overlaps>>>()?;
    let echo: Vec<f64> = overlaps.iter().map(|o| o[0].clamp(0.0, 1.0)).collect();
    let rate = RateSeries::from_echo(&echo, DEFAULT_N_DOF)?;
    Ok(traj
        .times
        .iter()
        .enumerate()
        .map(|(i, &t)| SeriesRow {
            t,
            echo: echo[i],
            overlap_e: overlaps[i][1],
            overlap_ebar: overlaps[i][2],
            overlap_gbar: overlaps[i][3],
            phase: None,
            rate: rate.values[i],
        })
        .collect())
}

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let spec = diagonalize(&cfg.params()?);
    let mut out = Outputs::default();
    let name = cfg.mode.name();
    let rows = match cfg.mode {
        Mode::Analytic => analytic(cfg)?,
        Mode::TrotterNoiseless => noiseless(cfg, &spec)?,
        Mode::TrotterNoisy | Mode::TrotterSampled => {
            let traj = noisy_trajectory(cfg)?;
            out.add(format!("trajectory_{name}.json"), target_to_json(&traj));
            mixed_rows(&traj, &spec)?
        }
    };
    let csv = series_csv(&rows);
    validate_series_csv(&csv).context("series failed validation")?;
    out.add(format!("evolve_{name}.csv"), csv);
    if cfg.svg {
        let pick = |f: fn(&SeriesRow) -> f64| rows.iter().map(|r| (r.t, f(r))).collect::<Vec<_>>();
        let overlaps = [
            Series {
                name: "echo (g)",
                points: pick(|r| r.echo),
            },
            Series {
                name: "e",
                points: pick(|r| r.overlap_e),
            },
            Series {
                name: "ebar",
                points: pick(|r| r.overlap_ebar),
            },
            Series {
                name: "gbar",
                points: pick(|r| r.overlap_gbar),
            },
        ];
        let title = format!("Eigenstate overlaps, {name}");
        out.add(
            format!("evolve_{name}.svg"),
            line_plot(&title, "t", "overlap", &overlaps, Some((0.0, 1.0))),
        );
        let rate = [Series {
            name: "rate",
            points: pick(|r| r.rate),
        }];
        out.add(
            format!("rate_{name}.svg"),
            line_plot(
                &format!("Rate function, {name}"),
                "t",
                "lambda(t)",
                &rate,
                None,
            ),
        );
    }
    let (t_min, e_min) = rows
        .iter()
        .map(|r| (r.t, r.echo))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one row");
    println!(
        "mode {name}: {} rows, minimum echo {e_min:.6} at t = {t_min:.4}",
        rows.len()
    );
    report(&out.write_all(&cfg.out)?);
    Ok(())
}
