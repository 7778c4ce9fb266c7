//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so every criterion is
//! reported even when an earlier one fails. Criteria listed in
//! `KNOWN_FAILURES` are evaluated unchanged and still print FAIL; the
//! process exits non-zero on any other failure, or if a known failure
//! starts passing.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use dqpt_core::circuits::{
    build_evolution, build_ground_prep, build_trotter_step, build_trotter_steps, hopping_block,
    moments, run_marked, run_statevector, Circuit, ScheduleMode,
};
use dqpt_core::fit::{
    grid_sweep, locate_minimum, simulate_point, tomographic_target, GridSpec, SweepConfig,
};
use dqpt_core::noise::{
    reconstruct_exact, reconstruct_state, run_density_matrix, simulate_tomography, FlipProbs,
    NoiseModelSpec, Preset,
};
use dqpt_core::qcore::{
    fidelity, max_abs_diff, trace_distance, CMatrix, DensityMatrix, StateVector, C64,
};
use dqpt_core::schwinger::{
    analytic_loschmidt, build_physical_hamiltonian, diagonalize, dqpt_times, physical_population,
    scan_plaquettes, BasisState, ModelParams, PhaseField,
};

/// Fails by construction; see the note in `trotter_order`.
const KNOWN_FAILURES: &[usize] = &[4];

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn unit() -> ModelParams {
    ModelParams::new(1.0, 1.0).unwrap()
}

/// Eigenpairs of a real symmetric 4×4 matrix, ascending.
fn numeric_eigen(h: Matrix4<f64>) -> Vec<(f64, Vector4<f64>)> {
    let e = SymmetricEigen::new(h);
    let mut pairs: Vec<_> = (0..4)
        .map(|i| (e.eigenvalues[i], e.eigenvectors.column(i).into_owned()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// `⟨g|exp(−iH(−m,J)t)|g⟩` with `g` the numerically found ground state of
/// `H(m,J)`; shares nothing with the closed forms beyond the Hamiltonian.
fn oracle_amplitude(p: &ModelParams, t: f64) -> C64 {
    let g = numeric_eigen(build_physical_hamiltonian(p))[0].1;
    numeric_eigen(build_physical_hamiltonian(&p.quenched()))
        .iter()
        .map(|(e, v)| C64::from_polar(v.dot(&g).powi(2), -e * t))
        .sum()
}

fn criterion_1() -> Outcome {
    let ev: Vec<f64> = numeric_eigen(build_physical_hamiltonian(&unit()))
        .iter()
        .map(|p| p.0)
        .collect();
    let want = [-2f64.sqrt(), -1.0, 1.0, 2f64.sqrt()];
    let unit_err = ev
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = 5.0 * (1.0 - rng.random::<f64>());
        let j = 5.0 * (1.0 - rng.random::<f64>());
        let p = ModelParams::new(m, j).unwrap();
        let s = m.hypot(j);
        let mut closed = [-s, -m, m, s];
        closed.sort_by(f64::total_cmp);
        let ev: Vec<f64> = numeric_eigen(build_physical_hamiltonian(&p))
            .iter()
            .map(|p| p.0)
            .collect();
        let spec = diagonalize(&p).eigenvalues();
        for k in 0..4 {
            worst = worst
                .max((ev[k] - closed[k]).abs())
                .max((spec[k] - closed[k]).abs());
        }
    }
    check(
        unit_err < 1e-10 && worst < 1e-9,
        format!("m=J=1 max error {unit_err:.1e}; 100 random (m,J) max error {worst:.1e}"),
    )
}

fn criterion_2() -> Outcome {
    let p = unit();
    let psi = run_statevector(&build_ground_prep(&p).unwrap(), &StateVector::zero(4)).unwrap();
    let g = numeric_eigen(build_physical_hamiltonian(&p))[0].1;
    let sign = if g[1] < 0.0 { -1.0 } else { 1.0 };
    let amps = BasisState::ALL.map(|s| psi.amplitudes()[s.encoding()]);
    let f = fidelity(
        &diagonalize(&p).ground().embedded(),
        &psi.to_density_matrix(),
    )
    .unwrap();
    let (a, b) = (amps[1].re, amps[2].re);
    let r3 = |x: f64| (x * 1000.0).round() / 1000.0;
    let oracle_overlap: f64 = (0..4)
        .map(|i| sign * g[i] * amps[i].re)
        .sum::<f64>()
        .powi(2);
    check(
        f >= 1.0 - 1e-12 && oracle_overlap >= 1.0 - 1e-12 && r3(a) == 0.653 && r3(b) == -0.271,
        format!("fidelity 1-{:.1e}; a_g={a:.3}, b_g={b:.3}", 1.0 - f),
    )
}

fn criterion_3() -> Outcome {
    let p = unit();
    let dt = 1e-4;
    let times: Vec<f64> = (0..=40_000).map(|i| i as f64 * dt).collect();
    let series = analytic_loschmidt(&p, &times).unwrap();
    let minima: Vec<f64> = (1..times.len() - 1)
        .filter(|&i| {
            series.echo[i] <= series.echo[i - 1]
                && series.echo[i] < series.echo[i + 1]
                && series.echo[i] < 1e-6
        })
        .map(|i| times[i])
        .collect();
    let expected: Vec<f64> = (0..)
        .map(|j| dqpt_times(&p, j).unwrap())
        .take_while(|t| *t <= 4.0)
        .collect();
    let located = minima.len() == expected.len()
        && minima
            .iter()
            .zip(&expected)
            .all(|(a, b)| (a - b).abs() <= dt);
    let closed = PI / (2.0 * 2f64.sqrt());
    let mut worst = 0.0f64;
    for &t in times.iter().step_by(37) {
        let oracle = oracle_amplitude(&p, t).norm_sqr();
        let cos2 = (2f64.sqrt() * t).cos().powi(2);
        let analytic = analytic_loschmidt(&p, &[t]).unwrap().echo[0];
        worst = worst
            .max((oracle - cos2).abs())
            .max((analytic - cos2).abs());
    }
    check(
        located && (expected[0] - closed).abs() < 1e-12 && worst < 1e-12,
        format!("zeros found {minima:?} vs {expected:?}; max |L - cos^2| {worst:.1e}"),
    )
}

/// Max echo deviation over `t ∈ [0, 4]` and min physical population.
fn trotter_error(dt: f64) -> (f64, f64) {
    let p = unit();
    let steps = (4.0 / dt).round() as usize;
    let c = build_evolution(&p, dt, steps).unwrap();
    let states = run_marked(&c, &StateVector::zero(4)).unwrap();
    let ground = diagonalize(&p).ground().embedded();
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    let analytic = analytic_loschmidt(&p, &times).unwrap();
    let mut err = 0.0f64;
    let mut pop_dev = 0.0f64;
    for (psi, l) in states.iter().zip(&analytic.echo) {
        let echo = ground.inner(psi).unwrap().norm_sqr();
        err = err.max((echo - l).abs());
        pop_dev = pop_dev.max((physical_population(&psi.to_density_matrix()) - 1.0).abs());
    }
    (err, pop_dev)
}

// The step is a product of real-symmetric factors acting on a real initial
// state, so the O(Δt) term of the echo cancels and the echo error ratio is
// ≈ 4 rather than 2; the state itself converges at first order.
fn trotter_order() -> Outcome {
    let res: Vec<(f64, f64)> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&dt| trotter_error(dt))
        .collect();
    let ratios = [res[0].0 / res[1].0, res[1].0 / res[2].0];
    let pop = res.iter().map(|r| r.1).fold(0.0, f64::max);
    let ok = ratios.iter().all(|r| (1.6..=2.4).contains(r)) && pop < 1e-10;
    check(
        ok,
        format!(
            "max echo errors {:.3e}, {:.3e}, {:.3e}; ratios {:.3}, {:.3} (need [1.6, 2.4]); physical population deviation {pop:.1e}",
            res[0].0, res[1].0, res[2].0, ratios[0], ratios[1]
        ),
    )
}

fn criterion_5() -> Outcome {
    let (j, dt) = (1.0, 0.1);
    let mut c = Circuit::new(3, "block");
    hopping_block(&mut c, 0, 1, 2, j, dt).unwrap();
    let (cs, sn) = ((j * dt / 2.0).cos(), (j * dt / 2.0).sin());
    let mut worst = 0.0f64;
    for input in [0b001usize, 0b010, 0b101, 0b110] {
        let out = run_statevector(&c, &StateVector::basis(3, input)).unwrap();
        let mut want = vec![C64::new(0.0, 0.0); 8];
        want[input] = C64::new(cs, 0.0);
        want[input ^ 0b111] = C64::new(0.0, -sn);
        for (a, b) in out.amplitudes().iter().zip(&want) {
            worst = worst.max((a - b).norm());
        }
    }
    let digits = format!("{cs:.6}") == "0.998750" && format!("{sn:.6}") == "0.049979";
    check(
        worst < 1e-12 && digits,
        format!("max deviation {worst:.1e}; cos {cs:.6}, sin {sn:.6}"),
    )
}

fn criterion_6() -> Outcome {
    let q = unit().quenched();
    let one = moments(
        &build_trotter_step(&q, 0.1).unwrap(),
        ScheduleMode::FigureFaithful,
    )
    .depth();
    let ten = moments(
        &build_trotter_steps(&q, 0.1, 10).unwrap(),
        ScheduleMode::FigureFaithful,
    )
    .depth();
    check(
        one == 20 && ten == 200,
        format!("depth {one} per step, {ten} for 10 steps"),
    )
}

fn criterion_7() -> Outcome {
    // J = 1 falls between nodes of the 21-interval J axis
    let window = PhaseField::analytic(1.0, (0.9, 1.1), (1.0, 1.25), 21, 25).unwrap();
    let cells = scan_plaquettes(&window);
    let undefined = cells.iter().filter(|c| c.winding.is_none()).count();
    let vortices: Vec<_> = cells
        .iter()
        .filter(|c| c.winding.is_some_and(|w| w.abs() == 1))
        .collect();
    let other = cells
        .iter()
        .filter(|c| c.winding.is_some_and(|w| w.abs() > 1))
        .count();
    let early = PhaseField::analytic(1.0, (0.9, 1.1), (0.0, 0.5), 21, 25).unwrap();
    let early_nonzero = scan_plaquettes(&early)
        .iter()
        .filter(|c| c.winding != Some(0))
        .count();
    let t0 = dqpt_times(&unit(), 0).unwrap();
    let hit = vortices.first().map(|c| (c.j, c.t));
    check(
        vortices.len() == 1 && other == 0 && undefined == 0 && early_nonzero == 0,
        format!(
            "{} cell(s) with |nu|=1 at {hit:?} (t0={t0:.6}), {undefined} undefined; {early_nonzero} nonzero cells for t<=0.5",
            vortices.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let nm = NoiseModelSpec::abc_shared(FlipProbs::new(0.011, 0.0, 0.015).unwrap()).unwrap();
    let c = build_evolution(&unit(), 0.1, 100).unwrap();
    let traj = run_density_matrix(&c, &nm, &DensityMatrix::zero_state(4), 1).unwrap();
    let mixed = DensityMatrix::maximally_mixed(4);
    let dist: Vec<f64> = traj
        .states
        .iter()
        .map(|r| trace_distance(r, &mixed).unwrap())
        .collect();
    let last = traj.states.last().unwrap();
    let pop_dev = BasisState::ALL
        .iter()
        .map(|s| (last.population(s.encoding()) - 1.0 / 16.0).abs())
        .fold(0.0, f64::max);
    let rises = dist[10..].windows(2).filter(|w| w[1] > w[0] + 1e-6).count();
    let t_last = *dist.last().unwrap();
    check(
        pop_dev <= 0.02 && t_last <= 0.1 && rises == 0,
        format!("after 100 steps: max |pop - 1/16| {pop_dev:.2e}, T(rho, I/16) {t_last:.4}; {rises} increases beyond step 10"),
    )
}

fn criterion_9() -> Outcome {
    let preset = Preset::AbcShared;
    let cfg = SweepConfig::exact(preset, unit(), 0.1, 3);
    let program = cfg.program().unwrap();
    let grid = GridSpec::square(preset, [0.0, 0.0], 1e-3, 21);
    let axes = [grid.values(0), grid.values(1)];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut exact_worst = (0usize, 0.0f64);
    let mut tomo_worst = 0usize;
    for trial in 0..5 {
        let idx = [rng.random_range(1..20usize), rng.random_range(1..20usize)];
        let truth = simulate_point(&program, &cfg, axes[0][idx[0]], axes[1][idx[1]], 0.0).unwrap();
        let fit = locate_minimum(&grid_sweep(&grid, &truth, &cfg).unwrap());
        let off = fit.index[0]
            .abs_diff(idx[0])
            .max(fit.index[1].abs_diff(idx[1]));
        exact_worst = (exact_worst.0.max(off), exact_worst.1.max(fit.min));

        let flip = axes[0][idx[0]];
        let measured = tomographic_target(&truth, flip, 8192, 100 + trial).unwrap();
        let mcfg = SweepConfig {
            measured: true,
            ..cfg.clone()
        };
        let fit = locate_minimum(&grid_sweep(&grid, &measured, &mcfg).unwrap());
        tomo_worst = tomo_worst.max(
            fit.index[0]
                .abs_diff(idx[0])
                .max(fit.index[1].abs_diff(idx[1])),
        );
    }
    check(
        exact_worst.0 <= 1 && exact_worst.1 < 1e-6 && tomo_worst <= 3,
        format!(
            "exact targets: worst offset {} cell(s), worst minimum {:.1e}; 8192-shot tomography targets: worst offset {tomo_worst} cell(s)",
            exact_worst.0, exact_worst.1
        ),
    )
}

fn random_density(rng: &mut ChaCha8Rng, rank: usize) -> DensityMatrix {
    let g = CMatrix::from_fn(16, rank, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::from_matrix(m / tr).unwrap()
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut exact_err = 0.0f64;
    for i in 0..20 {
        let rho = random_density(&mut rng, 1 + i % 16);
        let back = reconstruct_exact(&rho, 0.0).unwrap();
        exact_err = exact_err.max(max_abs_diff(back.entries(), rho.entries()));
    }
    let ground = diagonalize(&unit()).ground().embedded().to_density_matrix();
    let shots = [512u64, 2048, 8192];
    let seeds = 8;
    let errs: Vec<f64> = shots
        .iter()
        .map(|&n| {
            (0..seeds)
                .map(|s| {
                    let tables = simulate_tomography(&ground, 0.0, n, 1000 * n + s).unwrap();
                    trace_distance(&reconstruct_state(&tables).unwrap(), &ground).unwrap()
                })
                .sum::<f64>()
                / seeds as f64
        })
        .collect();
    let xs: Vec<f64> = shots.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    check(
        exact_err < 1e-10 && (slope + 0.5).abs() <= 0.1,
        format!("exact max error {exact_err:.1e}; mean T at {shots:?} shots = {errs:.4?}, slope {slope:.3}"),
    )
}

/// Largest `echo(t) − echo(t0)` for samples after the first zero.
fn revival(scale: f64) -> f64 {
    let p = unit();
    let dt = 0.1;
    let nm = NoiseModelSpec::abc_shared(FlipProbs::new(0.011, 0.0, 0.015).unwrap())
        .unwrap()
        .scaled(scale)
        .unwrap();
    let c = build_evolution(&p, dt, 40).unwrap();
    let traj = run_density_matrix(&c, &nm, &DensityMatrix::zero_state(4), 1).unwrap();
    let ground = diagonalize(&p).ground().embedded();
    let echo: Vec<f64> = traj
        .states
        .iter()
        .map(|r| fidelity(&ground, r).unwrap())
        .collect();
    let t0 = dqpt_times(&p, 0).unwrap();
    let i0 = (t0 / dt).round() as usize;
    echo[i0 + 1..]
        .iter()
        .map(|e| e - echo[i0])
        .fold(f64::NEG_INFINITY, f64::max)
}

fn criterion_11() -> Outcome {
    let (tenth, full) = (revival(0.1), revival(1.0));
    check(
        tenth >= 0.05 && full < 0.05,
        format!("max echo rise after t0: {tenth:.4} at p/10, {full:.4} at fitted p"),
    )
}

/// Number, name, check and runtime budget.
type Criterion = (usize, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "spectrum oracle", criterion_1, Duration::from_secs(1)),
        (
            2,
            "ground-state preparation",
            criterion_2,
            Duration::from_secs(1),
        ),
        (
            3,
            "DQPT zeros and echo oracle",
            criterion_3,
            Duration::from_secs(5),
        ),
        (4, "Trotter order", trotter_order, Duration::from_secs(10)),
        (
            5,
            "hopping block case table",
            criterion_5,
            Duration::from_secs(1),
        ),
        (6, "moment count", criterion_6, Duration::from_secs(1)),
        (7, "winding number", criterion_7, Duration::from_secs(10)),
        (8, "noise convergence", criterion_8, Duration::from_secs(60)),
        (9, "fit recovery", criterion_9, Duration::from_secs(15 * 60)),
        (
            10,
            "tomography round trip",
            criterion_10,
            Duration::from_secs(120),
        ),
        (
            11,
            "revival threshold",
            criterion_11,
            Duration::from_secs(60),
        ),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = outcome.is_ok() && in_time;
        let detail = match &outcome {
            Ok(d) | Err(d) => d,
        };
        let known = KNOWN_FAILURES.contains(&id);
        let note = match (passed, known) {
            (false, true) => " [known failure]",
            (true, true) => " [known failure now passes]",
            _ => "",
        };
        println!(
            "criterion {id:>2} {name}: {} ({:.2}s / {}s){note} - {detail}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
        );
        if passed == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance results for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
