use super::ir::Circuit;
use crate::qcore::{Gate, GateKind};
use crate::schwinger::{diagonalize, ModelParams};
use crate::{Error, Result};

/// Register width of the two-site lattice.
pub const N_QUBITS: usize = 4;

fn g(kind: GateKind) -> Gate {
    Gate::new(kind)
}

/// Angle of the `q1` rotation preparing `√2(a_g|0⟩ + b_g|1⟩)`.
pub fn ground_prep_angle(p: &ModelParams) -> f64 {
    let spec = diagonalize(p);
    let r2 = std::f64::consts::SQRT_2;
    2.0 * (r2 * spec.b_g()).atan2(r2 * spec.a_g())
}

/// Prepares `a_g(|0010⟩ + |1011⟩) + b_g(|0101⟩ + |1100⟩)` from `|0000⟩`.
pub fn build_ground_prep(p: &ModelParams) -> Result<Circuit> {
    p.validate()?;
    let mut c = Circuit::new(N_QUBITS, "ground_prep");
    c.meta.m = Some(p.m);
    c.meta.j = Some(p.j);
    c.with(g(GateKind::H), &[0])
        .with(g(GateKind::Ry(ground_prep_angle(p))), &[1])
        .with(g(GateKind::X), &[2])
        .with(g(GateKind::Cnot), &[0, 2])
        .with(g(GateKind::Cnot), &[1, 3])
        .with(g(GateKind::Cnot), &[0, 3])
        .with(g(GateKind::Cnot), &[3, 2]);
    Ok(c)
}

/// Appends `K† A K` for the three-spin hopping `(J/4) X_link (X_near X_far +
/// Y_near Y_far)` over one time step. With `J·dt/2 = θ`, a state with
/// `near ≠ far` goes to `cos θ |in⟩ − i sin θ |all three flipped⟩`.
pub fn hopping_block(
    c: &mut Circuit,
    link: usize,
    near: usize,
    far: usize,
    j: f64,
    dt: f64,
) -> Result<()> {
    let theta = j * dt / 2.0;
    let k = [
        (GateKind::Cnot, vec![near, far]),
        (GateKind::H, vec![link]),
        (GateKind::H, vec![near]),
        (GateKind::Cnot, vec![link, near]),
        (GateKind::Cnot, vec![near, far]),
    ];
    for (kind, t) in &k {
        c.push(g(kind.clone()), t)?;
    }
    c.push(g(GateKind::Rz(theta)), &[near])?;
    c.push(g(GateKind::Rz(-theta)), &[far])?;
    for (kind, t) in [
        (GateKind::Cnot, vec![near, far]),
        (GateKind::Cnot, vec![link, near]),
        (GateKind::H, vec![near]),
        (GateKind::H, vec![link]),
        (GateKind::Cnot, vec![near, far]),
    ] {
        c.push(g(kind), &t)?;
    }
    Ok(())
}

/// One first-order Trotter step of `H` with mass `p.signed_mass()`: hopping
/// on `(q0, q1, q2)`, its mirror on `(q3, q2, q1)`, then the two mass
/// rotations. Pass post-quench parameters (`p.quenched()`) for the quench.
///
/// Barriers follow each block and separate the two mass rotations, which
/// gives the block layout used by figure-faithful scheduling.
pub fn build_trotter_step(p: &ModelParams, dt: f64) -> Result<Circuit> {
    p.validate()?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidTimeStep(dt));
    }
    let mut c = Circuit::new(N_QUBITS, "trotter_step");
    c.meta.m = Some(p.signed_mass());
    c.meta.j = Some(p.j);
    c.meta.dt = Some(dt);
    c.barrier();
    hopping_block(&mut c, 0, 1, 2, p.j, dt)?;
    c.barrier();
    hopping_block(&mut c, 3, 2, 1, p.j, dt)?;
    c.barrier();
    // H_mass = (μ/2)(Z2 − Z1)
    let mu = p.signed_mass();
    c.push(g(GateKind::Rz(-mu * dt)), &[1])?;
    c.barrier();
    c.push(g(GateKind::Rz(mu * dt)), &[2])?;
    c.barrier();
    Ok(c)
}

/// `steps` Trotter steps, each followed by a step mark.
pub fn build_trotter_steps(p: &ModelParams, dt: f64, steps: usize) -> Result<Circuit> {
    let step = build_trotter_step(p, dt)?;
    let mut c = Circuit::new(N_QUBITS, format!("trotter_x{steps}"));
    c.meta = step.meta.clone();
    c.meta.name = format!("trotter_x{steps}");
    for _ in 0..steps {
        c.append(&step)?;
        c.mark_step();
    }
    Ok(c)
}

/// Ground-state preparation for `p` followed by `steps` Trotter steps of the
/// quenched Hamiltonian. Step marks sit at `t = 0, dt, …, steps·dt`.
pub fn build_evolution(p: &ModelParams, dt: f64, steps: usize) -> Result<Circuit> {
    let mut c = build_ground_prep(p)?;
    c.meta.name = "quench_evolution".into();
    c.meta.dt = Some(dt);
    c.barrier();
    c.mark_step();
    c.append(&build_trotter_steps(&p.quenched(), dt, steps)?)?;
    Ok(c)
}
