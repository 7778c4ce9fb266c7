use serde::Serialize;

use dqpt_core::schwinger::{diagonalize, EigenLabel, Parity};

use super::json;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{report, Outputs};

#[derive(Serialize)]
struct StateReport {
    label: &'static str,
    parity: &'static str,
    energy: f64,
    /// Over `(vac−, vac+, L, R)`.
    amplitudes: [f64; 4],
}

#[derive(Serialize)]
struct SpectrumReport {
    m: f64,
    j: f64,
    eigenvalues: [f64; 4],
    a_g: f64,
    b_g: f64,
    p_g: f64,
    states: Vec<StateReport>,
}

pub fn label(l: EigenLabel) -> &'static str {
    match l {
        EigenLabel::E => "e",
        EigenLabel::EBar => "ebar",
        EigenLabel::G => "g",
        EigenLabel::GBar => "gbar",
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let spec = diagonalize(&cfg.params()?);
    let rep = SpectrumReport {
        m: cfg.m,
        j: cfg.j,
        eigenvalues: spec.eigenvalues(),
        a_g: spec.a_g(),
        b_g: spec.b_g(),
        p_g: spec.p_g(),
        states: spec
            .states
            .iter()
            .map(|s| StateReport {
                label: label(s.label),
                parity: match s.parity {
                    Parity::Even => "even",
                    Parity::Odd => "odd",
                },
                energy: s.energy,
                amplitudes: s.amplitudes,
            })
            .collect(),
    };
    let text = json(&rep);
    print!("{text}");
    let mut out = Outputs::default();
    out.add("spectrum.json", text);
    report(&out.write_all(&cfg.out)?);
    Ok(())
}
