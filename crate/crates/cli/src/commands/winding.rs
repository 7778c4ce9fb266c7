use serde::Serialize;

use dqpt_core::schwinger::{
    scan_plaquettes, winding_number, PhaseField, PlaquetteWinding, WindingLoop,
};

use super::json;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{report, Outputs};
use crate::svg::map_plot;

#[derive(Serialize)]
struct WindingReport<'a> {
    m: f64,
    j_range: [f64; 2],
    t_range: [f64; 2],
    j_intervals: usize,
    t_intervals: usize,
    cells: usize,
    /// Cells with `|ν| ≥ 1`.
    vortices: Vec<&'a PlaquetteWinding>,
    /// Cells touching a sample where the phase is undefined.
    undefined: Vec<&'a PlaquetteWinding>,
    /// Sum of ν over the defined cells.
    cell_sum: i64,
    /// ν around the outer boundary, if defined there.
    boundary: Option<i64>,
}

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let field = PhaseField::analytic(
        cfg.m,
        (cfg.j_range[0], cfg.j_range[1]),
        (cfg.t_range[0], cfg.t_range[1]),
        cfg.j_intervals,
        cfg.t_intervals,
    )?;
    let cells = scan_plaquettes(&field);
    let outer = WindingLoop::rectangle((0, 0), (cfg.j_intervals, cfg.t_intervals))?;
    let rep = WindingReport {
        m: cfg.m,
        j_range: cfg.j_range,
        t_range: cfg.t_range,
        j_intervals: cfg.j_intervals,
        t_intervals: cfg.t_intervals,
        cells: cells.len(),
        vortices: cells
            .iter()
            .filter(|c| c.winding.is_some_and(|w| w != 0))
            .collect(),
        undefined: cells.iter().filter(|c| c.winding.is_none()).collect(),
        cell_sum: cells.iter().filter_map(|c| c.winding).sum(),
        boundary: winding_number(&field, &outer).ok(),
    };
    let text = json(&rep);
    let mut out = Outputs::default();
    if cfg.svg {
        let marks: Vec<(f64, f64)> = rep.vortices.iter().map(|c| (c.j, c.t)).collect();
        out.add(
            "winding.svg",
            map_plot(
                "Loschmidt phase",
                "J",
                "t",
                &field.j_axis,
                &field.t_axis,
                &field.phase,
                0,
                &marks,
            ),
        );
    }
    println!(
        "{} cells: {} vortices, {} undefined, boundary winding {:?}",
        rep.cells,
        rep.vortices.len(),
        rep.undefined.len(),
        rep.boundary
    );
    out.add("winding.json", text);
    report(&out.write_all(&cfg.out)?);
    Ok(())
}
