//! The CSV tables the CLI emits, and the checks every table passes before
//! it is written.

use std::cmp::Ordering;
use std::f64::consts::PI;

use anyhow::{bail, ensure, Context};

pub const SERIES_HEADER: &str = "t,echo,overlap_e,overlap_ebar,overlap_gbar,phase,rate";
pub const TOMO_HEADER: &str = "t,trace_distance,purity_true,purity_estimate";

const SLACK: f64 = 1e-9;

/// One recorded step of an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    /// `|⟨ψ_g|ψ⟩|²`
    pub echo: f64,
    pub overlap_e: f64,
    pub overlap_ebar: f64,
    pub overlap_gbar: f64,
    /// `arg 𝒢`, absent for mixed states.
    pub phase: Option<f64>,
    pub rate: f64,
}

/// Time stamp with float noise from `i·Δt` rounded away (12 significant
/// digits).
pub fn time_field(t: f64) -> String {
    let r: f64 = format!("{t:.11e}").parse().expect("formatted float parses");
    r.to_string()
}

pub fn series_csv(rows: &[SeriesRow]) -> String {
    let mut out = format!("{SERIES_HEADER}\n");
    for r in rows {
        let phase = r.phase.map(|p| p.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            time_field(r.t),
            r.echo,
            r.overlap_e,
            r.overlap_ebar,
            r.overlap_gbar,
            phase,
            r.rate
        ));
    }
    out
}

fn fields(line: &str, n: usize, row: usize) -> anyhow::Result<Vec<&str>> {
    let f: Vec<&str> = line.split(',').collect();
    ensure!(f.len() == n, "row {row}: {} fields, expected {n}", f.len());
    Ok(f)
}

fn number(s: &str, what: &str, row: usize) -> anyhow::Result<f64> {
    let x: f64 = s
        .parse()
        .with_context(|| format!("row {row}: {what} `{s}` is not a number"))?;
    ensure!(x.is_finite(), "row {row}: {what} is not finite");
    Ok(x)
}

fn probability(s: &str, what: &str, row: usize) -> anyhow::Result<f64> {
    let x = number(s, what, row)?;
    ensure!(
        (-SLACK..=1.0 + SLACK).contains(&x),
        "row {row}: {what} {x} outside [0, 1]"
    );
    Ok(x)
}

fn check_times(times: &[f64]) -> anyhow::Result<()> {
    if let Some(i) = times
        .windows(2)
        .position(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater))
    {
        bail!("t not strictly increasing at row {}", i + 2);
    }
    Ok(())
}

/// Schema, monotone time, probability ranges and a consistent phase column.
/// Returns the number of data rows.
pub fn validate_series_csv(text: &str) -> anyhow::Result<usize> {
    let mut lines = text.lines();
    ensure!(
        lines.next() == Some(SERIES_HEADER),
        "series header mismatch"
    );
    let mut times = Vec::new();
    let mut with_phase = None;
    for (i, line) in lines.enumerate() {
        let row = i + 1;
        let f = fields(line, 7, row)?;
        times.push(number(f[0], "t", row)?);
        let mut total = 0.0;
        for (k, name) in ["echo", "overlap_e", "overlap_ebar", "overlap_gbar"]
            .iter()
            .enumerate()
        {
            total += probability(f[k + 1], name, row)?;
        }
        ensure!(total <= 1.0 + 1e-6, "row {row}: overlaps sum to {total}");
        let has_phase = !f[5].is_empty();
        if *with_phase.get_or_insert(has_phase) != has_phase {
            bail!("row {row}: phase column partly empty");
        }
        if has_phase {
            let p = number(f[5], "phase", row)?;
            ensure!(
                p > -PI - SLACK && p <= PI + SLACK,
                "row {row}: phase {p} outside (-pi, pi]"
            );
        }
        ensure!(
            number(f[6], "rate", row)? >= -SLACK,
            "row {row}: negative rate"
        );
    }
    ensure!(!times.is_empty(), "series has no rows");
    check_times(&times)?;
    Ok(times.len())
}

/// `axis1,axis2,value` with `expected` rows of finite trace distances.
pub fn validate_surface_csv(text: &str, expected: usize) -> anyhow::Result<usize> {
    let mut lines = text.lines();
    ensure!(
        lines.next() == Some("axis1,axis2,value"),
        "surface header mismatch"
    );
    let mut n = 0;
    for (i, line) in lines.enumerate() {
        let f = fields(line, 3, i + 1)?;
        number(f[0], "axis1", i + 1)?;
        number(f[1], "axis2", i + 1)?;
        probability(f[2], "value", i + 1)?;
        n += 1;
    }
    ensure!(n == expected, "surface has {n} rows, expected {expected}");
    Ok(n)
}

pub fn validate_tomo_csv(text: &str) -> anyhow::Result<usize> {
    let mut lines = text.lines();
    ensure!(
        lines.next() == Some(TOMO_HEADER),
        "tomography header mismatch"
    );
    let mut times = Vec::new();
    for (i, line) in lines.enumerate() {
        let f = fields(line, 4, i + 1)?;
        times.push(number(f[0], "t", i + 1)?);
        for (k, name) in ["trace_distance", "purity_true", "purity_estimate"]
            .iter()
            .enumerate()
        {
            probability(f[k + 1], name, i + 1)?;
        }
    }
    ensure!(!times.is_empty(), "tomography table has no rows");
    check_times(&times)?;
    Ok(times.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64, phase: Option<f64>) -> SeriesRow {
        SeriesRow {
            t,
            echo: 0.5,
            overlap_e: 0.0,
            overlap_ebar: 0.0,
            overlap_gbar: 0.5,
            phase,
            rate: 0.35,
        }
    }

    #[test]
    fn written_series_validates() {
        let text = series_csv(&[row(0.0, Some(0.0)), row(0.1, Some(-1.0))]);
        assert_eq!(validate_series_csv(&text).unwrap(), 2);
        let noisy = series_csv(&[row(0.0, None), row(0.1, None)]);
        assert_eq!(validate_series_csv(&noisy).unwrap(), 2);
        assert!(noisy.lines().nth(1).unwrap().contains(",,"));
    }

    #[test]
    fn rejects_bad_series() {
        assert!(validate_series_csv(&series_csv(&[row(0.1, None), row(0.1, None)])).is_err());
        assert!(validate_series_csv(&series_csv(&[row(0.0, None), row(0.1, Some(0.2))])).is_err());
        let mut r = row(0.0, None);
        r.echo = 1.2;
        assert!(validate_series_csv(&series_csv(&[r])).is_err());
        assert!(validate_series_csv("t,echo\n0,1\n").is_err());
        assert!(validate_series_csv(&format!("{SERIES_HEADER}\n")).is_err());
    }

    #[test]
    fn surface_row_count_is_checked() {
        let text = "axis1,axis2,value\n0,0,0.1\n0,0.001,0.2\n";
        assert_eq!(validate_surface_csv(text, 2).unwrap(), 2);
        assert!(validate_surface_csv(text, 4).is_err());
        assert!(validate_surface_csv("axis1,axis2,value\n0,0,NaN\n", 1).is_err());
    }
}
