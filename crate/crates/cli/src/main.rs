//! `dqpt`: spectra, quench dynamics, noise fits, winding maps, circuit
//! export and tomography for the two-site Z2 lattice Schwinger model.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;
mod series;
mod svg;

use config::RunConfig;
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "dqpt",
    version,
    about = "Mass-quench dynamics of the two-site Z2 lattice Schwinger model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

/// Flags shared by every command; they override config-file values.
#[derive(Args, Default)]
struct Common {
    /// TOML file with flat run keys.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// analytic, trotter-noiseless, trotter-noisy or trotter-sampled.
    #[arg(long, global = true)]
    mode: Option<String>,
    #[arg(long, global = true)]
    steps: Option<u64>,
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Shots per tomography setting.
    #[arg(long, global = true)]
    shots: Option<u64>,
    /// Any other config key, e.g. `--set noise_scale=0.1`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the effective configuration in canonical form and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Eigen-decomposition of the pre-quench Hamiltonian.
    Spectrum,
    /// Echo, eigenstate overlaps, phase and rate along the quench.
    Evolve,
    /// Trace-distance surface of a target trajectory over a noise grid.
    Fit {
        /// Target trajectory JSON.
        #[arg(long, value_name = "PATH")]
        target: Option<PathBuf>,
    },
    /// Vortices of the Loschmidt phase over a (J, t) window.
    Winding,
    /// OpenQASM 2.0 files for the preparation and evolution circuits.
    Export {
        /// Report circuit depths and gate counts.
        #[arg(long)]
        moments: bool,
    },
    /// Finite-shot tomography along a noisy evolution.
    Tomo,
}

/// `VALUE` as TOML, falling back to a bare string.
fn toml_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn overrides(c: &Common, command: &Command) -> CliResult<toml::Table> {
    let mut t = toml::Table::new();
    for kv in &c.set {
        let (k, v) = kv
            .split_once('=')
            .filter(|(k, _)| !k.trim().is_empty())
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        t.insert(k.trim().to_string(), toml_value(v.trim()));
    }
    let int = |x: u64| {
        i64::try_from(x)
            .map(toml::Value::Integer)
            .map_err(|_| CliError::Usage(format!("{x} is too large")))
    };
    if let Some(s) = c.seed {
        t.insert("seed".into(), int(s)?);
    }
    if let Some(s) = c.steps {
        t.insert("steps".into(), int(s)?);
    }
    if let Some(s) = c.shots {
        t.insert("shots".into(), int(s)?);
    }
    if let Some(dt) = c.dt {
        t.insert("dt".into(), toml::Value::Float(dt));
    }
    if let Some(m) = &c.mode {
        t.insert("mode".into(), toml::Value::String(m.clone()));
    }
    let path = |p: &PathBuf| toml::Value::String(p.to_string_lossy().into_owned());
    if let Some(o) = &c.out {
        t.insert("out".into(), path(o));
    }
    match command {
        Command::Fit { target: Some(p) } => {
            t.insert("target".into(), path(p));
        }
        Command::Export { moments: true } => {
            t.insert("moments".into(), toml::Value::Boolean(true));
        }
        _ => {}
    }
    Ok(t)
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = RunConfig::load(
        cli.common.config.as_deref(),
        overrides(&cli.common, &cli.command)?,
    )?;
    if cli.common.print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    match cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::Evolve => commands::evolve(&cfg),
        Command::Fit { .. } => commands::fit(&cfg),
        Command::Winding => commands::winding(&cfg),
        Command::Export { .. } => commands::export(&cfg),
        Command::Tomo => commands::tomo(&cfg),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(_) => eprintln!("error: {e}"),
                CliError::Data(inner) => eprintln!("error: {inner:#}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_values_parse_as_toml_or_strings() {
        assert_eq!(toml_value("0.1"), toml::Value::Float(0.1));
        assert_eq!(toml_value("7"), toml::Value::Integer(7));
        assert_eq!(
            toml_value("split_xz"),
            toml::Value::String("split_xz".into())
        );
        assert_eq!(toml_value("\"a b\""), toml::Value::String("a b".into()));
        assert_eq!(toml_value("[1.0, 2.0]").as_array().map(Vec::len), Some(2));
    }

    #[test]
    fn malformed_set_is_a_usage_error() {
        let c = Common {
            set: vec!["=3".into()],
            ..Common::default()
        };
        assert!(matches!(
            overrides(&c, &Command::Spectrum),
            Err(CliError::Usage(_))
        ));
    }
}
