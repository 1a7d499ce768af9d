//! Argument parsing and dispatch for the `urllc-mc` binary.
//!
//! Results go to stdout (CSV or aligned text). Failures print one JSON
//! error line on stderr and map to distinct exit codes: 2 parse,
//! 3 validation, 4 solver, 5 domain, 6 I/O.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use super::commands::{
    cmd_outage, cmd_resource, cmd_simulate, cmd_solve, cmd_sweep, resource_table, solve_table,
    SweepScale, SweepSpec, SweepVariable,
};
use super::config::{parse_scenario, ScenarioConfig};
use super::reproduce::cmd_reproduce;
use super::table::Table;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(
    name = "urllc-mc",
    version,
    about = "URLLC single/multi-connectivity dimensioning"
)]
pub struct Cli {
    /// Scenario file (JSON). Defaults to single connectivity at 10 dB.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory; results are also written there as CSV.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Worker threads for simulation. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Outage breakdown at the configured (or solved) data BLER.
    Outage,
    /// BLER target meeting the configured outage.
    Solve,
    /// Channel uses and expected usage at the configured outage.
    Resource,
    /// Monte Carlo check of the closed forms.
    Simulate {
        /// Overrides the scenario trial count.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Sweep one variable around the scenario.
    Sweep {
        #[arg(long, value_enum)]
        variable: SweepVariable,
        #[arg(long, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, allow_negative_numbers = true)]
        stop: f64,
        #[arg(long, default_value_t = 61)]
        points: u32,
        #[arg(long, value_enum, default_value_t = SweepScale::Log10)]
        scale: SweepScale,
    },
    /// Regenerate the reference tables and figure data as CSV.
    Reproduce,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Outage => "outage",
            Command::Solve => "solve",
            Command::Resource => "resource",
            Command::Simulate { .. } => "simulate",
            Command::Sweep { .. } => "sweep",
            Command::Reproduce => "reproduce",
        }
    }
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig> {
    let mut cfg = match &cli.config {
        Some(path) => read_scenario(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn emit(cli: &Cli, name: &str, table: &Table, stdout: &mut dyn Write) -> Result<()> {
    let text = match cli.format {
        Format::Csv => table.to_csv(),
        Format::Pretty => table.to_pretty(),
    };
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))?;
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(format!("{name}.csv"));
        fs::write(&path, table.to_csv()).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let name = cli.command.name();
    match &cli.command {
        Command::Reproduce => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("results"));
            for path in cmd_reproduce(&dir)? {
                writeln!(stdout, "wrote {}", path.display())
                    .map_err(|e| Error::io("<stdout>", e))?;
            }
            Ok(())
        }
        Command::Outage => {
            let cfg = load_config(cli)?;
            let r = cmd_outage(&cfg)?;
            emit(cli, name, &r.table(&cfg), stdout)
        }
        Command::Solve => {
            let cfg = load_config(cli)?;
            let r = cmd_solve(&cfg)?;
            emit(cli, name, &solve_table(&cfg, &r), stdout)
        }
        Command::Resource => {
            let cfg = load_config(cli)?;
            let r = cmd_resource(&cfg)?;
            emit(cli, name, &resource_table(&cfg, &r), stdout)
        }
        Command::Simulate { trials } => {
            let mut cfg = load_config(cli)?;
            if let Some(t) = trials {
                cfg.trials = *t;
            }
            let r = cmd_simulate(&cfg, cli.threads)?;
            emit(cli, name, &r.table(), stdout)
        }
        Command::Sweep {
            variable,
            start,
            stop,
            points,
            scale,
        } => {
            let cfg = load_config(cli)?;
            let spec = SweepSpec {
                variable: *variable,
                start: *start,
                stop: *stop,
                points: *points,
                scale: *scale,
            };
            let t = cmd_sweep(&cfg, &spec)?;
            emit(cli, name, &t, stdout)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = write!(stderr, "{e}");
            return 2;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let line = serde_json::json!({
                "error": e.kind(),
                "code": e.exit_code(),
                "message": e.to_string(),
            });
            let _ = writeln!(stderr, "{line}");
            e.exit_code()
        }
    }
}

/// Reads a scenario file.
pub fn read_scenario(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}
