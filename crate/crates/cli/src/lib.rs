//! Seeded experiment runner for monotone compression schemes.
//!
//! Every run is determined by an [`ExperimentConfig`] (the subcommand, its
//! parameters and the seed). Each run writes `<name>.json` to the output
//! directory, holding the config, the result and a `meta` block with the
//! timestamp. Monte Carlo runs also write `<name>.csv`.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

pub use commands::{execute, Execution};
pub use config::{Command, ExperimentConfig};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "moncomp", version, about = "Monotone compression scheme experiments")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Run from a JSON config (or a previous report) instead of a subcommand.
    #[arg(long, conflicts_with = "seed")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug)]
pub enum CliError {
    /// Unusable configuration; exit status 2.
    Config(String),
    /// A contract error from the library; exit status 1.
    Contract(moncomp_core::Error),
    /// A check that ran to completion and failed; exit status 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Contract(_) | CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Contract(e) => write!(f, "{}: {e}", e.name()),
            CliError::Failed(msg) => write!(f, "ContractViolated: {msg}"),
        }
    }
}

impl From<moncomp_core::Error> for CliError {
    fn from(e: moncomp_core::Error) -> Self {
        match e {
            moncomp_core::Error::InvalidParameter(msg) => CliError::Config(msg),
            e => CliError::Contract(e),
        }
    }
}

/// Reads a config file, which may also be a report embedding one.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let (raw, parsed) = match value.get("config") {
        Some(inner) if value.get("result").is_some() => (inner, ExperimentConfig::deserialize(inner)),
        // re-parse the text so errors carry a line number
        _ => (&value, serde_json::from_str(&text)),
    };
    let config = parsed.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let known = serde_json::to_value(&config).expect("config serializes");
    if let Some(key) = raw.as_object().into_iter().flat_map(|o| o.keys()).find(|k| known.get(k.as_str()).is_none()) {
        return Err(CliError::Config(format!("{}: unknown field `{key}`", path.display())));
    }
    Ok(config)
}

/// The report body: config and result. `meta` is added when written.
pub fn report(config: &ExperimentConfig, exec: &Execution) -> Value {
    json!({
        "config": serde_json::to_value(config).expect("config serializes"),
        "result": exec.result,
    })
}

fn with_meta(mut report: Value) -> Value {
    let ts = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    report["meta"] = json!({ "timestamp_unix": ts, "version": env!("CARGO_PKG_VERSION") });
    report
}

fn write_outputs(dir: &Path, name: &str, report: &Value, exec: &Execution) -> Result<(), CliError> {
    let io = |p: &Path, e: std::io::Error| CliError::Config(format!("cannot write {}: {e}", p.display()));
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut files = vec![(format!("{name}.json"), pretty(report))];
    if let Some(csv) = &exec.csv {
        files.push((format!("{name}.csv"), csv.clone()));
    }
    files.extend(exec.artifacts.iter().cloned());
    for (file, content) in files {
        let path = dir.join(file);
        std::fs::write(&path, content).map_err(|e| io(&path, e))?;
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

/// Parses `args`, runs, writes the outputs and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match run_cli(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn run_cli(cli: &Cli, stdout: &mut dyn std::io::Write) -> Result<(), CliError> {
    let config = match (&cli.config, &cli.command) {
        (Some(path), None) => load_config(path)?,
        (None, Some(command)) => ExperimentConfig { seed: cli.seed, command: command.clone() },
        (Some(_), Some(_)) => return Err(CliError::Config("give either --config or a subcommand".into())),
        (None, None) => return Err(CliError::Config("no subcommand given (see --help)".into())),
    };
    let exec = execute(&config)?;
    let report = with_meta(report(&config, &exec));
    write_outputs(&cli.out_dir, config.command.name(), &report, &exec)?;
    let shown = match (cli.format, &exec.csv) {
        (Format::Csv, Some(csv)) => csv.clone(),
        _ => pretty(&report),
    };
    stdout
        .write_all(shown.as_bytes())
        .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))?;
    match &exec.failure {
        Some(msg) => Err(CliError::Failed(msg.clone())),
        None => Ok(()),
    }
}
