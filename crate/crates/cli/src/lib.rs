//! Command-line front end of the membrane blow-up laboratory.
//!
//! Every run resolves a [`RunConfig`](config::RunConfig), validates it
//! completely, and only then creates the output directory, writes its
//! artifacts and finishes with a one-line `manifest.jsonl` that lists every
//! file with its SHA-256 checksum.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Arg, ArgMatches};

use crate::config::{load_config, Command, ConfigSources, RunConfig, KEYS};
use crate::error::{exit, CliError};
use crate::output::{Artifacts, RunManifest};

/// Builds the argument parser: one subcommand per command, each accepting
/// `--config FILE` and one flag per configuration key.
pub fn cli() -> clap::Command {
    let mut root = clap::Command::new("membrane")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Blow-up experiments for the radial membrane equation")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for command in Command::ALL {
        let mut sub = clap::Command::new(command.name()).about(command.about()).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .value_parser(clap::value_parser!(PathBuf))
                .help("TOML file of configuration keys"),
        );
        for spec in KEYS {
            sub = sub.arg(
                Arg::new(spec.key)
                    .long(spec.key)
                    .value_name("VALUE")
                    .allow_negative_numbers(true)
                    .help(spec.help),
            );
        }
        root = root.subcommand(sub);
    }
    root
}

fn flags_of(m: &ArgMatches) -> Vec<(String, String)> {
    KEYS.iter()
        .filter_map(|spec| m.get_one::<String>(spec.key).map(|v| (spec.key.to_string(), v.clone())))
        .collect()
}

/// Parses arguments into a validated configuration.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = cli().try_get_matches_from(args).map_err(ParseOutcome::Clap)?;
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let command: Command = name.parse().map_err(ParseOutcome::Config)?;
    let config_path = sub.get_one::<PathBuf>("config");
    let sources = ConfigSources::gather(config_path.map(PathBuf::as_path), flags_of(sub))
        .map_err(ParseOutcome::Config)?;
    load_config(command, &sources).map_err(ParseOutcome::Config)
}

/// Why argument parsing did not produce a configuration.
#[derive(Debug)]
pub enum ParseOutcome {
    /// Help, version, or a malformed command line.
    Clap(clap::Error),
    Config(CliError),
}

/// Result of a completed run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub exit_code: i32,
    pub status: String,
    pub output_dir: PathBuf,
    pub message: String,
}

/// Executes a validated configuration and writes the manifest.
pub fn run(config: &RunConfig) -> Result<RunSummary, CliError> {
    let started = chrono::Utc::now();
    let clock = Instant::now();
    let prepared = commands::prepare(config)?;
    let mut out = Artifacts::create(config)?;
    let (status, exit_code, message) = match commands::execute(config, prepared, &mut out) {
        Ok(o) => (o.status, o.exit_code, o.summary),
        Err(e) => ("failed".to_string(), e.exit_code(), e.to_string()),
    };
    let manifest = RunManifest {
        artifact: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: config.command.name().to_string(),
        config: config.echo(),
        started_at: started.to_rfc3339(),
        finished_at: chrono::Utc::now().to_rfc3339(),
        wall_seconds: clock.elapsed().as_secs_f64(),
        status: status.clone(),
        exit_code,
        files: out.files().to_vec(),
    };
    manifest.write(out.dir())?;
    Ok(RunSummary { exit_code, status, output_dir: out.dir().to_path_buf(), message })
}

/// Entry point shared by the binary and the tests: parses, runs, reports
/// and returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args(args) {
        Ok(c) => c,
        Err(ParseOutcome::Clap(e)) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                exit::USAGE
            } else {
                let _ = write!(stdout, "{text}");
                exit::OK
            };
        }
        Err(ParseOutcome::Config(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    match run(&config) {
        Ok(s) => {
            let _ = writeln!(stdout, "{}", s.message);
            let _ = writeln!(stdout, "status {} (outputs in {})", s.status, s.output_dir.display());
            s.exit_code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
