//! Run configuration: a flat table of dotted keys filled from defaults, an
//! optional TOML file, the output-directory environment variable and
//! command-line flags, in increasing order of precedence.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use membrane_core::equations::Branch;
use membrane_core::selfsimilar_ode::{leading_balance, MAX_SEED_ORDER};
use membrane_core::similarity_evolution::MAX_EPSILON;
use serde_json::Value as Json;

use crate::error::{usage, CliError};

/// Environment variable overriding `output.directory`.
pub const OUTPUT_DIR_ENV: &str = "MEMBRANE_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Verify,
    Profile,
    Evolve,
    Similarity,
    Modes,
    Fit,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Verify,
        Command::Profile,
        Command::Evolve,
        Command::Similarity,
        Command::Modes,
        Command::Fit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Profile => "profile",
            Command::Evolve => "evolve",
            Command::Similarity => "similarity",
            Command::Modes => "modes",
            Command::Fit => "fit",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::Verify => "Run the residual and invariant suite and print a pass/fail table",
            Command::Profile => "Integrate the self-similar profile equation from an axis seed",
            Command::Evolve => "Evolve radial initial data in physical coordinates",
            Command::Similarity => {
                "Evolve the explicit profile, optionally perturbed, in similarity coordinates"
            }
            Command::Modes => "Emit the eigenvalue audit of the reduced linear equation",
            Command::Fit => "Fit the blow-up time to an axis-curvature series",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| usage(format!("unknown command `{s}`")))
    }
}

/// Accepted values of a key.
#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Int {
        min: i64,
        max: i64,
    },
    /// Real interval; `open` marks which ends are excluded.
    Float {
        lo: f64,
        hi: f64,
        open: (bool, bool),
    },
    Choice(&'static [&'static str]),
    Text,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Int { min, max } if *max == i64::MAX => format!("an integer >= {min}"),
            Kind::Int { min, max } => format!("an integer in [{min}, {max}]"),
            Kind::Float { lo, hi, open } => {
                let l = if open.0 { '(' } else { '[' };
                let r = if open.1 { ')' } else { ']' };
                let hi = if hi.is_infinite() { "inf".to_string() } else { hi.to_string() };
                format!("a number in {l}{lo}, {hi}{r}")
            }
            Kind::Choice(c) => format!("one of {}", c.join(", ")),
            Kind::Text => "a string".into(),
        }
    }
}

const POSITIVE: Kind = Kind::Float { lo: 0.0, hi: f64::INFINITY, open: (true, true) };
const NON_NEGATIVE: Kind = Kind::Float { lo: 0.0, hi: f64::INFINITY, open: (false, true) };
const UNIT_OPEN: Kind = Kind::Float { lo: 0.0, hi: 1.0, open: (true, true) };
const ANY_REAL: Kind = Kind::Float { lo: f64::NEG_INFINITY, hi: f64::INFINITY, open: (true, true) };

/// One configuration key.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

/// Every accepted key. Flags mirror these one-to-one (`--grid.n 256`).
pub const KEYS: &[KeySpec] = &[
    KeySpec {
        key: "grid.n",
        kind: Kind::Int { min: 16, max: 1 << 20 },
        default: "512",
        help: "Number of grid cells",
    },
    KeySpec { key: "grid.r_max", kind: POSITIVE, default: "5", help: "Outer radius of the physical grid" },
    KeySpec {
        key: "grid.rho_min",
        kind: UNIT_OPEN,
        default: "0.01",
        help: "Inner edge of the similarity grid",
    },
    KeySpec {
        key: "grid.rho_max",
        kind: Kind::Float { lo: 0.0, hi: 1.0, open: (true, false) },
        default: "0.99",
        help: "Outer edge of the similarity grid",
    },
    KeySpec {
        key: "grid.stencil_order",
        kind: Kind::Choice(&["2", "4", "6", "8"]),
        default: "2",
        help: "Accuracy order of the spatial stencils (6 for similarity runs)",
    },
    KeySpec {
        key: "time.cfl",
        kind: Kind::Float { lo: 0.0, hi: 1.0, open: (true, false) },
        default: "0.5",
        help: "Courant number",
    },
    KeySpec { key: "time.t_end", kind: NON_NEGATIVE, default: "0.2", help: "Final physical time" },
    KeySpec { key: "time.tau_end", kind: NON_NEGATIVE, default: "3", help: "Final similarity time" },
    KeySpec {
        key: "time.snapshot_every",
        kind: Kind::Int { min: 0, max: i64::MAX },
        default: "0",
        help: "Steps between stored snapshots; 0 keeps the first and last",
    },
    KeySpec {
        key: "time.max_steps",
        kind: Kind::Int { min: 1, max: i64::MAX },
        default: "10000000",
        help: "Step budget of the evolution",
    },
    KeySpec {
        key: "ic.kind",
        kind: Kind::Choice(&["gaussian", "lightlike"]),
        default: "gaussian",
        help: "Physical initial data: gaussian at rest, or lightlike with h = 0",
    },
    KeySpec {
        key: "ic.amplitude",
        kind: ANY_REAL,
        default: "0.01",
        help: "Amplitude of the gaussian initial profile",
    },
    KeySpec { key: "ic.width", kind: POSITIVE, default: "1", help: "Width of the gaussian initial profile" },
    KeySpec {
        key: "ic.branch",
        kind: Kind::Choice(&["+1", "-1"]),
        default: "+1",
        help: "Branch of the explicit solution",
    },
    KeySpec {
        key: "ic.epsilon",
        kind: Kind::Float { lo: -MAX_EPSILON, hi: MAX_EPSILON, open: (false, false) },
        default: "0",
        help: "Bump amplitude added to the similarity profile",
    },
    KeySpec { key: "ic.bump_center", kind: UNIT_OPEN, default: "0.5", help: "Centre of the similarity bump" },
    KeySpec {
        key: "ic.bump_width",
        kind: UNIT_OPEN,
        default: "0.2",
        help: "Half-width of the similarity bump",
    },
    KeySpec { key: "profile.a", kind: ANY_REAL, default: "1", help: "Profile value on the axis" },
    KeySpec { key: "profile.b", kind: ANY_REAL, default: "1", help: "Profile curvature on the axis" },
    KeySpec {
        key: "profile.order",
        kind: Kind::Int { min: 2, max: MAX_SEED_ORDER as i64 },
        default: "8",
        help: "Truncation order of the axis series (even)",
    },
    KeySpec {
        key: "profile.start_rho",
        kind: Kind::Float { lo: 0.0, hi: 0.1, open: (true, false) },
        default: "0.05",
        help: "Hand-off point from the series to the integrator",
    },
    KeySpec {
        key: "profile.rho_end",
        kind: UNIT_OPEN,
        default: "0.9",
        help: "End of the profile integration",
    },
    KeySpec {
        key: "tol.atol",
        kind: POSITIVE,
        default: "1e-10",
        help: "Absolute tolerance of the profile integrator",
    },
    KeySpec {
        key: "tol.rtol",
        kind: POSITIVE,
        default: "1e-10",
        help: "Relative tolerance of the profile integrator",
    },
    KeySpec {
        key: "tol.degeneracy",
        kind: POSITIVE,
        default: "1e-10",
        help: "Profile integration stops once |1 - rho^2 - phi^2| falls below this",
    },
    KeySpec {
        key: "tol.h_floor",
        kind: ANY_REAL,
        default: "1e-6",
        help: "Physical evolution stops once the hyperbolicity monitor falls to this",
    },
    KeySpec {
        key: "fit.window_lo",
        kind: ANY_REAL,
        default: "0.5",
        help: "Start of the fit window (t for fit, tau for similarity)",
    },
    KeySpec {
        key: "fit.window_hi",
        kind: ANY_REAL,
        default: "0.9",
        help: "End of the fit window (t for fit, tau for similarity)",
    },
    KeySpec {
        key: "fit.samples",
        kind: Kind::Int { min: 8, max: 1 << 20 },
        default: "21",
        help: "Samples in the synthetic series",
    },
    KeySpec {
        key: "fit.noise",
        kind: Kind::Float { lo: 0.0, hi: 0.5, open: (false, false) },
        default: "0",
        help: "Relative uniform noise on the synthetic series",
    },
    KeySpec {
        key: "fit.blowup_time",
        kind: POSITIVE,
        default: "1",
        help: "Blow-up time of the synthetic series",
    },
    KeySpec {
        key: "fit.input",
        kind: Kind::Text,
        default: "",
        help: "CSV file with columns t, axis_urr; empty for a synthetic series",
    },
    KeySpec {
        key: "output.directory",
        kind: Kind::Text,
        default: "membrane-output",
        help: "Directory receiving the run outputs",
    },
    KeySpec {
        key: "output.formats",
        kind: Kind::Text,
        default: "csv,jsonl",
        help: "Comma-separated subset of csv, jsonl",
    },
    KeySpec {
        key: "seed",
        kind: Kind::Int { min: 0, max: i64::MAX },
        default: "0",
        help: "Seed of the noise generator",
    },
];

/// Defaults that differ for one command.
const COMMAND_DEFAULTS: &[(Command, &str, &str)] = &[
    (Command::Similarity, "grid.stencil_order", "6"),
    (Command::Similarity, "fit.window_lo", "2"),
    (Command::Similarity, "fit.window_hi", "3"),
];

pub fn key_spec(key: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.key == key)
}

fn default_for(spec: &KeySpec, command: Command) -> &'static str {
    COMMAND_DEFAULTS
        .iter()
        .find(|(c, k, _)| *c == command && *k == spec.key)
        .map_or(spec.default, |(_, _, v)| v)
}

/// A validated scalar value of a key.
#[derive(Debug, Clone, PartialEq)]
enum Scalar {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Scalar {
    fn to_json(&self) -> Json {
        match self {
            Scalar::Int(v) => Json::from(*v),
            Scalar::Float(v) => Json::from(*v),
            Scalar::Text(v) => Json::from(v.as_str()),
        }
    }
}

fn parse_flag(spec: &KeySpec, raw: &str) -> Result<Scalar, CliError> {
    let bad = || usage(format!("`{}` must be {}, got `{raw}`", spec.key, spec.kind.describe()));
    let value = match spec.kind {
        Kind::Int { .. } => Scalar::Int(raw.trim().parse().map_err(|_| bad())?),
        Kind::Float { .. } => Scalar::Float(raw.trim().parse().map_err(|_| bad())?),
        Kind::Choice(_) | Kind::Text => Scalar::Text(raw.to_string()),
    };
    check_range(spec, value)
}

fn parse_toml(spec: &KeySpec, raw: &toml::Value) -> Result<Scalar, CliError> {
    let bad = || usage(format!("`{}` must be {}, got `{raw}`", spec.key, spec.kind.describe()));
    let value = match (spec.kind, raw) {
        (Kind::Int { .. }, toml::Value::Integer(v)) => Scalar::Int(*v),
        (Kind::Float { .. }, toml::Value::Integer(v)) => Scalar::Float(*v as f64),
        (Kind::Float { .. }, toml::Value::Float(v)) => Scalar::Float(*v),
        (Kind::Choice(_), toml::Value::Integer(v)) => Scalar::Text(v.to_string()),
        (Kind::Choice(_) | Kind::Text, toml::Value::String(s)) => Scalar::Text(s.clone()),
        _ => return Err(bad()),
    };
    check_range(spec, value)
}

fn check_range(spec: &KeySpec, value: Scalar) -> Result<Scalar, CliError> {
    let ok = match (&spec.kind, &value) {
        (Kind::Int { min, max }, Scalar::Int(v)) => v >= min && v <= max,
        (Kind::Float { lo, hi, open }, Scalar::Float(v)) => {
            v.is_finite() && if open.0 { v > lo } else { v >= lo } && if open.1 { v < hi } else { v <= hi }
        }
        (Kind::Choice(c), Scalar::Text(v)) => c.contains(&v.as_str()),
        (Kind::Text, Scalar::Text(_)) => true,
        _ => false,
    };
    if ok {
        Ok(value)
    } else {
        let shown = match &value {
            Scalar::Int(v) => v.to_string(),
            Scalar::Float(v) => v.to_string(),
            Scalar::Text(v) => format!("`{v}`"),
        };
        Err(usage(format!("`{}` must be {}, got {shown}", spec.key, spec.kind.describe())))
    }
}

/// Flattens nested TOML tables into dotted keys.
fn flatten(prefix: &str, table: &toml::Table, out: &mut Vec<(String, toml::Value)>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            toml::Value::Table(t) => flatten(&key, t, out),
            other => out.push((key, other.clone())),
        }
    }
}

/// Reads the key-value pairs of a configuration file.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, toml::Value)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
    let table: toml::Table =
        text.parse().map_err(|e| usage(format!("config file {} is not valid TOML: {e}", path.display())))?;
    let mut out = Vec::new();
    flatten("", &table, &mut out);
    Ok(out)
}

/// Sources of a configuration, lowest precedence first.
#[derive(Debug, Clone, Default)]
pub struct ConfigSources {
    pub file: Vec<(String, toml::Value)>,
    pub env_output_dir: Option<String>,
    pub flags: Vec<(String, String)>,
}

impl ConfigSources {
    /// Collects the file (if any) and the environment override.
    pub fn gather(config_path: Option<&Path>, flags: Vec<(String, String)>) -> Result<Self, CliError> {
        let file = match config_path {
            Some(p) => read_config_file(p)?,
            None => Vec::new(),
        };
        let env_output_dir = std::env::var(OUTPUT_DIR_ENV).ok().filter(|s| !s.is_empty());
        Ok(Self { file, env_output_dir, flags })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcKind {
    Gaussian,
    Lightlike,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub n: usize,
    pub r_max: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub stencil_order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeConfig {
    pub cfl: f64,
    pub t_end: f64,
    pub tau_end: f64,
    pub snapshot_every: usize,
    pub max_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcConfig {
    pub kind: IcKind,
    pub amplitude: f64,
    pub width: f64,
    pub branch: Branch,
    pub epsilon: f64,
    pub bump_center: f64,
    pub bump_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileConfig {
    pub a: f64,
    pub b: f64,
    pub order: usize,
    pub start_rho: f64,
    pub rho_end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TolConfig {
    pub atol: f64,
    pub rtol: f64,
    pub degeneracy: f64,
    pub h_floor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub window_lo: f64,
    pub window_hi: f64,
    pub samples: usize,
    pub noise: f64,
    pub blowup_time: f64,
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub csv: bool,
    pub jsonl: bool,
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub grid: GridConfig,
    pub time: TimeConfig,
    pub ic: IcConfig,
    pub profile: ProfileConfig,
    pub tol: TolConfig,
    pub fit: FitConfig,
    pub output: OutputConfig,
    pub seed: u64,
    values: BTreeMap<&'static str, Scalar>,
}

impl RunConfig {
    /// Every key with its resolved value, sorted by key.
    pub fn echo(&self) -> Json {
        let mut map = serde_json::Map::new();
        map.insert("command".into(), Json::from(self.command.name()));
        for (k, v) in &self.values {
            map.insert((*k).to_string(), v.to_json());
        }
        Json::Object(map)
    }
}

/// Resolves and validates a configuration. Unknown keys, malformed values
/// and out-of-range values are usage errors naming the key.
pub fn load_config(command: Command, sources: &ConfigSources) -> Result<RunConfig, CliError> {
    let mut values: BTreeMap<&'static str, Scalar> = BTreeMap::new();
    for spec in KEYS {
        values.insert(spec.key, parse_flag(spec, default_for(spec, command))?);
    }
    for (key, raw) in &sources.file {
        let spec = key_spec(key).ok_or_else(|| usage(format!("unknown configuration key `{key}`")))?;
        values.insert(spec.key, parse_toml(spec, raw)?);
    }
    if let Some(dir) = &sources.env_output_dir {
        values.insert("output.directory", Scalar::Text(dir.clone()));
    }
    for (key, raw) in &sources.flags {
        let spec = key_spec(key).ok_or_else(|| usage(format!("unknown configuration key `{key}`")))?;
        values.insert(spec.key, parse_flag(spec, raw)?);
    }
    build(command, values)
}

fn build(command: Command, values: BTreeMap<&'static str, Scalar>) -> Result<RunConfig, CliError> {
    let f = |k: &str| match &values[k] {
        Scalar::Float(v) => *v,
        other => unreachable!("{k} holds {other:?}"),
    };
    let i = |k: &str| match &values[k] {
        Scalar::Int(v) => *v,
        other => unreachable!("{k} holds {other:?}"),
    };
    let s = |k: &str| match &values[k] {
        Scalar::Text(v) => v.clone(),
        other => unreachable!("{k} holds {other:?}"),
    };

    let grid = GridConfig {
        n: i("grid.n") as usize,
        r_max: f("grid.r_max"),
        rho_min: f("grid.rho_min"),
        rho_max: f("grid.rho_max"),
        stencil_order: s("grid.stencil_order").parse().expect("validated choice"),
    };
    if grid.rho_min >= grid.rho_max {
        return Err(usage(format!(
            "`grid.rho_max` = {} must exceed `grid.rho_min` = {}",
            grid.rho_max, grid.rho_min
        )));
    }
    let time = TimeConfig {
        cfl: f("time.cfl"),
        t_end: f("time.t_end"),
        tau_end: f("time.tau_end"),
        snapshot_every: i("time.snapshot_every") as usize,
        max_steps: i("time.max_steps") as usize,
    };
    let ic = IcConfig {
        kind: match s("ic.kind").as_str() {
            "gaussian" => IcKind::Gaussian,
            _ => IcKind::Lightlike,
        },
        amplitude: f("ic.amplitude"),
        width: f("ic.width"),
        branch: s("ic.branch").parse().expect("validated choice"),
        epsilon: f("ic.epsilon"),
        bump_center: f("ic.bump_center"),
        bump_width: f("ic.bump_width"),
    };
    if command == Command::Similarity
        && (ic.bump_center - ic.bump_width <= grid.rho_min || ic.bump_center + ic.bump_width >= grid.rho_max)
    {
        return Err(usage(format!(
            "`ic.bump_width` = {} puts the bump around {} outside the grid ({}, {})",
            ic.bump_width, ic.bump_center, grid.rho_min, grid.rho_max
        )));
    }
    let profile = ProfileConfig {
        a: f("profile.a"),
        b: f("profile.b"),
        order: i("profile.order") as usize,
        start_rho: f("profile.start_rho"),
        rho_end: f("profile.rho_end"),
    };
    if !profile.order.is_multiple_of(2) {
        return Err(usage(format!("`profile.order` must be even, got {}", profile.order)));
    }
    if !leading_balance(profile.a).admits(profile.b) {
        return Err(usage(format!(
            "`profile.b` = {} admits no regular profile with `profile.a` = {}",
            profile.b, profile.a
        )));
    }
    if profile.rho_end <= profile.start_rho {
        return Err(usage(format!(
            "`profile.rho_end` = {} must exceed `profile.start_rho` = {}",
            profile.rho_end, profile.start_rho
        )));
    }
    let tol = TolConfig {
        atol: f("tol.atol"),
        rtol: f("tol.rtol"),
        degeneracy: f("tol.degeneracy"),
        h_floor: f("tol.h_floor"),
    };
    let input = s("fit.input");
    let fit = FitConfig {
        window_lo: f("fit.window_lo"),
        window_hi: f("fit.window_hi"),
        samples: i("fit.samples") as usize,
        noise: f("fit.noise"),
        blowup_time: f("fit.blowup_time"),
        input: (!input.is_empty()).then(|| PathBuf::from(input)),
    };
    if fit.window_lo >= fit.window_hi {
        return Err(usage(format!(
            "`fit.window_hi` = {} must exceed `fit.window_lo` = {}",
            fit.window_hi, fit.window_lo
        )));
    }
    if command == Command::Fit
        && fit.input.is_none()
        && (fit.window_lo < 0.0 || fit.window_hi >= fit.blowup_time)
    {
        return Err(usage(format!(
            "`fit.window_hi` = {} must lie before `fit.blowup_time` = {} and the window must start at t >= 0",
            fit.window_hi, fit.blowup_time
        )));
    }
    let directory = s("output.directory");
    if directory.trim().is_empty() {
        return Err(usage("`output.directory` must not be empty"));
    }
    let formats = s("output.formats");
    let mut output = OutputConfig { directory: PathBuf::from(directory), csv: false, jsonl: false };
    for fmt in formats.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        match fmt {
            "csv" => output.csv = true,
            "jsonl" => output.jsonl = true,
            other => return Err(usage(format!("`output.formats` lists unknown format `{other}`"))),
        }
    }
    if !(output.csv || output.jsonl) {
        return Err(usage("`output.formats` must list csv, jsonl or both"));
    }
    let seed = i("seed") as u64;
    Ok(RunConfig { command, grid, time, ic, profile, tol, fit, output, seed, values })
}
