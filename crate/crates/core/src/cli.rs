//! Command-line front end. The binary is a thin wrapper around [`run`]; all
//! parsing, validation and file emission lives here so it can be tested.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::analytic::{critical_coupling, hx_brute_force, hx_ground};
use crate::circuit::{polygon_circuit_oriented, Circuit, Orientation};
use crate::error::Error;
use crate::plot::{Plot, Series};
use crate::spin_ops::{ChainParams, Spin};
use crate::sweep::{coupling_grid, records_to_csv, sweep, ChainSpec, GroundMethod, SweepOptions, SweepResult};

pub const DEFAULT_SITES: usize = 3;
pub const DEFAULT_VERTICES: usize = 100;
pub const DEFAULT_RADIUS: f64 = 1e-5;
pub const DEFAULT_FIELD: f64 = 1.0;
pub const DEFAULT_STEPS: usize = 201;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 1 for usage errors, 2 for numerical (and output) failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "bargmann",
    version,
    about = "Bargmann invariants of field-driven spin chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the coupling across a window and record C(J).
    Sweep(SweepArgs),
    /// Regenerate the data and plots behind one of the figure presets.
    Reproduce(ReproduceArgs),
    /// Print the polygonal field circuit as JSON.
    Circuit(CircuitArgs),
    /// Print the classical x-field chain ground-state data as JSON.
    Oracle(OracleArgs),
}

/// Every field is optional so a config file can fill the gaps.
#[derive(Debug, Default, Clone, Args)]
pub struct SweepArgs {
    /// Flat `key = value` file; keys are the flag names without dashes.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of sites N.
    #[arg(long)]
    pub spins: Option<usize>,
    /// `1/2` or `1`.
    #[arg(long)]
    pub spin: Option<String>,
    /// Circuit vertex count 𝒩.
    #[arg(long)]
    pub vertices: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub radius: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub field: Option<f64>,
    /// Defaults to J_c − 2r.
    #[arg(long = "j-min", allow_hyphen_values = true)]
    pub j_min: Option<f64>,
    /// Defaults to J_c + 2r.
    #[arg(long = "j-max", allow_hyphen_values = true)]
    pub j_max: Option<f64>,
    #[arg(long = "j-steps")]
    pub j_steps: Option<usize>,
    /// `standard` or `reversed`.
    #[arg(long)]
    pub orientation: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// File stem for the outputs.
    #[arg(long)]
    pub name: Option<String>,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long)]
    pub format: Option<String>,
    /// auto, full or symmetric.
    #[arg(long)]
    pub method: Option<String>,
    /// Worker threads; 0 means all cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Figure::Fig3 => 3,
            Figure::Fig4 => 4,
            Figure::Fig5 => 5,
            Figure::Fig6 => 6,
            Figure::Fig7 => 7,
        };
        write!(f, "fig{n}")
    }
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    pub figure: Figure,
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CircuitArgs {
    #[arg(long, default_value_t = DEFAULT_VERTICES)]
    pub vertices: usize,
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    #[arg(long, default_value = "standard")]
    pub orientation: String,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub spins: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub coupling: f64,
    #[arg(long, default_value_t = DEFAULT_FIELD, allow_hyphen_values = true)]
    pub field: f64,
    #[arg(long, default_value = "1/2")]
    pub spin: String,
    /// Enumerate every configuration instead of using the closed forms.
    #[arg(long)]
    pub brute_force: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl std::str::FromStr for Formats {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut f = Formats {
            csv: false,
            json: false,
            svg: false,
        };
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => return Err(usage(format!("unknown output format '{other}'"))),
            }
        }
        if !(f.csv || f.json || f.svg) {
            return Err(usage("at least one output format is required"));
        }
        Ok(f)
    }
}

/// A fully resolved and validated sweep configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub sites: usize,
    pub spin: Spin,
    pub vertices: usize,
    pub radius: f64,
    pub field: f64,
    pub j_min: f64,
    pub j_max: f64,
    pub j_steps: usize,
    pub orientation: Orientation,
    pub output: PathBuf,
    pub name: String,
    pub formats: Formats,
    pub method: GroundMethod,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::resolve(&SweepArgs::default()).expect("defaults are valid")
    }
}

const CONFIG_KEYS: [&str; 14] = [
    "spins",
    "spin",
    "vertices",
    "radius",
    "field",
    "j-min",
    "j-max",
    "j-steps",
    "orientation",
    "output",
    "name",
    "format",
    "method",
    "threads",
];

/// Parses a flat `key = value` file. `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = key.trim().to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(usage(format!("config line {}: unknown key '{key}'", lineno + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| usage(format!("invalid value '{value}' for {key}")))
}

impl RunConfig {
    /// Flags win over the config file, which wins over the defaults.
    pub fn resolve(args: &SweepArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => parse_config_file(
                &fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
            )?,
            None => BTreeMap::new(),
        };
        fn pick<T: std::str::FromStr + Clone>(
            flag: &Option<T>,
            file: &BTreeMap<String, String>,
            key: &str,
        ) -> Result<Option<T>, CliError> {
            match (flag, file.get(key)) {
                (Some(v), _) => Ok(Some(v.clone())),
                (None, Some(s)) => parse_value(key, s).map(Some),
                (None, None) => Ok(None),
            }
        }

        let sites = pick(&args.spins, &file, "spins")?.unwrap_or(DEFAULT_SITES);
        let spin: Spin = pick(&args.spin, &file, "spin")?
            .map(|s: String| s.parse().map_err(usage))
            .transpose()?
            .unwrap_or(Spin::Half);
        let vertices = pick(&args.vertices, &file, "vertices")?.unwrap_or(DEFAULT_VERTICES);
        let radius = pick(&args.radius, &file, "radius")?.unwrap_or(DEFAULT_RADIUS);
        let field = pick(&args.field, &file, "field")?.unwrap_or(DEFAULT_FIELD);
        let jc = critical_coupling(field);
        let j_min = pick(&args.j_min, &file, "j-min")?.unwrap_or(jc - 2.0 * radius);
        let j_max = pick(&args.j_max, &file, "j-max")?.unwrap_or(jc + 2.0 * radius);
        let j_steps = pick(&args.j_steps, &file, "j-steps")?.unwrap_or(DEFAULT_STEPS);
        let orientation = pick(&args.orientation, &file, "orientation")?
            .map(|s: String| s.parse().map_err(usage))
            .transpose()?
            .unwrap_or(Orientation::Standard);
        let output = pick(&args.output, &file, "output")?.unwrap_or_else(|| PathBuf::from("."));
        let name = pick(&args.name, &file, "name")?.unwrap_or_else(|| "sweep".to_string());
        let formats = pick(&args.format, &file, "format")?
            .map(|s: String| s.parse())
            .transpose()?
            .unwrap_or(Formats {
                csv: true,
                json: true,
                svg: false,
            });
        let method = match pick(&args.method, &file, "method")?.as_deref() {
            None | Some("auto") => GroundMethod::Auto,
            Some("full") => GroundMethod::Full,
            Some("symmetric") => GroundMethod::Symmetric,
            Some(other) => return Err(usage(format!("unknown method '{other}'"))),
        };
        let threads = pick(&args.threads, &file, "threads")?.unwrap_or(0);

        let config = Self {
            sites,
            spin,
            vertices,
            radius,
            field,
            j_min,
            j_max,
            j_steps,
            orientation,
            output,
            name,
            formats,
            method,
            threads,
        };
        config.validate()?;
        Ok(config)
    }

    /// Re-runs every component precondition.
    pub fn validate(&self) -> Result<(), CliError> {
        ChainParams::new(self.sites, self.spin, self.j_min, self.field).map_err(usage)?;
        self.circuit()?;
        self.grid()?;
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(usage("output name must be a plain file stem"));
        }
        Ok(())
    }

    pub fn chain(&self) -> ChainSpec {
        ChainSpec {
            sites: self.sites,
            spin: self.spin,
            field: self.field,
        }
    }

    pub fn circuit(&self) -> Result<Circuit, CliError> {
        polygon_circuit_oriented(self.vertices, self.radius, self.orientation).map_err(usage)
    }

    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        coupling_grid(self.j_min, self.j_max, self.j_steps).map_err(usage)
    }

    fn describe(&self) -> Vec<(&'static str, String)> {
        vec![
            ("spins", self.sites.to_string()),
            ("spin", self.spin.to_string()),
            ("vertices", self.vertices.to_string()),
            ("radius", self.radius.to_string()),
            ("field", self.field.to_string()),
            ("j-min", self.j_min.to_string()),
            ("j-max", self.j_max.to_string()),
            ("j-steps", self.j_steps.to_string()),
            ("orientation", self.orientation.to_string()),
        ]
    }
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn write_file(dir: &Path, name: &str, contents: &str, written: &mut Vec<String>) -> Result<(), CliError> {
    fs::write(dir.join(name), contents).map_err(|e| CliError::Io(format!("cannot write {name}: {e}")))?;
    written.push(name.to_string());
    Ok(())
}

fn write_manifest(
    dir: &Path,
    command: &str,
    settings: &[(&str, String)],
    files: &[String],
    failure: Option<&str>,
) -> Result<(), CliError> {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut text = format!(
        "status: {}\ngenerated_unix: {stamp}\ncommand: {command}\n",
        if failure.is_some() { "failed" } else { "ok" }
    );
    for (k, v) in settings {
        text.push_str(&format!("{k}: {v}\n"));
    }
    if let Some(f) = failure {
        text.push_str(&format!("failure: {f}\n"));
    }
    text.push_str(&format!("files: {}\n", files.join(", ")));
    fs::write(dir.join("MANIFEST"), text)?;
    Ok(())
}

/// Horizontal axis for sweep plots: `(J − J_c)/r` when the circuit has a radius.
fn sweep_axis(result: &SweepResult) -> (Vec<f64>, &'static str) {
    if result.records.iter().all(|r| r.scaled_offset.is_some()) {
        (
            result.records.iter().map(|r| r.scaled_offset.unwrap()).collect(),
            "(J − Jc)/r",
        )
    } else {
        (result.couplings(), "J")
    }
}

/// The four panel types: trajectory, phase, magnitude and speed.
pub fn sweep_plots(result: &SweepResult, title: &str) -> Vec<(&'static str, Plot)> {
    let (x, x_label) = sweep_axis(result);
    let re: Vec<f64> = result.records.iter().map(|r| r.value.re).collect();
    let im: Vec<f64> = result.records.iter().map(|r| r.value.im).collect();
    let phase: Vec<f64> = result.phases().iter().map(|p| p / PI).collect();
    let joined: Vec<f64> = result.joined_phase.iter().map(|p| p / PI).collect();
    let x_left = &x[..result.speed.len()];
    vec![
        (
            "trajectory",
            Plot::complex_plane(format!("{title}: C in the complex plane")).with_series(Series::new("", &re, &im)),
        ),
        (
            "phase",
            Plot::new(format!("{title}: Bargmann phase"), x_label, "φ/π")
                .with_series(Series::new("φ", &x, &phase))
                .with_series(Series::new("joined", &x, &joined)),
        ),
        (
            "magnitude",
            Plot::new(format!("{title}: |C|"), x_label, "|C|").with_series(Series::new("", &x, &result.magnitudes())),
        ),
        (
            "speed",
            Plot::new(format!("{title}: speed"), x_label, "v").with_series(Series::new("", x_left, &result.speed)),
        ),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub files: Vec<String>,
    pub rows: usize,
    pub extent: f64,
}

/// Runs one sweep and writes the requested outputs plus a MANIFEST. On a
/// solver failure the completed rows are still written.
pub fn run_sweep(config: &RunConfig) -> Result<RunSummary, CliError> {
    config.validate()?;
    let circuit = config.circuit()?;
    let grid = config.grid()?;
    fs::create_dir_all(&config.output)?;
    let options = SweepOptions {
        method: config.method,
        ..Default::default()
    };
    let outcome = with_threads(config.threads, || sweep(config.chain(), &circuit, &grid, &options))?;
    let settings = config.describe();
    let mut files = Vec::new();
    match outcome {
        Ok(result) => {
            if config.formats.csv {
                write_file(
                    &config.output,
                    &format!("{}.csv", config.name),
                    &result.to_csv(),
                    &mut files,
                )?;
            }
            if config.formats.json {
                write_file(
                    &config.output,
                    &format!("{}.json", config.name),
                    &result.to_json(),
                    &mut files,
                )?;
            }
            if config.formats.svg {
                for (panel, plot) in sweep_plots(&result, &config.name) {
                    write_file(
                        &config.output,
                        &format!("{}_{panel}.svg", config.name),
                        &plot.to_svg(),
                        &mut files,
                    )?;
                }
            }
            write_manifest(&config.output, "sweep", &settings, &files, None)?;
            Ok(RunSummary {
                files,
                rows: result.records.len(),
                extent: result.extent,
            })
        }
        Err(err) => {
            let partial = records_to_csv(&err.completed, &[], &[]);
            write_file(
                &config.output,
                &format!("{}.partial.csv", config.name),
                &partial,
                &mut files,
            )?;
            let message = err.to_string();
            write_manifest(&config.output, "sweep", &settings, &files, Some(&message))?;
            Err(CliError::Numerical(message))
        }
    }
}

fn window_sweep(sites: usize, spin: Spin, vertices: usize) -> Result<SweepResult, CliError> {
    let config = RunConfig {
        sites,
        spin,
        vertices,
        ..RunConfig::default()
    };
    let circuit = config.circuit()?;
    let grid = config.grid()?;
    sweep(config.chain(), &circuit, &grid, &SweepOptions::default()).map_err(|e| CliError::Numerical(e.to_string()))
}

/// Runs a figure preset and writes `figN_<panel>.{csv,svg}` into `dir`.
pub fn reproduce(figure: Figure, dir: &Path, threads: usize) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut emit = |panel: String, result: &SweepResult, plot: Plot| -> Result<(), CliError> {
        write_file(dir, &format!("{figure}_{panel}.csv"), &result.to_csv(), &mut files)?;
        write_file(dir, &format!("{figure}_{panel}.svg"), &plot.to_svg(), &mut files)
    };
    let pick = |plots: Vec<(&'static str, Plot)>, name: &str| plots.into_iter().find(|(p, _)| *p == name).unwrap().1;

    let outcome = with_threads(threads, || -> Result<(), CliError> {
        match figure {
            Figure::Fig3 => {
                for n in [3, 5, 7, 9, 11] {
                    let r = window_sweep(n, Spin::Half, DEFAULT_VERTICES)?;
                    let title = format!("N = {n}");
                    let plots = sweep_plots(&r, &title);
                    emit(format!("N{n}_trajectory"), &r, pick(plots.clone(), "trajectory"))?;
                    emit(format!("N{n}_phase"), &r, pick(plots, "phase"))?;
                }
            }
            Figure::Fig4 => {
                for n in [3, 5, 7, 9, 11] {
                    let r = window_sweep(n, Spin::Half, DEFAULT_VERTICES)?;
                    emit(
                        format!("N{n}_magnitude"),
                        &r,
                        pick(sweep_plots(&r, &format!("N = {n}")), "magnitude"),
                    )?;
                }
            }
            Figure::Fig5 => {
                for v in [100, 150, 200, 250, 300] {
                    let r = window_sweep(3, Spin::Half, v)?;
                    emit(
                        format!("V{v}_magnitude"),
                        &r,
                        pick(sweep_plots(&r, &format!("𝒩 = {v}")), "magnitude"),
                    )?;
                }
            }
            Figure::Fig6 => {
                let r = window_sweep(3, Spin::Half, DEFAULT_VERTICES)?;
                emit("speed".to_string(), &r, pick(sweep_plots(&r, "N = 3"), "speed"))?;
            }
            Figure::Fig7 => {
                for n in [5, 7] {
                    let r = window_sweep(n, Spin::One, DEFAULT_VERTICES)?;
                    let plots = sweep_plots(&r, &format!("spin-1, N = {n}"));
                    emit(format!("N{n}_trajectory"), &r, pick(plots.clone(), "trajectory"))?;
                    emit(format!("N{n}_phase"), &r, pick(plots, "phase"))?;
                }
            }
        }
        Ok(())
    })?;
    let failure = outcome.as_ref().err().map(|e| e.to_string());
    write_manifest(dir, &format!("reproduce {figure}"), &[], &files, failure.as_deref())?;
    outcome.map(|_| files)
}

pub fn circuit_dump(vertices: usize, radius: f64, orientation: Orientation) -> Result<String, CliError> {
    polygon_circuit_oriented(vertices, radius, orientation)
        .map(|c| c.to_json())
        .map_err(usage)
}

pub fn oracle(args: &OracleArgs) -> Result<String, CliError> {
    let spin: Spin = args.spin.parse().map_err(usage)?;
    let info = if args.brute_force {
        hx_brute_force(args.spins, args.coupling, args.field, spin)
    } else {
        hx_ground(args.spins, args.coupling, args.field, spin)
    }
    .map_err(|e: Error| usage(e))?;
    Ok(serde_json::to_string_pretty(&info).expect("oracle output serializes"))
}

/// Executes a parsed command; returns whatever should go to stdout.
pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Sweep(args) => {
            let config = RunConfig::resolve(&args)?;
            let summary = run_sweep(&config)?;
            Ok(format!(
                "wrote {} rows to {} ({})\n",
                summary.rows,
                config.output.display(),
                summary.files.join(", ")
            ))
        }
        Command::Reproduce(args) => {
            let files = reproduce(args.figure, &args.output, args.threads)?;
            Ok(format!("wrote {} files to {}\n", files.len(), args.output.display()))
        }
        Command::Circuit(args) => {
            let orientation = args.orientation.parse().map_err(usage)?;
            circuit_dump(args.vertices, args.radius, orientation).map(|s| s + "\n")
        }
        Command::Oracle(args) => oracle(&args).map(|s| s + "\n"),
    }
}
