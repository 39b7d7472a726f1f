mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{ModelKind, Settings, UsageError};
use ness_core::presets::all_presets;
use ness_core::steady::solve_steady_state_detailed;
use ness_core::sweep::{run_sweep, write_csv, Axis, Execution, OutputSet, TAIL_WARNING};
use ness_core::{eigenbasis_populations, internal_energy, von_neumann_entropy, Error};

/// Steady states and thermodynamics of quantum systems between two baths.
#[derive(Parser)]
#[command(name = "ness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one steady state and dump it as JSON.
    Steady(ModelArgs),
    /// Evaluate observables over a temperature or coupling grid and write CSV.
    Sweep(SweepArgs),
    /// Steady-state populations of the Hamiltonian eigenstates, as JSON.
    Populations(ModelArgs),
    /// List the named parameter sets.
    Presets,
}

#[derive(Args)]
struct ModelArgs {
    /// Named parameter set; explicit flags override its values.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega2: Option<f64>,
    /// Qubit-qubit coupling J.
    #[arg(long, allow_hyphen_values = true)]
    j: Option<f64>,
    /// First-bath rate γ.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Second-bath rate Γ.
    #[arg(long, allow_hyphen_values = true)]
    big_gamma: Option<f64>,
    /// Number of oscillator Fock levels.
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t2: Option<f64>,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key = value` settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Outer axis as name:start:stop:points, e.g. T1:0.05:10:50.
    #[arg(long)]
    axis1: Option<Axis>,
    /// Inner axis, same format.
    #[arg(long)]
    axis2: Option<Axis>,
    /// Comma list from U, S, C_T1, C_T2, F_T1, F_T2, populations.
    #[arg(long)]
    outputs: Option<OutputSet>,
    /// Maximum concurrent solves; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

impl ModelArgs {
    fn settings(&self) -> Settings {
        Settings {
            model: self.model,
            preset: self.preset.clone(),
            omega: self.omega,
            omega1: self.omega1,
            omega2: self.omega2,
            j: self.j,
            gamma: self.gamma,
            big_gamma: self.big_gamma,
            cutoff: self.cutoff,
            t1: self.t1,
            t2: self.t2,
            out_path: self.out.clone(),
            ..Settings::default()
        }
    }

    fn resolve(&self, extra: Settings) -> Result<Settings, UsageError> {
        let file = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let flags = Settings { axis1: extra.axis1, axis2: extra.axis2, outputs: extra.outputs, ..self.settings() };
        Ok(file.overlay(flags))
    }
}

enum Failure {
    Usage(String),
    Solver(Error),
    Io(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::NonpositiveFrequency(_) => Failure::Usage(e.to_string()),
            other => Failure::Solver(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Io(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn warn_tail(top: f64) {
    if top > TAIL_WARNING {
        eprintln!(
            "warning: top Fock level holds population {top:.3e} (> {TAIL_WARNING:e}); increase --cutoff"
        );
    }
}

#[derive(Serialize)]
struct StateDump {
    model: &'static str,
    dim: usize,
    rho: Vec<[f64; 2]>,
    #[serde(rename = "U")]
    energy: f64,
    #[serde(rename = "S")]
    entropy: f64,
    residual: f64,
}

fn run_steady(args: &ModelArgs) -> Result<(), Failure> {
    let settings = args.resolve(Settings::default())?;
    let params = settings.model_params()?;
    let solution = solve_steady_state_detailed(&params.build()?)?;
    let rho = &solution.state;
    if let ness_core::ModelParams::Oscillator(_) = params {
        warn_tail(*rho.populations().last().expect("nonempty state"));
    }
    let dump = StateDump {
        model: params.name(),
        dim: rho.dim(),
        rho: rho.matrix().as_slice().iter().map(|z| [z.re, z.im]).collect(),
        energy: internal_energy(rho, &params.hamiltonian())?,
        entropy: von_neumann_entropy(rho)?,
        residual: solution.residual,
    };
    let mut out = open_output(settings.out_path.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &dump).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Level {
    energy: f64,
    population: f64,
}

#[derive(Serialize)]
struct PopulationDump {
    model: &'static str,
    dim: usize,
    levels: Vec<Level>,
}

fn run_populations(args: &ModelArgs) -> Result<(), Failure> {
    let settings = args.resolve(Settings::default())?;
    let params = settings.model_params()?;
    let rho = solve_steady_state_detailed(&params.build()?)?.state;
    let levels = eigenbasis_populations(&rho, &params.hamiltonian())?
        .into_iter()
        .map(|l| Level { energy: l.energy, population: l.population })
        .collect();
    let dump = PopulationDump { model: params.name(), dim: rho.dim(), levels };
    let mut out = open_output(settings.out_path.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &dump).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn run_sweep_command(args: &SweepArgs) -> Result<(), Failure> {
    let extra = Settings { axis1: args.axis1, axis2: args.axis2, outputs: args.outputs, ..Settings::default() };
    let settings = args.model.resolve(extra)?;
    let spec = settings.sweep_spec()?;
    let records = run_sweep(&spec, Execution::with_workers(args.workers))?;

    let mut failed = 0;
    let mut worst_tail = 0.0f64;
    for r in &records {
        if let Some(e) = &r.error {
            failed += 1;
            eprintln!("warning: T1={} T2={} J={}: {}: {e}", r.t1, r.t2, r.j, e.name());
        }
        worst_tail = worst_tail.max(r.top_population.unwrap_or(0.0));
    }
    warn_tail(worst_tail);

    let mut out = open_output(settings.out_path.as_deref())?;
    write_csv(&mut out, &spec, &records)?;
    out.flush()?;
    if failed == records.len() {
        let first = records[0].error.clone().expect("every point failed");
        return Err(Failure::Solver(first));
    }
    if failed > 0 {
        eprintln!("warning: {failed} of {} grid points failed", records.len());
    }
    Ok(())
}

fn list_presets() -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    for p in all_presets() {
        let axes = match p.axis2 {
            Some(a2) => format!("{} x {}", p.axis1, a2),
            None => p.axis1.to_string(),
        };
        writeln!(out, "{:<6}  {}  [{}; outputs {}]", p.name, p.description, axes, p.outputs)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Steady(args) => run_steady(args),
        Command::Sweep(args) => run_sweep_command(args),
        Command::Populations(args) => run_populations(args),
        Command::Presets => list_presets(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
