//! `rblab`: run, sweep, compare and classify convection models.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use config::Overrides;
use rblab::ic::IcKind;
use rblab::imex::NonlinearScheme;
use rblab::model::ModelKind;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or unreadable input; exit code 1.
    Config(String),
    /// The solver or analysis failed; exit code 2.
    Solver(String),
}

impl CliError {
    pub fn from_config(e: rblab::Error) -> Self {
        Self::Config(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            Self::Config(_) => 1,
            Self::Solver(_) => 2,
        }
    }
}

impl From<rblab::Error> for CliError {
    fn from(e: rblab::Error) -> Self {
        use rblab::Error as E;
        match e {
            E::InvalidParameter(_) | E::UnresolvedGrid { .. } | E::Format(_) | E::Json(_) => Self::Config(e.to_string()),
            _ => Self::Solver(e.to_string()),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "configuration error: {m}"),
            Self::Solver(m) => write!(f, "solver failure: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "rblab", version, about = "Lorenz, Galerkin and pseudospectral models of 2-D Rayleigh-Benard convection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one model and classify its attractor.
    Run(RunArgs),
    /// Repeat a run over a list of r values or truncations.
    Sweep(SweepArgs),
    /// Difference report between two runs (directories or trajectory CSVs).
    Compare(CompareArgs),
    /// Re-classify an existing trajectory CSV.
    Classify(ClassifyArgs),
    /// Project a field dump onto (X, Y, Z).
    Project(ProjectArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct RunArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_model)]
    model: Option<ModelKind>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long = "L")]
    l_max: Option<usize>,
    #[arg(long = "M")]
    m_max: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    output_every: Option<usize>,
    /// Snapshot every n-th output sample (0 disables).
    #[arg(long)]
    snapshot_every: Option<usize>,
    /// lorenz_like, random_modes or random_fields.
    #[arg(long, value_parser = parse_ic)]
    ic: Option<IcKind>,
    #[arg(long = "X", allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long = "Y", allow_hyphen_values = true)]
    y: Option<f64>,
    #[arg(long = "Z", allow_hyphen_values = true)]
    z: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    nz: Option<usize>,
    /// forward_euler or adams_bashforth2.
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<NonlinearScheme>,
    /// Transient length discarded before classification.
    #[arg(long)]
    t_cut: Option<f64>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            model: self.model,
            r: self.r,
            l_max: self.l_max,
            m_max: self.m_max,
            dt: self.dt,
            t_end: self.t_end,
            output_every: self.output_every,
            snapshot_every: self.snapshot_every,
            ic: self.ic,
            x: self.x,
            y: self.y,
            z: self.z,
            epsilon: self.epsilon,
            seed: self.seed,
            out: self.out.clone(),
            nx: self.nx,
            nz: self.nz,
            scheme: self.scheme,
            t_cut: self.t_cut,
        }
    }
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("list").required(true).args(["r_list", "r_range", "lm_list"])))]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated r values.
    #[arg(long)]
    r_list: Option<String>,
    /// start:stop:step, inclusive of stop.
    #[arg(long)]
    r_range: Option<String>,
    /// Comma-separated truncations such as 1x2,4x4,10x10.
    #[arg(long)]
    lm_list: Option<String>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    /// Write the report here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    csv: PathBuf,
    #[arg(long)]
    t_cut: Option<f64>,
    /// TOML file with a [classifier] table.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProjectArgs {
    fields: PathBuf,
    #[arg(long, default_value_t = 30.0)]
    r: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: rblab::Error| e.to_string())
}

fn parse_ic(s: &str) -> Result<IcKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown initial condition {s:?}; expected lorenz_like, random_modes or random_fields"))
}

fn parse_scheme(s: &str) -> Result<NonlinearScheme, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown scheme {s:?}; expected forward_euler or adams_bashforth2"))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(a) => commands::run(a.config.as_deref(), &a.overrides()),
        Command::Sweep(a) => {
            let list = commands::SweepList::parse(a.r_list.as_deref(), a.r_range.as_deref(), a.lm_list.as_deref())?;
            commands::sweep(a.run.config.as_deref(), &a.run.overrides(), &list)
        }
        Command::Compare(a) => commands::compare(&a.a, &a.b, a.out.as_deref()),
        Command::Classify(a) => commands::classify(&a.csv, a.t_cut, a.config.as_deref(), a.out.as_deref()),
        Command::Project(a) => commands::project(&a.fields, a.r, a.out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rblab: {e}");
            ExitCode::from(e.code())
        }
    }
}
