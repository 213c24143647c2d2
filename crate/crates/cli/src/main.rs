//! `minkgh`: batch front end to minkgh-core. Reports are JSON on stdout, or
//! `report.json` plus CSV tables under `--out`.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Config, Output};
use io::{emit, CliError, CliResult, RunHeader, SCHEMA_VERSION};

/// Tolerance of every subcommand but `cmc`.
const DEFAULT_TOL: f64 = 1e-9;
/// Relative spread accepted by `cmc`.
const DEFAULT_CMC_TOL: f64 = 1e-4;

#[derive(Parser)]
#[command(name = "minkgh", version, about = "Flat globally hyperbolic spacetimes: isometries, regular domains, holonomy, models")]
struct Cli {
    /// Expected spacetime dimension n; inputs of another dimension are rejected.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Numerical tolerance [default: 1e-9, 1e-4 for cmc].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Word length of group enumerations.
    #[arg(long, global = true)]
    maxlen: Option<usize>,
    /// Seed of every sampler.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory receiving report.json and the CSV tables; stdout gets the report otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an isometry {"L": [[..]], "tau": [..]}.
    Classify { isometry: PathBuf },
    /// Membership of points in the achronal domain of an isometry.
    #[command(after_help = "CSV membership.csv: x0..x{n-1}, inside, on_boundary, margin, in_u[, oracle_achronal, oracle_on_boundary]; flags are 0/1.\nPOINTS is a JSON list of coordinate lists or a CSV of rows.")]
    Achronal {
        isometry: PathBuf,
        points: PathBuf,
        /// Also run the iterate oracle up to this |q|.
        #[arg(long)]
        oracle: Option<u32>,
    },
    /// Action of an isometry on lightlike planes [{"v": [..], "s": ..}].
    #[command(name = "penrose-act", after_help = "CSV planes.csv: x1..x{n-1}, s, image_x1..image_x{n-1}, image_s, expansion_factor, conformal_derivative.\nSphere coordinates are the spatial part of the normalised direction.")]
    PenroseAct { isometry: PathBuf, planes: PathBuf },
    /// Regularity, cosmological time and level sets of a domain cut out by lightlike planes.
    #[command(after_help = "LAMBDA is a list of planes or {\"planes\": [..], \"orientation\": \"future\"|\"past\"}.\nCSV points.csv: x0..x{n-1}, T (NaN outside the domain).\nCSV level_set.csv: x0..x{n-1}, gauss0..gauss{n-1}, ray.")]
    Domain {
        lambda: PathBuf,
        /// Points at which to evaluate the cosmological time (JSON or CSV).
        #[arg(long)]
        points: Option<PathBuf>,
        /// Sample the level set T = LEVEL.
        #[arg(long)]
        level: Option<f64>,
        /// Number of seeded rays of the level-set sampler.
        #[arg(long, default_value_t = 32)]
        rays: usize,
    },
    /// Elementarity, limit set and admissibility of a group {dimension, generators, relations, tol}.
    #[command(after_help = "CSV limit_set.csv: x1..x{n-1}, s per plane, fixed planes first, then cusp planes.\nDefault --maxlen 6.")]
    Group { spec: PathBuf },
    /// Cohomology dimensions and cone status of a cocycle (list of generator translations).
    #[command(after_help = "Default --maxlen 6.")]
    Cocycle { spec: PathBuf, cocycle: PathBuf },
    /// Cohomology of the thrice-punctured sphere group and a seeded cone probe.
    #[command(after_help = "--maxlen bounds the probe depth (default 8, 0 skips the probe).")]
    Tri,
    /// Build a model tagged by "family": translation, misner, unipotent, radiant, extension, twisted.
    #[command(after_help = "CSV surface.csv (unipotent): x0..x{n-1} per sampled point of the invariant surface.\nCSV level.csv (radiant): x0..x{n-1}, T per sampled point of the level.")]
    Model { model: PathBuf },
    /// Constant mean curvature check of a named surface (JSON) or a tabulated graph (CSV).
    #[command(after_help = "JSON input: {\"surface\": {\"kind\": ..}, \"dim\", \"half_width\", \"per_axis\", \"fill\", \"step\"}.\nCSV input: rows x1..x{n-1}, phi on a uniform grid.\nCSV estimates.csv: x1..x{n-1}, H.")]
    Cmc { surface: PathBuf },
}

fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("MINKGH_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| CliError::validation(format!("MINKGH_THREADS={v} is not a thread count")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::validation(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    let default_tol = if matches!(cli.command, Command::Cmc { .. }) { DEFAULT_CMC_TOL } else { DEFAULT_TOL };
    let tol = cli.tol.unwrap_or(default_tol);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::validation("--tol must be positive"));
    }
    let cfg = Config { dim: cli.dim, tol, maxlen: cli.maxlen, seed: cli.seed };
    let path = |p: &PathBuf| p.display().to_string();
    let (name, inputs, out): (&str, Vec<String>, CliResult<Output>) = match &cli.command {
        Command::Classify { isometry } => ("classify", vec![path(isometry)], commands::classify_cmd(&cfg, isometry)),
        Command::Achronal { isometry, points, oracle } => ("achronal", vec![path(isometry), path(points)], commands::achronal_cmd(&cfg, isometry, points, *oracle)),
        Command::PenroseAct { isometry, planes } => ("penrose-act", vec![path(isometry), path(planes)], commands::penrose_cmd(&cfg, isometry, planes)),
        Command::Domain { lambda, points, level, rays } => {
            let mut inputs = vec![path(lambda)];
            inputs.extend(points.iter().map(path));
            ("domain", inputs, commands::domain_cmd(&cfg, lambda, points.as_deref(), *level, *rays))
        }
        Command::Group { spec } => ("group", vec![path(spec)], commands::group_cmd(&cfg, spec)),
        Command::Cocycle { spec, cocycle } => ("cocycle", vec![path(spec), path(cocycle)], commands::cocycle_cmd(&cfg, spec, cocycle)),
        Command::Tri => ("tri", Vec::new(), commands::tri_cmd(&cfg)),
        Command::Model { model } => ("model", vec![path(model)], commands::model_cmd(&cfg, model)),
        Command::Cmc { surface } => ("cmc", vec![path(surface)], commands::cmc_cmd(&cfg, surface)),
    };
    let out = out?;
    let maxlen = match &cli.command {
        Command::Group { .. } | Command::Cocycle { .. } | Command::Model { .. } => Some(cli.maxlen.unwrap_or(commands::DEFAULT_MAXLEN)),
        Command::Tri => Some(cli.maxlen.unwrap_or(minkgh_core::cohomology::TRI_PROBE_MAXLEN)),
        _ => cli.maxlen,
    };
    let header = RunHeader { schema_version: SCHEMA_VERSION, command: name.into(), tol, maxlen, seed: cli.seed, dim: cli.dim, inputs };
    emit(&header, &out.result, &out.tables, cli.out.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
