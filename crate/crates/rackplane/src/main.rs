use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rackplane::solver::{brute_force, solve_exact, solve_greedy, Instance, SolutionFile};
use rackplane::sweep::{
    load_workload, run_sweep, write_report, Scenario, SolveMode, SweepConfig, WorkloadSource,
    DEFAULT_NUM_NODES,
};
use rackplane::topology::{build_default_rack, RackConfig};
use rackplane::workload::{apps_to_json, generate_apps};

#[derive(Parser)]
#[command(
    name = "rackplane",
    version,
    about = "Model and optimize application placement on a rack-scale composable infrastructure \
             with a WDM optical backplane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded workload file
    Generate {
        #[arg(long)]
        seed: u64,
        /// Number of applications
        #[arg(long)]
        apps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a single placement case and write the solution JSON
    Solve(SolveArgs),
    /// Run the whole parameter grid described by a sweep config
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Parallel cases (defaults to the config value or all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Omit runtimes so reruns are byte-identical
        #[arg(long)]
        no_timing: bool,
    },
    /// Merge a sweep output directory into one CSV
    Report {
        #[arg(long)]
        in_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Leave the runtime column empty
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Args)]
struct SolveArgs {
    /// Rack config JSON; defaults to a 9-node rack with reference parameters
    #[arg(long)]
    rack: Option<PathBuf>,
    /// Workload JSON file
    #[arg(long)]
    workload: PathBuf,
    /// Channels in the rack-wide pool
    #[arg(long)]
    wavelengths: usize,
    /// Per-channel rate in Gbps
    #[arg(long)]
    rate: f64,
    /// Weighting scenario: I or II
    #[arg(long, default_value = "I")]
    scenario: String,
    /// exact, greedy or brute
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Search budget in seconds (exact mode)
    #[arg(long, default_value_t = 600.0)]
    budget: f64,
    /// Node count when no rack file is given
    #[arg(long)]
    nodes: Option<usize>,
    /// Override individual objective weights
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long)]
    alpha3: Option<f64>,
    #[arg(long)]
    alpha4: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Generate { seed, apps, out } => {
            let workload = generate_apps(seed, apps);
            fs::write(&out, apps_to_json(&workload))
                .map_err(|e| format!("{}: {e}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => solve(args),
        Command::Sweep { config, out_dir, jobs, no_timing } => {
            let text =
                fs::read_to_string(&config).map_err(|e| format!("{}: {e}", config.display()))?;
            let mut sweep_config = SweepConfig::from_json(&text).map_err(|e| e.to_string())?;
            if jobs.is_some() {
                sweep_config.jobs = jobs;
            }
            run_sweep(&sweep_config, &out_dir, !no_timing).map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { in_dir, out, no_timing } => {
            write_report(&in_dir, &out, !no_timing).map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn solve(args: SolveArgs) -> Result<ExitCode, String> {
    let scenario: Scenario = args.scenario.parse()?;
    let mode: SolveMode = args.mode.parse()?;

    let rack = match &args.rack {
        Some(path) => {
            if args.nodes.is_some() {
                return Err("--nodes conflicts with --rack".into());
            }
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            RackConfig::from_json(&text)
                .and_then(|c| c.build(Some(args.wavelengths), Some(args.rate)))
                .map_err(|e| e.to_string())?
        }
        None => {
            build_default_rack(args.nodes.unwrap_or(DEFAULT_NUM_NODES), args.wavelengths, args.rate)
                .map_err(|e| e.to_string())?
        }
    };
    let apps = load_workload(&WorkloadSource::File(args.workload)).map_err(|e| e.to_string())?;

    let mut weights = scenario.weights();
    if let Some(a) = args.alpha1 {
        weights.alpha1 = a;
    }
    if let Some(a) = args.alpha2 {
        weights.alpha2 = a;
    }
    if let Some(a) = args.alpha3 {
        weights.alpha3 = a;
    }
    if let Some(a) = args.alpha4 {
        weights.alpha4 = a;
    }

    let instance = Instance::new(rack, apps, weights);
    let solution = match mode {
        SolveMode::Exact => solve_exact(&instance, args.budget),
        SolveMode::Greedy => solve_greedy(&instance),
        SolveMode::Brute => brute_force(&instance).map_err(|e| e.to_string())?,
    };
    fs::write(&args.out, SolutionFile::from_solution(&solution).to_json())
        .map_err(|e| format!("{}: {e}", args.out.display()))?;

    // Exit 1 signals that not every application could be provisioned.
    if solution.breakdown.tra > 0 {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
