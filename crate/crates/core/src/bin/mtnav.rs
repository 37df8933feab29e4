use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mtnav::config::ExperimentConfig;
use mtnav::control::AxisConvention;
use mtnav::harness::{self, CampaignStats, RunOptions};
use mtnav::mission::MissionKind;

const EXIT_CONFIG: u8 = 2;
const EXIT_TRIAL_FAILED: u8 = 3;

#[derive(Parser, Debug)]
#[command(author, version, about = "Camera-only drone navigation experiments", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a seeded campaign and write results.csv, trajectory_<i>.csv and summary.txt.
    Run(RunArgs),
    /// Recompute the summary statistics from a results.csv.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Path spread (m) of the return leg in a trajectory CSV.
    Spread {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum)]
    task: Task,
    /// Overrides `trials` from the config file.
    #[arg(long)]
    trials: Option<usize>,
    /// Overrides `seed` from the config file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Write every rendered frame as PPM under <out>/frames/.
    #[arg(long)]
    dump_frames: bool,
    /// Use `vel_forward = k * error_y` (image down is forward) instead of the default sign.
    #[arg(long)]
    literal_eq3: bool,
    /// Exit with status 3 if any trial fails.
    #[arg(long)]
    strict: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Task {
    Track,
    Forward,
    Return,
    Coordination,
}

impl From<Task> for MissionKind {
    fn from(t: Task) -> Self {
        match t {
            Task::Track => MissionKind::TrackVisible,
            Task::Forward => MissionKind::ForwardSearchHover,
            Task::Return => MissionKind::SearchReturnLand,
            Task::Coordination => MissionKind::CarrierCoordination,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Stats { input } => stats(input),
        Command::Spread { input } => spread(input),
    };
    match result {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type CliResult = Result<ExitCode, (u8, String)>;

fn run(args: RunArgs) -> CliResult {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path).map_err(|e| (EXIT_CONFIG, e.to_string()))?,
        None => ExperimentConfig::default(),
    };
    if let Some(n) = args.trials {
        cfg.trials = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.literal_eq3 {
        cfg.sim.gains.axes = AxisConvention::ImageDownIsForward;
    }
    let campaign = cfg
        .campaign(Some(args.task.into()))
        .map_err(|e| (EXIT_CONFIG, e.to_string()))?;

    let opts = RunOptions {
        dump_frames_to: args.dump_frames.then(|| args.out.join("frames")),
    };
    let (stats, missions) = harness::run_campaign_detailed(&campaign, &opts).map_err(|e| (1, e.to_string()))?;
    harness::write_campaign_outputs(&args.out, &stats, &missions).map_err(|e| (1, e.to_string()))?;

    print!("{}", stats.summary());
    if args.strict && stats.success_count < stats.trials.len() {
        return Ok(ExitCode::from(EXIT_TRIAL_FAILED));
    }
    Ok(ExitCode::SUCCESS)
}

fn stats(input: PathBuf) -> CliResult {
    let file = File::open(&input).map_err(|e| (1, format!("{}: {e}", input.display())))?;
    let trials = harness::read_results_csv(file).map_err(|e| (1, e.to_string()))?;
    print!("{}", CampaignStats::from_trials(trials).summary());
    Ok(ExitCode::SUCCESS)
}

fn spread(input: PathBuf) -> CliResult {
    let file = File::open(&input).map_err(|e| (1, format!("{}: {e}", input.display())))?;
    let spread = harness::path_spread_csv(file).map_err(|e| (1, e.to_string()))?;
    println!("{spread:.6}");
    Ok(ExitCode::SUCCESS)
}
