use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phero_core::io::{export_outputs, frame_file_name, load_config, poses_csv, render_frame};
use phero_core::scenarios::Group;
use phero_core::sim::{run_simulation, ScenarioKind, SimConfig};
use phero_core::Error;

#[derive(Parser)]
#[command(name = "phero", version, about = "Multi-pheromone swarm simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trail foraging on the branching map; one forager, repeated trials.
    RunCase1 {
        /// Pheromone group: g1 (LAP), g2 (LAP+SAP), g3 (LAP+SAP+SRP).
        #[arg(long, value_parser = parse_group)]
        group: Option<Group>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Configuration file; its `scenario` key is overridden.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Aggregation around a leader with an alarm on predator approach.
    RunCase2 {
        /// Simulated seconds.
        #[arg(long)]
        duration: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replays a run from its `config.txt` and writes every K-th frame.
    Render {
        /// Output directory of an earlier run.
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        stride: usize,
    },
}

fn parse_group(s: &str) -> Result<Group, String> {
    Group::parse(s).ok_or_else(|| format!("unknown group `{s}` (expected g1, g2 or g3)"))
}

/// Failure split by exit code: 2 for configuration problems, 1 otherwise.
enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn base_config(path: Option<&Path>, scenario: ScenarioKind) -> Result<SimConfig, Failure> {
    let mut c = match path {
        // an unreadable config file is still the user's configuration
        Some(p) => load_config(p).map_err(|e| Failure::Config(e.to_string()))?,
        None => SimConfig::default(),
    };
    c.scenario = scenario;
    Ok(c)
}

fn run_and_export(config: &SimConfig, out: &Path) -> Result<(), Failure> {
    config.validate()?;
    let log = run_simulation(config)?;
    let written = export_outputs(&log, out)?;
    eprintln!("wrote {} files to {}", written.len(), out.display());
    Ok(())
}

fn render(dir: &Path, stride: usize) -> Result<(), Failure> {
    if stride == 0 {
        return Err(Failure::Config("stride must be at least 1".into()));
    }
    let mut config =
        load_config(&dir.join("config.txt")).map_err(|e| Failure::Config(e.to_string()))?;
    config.frame_stride = stride;
    config.validate()?;
    let log = run_simulation(&config)?;

    // the replay only counts if it reproduces the recorded trajectories
    let poses_path = dir.join("poses.csv");
    let recorded = fs::read_to_string(&poses_path)
        .map_err(|e| Failure::Runtime(format!("{}: {e}", poses_path.display())))?;
    if recorded != poses_csv(&log) {
        return Err(Failure::Runtime(format!(
            "replay of {} does not reproduce poses.csv",
            dir.display()
        )));
    }
    for f in &log.frames {
        let path = dir.join(frame_file_name(f.tick));
        fs::write(&path, render_frame(f))
            .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    }
    eprintln!("wrote {} frames to {}", log.frames.len(), dir.display());
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::RunCase1 {
            group,
            trials,
            seed,
            config,
            out,
        } => {
            let mut c = base_config(config.as_deref(), ScenarioKind::Case1)?;
            if let Some(g) = group {
                c.case1.group = g;
            }
            if let Some(n) = trials {
                c.case1.trials = n;
            }
            if let Some(s) = seed {
                c.seed = s;
            }
            run_and_export(&c, &out)
        }
        Command::RunCase2 {
            duration,
            seed,
            config,
            out,
        } => {
            let mut c = base_config(config.as_deref(), ScenarioKind::Case2)?;
            if let Some(d) = duration {
                c.case2.duration = d;
            }
            if let Some(s) = seed {
                c.seed = s;
            }
            run_and_export(&c, &out)
        }
        Command::Render { log, stride } => render(&log, stride),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(2),
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
