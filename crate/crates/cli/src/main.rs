//! `gridslam` command-line front end.

mod commands;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "gridslam", version, about = "Occupancy-grid exploration simulator and floor-plan tools")]
struct Cli {
    /// Episode configuration (JSON mirroring EpisodeConfig).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Random seed; drawn from OS entropy and printed when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (or directory for `run --dump`-style artifacts where noted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct SchemaArg {
    /// Floor-plan JSON layout: canonical or houseexpo.
    #[arg(long, default_value = "canonical")]
    schema: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rasterize a floor plan into a PNG grid (dataset palette).
    Rasterize {
        plan: PathBuf,
        #[command(flatten)]
        schema: SchemaArg,
    },
    /// Render a plan or PNG grid with a palette; ASCII to stdout without --out.
    Render {
        input: PathBuf,
        #[command(flatten)]
        schema: SchemaArg,
        /// dataset (walls black, free white) or observation.
        #[arg(long, default_value = "dataset")]
        palette: String,
    },
    /// Room statistics over a directory of plans (defaults to $GRIDSLAM_DATA).
    Stats {
        dir: Option<PathBuf>,
        #[arg(long, default_value = "houseexpo")]
        schema: String,
        /// Count plans without room records as one room.
        #[arg(long)]
        implicit_room: bool,
    },
    /// Fill small pockets, carve doorways until samples connect, then refine and crop.
    Repair {
        input: PathBuf,
        #[command(flatten)]
        schema: SchemaArg,
        /// Number of sample points.
        #[arg(short, long, default_value_t = 100)]
        m: usize,
        /// Doorway width, meters.
        #[arg(long, default_value_t = gridslam::worldgen::DEFAULT_OPENING_WIDTH)]
        opening_width: f64,
        /// Free pockets smaller than this (m²) become obstacle first.
        #[arg(long, default_value_t = gridslam::worldgen::DEFAULT_FILL_AREA)]
        fill_area: f64,
        /// Skip the closing and crop pass.
        #[arg(long)]
        no_refine: bool,
    },
    /// Report near-identical maps in a directory of plans and PNG grids.
    Dedup {
        dir: PathBuf,
        #[command(flatten)]
        schema: SchemaArg,
        /// Largest differing-cell fraction still counted as a duplicate.
        #[arg(long, default_value_t = gridslam::worldgen::DEFAULT_DIFF_THRESHOLD)]
        threshold: f64,
    },
    /// Run one episode with a scripted policy.
    Run {
        plan: PathBuf,
        #[command(flatten)]
        schema: SchemaArg,
        /// random or frontier.
        #[arg(long, default_value = "random")]
        policy: String,
        /// Steps to run; defaults to the configured episode length.
        #[arg(long)]
        steps: Option<usize>,
        /// Directory for rollout.jsonl, observations.raw, map.png and summary.json.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Time environment steps on each map; two synthetic houses when none given.
    Bench {
        plans: Vec<PathBuf>,
        #[command(flatten)]
        schema: SchemaArg,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report(format);
            ExitCode::from(e.exit_code())
        }
    }
}
