//! `patchfold`: unfold prismatoids and convex patches from the command line.
//!
//! Exit codes: 0 success, 1 overlap found by `verify`, 2 malformed input,
//! 3 internal invariant violation.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "patchfold", version, about = "Edge unfoldings of prismatoids and convex patches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Unfold an input document into layout JSON.
    Unfold {
        #[command(subcommand)]
        kind: UnfoldKind,
    },
    /// Check layouts (one document or NDJSON) for overlap; exit 1 if any overlaps.
    Verify {
        /// Layout file, or `-` for stdin.
        #[arg(default_value = "-")]
        input: String,
        /// Render the (single) layout with its witnesses.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Draw the altitude rays of a prismatoid over its topless petal unfolding.
    Partition {
        #[arg(default_value = "-")]
        input: String,
        /// Write SVG here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Emit the partition as JSON instead of SVG.
        #[arg(long)]
        json: bool,
    },
    /// Height-sweep property report for a prismatoid; exit 3 if a property fails.
    Sweep {
        #[arg(default_value = "-")]
        input: String,
        /// Comma-separated heights (default: 9-point grid scaled by the diameter).
        #[arg(long, value_delimiter = ',')]
        z_grid: Option<Vec<f64>>,
    },
    /// Emit a built-in fixture as JSON.
    Fixture {
        /// One of banded-hexagon, counterexample-nv, drum, wings-ccw.
        name: String,
        /// For prismatoids, emit the flipped prismatoid whose topless patch is studied.
        #[arg(long)]
        topless: bool,
    },
    /// Scan seeded random prismatoids.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Prismatoid, patch or polyhedron JSON, or `-` for stdin.
    #[arg(default_value = "-")]
    input: String,
    /// Base face for polyhedron inputs.
    #[arg(long)]
    base_face: Option<usize>,
    /// Write an SVG of the layout (single-layout output only).
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum UnfoldKind {
    /// Petal unfolding. Prismatoids default to the constructive topless algorithm.
    Petal {
        #[command(flatten)]
        io: InputArgs,
        /// Stream every petal unfolding as NDJSON.
        #[arg(long)]
        enumerate: bool,
        /// Include the top face (enumeration only).
        #[arg(long)]
        include_top: bool,
        /// Accepted for clarity; prismatoids are unfolded topless unless `--include-top`.
        #[arg(long)]
        topless: bool,
        #[arg(long, default_value_t = patchfold::unfold::DEFAULT_PETAL_CAP)]
        cap: u128,
    },
    /// Band unfolding of a prismatoid.
    Band {
        #[command(flatten)]
        io: InputArgs,
        /// Lateral edge to cut.
        #[arg(long, default_value_t = 0, conflicts_with = "all")]
        cut: usize,
        /// Stream every band unfolding as NDJSON.
        #[arg(long)]
        all: bool,
        /// Override the attachment: `BASE_ON,TOP_ON` lateral face indices.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        attach: Option<Vec<usize>>,
    },
    /// Petal unfolding of a prismatoid with nonobtuse lateral faces.
    Nonobtuse {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long)]
        include_top: bool,
        /// Stream every petal unfolding as NDJSON.
        #[arg(long)]
        enumerate: bool,
    },
    /// Every admissible single-tree unfolding, as NDJSON.
    Tree {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, default_value_t = patchfold::unfold::DEFAULT_TREE_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Constructive,
    Exhaustive,
    /// Obtuse-angle turning heuristic (topless); may overlap.
    ObtuseTurn,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// generic, near_flat, drum_like or thin.
    #[arg(long, default_value = "generic")]
    bias: String,
    #[arg(long, default_value_t = 0)]
    start: u64,
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, value_enum, default_value_t = Mode::Constructive)]
    mode: Mode,
    /// Also run every instance on the 9-point height grid.
    #[arg(long)]
    z_grid: bool,
    /// Exclude the top face in exhaustive mode.
    #[arg(long)]
    no_top: bool,
    #[arg(long, default_value_t = patchfold::unfold::DEFAULT_PETAL_CAP)]
    cap: u128,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Persist the summary and failure artifacts under `<OUT>/runs/<seed>/`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            if let Some(dump) = &f.dump {
                eprintln!("{dump}");
            }
            ExitCode::from(f.code)
        }
    }
}
