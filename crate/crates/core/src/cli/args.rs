use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "homecore", version, about = "Home service robot toolkit")]
pub struct Cli {
    /// Seed for every randomized operation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format for results and errors.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Extra diagnostics on standard error.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Semantic map queries and rendering.
    #[command(subcommand)]
    Map(MapCommand),
    /// Grasp pose from a depth image and object masks.
    Grasp(GraspArgs),
    /// Echo state network gesture classifier.
    #[command(subcommand)]
    Esn(EsnCommand),
    /// Generate an annotated synthetic detection dataset.
    Scenegen(ScenegenArgs),
    /// Plan and simulate a spoken-style command.
    Plan(PlanArgs),
}

#[derive(Debug, Args)]
pub struct MapFile {
    /// Map JSON file.
    #[arg(long)]
    pub map: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum MapCommand {
    /// Name the room containing a point.
    Locate {
        #[command(flatten)]
        map: MapFile,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
    },
    /// Standoff pose in front of a furniture item.
    Navgoal {
        #[command(flatten)]
        map: MapFile,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = crate::semantic_map::DEFAULT_STANDOFF)]
        standoff: f64,
    },
    /// Occupancy grid with furniture marked occupied (PGM).
    Rasterize {
        #[command(flatten)]
        map: MapFile,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = crate::grid::DEFAULT_RESOLUTION)]
        resolution: f64,
    },
    /// Colored drawing of the map; `.svg` or `.ppm` by extension.
    Render {
        #[command(flatten)]
        map: MapFile,
        #[arg(long)]
        out: PathBuf,
        /// Pixels per meter.
        #[arg(long, default_value_t = 50.0)]
        scale: f64,
    },
}

#[derive(Debug, Args)]
pub struct GraspArgs {
    /// 16-bit PGM depth image in millimeters.
    #[arg(long)]
    pub depth: PathBuf,
    /// 8-bit PGM object masks (nonzero = object); repeatable.
    #[arg(long, required = true, num_args = 1..)]
    pub mask: Vec<PathBuf>,
    /// Camera intrinsics JSON.
    #[arg(long)]
    pub intrinsics: PathBuf,
    /// Include the oriented bounding box in the output.
    #[arg(long)]
    pub dump_bbox: bool,
    /// Write the selected object's point cloud as ASCII PLY.
    #[arg(long)]
    pub cloud: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum EsnCommand {
    /// Write a synthetic waving / not-waving dataset (JSON lines).
    Gen {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Synthetic generator settings (JSON).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Build a reservoir and fit its readout.
    Train {
        /// Reservoir settings (JSON); defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Accuracy and confusion matrix on a labeled dataset.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Accepted for symmetry with `train`; the model carries its config.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Label each sequence of a dataset.
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ScenegenArgs {
    /// Scene configuration JSON; defaults when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub count: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write flat-shaded PPM previews.
    #[arg(long)]
    pub previews: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    Rule,
    Llm,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// World JSON: a map plus objects, persons, operator and robot.
    #[arg(long)]
    pub world: PathBuf,
    #[arg(long, value_enum)]
    pub backend: BackendKind,
    #[arg(long, conflicts_with = "repl")]
    pub command: Option<String>,
    /// Read one command per line from standard input.
    #[arg(long)]
    pub repl: bool,
    /// Also write the transcript(s) to this file.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Chat endpoint URL (else `LLM_ENDPOINT`).
    #[arg(long)]
    pub endpoint: Option<String>,
    #[arg(long, default_value_t = 30.0)]
    pub timeout_secs: f64,
    #[arg(long, default_value_t = crate::planner::DEFAULT_STEP_LIMIT)]
    pub max_steps: usize,
}
