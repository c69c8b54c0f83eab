use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semfid::CountMode;

use crate::input::DetectorSpec;

#[derive(Parser, Debug)]
#[command(
    name = "semfid",
    version,
    about = "Reference-free caption scoring against detected objects"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Score every caption against every detector.
    Score(ScoreArgs),
    /// Mean score per captioning model and detector.
    Compare(CompareArgs),
    /// Correlate scores with the ground-truth diversity ratio.
    Validate(ValidateArgs),
    /// Histograms of nouns, caption lengths and objects per image.
    Stats(StatsArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Markdown,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StatsFormat {
    #[default]
    Csv,
    Json,
}

/// Caption text and how to read nouns out of it.
#[derive(Args, Debug, Clone)]
pub struct CaptionArgs {
    /// Captions as .jsonl or .csv with image_id, model_id and caption.
    #[arg(long)]
    pub captions: PathBuf,

    /// Noun list, one word per line. Defaults to the bundled list.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,

    /// Words never treated as nouns; replaces the default positional list.
    #[arg(long)]
    pub stop_nouns: Option<PathBuf>,

    /// How noun and object counts are taken.
    #[arg(long, default_value_t = CountMode::Distinct)]
    pub count_mode: CountMode,
}

#[derive(Args, Debug, Clone)]
pub struct ScoringArgs {
    #[command(flatten)]
    pub captions: CaptionArgs,

    /// Word vectors in whitespace-separated text form.
    #[arg(long)]
    pub embeddings: PathBuf,

    /// Drop detections below this confidence.
    #[arg(long, default_value_t = 0.0)]
    pub min_confidence: f64,
}

#[derive(Args, Debug, Clone)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub scoring: ScoringArgs,

    /// Detector output as NAME=PATH; repeat for several detectors.
    #[arg(long = "detections", value_name = "NAME=PATH", required = true)]
    pub detections: Vec<DetectorSpec>,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,

    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Mark the highest-scoring caption of each image and detector.
    #[arg(long)]
    pub select_best: bool,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[command(flatten)]
    pub scoring: ScoringArgs,

    /// Detector output as NAME=PATH; repeat for several detectors.
    #[arg(long = "detections", value_name = "NAME=PATH", required = true)]
    pub detections: Vec<DetectorSpec>,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,

    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub scoring: ScoringArgs,

    /// Human-annotated objects in the detections format.
    #[arg(long)]
    pub gt_objects: PathBuf,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,

    /// Report file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write the per-caption (hsf, sf) pairs as CSV.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct StatsArgs {
    #[command(flatten)]
    pub captions: CaptionArgs,

    /// Detector output as NAME=PATH; repeat for several detectors.
    #[arg(long = "detections", value_name = "NAME=PATH")]
    pub detections: Vec<DetectorSpec>,

    /// Drop detections below this confidence.
    #[arg(long, default_value_t = 0.0)]
    pub min_confidence: f64,

    #[arg(long, value_enum, default_value_t)]
    pub format: StatsFormat,

    /// Directory receiving one file per histogram.
    #[arg(long)]
    pub out: PathBuf,
}
