use std::io;
use std::path::{Path, PathBuf};

use semfid::{DetectionError, EmbeddingError, LexiconError, StatsError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Embeddings {
        path: PathBuf,
        source: EmbeddingError,
    },
    #[error("{}: {source}", path.display())]
    Lexicon { path: PathBuf, source: LexiconError },
    #[error("{}: {source}", path.display())]
    Detections {
        path: PathBuf,
        source: DetectionError,
    },
    #[error("{}: line {line}: {reason}", path.display())]
    Captions {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{}: unsupported captions format (expected .jsonl or .csv)", .0.display())]
    CaptionsFormat(PathBuf),
    #[error("{}: no captions", .0.display())]
    NoCaptions(PathBuf),
    #[error("invalid detector spec {0:?} (expected NAME=PATH)")]
    DetectorSpec(String),
    #[error("detector id {0:?} given more than once")]
    DuplicateDetector(String),
    #[error("at least one --detections NAME=PATH is required")]
    NoDetectors,
    #[error("only {0} captions align with ground-truth objects; at least 3 are needed")]
    NoOverlap(usize),
    #[error("validation statistics: {0}")]
    Stats(#[from] StatsError),
    #[error("--min-confidence must lie in [0, 1], got {0}")]
    MinConfidence(f64),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
