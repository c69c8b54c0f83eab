//! Object-grounded semantic fidelity scoring for image captions.
//!
//! A caption is reduced to its nouns, the image is reduced to the classes an
//! object detector reports for it, and the two term sets are compared through
//! the cosine similarity of their mean word embeddings. The similarity is then
//! scaled by the ratio of caption nouns to detected objects, so that captions
//! mentioning more of the scene score higher. No reference captions are needed.
//!
//! Module map:
//!
//! - [`embeddings`]: text vector files, term and set mean vectors, cosine.
//! - [`linguistics`]: tokenization, lexicon-based noun extraction, label normalization.
//! - [`detections`]: detector output interchange format and object term sets.
//! - [`sf`]: per-caption scoring, the human-annotated ratio, best-caption selection.
//! - [`stats`]: Pearson correlation with p-value, linear fit, aggregation, corpus histograms.

pub mod detections;
pub mod embeddings;
pub mod linguistics;
pub mod sf;
pub mod stats;

pub use detections::{parse_detections, DetectionError, DetectionSet, ObjectTermSet};
pub use embeddings::{cosine, EmbeddingError, EmbeddingTable, Vector};
pub use linguistics::{
    extract_nouns, normalize_label, tokenize, CaptionRecord, LexiconError, NounExtraction,
    NounLexicon,
};
pub use sf::{
    score_caption, select_best, semantic_similarity, CountMode, HsfResult, SfError, SfResult,
    Similarity, Status,
};
pub use stats::{
    linear_fit, pearson, reg_incomplete_beta, AggregateTable, CorpusStats, CorrelationReport,
    LinearFit, PearsonResult, StatsError,
};
