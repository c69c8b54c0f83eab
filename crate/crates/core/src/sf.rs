//! Semantic fidelity of a caption with respect to detected objects.
//!
//! `sf = s · #N / #O`, where `s` is the cosine similarity between the mean
//! embedding of the caption's nouns and the mean embedding of the detected
//! object classes, clamped to `[0, 1]`. Degenerate counts map to a status:
//!
//! | counts            | status           | sf            |
//! |-------------------|------------------|---------------|
//! | `#O = 0`          | `Undefined`      | absent        |
//! | `#N = 0 < #O`     | `NoNouns`        | `0`           |
//! | `0 < #N ≤ #O`     | `Full`           | `s · #N / #O` |
//! | `#N > #O > 0`     | `SimilarityOnly` | `s`           |

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detections::ObjectTermSet;
use crate::embeddings::{cosine, EmbeddingTable};
use crate::linguistics::{extract_nouns, tokenize, CaptionRecord, NounLexicon};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SfError {
    #[error("ground-truth object count is zero")]
    ZeroGroundTruthObjects,
    #[error("results belong to different images ({0:?} and {1:?})")]
    MixedImageIds(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Full,
    SimilarityOnly,
    NoNouns,
    Undefined,
}

impl Status {
    pub const ALL: [Status; 4] = [
        Status::Full,
        Status::SimilarityOnly,
        Status::NoNouns,
        Status::Undefined,
    ];

    pub fn from_counts(n_count: usize, o_count: usize) -> Status {
        if o_count == 0 {
            Status::Undefined
        } else if n_count == 0 {
            Status::NoNouns
        } else if n_count <= o_count {
            Status::Full
        } else {
            Status::SimilarityOnly
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Full => "full",
            Status::SimilarityOnly => "similarity_only",
            Status::NoNouns => "no_nouns",
            Status::Undefined => "undefined",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How `#N` and `#O` are counted. Similarity always uses distinct terms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Distinct caption nouns over distinct detected classes.
    #[default]
    Distinct,
    /// Noun occurrences over detected instances.
    Instances,
}

impl FromStr for CountMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "distinct" => Ok(CountMode::Distinct),
            "instances" | "tokens" => Ok(CountMode::Instances),
            other => Err(format!(
                "unknown count mode {other:?} (expected distinct or instances)"
            )),
        }
    }
}

impl fmt::Display for CountMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMode::Distinct => "distinct",
            CountMode::Instances => "instances",
        })
    }
}

/// Clamped similarity between the noun set and the object set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity {
    /// Cosine clamped to `[0, 1]`; zero when degenerate.
    pub value: f64,
    /// Unclamped cosine, absent when either set mean is missing.
    pub raw_cosine: Option<f64>,
    pub oov_nouns: usize,
    pub oov_objects: usize,
}

impl Similarity {
    pub fn is_degenerate(&self) -> bool {
        self.raw_cosine.is_none()
    }
}

pub fn semantic_similarity<S: AsRef<str>>(
    nouns: &[S],
    objects: &[Vec<String>],
    table: &EmbeddingTable,
) -> Similarity {
    let noun_mean = table.set_mean(nouns.iter().map(std::slice::from_ref));
    let object_mean = table.set_mean(objects);
    let raw_cosine = match (&noun_mean.mean, &object_mean.mean) {
        (Some(a), Some(b)) => Some(cosine(a, b).expect("vectors from one table share a dimension")),
        _ => None,
    };
    Similarity {
        value: raw_cosine.map_or(0.0, |c| c.clamp(0.0, 1.0)),
        raw_cosine,
        oov_nouns: noun_mean.unresolved,
        oov_objects: object_mean.unresolved,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SfResult {
    pub image_id: String,
    pub model_id: String,
    pub similarity: f64,
    pub raw_cosine: Option<f64>,
    pub n_count: usize,
    pub o_count: usize,
    pub sf: Option<f64>,
    pub status: Status,
    pub oov_nouns: usize,
    pub oov_objects: usize,
}

impl SfResult {
    /// Applies the status rules to precomputed counts and similarity.
    pub fn from_parts(
        image_id: impl Into<String>,
        model_id: impl Into<String>,
        similarity: Similarity,
        n_count: usize,
        o_count: usize,
    ) -> Self {
        let status = Status::from_counts(n_count, o_count);
        let s = similarity.value;
        let sf = match status {
            Status::Undefined => None,
            Status::NoNouns => Some(0.0),
            Status::SimilarityOnly => Some(s),
            Status::Full => Some(s * (n_count as f64 / o_count as f64)),
        };
        SfResult {
            image_id: image_id.into(),
            model_id: model_id.into(),
            similarity: s,
            raw_cosine: similarity.raw_cosine,
            n_count,
            o_count,
            sf,
            status,
            oov_nouns: similarity.oov_nouns,
            oov_objects: similarity.oov_objects,
        }
    }
}

/// Tokenizes the caption, extracts its nouns and scores it against the
/// detected object set.
pub fn score_caption(
    caption: &CaptionRecord,
    objects: &ObjectTermSet,
    table: &EmbeddingTable,
    lexicon: &NounLexicon,
    mode: CountMode,
) -> SfResult {
    let nouns = extract_nouns(&tokenize(&caption.text), lexicon);
    let similarity = semantic_similarity(&nouns.distinct_nouns, &objects.distinct_labels, table);
    let (n_count, o_count) = match mode {
        CountMode::Distinct => (nouns.distinct_nouns.len(), objects.distinct_count()),
        CountMode::Instances => (nouns.noun_tokens.len(), objects.instance_count),
    };
    SfResult::from_parts(
        &caption.image_id,
        &caption.model_id,
        similarity,
        n_count,
        o_count,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsfResult {
    pub image_id: String,
    pub n_count: usize,
    pub gt_object_count: usize,
    pub hsf: f64,
}

impl HsfResult {
    pub fn new(
        image_id: impl Into<String>,
        n_count: usize,
        gt_object_count: usize,
    ) -> Result<Self, SfError> {
        Ok(HsfResult {
            image_id: image_id.into(),
            n_count,
            gt_object_count,
            hsf: hsf(n_count, gt_object_count)?,
        })
    }

    /// More nouns than ground-truth objects; the oracle assumption is broken.
    pub fn exceeds_one(&self) -> bool {
        self.hsf > 1.0
    }
}

/// `#N / #O_GT`, unclamped.
pub fn hsf(n_count: usize, gt_object_count: usize) -> Result<f64, SfError> {
    if gt_object_count == 0 {
        return Err(SfError::ZeroGroundTruthObjects);
    }
    Ok(n_count as f64 / gt_object_count as f64)
}

/// Highest defined score among one image's captions; ties go to the
/// lexicographically smallest model id.
pub fn select_best(results: &[SfResult]) -> Result<Option<&SfResult>, SfError> {
    if let Some(first) = results.first() {
        if let Some(other) = results.iter().find(|r| r.image_id != first.image_id) {
            return Err(SfError::MixedImageIds(
                first.image_id.clone(),
                other.image_id.clone(),
            ));
        }
    }
    Ok(results
        .iter()
        .filter_map(|r| r.sf.map(|sf| (sf, r)))
        .max_by(|(a, ra), (b, rb)| a.total_cmp(b).then_with(|| rb.model_id.cmp(&ra.model_id)))
        .map(|(_, r)| r))
}

/// Orders results by image then model id.
pub fn result_order(a: &SfResult, b: &SfResult) -> Ordering {
    a.image_id
        .cmp(&b.image_id)
        .then_with(|| a.model_id.cmp(&b.model_id))
}
