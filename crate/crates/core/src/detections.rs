//! Object detector output ingestion.
//!
//! The interchange format is JSON lines, one object per image:
//!
//! ```text
//! {"image_id": "img3", "labels": ["Cellular Telephone"], "confidences": [0.71]}
//! ```
//!
//! `confidences` is optional. A single JSON array of the same objects is also
//! accepted; the two layouts are told apart by the first non-whitespace byte.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linguistics::{dedup_in_order, normalize_label};

/// Where in the source a bad record was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line of a JSON-lines file.
    Line(usize),
    /// 1-based element of a JSON array file.
    Record(usize),
    /// 1-based line and column reported by the JSON parser.
    Position { line: usize, column: usize },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(l) => write!(f, "line {l}"),
            Location::Record(r) => write!(f, "record {r}"),
            Location::Position { line, column } => write!(f, "line {line}, column {column}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum DetectionError {
    #[error("{location}: {reason}")]
    MalformedRecord { location: Location, reason: String },
    #[error("{location}: image id {image_id:?} appears more than once")]
    DuplicateImage {
        image_id: String,
        location: Location,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Raw class labels reported for one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionSet {
    pub image_id: String,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidences: Option<Vec<f64>>,
}

impl DetectionSet {
    pub fn new(image_id: impl Into<String>, labels: Vec<String>) -> Self {
        DetectionSet {
            image_id: image_id.into(),
            labels,
            confidences: None,
        }
    }

    fn check(&self) -> Result<(), String> {
        if self.image_id.is_empty() {
            return Err("empty image_id".into());
        }
        if let Some(conf) = &self.confidences {
            if conf.len() != self.labels.len() {
                return Err(format!(
                    "{} confidences for {} labels",
                    conf.len(),
                    self.labels.len()
                ));
            }
            if let Some(c) = conf.iter().find(|c| !(0.0..=1.0).contains(*c)) {
                return Err(format!("confidence {c} outside [0, 1]"));
            }
        }
        Ok(())
    }

    /// Filters by confidence, normalizes the surviving labels and collapses
    /// repeats of the same class.
    ///
    /// Labels without confidences are always kept. A label that normalizes to
    /// no tokens is dropped and does not count as an instance.
    pub fn to_term_set(&self, min_confidence: f64) -> ObjectTermSet {
        let kept: Vec<Vec<String>> = self
            .labels
            .iter()
            .enumerate()
            .filter(|(i, _)| match &self.confidences {
                Some(c) => c[*i] >= min_confidence,
                None => true,
            })
            .map(|(_, label)| normalize_label(label))
            .filter(|tokens| !tokens.is_empty())
            .collect();
        let instance_count = kept.len();
        ObjectTermSet {
            distinct_labels: dedup_in_order(kept),
            instance_count,
        }
    }
}

/// The object term set O of one image.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ObjectTermSet {
    /// Normalized labels in first-seen order, without repeats.
    pub distinct_labels: Vec<Vec<String>>,
    /// Labels that survived filtering, repeats included.
    pub instance_count: usize,
}

impl ObjectTermSet {
    /// Builds a term set directly from raw labels with no confidence filter.
    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Self {
        DetectionSet::new("", labels.iter().map(|l| l.as_ref().to_string()).collect())
            .to_term_set(0.0)
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct_labels.len()
    }

    /// Distinct labels with their tokens joined by single spaces.
    pub fn label_strings(&self) -> Vec<String> {
        self.distinct_labels.iter().map(|t| t.join(" ")).collect()
    }
}

/// Parses a detections file into one set per image, keyed and ordered by id.
pub fn parse_detections<R: BufRead>(
    mut source: R,
) -> Result<BTreeMap<String, DetectionSet>, DetectionError> {
    let mut text = String::new();
    source.read_to_string(&mut text).map_err(|e| {
        if e.kind() == io::ErrorKind::InvalidData {
            DetectionError::MalformedRecord {
                location: Location::Line(1),
                reason: "input is not valid UTF-8".into(),
            }
        } else {
            DetectionError::Io(e)
        }
    })?;

    let records: Vec<(Location, DetectionSet)> = if text.trim_start().starts_with('[') {
        let sets: Vec<DetectionSet> =
            serde_json::from_str(&text).map_err(|e| DetectionError::MalformedRecord {
                location: Location::Position {
                    line: e.line(),
                    column: e.column(),
                },
                reason: e.to_string(),
            })?;
        sets.into_iter()
            .enumerate()
            .map(|(i, s)| (Location::Record(i + 1), s))
            .collect()
    } else {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let location = Location::Line(i + 1);
            let set: DetectionSet =
                serde_json::from_str(line).map_err(|e| DetectionError::MalformedRecord {
                    location,
                    reason: e.to_string(),
                })?;
            out.push((location, set));
        }
        out
    };

    let mut map = BTreeMap::new();
    for (location, set) in records {
        set.check()
            .map_err(|reason| DetectionError::MalformedRecord { location, reason })?;
        if map.contains_key(&set.image_id) {
            return Err(DetectionError::DuplicateImage {
                image_id: set.image_id,
                location,
            });
        }
        map.insert(set.image_id.clone(), set);
    }
    Ok(map)
}

/// Writes sets as JSON lines in the order given.
pub fn write_detections<'a, W, I>(mut out: W, sets: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a DetectionSet>,
{
    for set in sets {
        serde_json::to_writer(&mut out, set)?;
        writeln!(out)?;
    }
    Ok(())
}
