//! Loading captions, detections, embeddings and lexicons from disk.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use semfid::detections::DetectionSet;
use semfid::{parse_detections, CaptionRecord, EmbeddingTable, NounLexicon};
use serde::Deserialize;

use crate::error::CliError;

/// A `--detections NAME=PATH` argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectorSpec {
    pub id: String,
    pub path: PathBuf,
}

impl std::str::FromStr for DetectorSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('=') {
            Some((id, path)) if !id.is_empty() && !path.is_empty() => Ok(DetectorSpec {
                id: id.to_string(),
                path: PathBuf::from(path),
            }),
            _ => Err(CliError::DetectorSpec(s.to_string())),
        }
    }
}

pub type Detections = BTreeMap<String, DetectionSet>;

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::io(path, e))
}

#[derive(Deserialize)]
struct CaptionLine {
    image_id: String,
    model_id: String,
    caption: String,
}

/// Reads captions from `.jsonl` or `.csv` (header `image_id,model_id,caption`).
///
/// Every (image, model) pair may appear once. An empty file is an error.
pub fn load_captions(path: &Path) -> Result<Vec<CaptionRecord>, CliError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let rows = match ext.as_deref() {
        Some("jsonl") => read_jsonl_captions(path)?,
        Some("csv") => read_csv_captions(path)?,
        _ => return Err(CliError::CaptionsFormat(path.to_path_buf())),
    };
    if rows.is_empty() {
        return Err(CliError::NoCaptions(path.to_path_buf()));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        let bad = |reason: String| CliError::Captions {
            path: path.to_path_buf(),
            line,
            reason,
        };
        let rec = CaptionRecord::new(row.image_id, row.model_id, row.caption)
            .map_err(|e| bad(e.to_string()))?;
        if !seen.insert((rec.image_id.clone(), rec.model_id.clone())) {
            return Err(bad(format!(
                "second caption for image {:?} from model {:?}",
                rec.image_id, rec.model_id
            )));
        }
        out.push(rec);
    }
    Ok(out)
}

fn read_jsonl_captions(path: &Path) -> Result<Vec<(usize, CaptionLine)>, CliError> {
    let mut rows = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| CliError::Captions {
            path: path.to_path_buf(),
            line: i + 1,
            reason: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let row: CaptionLine = serde_json::from_str(&line).map_err(|e| CliError::Captions {
            path: path.to_path_buf(),
            line: i + 1,
            reason: e.to_string(),
        })?;
        rows.push((i + 1, row));
    }
    Ok(rows)
}

fn read_csv_captions(path: &Path) -> Result<Vec<(usize, CaptionLine)>, CliError> {
    let bad = |line: Option<&csv::Position>, reason: String| CliError::Captions {
        path: path.to_path_buf(),
        line: line.map_or(1, |p| p.line() as usize),
        reason,
    };
    let mut reader = csv::Reader::from_reader(open(path)?);
    let headers = reader
        .headers()
        .map_err(|e| bad(e.position(), e.to_string()))?
        .clone();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.position(), e.to_string()))?;
        let row: CaptionLine = record
            .deserialize(Some(&headers))
            .map_err(|e| bad(record.position(), e.to_string()))?;
        rows.push((record.position().map_or(0, |p| p.line() as usize), row));
    }
    Ok(rows)
}

pub fn load_detections(path: &Path) -> Result<Detections, CliError> {
    parse_detections(open(path)?).map_err(|source| CliError::Detections {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads every detector file; ids must be unique and at least one is needed.
pub fn load_detectors(specs: &[DetectorSpec]) -> Result<BTreeMap<String, Detections>, CliError> {
    if specs.is_empty() {
        return Err(CliError::NoDetectors);
    }
    let mut out = BTreeMap::new();
    for spec in specs {
        if out.contains_key(&spec.id) {
            return Err(CliError::DuplicateDetector(spec.id.clone()));
        }
        out.insert(spec.id.clone(), load_detections(&spec.path)?);
    }
    Ok(out)
}

pub fn load_embeddings(path: &Path) -> Result<EmbeddingTable, CliError> {
    EmbeddingTable::from_reader(open(path)?, None).map_err(|source| CliError::Embeddings {
        path: path.to_path_buf(),
        source,
    })
}

/// The lexicon file when given, otherwise the bundled noun list.
pub fn load_lexicon(
    nouns: Option<&Path>,
    stop_nouns: Option<&Path>,
) -> Result<NounLexicon, CliError> {
    let stop = stop_nouns.map(|p| open(p).map(|r| (p, r))).transpose()?;
    match (nouns, stop) {
        (None, None) => Ok(NounLexicon::builtin()),
        (None, Some((stop_path, reader))) => {
            NounLexicon::builtin_with_stop(reader).map_err(|source| CliError::Lexicon {
                path: stop_path.to_path_buf(),
                source,
            })
        }
        (Some(path), stop) => {
            NounLexicon::load(open(path)?, stop.map(|(_, r)| r)).map_err(|source| {
                CliError::Lexicon {
                    path: path.to_path_buf(),
                    source,
                }
            })
        }
    }
}
