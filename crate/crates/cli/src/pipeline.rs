//! Scoring, aggregation, validation and statistics over loaded inputs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use semfid::sf::hsf;
use semfid::stats::CorpusStats;
use semfid::{
    extract_nouns, score_caption, select_best, tokenize, AggregateTable, CaptionRecord,
    CorrelationReport, CountMode, EmbeddingTable, NounLexicon, ObjectTermSet, SfResult, Status,
};
use serde::Serialize;

use crate::error::CliError;
use crate::input::Detections;

/// One scored (caption, detector) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredRow {
    pub detector_id: String,
    pub result: SfResult,
    pub best: bool,
}

/// Scoring output plus the captions whose image a detector never reported.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scored {
    pub rows: Vec<ScoredRow>,
    pub missing: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub min_confidence: f64,
    pub count_mode: CountMode,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            min_confidence: 0.0,
            count_mode: CountMode::Distinct,
        }
    }
}

impl Settings {
    pub fn new(min_confidence: f64, count_mode: CountMode) -> Result<Self, CliError> {
        if !(0.0..=1.0).contains(&min_confidence) {
            return Err(CliError::MinConfidence(min_confidence));
        }
        Ok(Settings {
            min_confidence,
            count_mode,
        })
    }
}

fn term_sets(detections: &Detections, min_confidence: f64) -> BTreeMap<&str, ObjectTermSet> {
    detections
        .iter()
        .map(|(id, set)| (id.as_str(), set.to_term_set(min_confidence)))
        .collect()
}

/// Scores every caption against every detector.
///
/// An image absent from a detector file has no detections and scores
/// `Undefined`; such pairs are also listed in `missing`. Rows come back
/// sorted by image, model and detector whatever the thread count.
pub fn score(
    captions: &[CaptionRecord],
    detectors: &BTreeMap<String, Detections>,
    table: &EmbeddingTable,
    lexicon: &NounLexicon,
    settings: Settings,
) -> Scored {
    let empty = ObjectTermSet::default();
    let sets: Vec<(&str, BTreeMap<&str, ObjectTermSet>)> = detectors
        .iter()
        .map(|(id, d)| (id.as_str(), term_sets(d, settings.min_confidence)))
        .collect();

    let mut rows: Vec<ScoredRow> = captions
        .par_iter()
        .flat_map_iter(|caption| {
            let sets = &sets;
            let empty = &empty;
            sets.iter().map(move |(detector, by_image)| {
                let objects = by_image.get(caption.image_id.as_str()).unwrap_or(empty);
                ScoredRow {
                    detector_id: detector.to_string(),
                    result: score_caption(caption, objects, table, lexicon, settings.count_mode),
                    best: false,
                }
            })
        })
        .collect();
    rows.sort_by(|a, b| {
        (&a.result.image_id, &a.result.model_id, &a.detector_id).cmp(&(
            &b.result.image_id,
            &b.result.model_id,
            &b.detector_id,
        ))
    });

    let mut missing: Vec<(String, String)> = sets
        .iter()
        .flat_map(|(detector, by_image)| {
            captions
                .iter()
                .filter(|c| !by_image.contains_key(c.image_id.as_str()))
                .map(|c| (detector.to_string(), c.image_id.clone()))
        })
        .collect();
    missing.sort();
    missing.dedup();

    Scored { rows, missing }
}

/// Sets `best` on the top caption of every (image, detector) group.
pub fn mark_best(rows: &mut [ScoredRow]) {
    let mut groups: BTreeMap<(&str, &str), Vec<usize>> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        groups
            .entry((row.result.image_id.as_str(), row.detector_id.as_str()))
            .or_default()
            .push(i);
    }
    let winners: Vec<usize> = groups
        .values()
        .filter_map(|idx| {
            let group: Vec<SfResult> = idx.iter().map(|&i| rows[i].result.clone()).collect();
            let best = select_best(&group).expect("group shares one image id")?;
            idx.iter()
                .copied()
                .find(|&i| rows[i].result.model_id == best.model_id)
        })
        .collect();
    for i in winners {
        rows[i].best = true;
    }
}

pub fn aggregate(rows: &[ScoredRow]) -> AggregateTable {
    AggregateTable::from_results(rows.iter().map(|r| (r.detector_id.as_str(), &r.result)))
}

/// One caption scored against ground-truth objects.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationPair {
    pub image_id: String,
    pub model_id: String,
    pub n_count: usize,
    pub gt_object_count: usize,
    pub hsf: f64,
    pub sf: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validation {
    pub report: CorrelationReport,
    /// Captions whose image has no ground-truth objects.
    pub skipped: usize,
    pub pairs: Vec<ValidationPair>,
}

/// Scores captions with the ground-truth objects as the detector and
/// correlates the result with `#N / #O_GT`.
pub fn validate(
    captions: &[CaptionRecord],
    ground_truth: &Detections,
    table: &EmbeddingTable,
    lexicon: &NounLexicon,
    settings: Settings,
) -> Result<Validation, CliError> {
    let sets = term_sets(ground_truth, settings.min_confidence);
    let mut pairs: Vec<ValidationPair> = captions
        .par_iter()
        .filter_map(|caption| {
            let objects = sets.get(caption.image_id.as_str())?;
            let r = score_caption(caption, objects, table, lexicon, settings.count_mode);
            let sf = r.sf?;
            Some(ValidationPair {
                hsf: hsf(r.n_count, r.o_count).ok()?,
                image_id: r.image_id,
                model_id: r.model_id,
                n_count: r.n_count,
                gt_object_count: r.o_count,
                sf,
                status: r.status,
            })
        })
        .collect();
    pairs.sort_by(|a, b| (&a.image_id, &a.model_id).cmp(&(&b.image_id, &b.model_id)));
    let skipped = captions.len() - pairs.len();
    if pairs.len() < 3 {
        return Err(CliError::NoOverlap(pairs.len()));
    }
    let human: Vec<f64> = pairs.iter().map(|p| p.hsf).collect();
    let sf: Vec<f64> = pairs.iter().map(|p| p.sf).collect();
    Ok(Validation {
        report: CorrelationReport::compute(&human, &sf)?,
        skipped,
        pairs,
    })
}

/// Histograms over the captions and every detector's images.
pub fn corpus_stats(
    captions: &[CaptionRecord],
    detectors: &BTreeMap<String, Detections>,
    lexicon: &NounLexicon,
    settings: Settings,
) -> CorpusStats {
    let mut stats = CorpusStats::new();
    for caption in captions {
        let tokens = tokenize(&caption.text);
        let nouns = extract_nouns(&tokens, lexicon);
        stats.add_caption(&caption.model_id, tokens.len(), &nouns, settings.count_mode);
    }
    for (detector, detections) in detectors {
        for set in term_sets(detections, settings.min_confidence).values() {
            stats.add_image(detector, set);
        }
    }
    stats
}
