//! Mean semantic fidelity per (captioning model, detector) pair.

use std::collections::{BTreeMap, BTreeSet};

use crate::sf::{SfResult, Status};

/// Scores and status counts of one (model, detector) cell.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AggregateCell {
    /// Scores of `Full` and `SimilarityOnly` results.
    values: Vec<f64>,
    pub full: usize,
    pub similarity_only: usize,
    pub no_nouns: usize,
    pub undefined: usize,
}

impl AggregateCell {
    pub fn add(&mut self, result: &SfResult) {
        match result.status {
            Status::Full => self.full += 1,
            Status::SimilarityOnly => self.similarity_only += 1,
            Status::NoNouns => self.no_nouns += 1,
            Status::Undefined => self.undefined += 1,
        }
        if matches!(result.status, Status::Full | Status::SimilarityOnly) {
            if let Some(sf) = result.sf {
                self.values.push(sf);
            }
        }
    }

    pub fn merge(&mut self, other: AggregateCell) {
        self.values.extend(other.values);
        self.full += other.full;
        self.similarity_only += other.similarity_only;
        self.no_nouns += other.no_nouns;
        self.undefined += other.undefined;
    }

    /// Mean over the contributing scores, summed in ascending order so the
    /// value does not depend on input order. `None` when nothing contributed.
    pub fn mean(&self) -> Option<f64> {
        if self.values.is_empty() {
            return None;
        }
        let mut sorted = self.values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        Some(sorted.iter().sum::<f64>() / sorted.len() as f64)
    }

    /// Number of results that entered the mean.
    pub fn contributing(&self) -> usize {
        self.values.len()
    }

    pub fn total(&self) -> usize {
        self.full + self.similarity_only + self.no_nouns + self.undefined
    }
}

/// Rows are captioning models, columns detectors, both in lexicographic order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AggregateTable {
    cells: BTreeMap<(String, String), AggregateCell>,
    models: BTreeSet<String>,
    detectors: BTreeSet<String>,
}

impl AggregateTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_results<'a, I>(results: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a SfResult)>,
    {
        let mut table = Self::new();
        for (detector, r) in results {
            table.add(detector, r);
        }
        table
    }

    pub fn add(&mut self, detector_id: &str, result: &SfResult) {
        self.models.insert(result.model_id.clone());
        self.detectors.insert(detector_id.to_string());
        self.cells
            .entry((result.model_id.clone(), detector_id.to_string()))
            .or_default()
            .add(result);
    }

    pub fn merge(&mut self, other: AggregateTable) {
        self.models.extend(other.models);
        self.detectors.extend(other.detectors);
        for (key, cell) in other.cells {
            self.cells.entry(key).or_default().merge(cell);
        }
    }

    pub fn models(&self) -> impl Iterator<Item = &str> {
        self.models.iter().map(String::as_str)
    }

    pub fn detectors(&self) -> impl Iterator<Item = &str> {
        self.detectors.iter().map(String::as_str)
    }

    pub fn cell(&self, model_id: &str, detector_id: &str) -> Option<&AggregateCell> {
        self.cells
            .get(&(model_id.to_string(), detector_id.to_string()))
    }

    pub fn mean(&self, model_id: &str, detector_id: &str) -> Option<f64> {
        self.cell(model_id, detector_id)
            .and_then(AggregateCell::mean)
    }
}
