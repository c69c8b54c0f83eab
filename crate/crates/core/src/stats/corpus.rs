//! Corpus statistics: nouns per caption, caption length, objects per image.

use std::collections::{BTreeMap, BTreeSet};

use crate::detections::ObjectTermSet;
use crate::linguistics::NounExtraction;
use crate::sf::CountMode;

/// Bin value (unit width) → frequency.
pub type Histogram = BTreeMap<usize, usize>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    /// Per captioning model.
    pub nouns_per_caption: BTreeMap<String, Histogram>,
    /// Per captioning model, in tokens.
    pub caption_length: BTreeMap<String, Histogram>,
    /// Per detector, distinct classes per image.
    pub objects_per_image: BTreeMap<String, Histogram>,
    pub noun_vocabulary: BTreeMap<String, BTreeSet<String>>,
    pub object_vocabulary: BTreeMap<String, BTreeSet<String>>,
}

impl CorpusStats {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one caption; the noun count follows `mode`.
    pub fn add_caption(
        &mut self,
        model_id: &str,
        token_count: usize,
        nouns: &NounExtraction,
        mode: CountMode,
    ) {
        let n = match mode {
            CountMode::Distinct => nouns.distinct_nouns.len(),
            CountMode::Instances => nouns.noun_tokens.len(),
        };
        bump(&mut self.nouns_per_caption, model_id, n);
        bump(&mut self.caption_length, model_id, token_count);
        self.noun_vocabulary
            .entry(model_id.to_string())
            .or_default()
            .extend(nouns.distinct_nouns.iter().cloned());
    }

    pub fn add_image(&mut self, detector_id: &str, objects: &ObjectTermSet) {
        bump(
            &mut self.objects_per_image,
            detector_id,
            objects.distinct_count(),
        );
        self.object_vocabulary
            .entry(detector_id.to_string())
            .or_default()
            .extend(objects.label_strings());
    }

    pub fn unique_nouns(&self, model_id: &str) -> usize {
        self.noun_vocabulary.get(model_id).map_or(0, BTreeSet::len)
    }

    pub fn unique_objects(&self, detector_id: &str) -> usize {
        self.object_vocabulary
            .get(detector_id)
            .map_or(0, BTreeSet::len)
    }
}

fn bump(map: &mut BTreeMap<String, Histogram>, key: &str, bin: usize) {
    *map.entry(key.to_string())
        .or_default()
        .entry(bin)
        .or_default() += 1;
}
