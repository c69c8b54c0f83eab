//! Caption tokenization, noun extraction and detector label normalization.
//!
//! Nouns are identified by lexicon membership rather than by a statistical
//! tagger: a token is a noun when the lexicon lists it and the stop-noun list
//! does not.

use std::collections::HashSet;
use std::io::{self, BufRead};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Nouns bundled with the crate, used when no lexicon file is supplied.
const BUILTIN_NOUNS: &str = include_str!("../data/nouns.txt");

/// Positional nouns that carry no object identity ("in front of").
pub const DEFAULT_STOP_NOUNS: [&str; 5] = ["front", "middle", "top", "side", "bottom"];

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon contains no nouns")]
    EmptyLexicon,
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("caption record has an empty {0}")]
pub struct CaptionError(pub &'static str);

/// One caption produced by one captioning model for one image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaptionRecord {
    pub image_id: String,
    pub model_id: String,
    pub text: String,
}

impl CaptionRecord {
    pub fn new(
        image_id: impl Into<String>,
        model_id: impl Into<String>,
        text: impl Into<String>,
    ) -> Result<Self, CaptionError> {
        let rec = CaptionRecord {
            image_id: image_id.into(),
            model_id: model_id.into(),
            text: text.into(),
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn validate(&self) -> Result<(), CaptionError> {
        if self.image_id.is_empty() {
            return Err(CaptionError("image_id"));
        }
        if self.model_id.is_empty() {
            return Err(CaptionError("model_id"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NounExtraction {
    /// Noun occurrences in caption order, duplicates kept.
    pub noun_tokens: Vec<String>,
    /// `noun_tokens` de-duplicated, first occurrence wins.
    pub distinct_nouns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NounLexicon {
    nouns: HashSet<String>,
    stop_nouns: HashSet<String>,
}

impl NounLexicon {
    /// Builds a lexicon from word lists; entries are lowercased.
    pub fn new<I, J, S, T>(nouns: I, stop_nouns: J) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let nouns: HashSet<String> = nouns
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        if nouns.is_empty() {
            return Err(LexiconError::EmptyLexicon);
        }
        let stop_nouns = stop_nouns
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        Ok(NounLexicon { nouns, stop_nouns })
    }

    /// Reads one word per line; `#` lines are comments, blank lines ignored.
    /// Without a stop list the positional defaults are used; a supplied stop
    /// list replaces them.
    pub fn load<R: BufRead, S: BufRead>(nouns: R, stop: Option<S>) -> Result<Self, LexiconError> {
        let nouns = read_word_list(nouns)?;
        let stop = match stop {
            Some(s) => read_word_list(s)?,
            None => DEFAULT_STOP_NOUNS.iter().map(|s| s.to_string()).collect(),
        };
        Self::new(nouns, stop)
    }

    /// The bundled general-purpose noun list with default stop nouns.
    pub fn builtin() -> Self {
        Self::load(BUILTIN_NOUNS.as_bytes(), None::<&[u8]>).expect("bundled lexicon is valid")
    }

    /// The bundled noun list with `stop` replacing the default stop nouns.
    pub fn builtin_with_stop<S: BufRead>(stop: S) -> Result<Self, LexiconError> {
        Self::load(BUILTIN_NOUNS.as_bytes(), Some(stop))
    }

    pub fn is_noun(&self, token: &str) -> bool {
        self.nouns.contains(token) && !self.stop_nouns.contains(token)
    }

    pub fn noun_count(&self) -> usize {
        self.nouns.len()
    }

    pub fn stop_nouns(&self) -> impl Iterator<Item = &str> {
        self.stop_nouns.iter().map(String::as_str)
    }
}

fn read_word_list<R: BufRead>(reader: R) -> io::Result<Vec<String>> {
    let mut words = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let word = line.trim();
        if word.is_empty() || word.starts_with('#') {
            continue;
        }
        words.push(word.to_lowercase());
    }
    Ok(words)
}

/// Splits on whitespace, trims ASCII punctuation from both ends of each
/// token, lowercases, and drops tokens that end up empty.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| {
            t.trim_matches(|c: char| c.is_ascii_punctuation())
                .to_lowercase()
        })
        .filter(|t| !t.is_empty())
        .collect()
}

pub fn extract_nouns<S: AsRef<str>>(tokens: &[S], lexicon: &NounLexicon) -> NounExtraction {
    let noun_tokens: Vec<String> = tokens
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| lexicon.is_noun(t))
        .map(str::to_string)
        .collect();
    let distinct_nouns = dedup_in_order(noun_tokens.iter().cloned());
    NounExtraction {
        noun_tokens,
        distinct_nouns,
    }
}

/// Turns a detector class label such as `"Cellular Telephone"` or
/// `"safety_bicycle"` into embeddable lowercase tokens.
pub fn normalize_label(label: &str) -> Vec<String> {
    label
        .split(|c: char| c.is_whitespace() || c == '_' || c == '-')
        .map(|t| {
            t.trim_matches(|c: char| c.is_ascii_punctuation())
                .to_lowercase()
        })
        .filter(|t| !t.is_empty())
        .collect()
}

pub(crate) fn dedup_in_order<T, I>(items: I) -> Vec<T>
where
    I: IntoIterator<Item = T>,
    T: Eq + std::hash::Hash + Clone,
{
    let mut seen = HashSet::new();
    items
        .into_iter()
        .filter(|x| seen.insert(x.clone()))
        .collect()
}
