//! Brute-force semantic fidelity straight from its definition, using plain
//! maps, naive summation and hand-rolled text handling.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

pub const WORDS: [&str; 6] = ["cat", "dog", "man", "tv", "hat", "cup"];
pub const FILLER: [&str; 4] = ["a", "the", "is", "on"];

/// One randomly generated scoring problem.
#[derive(Debug, Clone)]
pub struct Instance {
    pub dim: usize,
    pub vectors: Vec<(String, Vec<f64>)>,
    pub lexicon: Vec<String>,
    pub caption: String,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expected {
    pub n: usize,
    pub o: usize,
    pub s: f64,
    /// `None` when undefined.
    pub sf: Option<f64>,
}

pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let dim = rng.gen_range(1..=3);
    let vocab_size = rng.gen_range(1..=WORDS.len());
    let mut vocab: Vec<&str> = WORDS.to_vec();
    vocab.shuffle(rng);
    vocab.truncate(vocab_size);

    // some vocabulary words are out of the embedding table
    let mut vectors = Vec::new();
    for w in &vocab {
        if rng.gen_bool(0.85) {
            let v = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            vectors.push((w.to_string(), v));
        }
    }
    // and some are not nouns
    let lexicon = vocab
        .iter()
        .filter(|_| rng.gen_bool(0.8))
        .map(|w| w.to_string())
        .collect();

    let mut caption = Vec::new();
    for _ in 0..rng.gen_range(0..=5) {
        if rng.gen_bool(0.4) {
            caption.push(FILLER.choose(rng).unwrap().to_string());
        }
        let w = vocab.choose(rng).unwrap();
        caption.push(if rng.gen_bool(0.2) {
            w.to_uppercase()
        } else {
            w.to_string()
        });
    }
    let caption = caption.join(" ") + if rng.gen_bool(0.5) { "." } else { "" };

    let mut labels = Vec::new();
    for _ in 0..rng.gen_range(0..=5) {
        let a = vocab.choose(rng).unwrap();
        let label = if rng.gen_bool(0.25) {
            let b = vocab.choose(rng).unwrap();
            format!("{}_{}", a, b.to_uppercase())
        } else if rng.gen_bool(0.2) {
            a.to_uppercase()
        } else {
            a.to_string()
        };
        labels.push(label);
    }

    Instance {
        dim,
        vectors,
        lexicon,
        caption,
        labels,
    }
}

fn words_of(text: &str, split: impl Fn(char) -> bool) -> Vec<String> {
    text.split(split)
        .map(|w| {
            w.trim_matches(|c: char| c.is_ascii_punctuation())
                .to_lowercase()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

fn distinct(items: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for x in items {
        if !out.contains(x) {
            out.push(x.clone());
        }
    }
    out
}

fn naive_mean(vs: &[Vec<f64>], dim: usize) -> Option<Vec<f64>> {
    if vs.is_empty() {
        return None;
    }
    let mut acc = vec![0.0; dim];
    for v in vs {
        for d in 0..dim {
            acc[d] += v[d];
        }
    }
    Some(acc.into_iter().map(|x| x / vs.len() as f64).collect())
}

fn naive_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Distinct-count semantic fidelity of the instance.
pub fn expected(inst: &Instance) -> Expected {
    let table: HashMap<&str, &Vec<f64>> =
        inst.vectors.iter().map(|(w, v)| (w.as_str(), v)).collect();

    let nouns: Vec<String> = words_of(&inst.caption, char::is_whitespace)
        .into_iter()
        .filter(|w| inst.lexicon.contains(w))
        .collect();
    let nouns = distinct(&nouns);

    let objects: Vec<String> = inst
        .labels
        .iter()
        .map(|l| words_of(l, |c| c.is_whitespace() || c == '_' || c == '-').join(" "))
        .filter(|l| !l.is_empty())
        .collect();
    let objects = distinct(&objects);

    let noun_vecs: Vec<Vec<f64>> = nouns
        .iter()
        .filter_map(|n| table.get(n.as_str()).map(|v| v.to_vec()))
        .collect();
    let object_vecs: Vec<Vec<f64>> = objects
        .iter()
        .filter_map(|o| {
            let parts: Vec<Vec<f64>> = o
                .split(' ')
                .filter_map(|t| table.get(t).map(|v| v.to_vec()))
                .collect();
            naive_mean(&parts, inst.dim)
        })
        .collect();

    let s = match (
        naive_mean(&noun_vecs, inst.dim),
        naive_mean(&object_vecs, inst.dim),
    ) {
        (Some(a), Some(b)) => naive_cosine(&a, &b).clamp(0.0, 1.0),
        _ => 0.0,
    };
    let (n, o) = (nouns.len(), objects.len());
    let sf = if o == 0 {
        None
    } else if n == 0 {
        Some(0.0)
    } else if n > o {
        Some(s)
    } else {
        Some(s * n as f64 / o as f64)
    };
    Expected { n, o, s, sf }
}
