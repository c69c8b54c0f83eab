//! Command-line front end for semantic fidelity scoring.
//!
//! Each subcommand loads its inputs, runs the pipeline and renders a single
//! text artifact (or, for `stats`, a directory of them). Output files are
//! replaced atomically, so a failed run leaves earlier results intact.

pub mod args;
pub mod error;
pub mod input;
pub mod output;
pub mod pipeline;
pub mod render;

use std::collections::BTreeMap;

pub use args::{Cli, Command, Format, StatsFormat};
pub use error::CliError;
pub use input::DetectorSpec;

use args::{CaptionArgs, CompareArgs, ScoreArgs, ScoringArgs, StatsArgs, ValidateArgs};
use pipeline::Settings;
use semfid::{CaptionRecord, EmbeddingTable, NounLexicon};

/// Rendered output of one command and any warnings raised on the way.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub warnings: Vec<String>,
}

struct Loaded {
    captions: Vec<CaptionRecord>,
    lexicon: NounLexicon,
    table: EmbeddingTable,
    settings: Settings,
}

fn load_captions(a: &CaptionArgs) -> Result<(Vec<CaptionRecord>, NounLexicon), CliError> {
    let captions = input::load_captions(&a.captions)?;
    let lexicon = input::load_lexicon(a.lexicon.as_deref(), a.stop_nouns.as_deref())?;
    Ok((captions, lexicon))
}

fn load(a: &ScoringArgs) -> Result<Loaded, CliError> {
    let settings = Settings::new(a.min_confidence, a.captions.count_mode)?;
    let (captions, lexicon) = load_captions(&a.captions)?;
    let table = input::load_embeddings(&a.embeddings)?;
    Ok(Loaded {
        captions,
        lexicon,
        table,
        settings,
    })
}

fn missing_warnings(missing: &[(String, String)]) -> Vec<String> {
    let mut per_detector: BTreeMap<&str, usize> = BTreeMap::new();
    for (d, _) in missing {
        *per_detector.entry(d).or_default() += 1;
    }
    per_detector
        .into_iter()
        .map(|(d, n)| {
            format!("detector {d:?} has no entry for {n} captioned image(s); scored as undefined")
        })
        .collect()
}

pub fn score_report(a: &ScoreArgs) -> Result<Report, CliError> {
    let l = load(&a.scoring)?;
    let detectors = input::load_detectors(&a.detections)?;
    let mut scored = pipeline::score(&l.captions, &detectors, &l.table, &l.lexicon, l.settings);
    if a.select_best {
        pipeline::mark_best(&mut scored.rows);
    }
    Ok(Report {
        text: render::score(&scored.rows, a.format, a.select_best),
        warnings: missing_warnings(&scored.missing),
    })
}

pub fn compare_report(a: &CompareArgs) -> Result<Report, CliError> {
    let l = load(&a.scoring)?;
    let detectors = input::load_detectors(&a.detections)?;
    let scored = pipeline::score(&l.captions, &detectors, &l.table, &l.lexicon, l.settings);
    let table = pipeline::aggregate(&scored.rows);
    Ok(Report {
        text: render::compare(&table, a.format),
        warnings: missing_warnings(&scored.missing),
    })
}

/// The report text and the rendered per-caption pairs.
pub fn validate_report(a: &ValidateArgs) -> Result<(Report, String), CliError> {
    let l = load(&a.scoring)?;
    let gt = input::load_detections(&a.gt_objects)?;
    let v = pipeline::validate(&l.captions, &gt, &l.table, &l.lexicon, l.settings)?;
    let mut warnings = Vec::new();
    if v.skipped > 0 {
        warnings.push(format!(
            "{} caption(s) skipped: image has no ground-truth objects",
            v.skipped
        ));
    }
    let over = v.pairs.iter().filter(|p| p.hsf > 1.0).count();
    if over > 0 {
        warnings.push(format!(
            "{over} caption(s) name more nouns than ground-truth objects (hsf > 1)"
        ));
    }
    Ok((
        Report {
            text: render::validation(&v, a.format),
            warnings,
        },
        render::validation_pairs(&v),
    ))
}

pub fn stats_files(a: &StatsArgs) -> Result<Vec<(String, String)>, CliError> {
    let settings = Settings::new(a.min_confidence, a.captions.count_mode)?;
    let (captions, lexicon) = load_captions(&a.captions)?;
    let mut detectors = BTreeMap::new();
    for spec in &a.detections {
        if detectors.contains_key(&spec.id) {
            return Err(CliError::DuplicateDetector(spec.id.clone()));
        }
        detectors.insert(spec.id.clone(), input::load_detections(&spec.path)?);
    }
    let stats = pipeline::corpus_stats(&captions, &detectors, &lexicon, settings);
    Ok(render::stats(&stats, a.format))
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("semfid: warning: {w}");
    }
}

/// Runs one parsed command line to completion.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Score(a) => {
            let r = score_report(&a)?;
            warn(&r.warnings);
            output::emit(a.out.as_deref(), &r.text)
        }
        Command::Compare(a) => {
            let r = compare_report(&a)?;
            warn(&r.warnings);
            output::emit(a.out.as_deref(), &r.text)
        }
        Command::Validate(a) => {
            let (r, pairs) = validate_report(&a)?;
            warn(&r.warnings);
            if let Some(p) = &a.pairs {
                output::write_atomic(p, &pairs)?;
            }
            output::emit(a.out.as_deref(), &r.text)
        }
        Command::Stats(a) => output::write_bundle(&a.out, &stats_files(&a)?),
    }
}
