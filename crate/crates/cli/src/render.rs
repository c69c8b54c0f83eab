//! Text renderings of every command's output.
//!
//! CSV and JSON keep full precision (shortest round-trip form); markdown shows
//! two decimals. A missing score is an empty CSV field, `null` in JSON and
//! `--` in markdown.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use semfid::stats::{CorpusStats, Histogram};
use semfid::{AggregateTable, Status};
use serde::Serialize;

use crate::args::{Format, StatsFormat};
use crate::pipeline::{ScoredRow, Validation};

const DASH: &str = "--";

fn full(x: f64) -> String {
    format!("{x}")
}

fn two(x: Option<f64>) -> String {
    x.map_or_else(|| DASH.to_string(), |v| format!("{v:.2}"))
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(&row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv of utf-8 fields")
}

fn json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// `numeric` lists the right-aligned columns.
fn markdown(header: &[String], numeric: &[usize], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "| {} |", header.join(" | "));
    let rule: Vec<&str> = (0..header.len())
        .map(|i| if numeric.contains(&i) { "---:" } else { "---" })
        .collect();
    let _ = writeln!(s, "|{}|", rule.join("|"));
    for row in rows {
        let _ = writeln!(s, "| {} |", row.join(" | "));
    }
    s
}

#[derive(Serialize)]
struct ScoreJson<'a> {
    image_id: &'a str,
    model_id: &'a str,
    detector_id: &'a str,
    sf: Option<f64>,
    s: f64,
    n_count: usize,
    o_count: usize,
    status: Status,
    oov_nouns: usize,
    oov_objects: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    best: Option<bool>,
}

pub fn score(rows: &[ScoredRow], format: Format, with_best: bool) -> String {
    match format {
        Format::Csv => {
            let mut header = vec![
                "image_id",
                "model_id",
                "detector_id",
                "sf",
                "s",
                "n_count",
                "o_count",
                "status",
                "oov_nouns",
                "oov_objects",
            ];
            if with_best {
                header.push("best");
            }
            csv_string(
                &header,
                rows.iter().map(|row| {
                    let r = &row.result;
                    let mut fields = vec![
                        r.image_id.clone(),
                        r.model_id.clone(),
                        row.detector_id.clone(),
                        r.sf.map(full).unwrap_or_default(),
                        full(r.similarity),
                        r.n_count.to_string(),
                        r.o_count.to_string(),
                        r.status.to_string(),
                        r.oov_nouns.to_string(),
                        r.oov_objects.to_string(),
                    ];
                    if with_best {
                        fields.push(row.best.to_string());
                    }
                    fields
                }),
            )
        }
        Format::Json => {
            let out: Vec<ScoreJson> = rows
                .iter()
                .map(|row| {
                    let r = &row.result;
                    ScoreJson {
                        image_id: &r.image_id,
                        model_id: &r.model_id,
                        detector_id: &row.detector_id,
                        sf: r.sf,
                        s: r.similarity,
                        n_count: r.n_count,
                        o_count: r.o_count,
                        status: r.status,
                        oov_nouns: r.oov_nouns,
                        oov_objects: r.oov_objects,
                        best: with_best.then_some(row.best),
                    }
                })
                .collect();
            json_string(&out)
        }
        Format::Markdown => {
            let mut header: Vec<String> = [
                "image", "model", "detector", "SF", "s", "#N", "#O", "status",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            if with_best {
                header.push("best".into());
            }
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|row| {
                    let r = &row.result;
                    let mut fields = vec![
                        r.image_id.clone(),
                        r.model_id.clone(),
                        row.detector_id.clone(),
                        two(r.sf),
                        two(Some(r.similarity)),
                        r.n_count.to_string(),
                        r.o_count.to_string(),
                        r.status.to_string(),
                    ];
                    if with_best {
                        fields.push(if row.best { "*".into() } else { String::new() });
                    }
                    fields
                })
                .collect();
            markdown(&header, &[3, 4, 5, 6], &body)
        }
    }
}

#[derive(Serialize)]
struct CellJson<'a> {
    model_id: &'a str,
    detector_id: &'a str,
    mean_sf: Option<f64>,
    full: usize,
    similarity_only: usize,
    no_nouns: usize,
    undefined: usize,
}

#[derive(Serialize)]
struct CompareJson<'a> {
    models: Vec<&'a str>,
    detectors: Vec<&'a str>,
    cells: Vec<CellJson<'a>>,
}

pub fn compare(table: &AggregateTable, format: Format) -> String {
    let models: Vec<&str> = table.models().collect();
    let detectors: Vec<&str> = table.detectors().collect();
    match format {
        Format::Csv => {
            let mut header = vec!["model_id"];
            header.extend(&detectors);
            csv_string(
                &header,
                models.iter().map(|m| {
                    let mut row = vec![m.to_string()];
                    row.extend(
                        detectors
                            .iter()
                            .map(|d| table.mean(m, d).map(full).unwrap_or_default()),
                    );
                    row
                }),
            )
        }
        Format::Markdown => {
            let mut header = vec!["model".to_string()];
            header.extend(detectors.iter().map(|d| d.to_string()));
            let body: Vec<Vec<String>> = models
                .iter()
                .map(|m| {
                    let mut row = vec![m.to_string()];
                    row.extend(detectors.iter().map(|d| two(table.mean(m, d))));
                    row
                })
                .collect();
            let numeric: Vec<usize> = (1..header.len()).collect();
            markdown(&header, &numeric, &body)
        }
        Format::Json => {
            let mut cells = Vec::new();
            for &m in &models {
                for &d in &detectors {
                    let cell = table.cell(m, d).cloned().unwrap_or_default();
                    cells.push(CellJson {
                        model_id: m,
                        detector_id: d,
                        mean_sf: cell.mean(),
                        full: cell.full,
                        similarity_only: cell.similarity_only,
                        no_nouns: cell.no_nouns,
                        undefined: cell.undefined,
                    });
                }
            }
            json_string(&CompareJson {
                models: models.clone(),
                detectors: detectors.clone(),
                cells,
            })
        }
    }
}

pub fn validation(v: &Validation, format: Format) -> String {
    let r = &v.report;
    match format {
        Format::Csv => csv_string(
            &[
                "n",
                "rho",
                "p_value",
                "slope",
                "intercept",
                "r_squared",
                "skipped",
            ],
            [vec![
                r.n.to_string(),
                full(r.rho),
                full(r.p_value),
                full(r.slope),
                full(r.intercept),
                full(r.r_squared),
                v.skipped.to_string(),
            ]],
        ),
        Format::Json => json_string(v),
        Format::Markdown => markdown(
            &["statistic".to_string(), "value".to_string()],
            &[1],
            &[
                vec!["n".into(), r.n.to_string()],
                vec!["rho".into(), format!("{:.4}", r.rho)],
                vec!["p-value".into(), format!("{:.3e}", r.p_value)],
                vec!["slope".into(), format!("{:.4}", r.slope)],
                vec!["intercept".into(), format!("{:.4}", r.intercept)],
                vec!["R²".into(), format!("{:.4}", r.r_squared)],
                vec!["skipped".into(), v.skipped.to_string()],
            ],
        ),
    }
}

pub fn validation_pairs(v: &Validation) -> String {
    csv_string(
        &[
            "image_id",
            "model_id",
            "n_count",
            "gt_object_count",
            "hsf",
            "sf",
            "status",
        ],
        v.pairs.iter().map(|p| {
            vec![
                p.image_id.clone(),
                p.model_id.clone(),
                p.n_count.to_string(),
                p.gt_object_count.to_string(),
                full(p.hsf),
                full(p.sf),
                p.status.to_string(),
            ]
        }),
    )
}

fn histogram_csv(key: &str, bin: &str, unit: &str, hists: &BTreeMap<String, Histogram>) -> String {
    csv_string(
        &[key, bin, unit],
        hists.iter().flat_map(|(source, h)| {
            h.iter()
                .map(move |(b, c)| vec![source.clone(), b.to_string(), c.to_string()])
        }),
    )
}

#[derive(Serialize)]
struct VocabularyJson {
    nouns: BTreeMap<String, usize>,
    objects: BTreeMap<String, usize>,
}

/// File name and contents for each histogram, in a fixed order.
pub fn stats(stats: &CorpusStats, format: StatsFormat) -> Vec<(String, String)> {
    let vocab = VocabularyJson {
        nouns: stats
            .noun_vocabulary
            .iter()
            .map(|(k, v)| (k.clone(), v.len()))
            .collect(),
        objects: stats
            .object_vocabulary
            .iter()
            .map(|(k, v)| (k.clone(), v.len()))
            .collect(),
    };
    match format {
        StatsFormat::Csv => vec![
            (
                "nouns_per_caption.csv".into(),
                histogram_csv("model_id", "nouns", "captions", &stats.nouns_per_caption),
            ),
            (
                "caption_length.csv".into(),
                histogram_csv("model_id", "tokens", "captions", &stats.caption_length),
            ),
            (
                "objects_per_image.csv".into(),
                histogram_csv("detector_id", "objects", "images", &stats.objects_per_image),
            ),
            (
                "vocabulary.csv".into(),
                csv_string(
                    &["kind", "source", "unique_terms"],
                    vocab
                        .nouns
                        .iter()
                        .map(|(k, n)| vec!["noun".into(), k.clone(), n.to_string()])
                        .chain(
                            vocab
                                .objects
                                .iter()
                                .map(|(k, n)| vec!["object".into(), k.clone(), n.to_string()]),
                        ),
                ),
            ),
        ],
        StatsFormat::Json => vec![
            (
                "nouns_per_caption.json".into(),
                json_string(&stats.nouns_per_caption),
            ),
            (
                "caption_length.json".into(),
                json_string(&stats.caption_length),
            ),
            (
                "objects_per_image.json".into(),
                json_string(&stats.objects_per_image),
            ),
            ("vocabulary.json".into(), json_string(&vocab)),
        ],
    }
}
