use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clap::Parser;
use semfid_cli::{pipeline, render, Cli, Format};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn golden(name: &str) -> String {
    fixtures().join("golden").join(name).display().to_string()
}

fn tiny(name: &str) -> String {
    fixtures().join("tiny").join(name).display().to_string()
}

fn golden_args() -> Vec<String> {
    vec![
        "--captions".into(),
        golden("captions.jsonl"),
        "--detections".into(),
        format!("Y9={}", golden("y9.jsonl")),
        "--detections".into(),
        format!("COCO={}", golden("coco.jsonl")),
        "--embeddings".into(),
        golden("vectors.txt"),
        "--lexicon".into(),
        golden("nouns.txt"),
    ]
}

fn semfid<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_semfid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn failure(out: &Output) -> String {
    assert_eq!(out.status.code(), Some(1), "expected a clean failure");
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path).unwrap()
}

#[test]
fn golden_score_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("score.csv");
    let mut args = vec!["score".to_string()];
    args.extend(golden_args());
    args.extend([
        "--select-best".into(),
        "--out".into(),
        csv.display().to_string(),
    ]);
    stdout(&semfid(&args));
    assert_eq!(read(&csv), read(golden("expected/score.csv")));

    let mut args = vec!["score".to_string()];
    args.extend(golden_args());
    args.extend(["--format".into(), "json".into()]);
    assert_eq!(stdout(&semfid(&args)), read(golden("expected/score.json")));
}

#[test]
fn golden_compare_outputs_are_byte_identical() {
    for (format, file) in [
        ("csv", "compare.csv"),
        ("markdown", "compare.md"),
        ("json", "compare.json"),
    ] {
        let mut args = vec!["compare".to_string()];
        args.extend(golden_args());
        args.extend(["--format".into(), format.into()]);
        assert_eq!(
            stdout(&semfid(&args)),
            read(golden(&format!("expected/{file}"))),
            "{format}"
        );
    }
}

#[test]
fn golden_stats_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stats");
    stdout(&semfid([
        "stats",
        "--captions",
        &golden("captions.jsonl"),
        "--lexicon",
        &golden("nouns.txt"),
        "--detections",
        &format!("Y9={}", golden("y9.jsonl")),
        "--detections",
        &format!("COCO={}", golden("coco.jsonl")),
        "--out",
        &out.display().to_string(),
    ]));
    let expected = fixtures().join("golden/expected/stats");
    let mut names: Vec<_> = fs::read_dir(&expected)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 4);
    for name in names {
        assert_eq!(
            read(out.join(&name)),
            read(expected.join(&name)),
            "{name:?}"
        );
    }
}

#[test]
fn empty_detections_give_undefined_rows() {
    let mut args = vec!["score".to_string()];
    args.extend(golden_args());
    let text = stdout(&semfid(&args));
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("art1,")).collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[3], "", "{row}");
        assert_eq!(fields[7], "undefined", "{row}");
    }

    let mut args = vec!["score".to_string()];
    args.extend(golden_args());
    args.extend(["--format".into(), "markdown".into()]);
    let md = stdout(&semfid(&args));
    assert!(md
        .lines()
        .any(|l| l.starts_with("| art1 | SAT | Y9 | -- |")));
}

// The tiny corpus is small enough to score by hand: every vector is an axis
// or the diagonal of the plane, so each similarity is 0, 1/sqrt(2) or 1.
#[test]
fn tiny_matrix_matches_hand_computation() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let expected = [
        ("A", "D1", (h / 2.0 + 1.0) / 2.0),
        ("B", "D1", (1.0 + 0.0) / 2.0),
        ("A", "D2", (1.0 + h / 2.0 + 1.0) / 3.0),
        ("B", "D2", (h + h / 2.0) / 2.0),
    ];
    let text = stdout(&semfid([
        "compare",
        "--captions",
        &tiny("captions.csv"),
        "--detections",
        &format!("D1={}", tiny("d1.jsonl")),
        "--detections",
        &format!("D2={}", tiny("d2.jsonl")),
        "--embeddings",
        &tiny("vectors.txt"),
        "--lexicon",
        &tiny("nouns.txt"),
    ]));
    assert_eq!(text, read(tiny("expected/compare.csv")));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("model_id,D1,D2"));
    let cells: BTreeMap<(String, String), f64> = lines
        .flat_map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let model = f[0].to_string();
            [("D1", f[1]), ("D2", f[2])]
                .map(|(d, v)| ((model.clone(), d.to_string()), v.parse::<f64>().unwrap()))
        })
        .collect();
    for (m, d, want) in expected {
        let got = cells[&(m.to_string(), d.to_string())];
        assert!((got - want).abs() < 1e-12, "{m}/{d}: {got} vs {want}");
    }
}

#[test]
fn compare_cells_are_means_of_score_rows() {
    let mut args = vec!["score".to_string()];
    args.extend(golden_args());
    let score = stdout(&semfid(&args));
    let mut args = vec!["compare".to_string()];
    args.extend(golden_args());
    let compare = stdout(&semfid(&args));

    let mut groups: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    for line in score.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let entry = groups
            .entry((f[1].to_string(), f[2].to_string()))
            .or_default();
        if f[7] == "full" || f[7] == "similarity_only" {
            entry.push(f[3].parse().unwrap());
        }
    }
    let mut lines = compare.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let mut checked = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        for (d, cell) in header[1..].iter().zip(&f[1..]) {
            let mut values = groups[&(f[0].to_string(), d.to_string())].clone();
            values.sort_by(f64::total_cmp);
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            assert_eq!(cell.parse::<f64>().unwrap(), mean, "{}/{d}", f[0]);
            checked += 1;
        }
    }
    assert_eq!(checked, 6);
}

#[test]
fn single_caption_and_all_undefined_cells() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let captions = write(
        d,
        "c.jsonl",
        "{\"image_id\":\"x\",\"model_id\":\"M\",\"caption\":\"a cat\"}\n",
    );
    let half = write(
        d,
        "half.jsonl",
        "{\"image_id\":\"x\",\"labels\":[\"cat\",\"kitten\"]}\n",
    );
    let none = write(d, "none.jsonl", "{\"image_id\":\"x\",\"labels\":[]}\n");
    let vectors = write(d, "v.txt", "cat 1 0\nkitten 1 0\n");
    let nouns = write(d, "n.txt", "cat\nkitten\n");
    let md = stdout(&semfid([
        "compare",
        "--captions",
        &captions,
        "--detections",
        &format!("H={half}"),
        "--detections",
        &format!("Z={none}"),
        "--embeddings",
        &vectors,
        "--lexicon",
        &nouns,
        "--format",
        "markdown",
    ]));
    assert_eq!(
        md,
        "| model | H | Z |\n|---|---:|---:|\n| M | 0.50 | -- |\n"
    );
}

#[test]
fn runs_are_deterministic_across_thread_counts() {
    let cli = Cli::try_parse_from(
        ["semfid", "score"]
            .into_iter()
            .map(String::from)
            .chain(golden_args()),
    )
    .unwrap();
    let semfid_cli::Command::Score(a) = cli.command else {
        unreachable!()
    };
    let render_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| semfid_cli::score_report(&a).unwrap().text)
    };
    let one = render_with(1);
    assert_eq!(one, render_with(4));
    assert_eq!(one, render_with(7));

    let mut args = vec!["score".to_string()];
    args.extend(golden_args());
    assert_eq!(stdout(&semfid(&args)), stdout(&semfid(&args)));
}

#[test]
fn empty_captions_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let captions = write(dir.path(), "c.jsonl", "\n");
    let mut args = golden_args();
    args[1] = captions;
    let mut full = vec!["score".to_string()];
    full.extend(args);
    let err = failure(&semfid(&full));
    assert!(err.contains("no captions"), "{err}");
}

#[test]
fn malformed_inputs_name_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases = [
        (
            "vectors.txt",
            "2 3\nman 1 0 0\nwoman 1 zero 0\n",
            7,
            "line 3",
        ),
        (
            "y9.jsonl",
            "{\"image_id\":\"a\",\"labels\":[]}\n{\"image_id\":\"b\",\"labels\":[\"x\"],\"confidences\":[0.5,0.5]}\n",
            3,
            "line 2",
        ),
        (
            "y9.jsonl",
            "{\"image_id\":\"a\",\"labels\":[]}\n{\"image_id\":\"a\",\"labels\":[\"x\"]}\n",
            3,
            "line 2: image id \"a\"",
        ),
        (
            "captions.jsonl",
            "{\"image_id\":\"a\",\"model_id\":\"M\",\"caption\":\"x\"}\n{\"image_id\":\"a\",\"model_id\":\"M\",\"caption\":\"y\"}\n",
            1,
            "line 2",
        ),
    ];
    for (name, body, slot, needle) in cases {
        let path = write(d, name, body);
        let mut args = golden_args();
        args[slot] = if args[slot].contains('=') {
            format!("Y9={path}")
        } else {
            path.clone()
        };
        let mut full = vec!["score".to_string()];
        full.extend(args);
        let err = failure(&semfid(&full));
        assert!(err.contains(&path), "{name}: {err}");
        assert!(err.contains(needle), "{name}: {err}");
    }
}

#[test]
fn failed_run_leaves_output_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let out = write(dir.path(), "score.csv", "previous\n");
    let bad = write(dir.path(), "v.txt", "man 1 nope\n");
    let mut args = golden_args();
    args[7] = bad;
    let mut full = vec!["score".to_string()];
    full.extend(args);
    full.extend(["--out".into(), out.clone()]);
    failure(&semfid(&full));
    assert_eq!(read(&out), "previous\n");
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn argument_errors_exit_nonzero() {
    let mut args = vec!["score".to_string()];
    args.extend(golden_args());
    args.extend(["--min-confidence".into(), "1.5".into()]);
    assert!(failure(&semfid(&args)).contains("--min-confidence"));

    let mut args = vec!["compare".to_string()];
    args.extend(golden_args());
    args[4] = format!("COCO={}", golden("y9.jsonl"));
    assert!(failure(&semfid(&args)).contains("\"COCO\""));

    let out = semfid(["score", "--captions", "x.jsonl"]);
    assert!(!out.status.success());
}

#[test]
fn missing_image_scores_undefined_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let partial = write(
        dir.path(),
        "partial.jsonl",
        "{\"image_id\":\"i1\",\"labels\":[\"cat\"]}\n",
    );
    let out = semfid([
        "score",
        "--captions",
        &tiny("captions.csv"),
        "--detections",
        &format!("P={partial}"),
        "--embeddings",
        &tiny("vectors.txt"),
        "--lexicon",
        &tiny("nouns.txt"),
    ]);
    let text = stdout(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2 captioned image(s)"));
    let undefined = text.lines().filter(|l| l.contains(",undefined,")).count();
    assert_eq!(undefined, 4);
}

#[test]
fn stats_bins_and_vocabulary() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let captions = write(
        d,
        "c.csv",
        "image_id,model_id,caption\n1,M,nothing at all here\n2,M,a cat and a dog\n",
    );
    let nouns = write(d, "n.txt", "cat\ndog\n");
    let dets = write(
        d,
        "d.jsonl",
        "{\"image_id\":\"1\",\"labels\":[\"cat\",\"Dog\"]}\n{\"image_id\":\"2\",\"labels\":[\"dog\",\"bird\",\"cat\"]}\n",
    );
    let out = d.join("stats");
    stdout(&semfid([
        "stats",
        "--captions",
        &captions,
        "--lexicon",
        &nouns,
        "--detections",
        &format!("D={dets}"),
        "--format",
        "json",
        "--out",
        &out.display().to_string(),
    ]));
    let nouns: serde_json::Value =
        serde_json::from_str(&read(out.join("nouns_per_caption.json"))).unwrap();
    assert_eq!(nouns["M"]["0"], 1);
    assert_eq!(nouns["M"]["2"], 1);
    let vocab: serde_json::Value =
        serde_json::from_str(&read(out.join("vocabulary.json"))).unwrap();
    assert_eq!(vocab["objects"]["D"], 3);
    assert_eq!(vocab["nouns"]["M"], 2);
    let lengths: serde_json::Value =
        serde_json::from_str(&read(out.join("caption_length.json"))).unwrap();
    assert_eq!(lengths["M"]["4"], 1);
    assert_eq!(lengths["M"]["5"], 1);
}

fn validate_corpus(dir: &Path, rows: &[(usize, usize)]) -> (String, String) {
    // Every caption names `n` copies of one noun pattern; ground truth holds
    // `o` labels drawn from the same direction, so s = 1 and sf = hsf.
    let words = ["cat", "dog", "cow", "pig", "hen", "fox", "owl", "bee"];
    let mut captions = String::new();
    let mut gt = String::new();
    for (i, (n, o)) in rows.iter().enumerate() {
        let caption = words[..*n].join(" ");
        captions.push_str(&format!(
            "{{\"image_id\":\"im{i}\",\"model_id\":\"M\",\"caption\":\"{caption}\"}}\n"
        ));
        let labels: Vec<String> = words[..*o].iter().map(|w| format!("\"{w}\"")).collect();
        gt.push_str(&format!(
            "{{\"image_id\":\"im{i}\",\"labels\":[{}]}}\n",
            labels.join(",")
        ));
    }
    let vectors: String = words.iter().map(|w| format!("{w} 1 1\n")).collect();
    (
        write(dir, "c.jsonl", &captions),
        format!(
            "{}|{}|{}",
            write(dir, "gt.jsonl", &gt),
            write(dir, "v.txt", &vectors),
            write(dir, "n.txt", &words.join("\n"))
        ),
    )
}

#[test]
fn validate_affine_corpus_is_perfectly_correlated() {
    let dir = tempfile::tempdir().unwrap();
    let (captions, rest) = validate_corpus(
        dir.path(),
        &[(1, 4), (2, 4), (3, 4), (1, 2), (2, 3), (0, 5)],
    );
    let parts: Vec<&str> = rest.split('|').collect();
    let pairs = dir.path().join("pairs.csv");
    let text = stdout(&semfid([
        "validate",
        "--captions",
        &captions,
        "--gt-objects",
        parts[0],
        "--embeddings",
        parts[1],
        "--lexicon",
        parts[2],
        "--pairs",
        &pairs.display().to_string(),
    ]));
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,rho,p_value,slope,intercept,r_squared,skipped")
    );
    let f: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(f[0], 6.0);
    assert_eq!(f[1], 1.0);
    assert_eq!(f[2], 0.0);
    assert!((f[3] - 1.0).abs() < 1e-12);
    assert!(f[4].abs() < 1e-12);
    assert_eq!(read(&pairs).lines().count(), 7);
}

#[test]
fn validate_needs_three_aligned_images() {
    let dir = tempfile::tempdir().unwrap();
    let (captions, rest) = validate_corpus(dir.path(), &[(1, 4), (2, 4), (3, 0)]);
    let parts: Vec<&str> = rest.split('|').collect();
    let err = failure(&semfid([
        "validate",
        "--captions",
        &captions,
        "--gt-objects",
        parts[0],
        "--embeddings",
        parts[1],
        "--lexicon",
        parts[2],
    ]));
    assert!(err.contains("only 2 captions"), "{err}");
}

#[test]
fn library_and_binary_agree() {
    let cli = Cli::try_parse_from(
        ["semfid", "compare", "--format", "markdown"]
            .into_iter()
            .map(String::from)
            .chain(golden_args()),
    )
    .unwrap();
    let semfid_cli::Command::Compare(a) = cli.command else {
        unreachable!()
    };
    assert_eq!(
        semfid_cli::compare_report(&a).unwrap().text,
        read(golden("expected/compare.md"))
    );
    let empty = pipeline::aggregate(&[]);
    assert_eq!(render::compare(&empty, Format::Csv), "model_id\n");
}
