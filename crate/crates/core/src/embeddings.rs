//! Word vectors loaded from the word2vec/GloVe text layout.
//!
//! One record per line: a token followed by its components, separated by runs
//! of ASCII spaces or tabs. An optional `count dim` header line is detected
//! automatically. Tokens are folded to lowercase on load and on lookup.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("no vectors found")]
    EmptyTable,
    #[error("expected dimension {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("vector lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl EmbeddingError {
    fn malformed(line: usize, reason: impl Into<String>) -> Self {
        EmbeddingError::MalformedLine {
            line,
            reason: reason.into(),
        }
    }
}

/// A dense vector with finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Returns `None` when any component is NaN or infinite.
    pub fn new(components: Vec<f64>) -> Option<Self> {
        components
            .iter()
            .all(|c| c.is_finite())
            .then_some(Vector(components))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Component-wise arithmetic mean of equally long vectors.
    ///
    /// Each component is summed in sorted order, so the result does not depend
    /// on the order in which the vectors are supplied.
    pub fn mean<'a, I>(vectors: I) -> Option<Vector>
    where
        I: IntoIterator<Item = &'a Vector>,
    {
        let vectors: Vec<&Vector> = vectors.into_iter().collect();
        let first = vectors.first()?;
        let dim = first.len();
        debug_assert!(vectors.iter().all(|v| v.len() == dim));
        let n = vectors.len() as f64;
        let mut column = Vec::with_capacity(vectors.len());
        let components = (0..dim)
            .map(|d| {
                column.clear();
                column.extend(vectors.iter().map(|v| v.0[d]));
                column.sort_unstable_by(f64::total_cmp);
                column.iter().sum::<f64>() / n
            })
            .collect();
        Some(Vector(components))
    }
}

impl AsRef<[f64]> for Vector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Cosine similarity; zero when either vector has zero norm.
pub fn cosine(a: &Vector, b: &Vector) -> Result<f64, EmbeddingError> {
    if a.len() != b.len() {
        return Err(EmbeddingError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

/// Mean vector of a term set, with the number of terms that did not resolve.
#[derive(Debug, Clone, PartialEq)]
pub struct SetMean {
    pub mean: Option<Vector>,
    pub unresolved: usize,
}

/// Immutable token → vector map.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    entries: HashMap<String, Vector>,
}

impl EmbeddingTable {
    /// Builds a table from in-memory entries. Tokens are lowercased; later
    /// duplicates overwrite earlier ones.
    pub fn from_entries<I, S>(dim: usize, entries: I) -> Result<Self, EmbeddingError>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: AsRef<str>,
    {
        if dim == 0 {
            return Err(EmbeddingError::DimMismatch {
                expected: 1,
                found: 0,
            });
        }
        let mut map = HashMap::new();
        for (i, (token, components)) in entries.into_iter().enumerate() {
            let token = token.as_ref();
            if token.is_empty() || token.chars().any(char::is_whitespace) {
                return Err(EmbeddingError::malformed(i + 1, "invalid token"));
            }
            if components.len() != dim {
                return Err(EmbeddingError::DimMismatch {
                    expected: dim,
                    found: components.len(),
                });
            }
            let v = Vector::new(components)
                .ok_or_else(|| EmbeddingError::malformed(i + 1, "non-finite component"))?;
            map.insert(token.to_lowercase(), v);
        }
        Ok(EmbeddingTable { dim, entries: map })
    }

    /// Parses the text vector format.
    ///
    /// The first non-blank line is a header when it has exactly two unsigned
    /// integer fields and the next non-blank line does not also have two
    /// fields (two-field lines would be one-dimensional data).
    pub fn from_reader<R: BufRead>(
        mut reader: R,
        expected_dim: Option<usize>,
    ) -> Result<Self, EmbeddingError> {
        let mut lines = LineReader::new(&mut reader);
        let mut dim: Option<usize> = None;
        let mut entries: HashMap<String, Vector> = HashMap::new();

        let Some((first_no, first)) = lines.next_nonblank()? else {
            return Err(EmbeddingError::EmptyTable);
        };
        let first_fields = fields(&first);
        let mut pending = Some((first_no, first.clone()));

        if let [count, d] = first_fields.as_slice() {
            if let (Ok(_), Ok(d)) = (count.parse::<u64>(), d.parse::<usize>()) {
                match lines.next_nonblank()? {
                    Some((no, next)) if fields(&next).len() == 2 => {
                        // one-dimensional data; the first line is a record
                        parse_record(first_no, &first, &mut dim, &mut entries)?;
                        pending = Some((no, next));
                    }
                    next => {
                        if d == 0 {
                            return Err(EmbeddingError::malformed(
                                first_no,
                                "header dimension is zero",
                            ));
                        }
                        dim = Some(d);
                        pending = next;
                    }
                }
            }
        }

        while let Some((no, line)) = pending.take() {
            parse_record(no, &line, &mut dim, &mut entries)?;
            pending = lines.next_nonblank()?;
        }

        if entries.is_empty() {
            return Err(EmbeddingError::EmptyTable);
        }
        let dim = dim.expect("dimension is known once a record is stored");
        if let Some(expected) = expected_dim {
            if expected != dim {
                return Err(EmbeddingError::DimMismatch {
                    expected,
                    found: dim,
                });
            }
        }
        Ok(EmbeddingTable { dim, entries })
    }

    /// Writes the table with a `count dim` header, tokens in sorted order.
    ///
    /// One-dimensional tables are written without a header, since a header
    /// would read back as a two-field data row.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        if self.dim > 1 {
            writeln!(out, "{} {}", self.entries.len(), self.dim)?;
        }
        let mut tokens: Vec<&String> = self.entries.keys().collect();
        tokens.sort();
        for token in tokens {
            write!(out, "{token}")?;
            for c in self.entries[token].as_slice() {
                write!(out, " {c}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, token: &str) -> Option<&Vector> {
        match self.entries.get(token) {
            Some(v) => Some(v),
            None => self.entries.get(&token.to_lowercase()),
        }
    }

    /// Mean of the vectors of the in-vocabulary tokens of one term.
    pub fn phrase_vector<S: AsRef<str>>(&self, tokens: &[S]) -> Option<Vector> {
        Vector::mean(tokens.iter().filter_map(|t| self.lookup(t.as_ref())))
    }

    /// Mean over terms of their phrase vectors; every resolvable term weighs
    /// the same regardless of how many tokens it has.
    pub fn set_mean_vector<I, T, S>(&self, terms: I) -> Option<Vector>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[S]>,
        S: AsRef<str>,
    {
        self.set_mean(terms).mean
    }

    /// Like [`set_mean_vector`](Self::set_mean_vector), also counting the
    /// terms with no in-vocabulary token.
    pub fn set_mean<I, T, S>(&self, terms: I) -> SetMean
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[S]>,
        S: AsRef<str>,
    {
        let mut unresolved = 0;
        let mut resolved = Vec::new();
        for term in terms {
            match self.phrase_vector(term.as_ref()) {
                Some(v) => resolved.push(v),
                None => unresolved += 1,
            }
        }
        SetMean {
            mean: Vector::mean(&resolved),
            unresolved,
        }
    }

    /// Copy of the table with every vector multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), Vector(v.0.iter().map(|c| c * factor).collect())))
            .collect();
        EmbeddingTable {
            dim: self.dim,
            entries,
        }
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn fields(line: &str) -> Vec<&str> {
    line.split([' ', '\t']).filter(|f| !f.is_empty()).collect()
}

fn parse_record(
    line_no: usize,
    line: &str,
    dim: &mut Option<usize>,
    entries: &mut HashMap<String, Vector>,
) -> Result<(), EmbeddingError> {
    let parts = fields(line);
    let Some((token, rest)) = parts.split_first() else {
        return Ok(());
    };
    if token.chars().any(char::is_whitespace) {
        return Err(EmbeddingError::malformed(
            line_no,
            "token contains whitespace",
        ));
    }
    if rest.is_empty() {
        return Err(EmbeddingError::malformed(
            line_no,
            "missing vector components",
        ));
    }
    let components = rest
        .iter()
        .map(|s| s.parse::<f64>().ok().filter(|c| c.is_finite()))
        .collect::<Option<Vec<f64>>>()
        .ok_or_else(|| EmbeddingError::malformed(line_no, "non-numeric or non-finite component"))?;
    match *dim {
        Some(d) if d != components.len() => {
            return Err(EmbeddingError::malformed(
                line_no,
                format!("expected {d} components, found {}", components.len()),
            ))
        }
        Some(_) => {}
        None => *dim = Some(components.len()),
    }
    entries.insert(token.to_lowercase(), Vector(components));
    Ok(())
}

/// Line iterator with 1-based numbering that strips CR and reports invalid
/// UTF-8 as a malformed line.
struct LineReader<'a, R> {
    reader: &'a mut R,
    line_no: usize,
    buf: Vec<u8>,
}

impl<'a, R: BufRead> LineReader<'a, R> {
    fn new(reader: &'a mut R) -> Self {
        LineReader {
            reader,
            line_no: 0,
            buf: Vec::new(),
        }
    }

    fn next_nonblank(&mut self) -> Result<Option<(usize, String)>, EmbeddingError> {
        loop {
            self.buf.clear();
            if self.reader.read_until(b'\n', &mut self.buf)? == 0 {
                return Ok(None);
            }
            self.line_no += 1;
            let text = std::str::from_utf8(&self.buf)
                .map_err(|_| EmbeddingError::malformed(self.line_no, "invalid UTF-8"))?;
            let text = text.trim_end_matches(['\n', '\r']);
            if text.trim_matches([' ', '\t']).is_empty() {
                continue;
            }
            return Ok(Some((self.line_no, text.to_string())));
        }
    }
}
