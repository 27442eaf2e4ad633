//! Text and JSON file formats for codes, POVMs and observables.
//!
//! Code files are plain text: a header line `q n M` followed by `M` lines of
//! `n` space-separated symbols. Blank lines and lines starting with `#` are
//! ignored.
//!
//! Matrix files are JSON. Each matrix is a flat row-major list of
//! `[re, im]` pairs:
//!
//! ```json
//! { "dim": 2, "projectors": [[[1,0],[0,0],[0,0],[0,0]], [[0,0],[0,0],[0,0],[1,0]]] }
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use robmeas_core::{CMatrix, ClassicalCode, ObservableSet, ProjectivePovm};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn parse_code(text: &str) -> Result<ClassicalCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header `q n M`"))?;
    let fields = parse_numbers(hline, header)?;
    let [q, n, m] = fields[..] else {
        return Err(Error::parse(hline, "header must be `q n M`"));
    };
    if !(2..=robmeas_core::codes::MAX_ALPHABET).contains(&q) {
        return Err(Error::parse(
            hline,
            format!("alphabet size {q} out of range"),
        ));
    }
    if n == 0 || m == 0 {
        return Err(Error::parse(hline, "n and M must be positive"));
    }
    let mut words: Vec<Vec<u8>> = Vec::with_capacity(m);
    let mut seen = std::collections::HashMap::new();
    for (line, body) in lines {
        if words.len() == m {
            return Err(Error::parse(line, format!("more than {m} codewords")));
        }
        let symbols = parse_numbers(line, body)?;
        if symbols.len() != n {
            return Err(Error::parse(
                line,
                format!("expected {n} symbols, found {}", symbols.len()),
            ));
        }
        if let Some(s) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::parse(line, format!("symbol {s} outside 0..{q}")));
        }
        let word: Vec<u8> = symbols.iter().map(|&s| s as u8).collect();
        if let Some(first) = seen.insert(word.clone(), line) {
            return Err(Error::parse(
                line,
                format!("duplicate of the codeword on line {first}"),
            ));
        }
        words.push(word);
    }
    if words.len() != m {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("expected {m} codewords, found {}", words.len()),
        ));
    }
    Ok(ClassicalCode::new(q, words)?)
}

fn parse_numbers(line: usize, body: &str) -> Result<Vec<usize>> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}

pub fn format_code(code: &ClassicalCode) -> String {
    let mut out = format!("{} {} {}\n", code.q(), code.length(), code.size());
    for w in code.codewords() {
        let symbols: Vec<String> = w.iter().map(u8::to_string).collect();
        let _ = writeln!(out, "{}", symbols.join(" "));
    }
    out
}

pub fn read_code(path: &Path) -> Result<ClassicalCode> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_code(&text)
}

type Entry = [f64; 2];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovmFile {
    pub dim: usize,
    pub projectors: Vec<Vec<Entry>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservableFile {
    pub dim: usize,
    pub observables: Vec<Vec<Entry>>,
}

fn matrix_entries(m: &CMatrix) -> Vec<Entry> {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

fn matrix_from_entries(dim: usize, entries: &[Entry]) -> Result<CMatrix> {
    let data = entries
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    Ok(CMatrix::from_row_major(dim, data)?)
}

impl PovmFile {
    pub fn from_povm(povm: &ProjectivePovm) -> Self {
        Self {
            dim: povm.dim(),
            projectors: povm.projectors().iter().map(matrix_entries).collect(),
        }
    }

    /// Converts and validates the projectors.
    pub fn into_povm(self) -> Result<ProjectivePovm> {
        let projectors = self
            .projectors
            .iter()
            .map(|p| matrix_from_entries(self.dim, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProjectivePovm::new(projectors)?)
    }
}

impl ObservableFile {
    pub fn from_set(set: &ObservableSet) -> Self {
        Self {
            dim: set.dim(),
            observables: set.observables().iter().map(matrix_entries).collect(),
        }
    }

    pub fn matrices(&self) -> Result<Vec<CMatrix>> {
        self.observables
            .iter()
            .map(|m| matrix_from_entries(self.dim, m))
            .collect()
    }
}

pub fn parse_povm(json: &str) -> Result<ProjectivePovm> {
    let file: PovmFile = serde_json::from_str(json)?;
    file.into_povm()
}

pub fn read_povm(path: &Path) -> Result<ProjectivePovm> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_povm(&text)
}

pub fn povm_json(povm: &ProjectivePovm) -> String {
    to_json(&PovmFile::from_povm(povm))
}

pub fn observables_json(set: &ObservableSet) -> String {
    to_json(&ObservableFile::from_set(set))
}

/// Flushes an in-memory CSV writer into a string.
pub(crate) fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::io("<memory>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory JSON serialization");
    s.push('\n');
    s
}
