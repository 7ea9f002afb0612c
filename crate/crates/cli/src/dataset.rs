//! Tab-separated datasets: `id<TAB>label<TAB>text`, one row per line, with an
//! optional first line starting with `#` as header. An empty label field
//! marks an unlabeled row.

use std::collections::{BTreeSet, HashSet};
use std::path::{Path, PathBuf};

use desc_core::text::{tokenize, Document, SentimentScore};
use serde::{Deserialize, Serialize};

use crate::config::Task;
use crate::error::{io_err, CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub line: usize,
    pub id: String,
    pub label: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub id: String,
    pub label: Option<usize>,
    pub doc: Document,
}

/// Class names in class-id order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelMap(pub Vec<String>);

impl LabelMap {
    pub fn sentiment() -> Self {
        Self(
            (0..11)
                .map(|id| SentimentScore::from_class_id(id).expect("11 score classes").value())
                .map(|v| if v > 0 { format!("+{v}") } else { v.to_string() })
                .collect(),
        )
    }

    /// Explicit names when given; otherwise the distinct labels in the rows,
    /// numerically ordered when all are non-negative integers and
    /// lexicographically otherwise.
    pub fn infer(task: Task, rows: &[Row], names: Option<&[String]>) -> Result<Self> {
        if task == Task::Sentiment11 {
            return Ok(Self::sentiment());
        }
        if let Some(names) = names {
            return Ok(Self(names.to_vec()));
        }
        let seen: BTreeSet<&str> = rows.iter().filter_map(|r| r.label.as_deref()).collect();
        let numeric: Option<BTreeSet<u64>> = seen.iter().map(|s| s.parse().ok()).collect();
        let names: Vec<String> = match numeric {
            Some(ids) => ids.into_iter().map(|i| i.to_string()).collect(),
            None => seen.into_iter().map(str::to_string).collect(),
        };
        if names.len() != 2 {
            return Err(CliError::InvalidConfig(format!(
                "a binary task needs exactly two labels, found {names:?}"
            )));
        }
        Ok(Self(names))
    }

    pub fn classes(&self) -> usize {
        self.0.len()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.0[id]
    }

    pub fn id(&self, task: Task, raw: &str) -> Option<usize> {
        match task {
            Task::Sentiment11 => {
                let v: i8 = raw.trim_start_matches('+').parse().ok()?;
                Some(SentimentScore::try_from(v).ok()?.class_id())
            }
            Task::Binary => self.0.iter().position(|n| n == raw),
        }
    }
}

pub fn read_rows(path: &Path) -> Result<Vec<Row>> {
    if !path.is_file() {
        return Err(CliError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "dataset file not found"),
        });
    }
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_rows(&text, path)
}

pub fn parse_rows(text: &str, path: &Path) -> Result<Vec<Row>> {
    let malformed = |line: usize, reason: &str| CliError::MalformedRow {
        path: path.to_path_buf(),
        line,
        reason: reason.to_string(),
    };
    let mut rows = Vec::new();
    let mut ids = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if (idx == 0 && raw.starts_with('#')) || raw.trim().is_empty() {
            continue;
        }
        let mut cols = raw.splitn(3, '\t');
        let (Some(id), Some(label), Some(body)) = (cols.next(), cols.next(), cols.next()) else {
            return Err(malformed(line, "expected id<TAB>label<TAB>text"));
        };
        let id = id.trim();
        if id.is_empty() {
            return Err(malformed(line, "empty id"));
        }
        if !ids.insert(id.to_string()) {
            return Err(CliError::DuplicateId { path: path.to_path_buf(), line, id: id.to_string() });
        }
        let label = label.trim();
        rows.push(Row {
            line,
            id: id.to_string(),
            label: (!label.is_empty()).then(|| label.to_string()),
            text: body.to_string(),
        });
    }
    Ok(rows)
}

/// Tokenizes every row and resolves labels through `map`.
pub fn to_samples(rows: &[Row], task: Task, map: &LabelMap, path: &Path) -> Result<Vec<Sample>> {
    rows.iter()
        .map(|r| {
            let mut doc = tokenize(&r.text);
            let label = match &r.label {
                None => None,
                Some(raw) => {
                    let id = map.id(task, raw).ok_or_else(|| CliError::UnparseableLabel {
                        path: path.to_path_buf(),
                        line: r.line,
                        label: raw.clone(),
                    })?;
                    doc = doc.with_label(id);
                    if task == Task::Sentiment11 {
                        doc = doc.with_score(SentimentScore::from_class_id(id).expect("valid class id"));
                    }
                    Some(id)
                }
            };
            Ok(Sample { id: r.id.clone(), label, doc })
        })
        .collect()
}

/// A dataset with its label mapping.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub path: PathBuf,
    pub samples: Vec<Sample>,
    pub labels: LabelMap,
}

impl Corpus {
    pub fn labeled(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| s.label.is_some())
    }
}

/// Reads `path`, inferring the label mapping unless `map` is given.
pub fn ingest(path: &Path, task: Task, map: Option<&LabelMap>, names: Option<&[String]>) -> Result<Corpus> {
    let rows = read_rows(path)?;
    let labels = match map {
        Some(m) => m.clone(),
        None => LabelMap::infer(task, &rows, names)?,
    };
    let samples = to_samples(&rows, task, &labels, path)?;
    Ok(Corpus { path: path.to_path_buf(), samples, labels })
}
