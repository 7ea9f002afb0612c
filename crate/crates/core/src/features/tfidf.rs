//! Unigram + bigram Tf-Idf: raw counts, smoothed idf
//! `ln((1 + N) / (1 + df)) + 1`, L2-normalized rows.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::text::Document;

/// Normalized unigrams followed by space-joined adjacent bigrams.
pub fn ngrams(doc: &Document) -> Vec<String> {
    let unigrams: Vec<&str> = doc.tokens.iter().map(|t| t.normalized.as_str()).collect();
    let mut out: Vec<String> = unigrams.iter().map(|s| s.to_string()).collect();
    out.extend(unigrams.windows(2).map(|w| format!("{} {}", w[0], w[1])));
    out
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVector {
    pub dimension: usize,
    /// `(column, value)` pairs in increasing column order.
    pub entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.dimension];
        for &(i, v) in &self.entries {
            dense[i] = v;
        }
        dense
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "TfidfRepr", into = "TfidfRepr")]
pub struct TfidfModel {
    terms: Vec<String>,
    document_frequency: Vec<usize>,
    n_documents: usize,
    index: HashMap<String, usize>,
    idf: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TfidfRepr {
    n_documents: usize,
    terms: Vec<String>,
    document_frequency: Vec<usize>,
}

impl From<TfidfRepr> for TfidfModel {
    fn from(r: TfidfRepr) -> Self {
        Self::from_parts(r.terms, r.document_frequency, r.n_documents)
    }
}

impl From<TfidfModel> for TfidfRepr {
    fn from(m: TfidfModel) -> Self {
        Self {
            n_documents: m.n_documents,
            terms: m.terms,
            document_frequency: m.document_frequency,
        }
    }
}

impl TfidfModel {
    fn from_parts(terms: Vec<String>, document_frequency: Vec<usize>, n_documents: usize) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let n = n_documents as f64;
        let idf = document_frequency
            .iter()
            .map(|&df| ((1.0 + n) / (1.0 + df as f64)).ln() + 1.0)
            .collect();
        Self {
            terms,
            document_frequency,
            n_documents,
            index,
            idf,
        }
    }

    /// Learns the vocabulary of every n-gram appearing in at least `min_df`
    /// documents. Columns are assigned in lexicographic n-gram order.
    pub fn fit(corpus: &[Document], min_df: usize) -> Result<Self> {
        if corpus.is_empty() {
            return Err(CoreError::EmptyCorpus);
        }
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for doc in corpus {
            let unique: BTreeSet<String> = ngrams(doc).into_iter().collect();
            for gram in unique {
                *df.entry(gram).or_default() += 1;
            }
        }
        let (terms, counts) = df.into_iter().filter(|(_, c)| *c >= min_df.max(1)).unzip();
        Ok(Self::from_parts(terms, counts, corpus.len()))
    }

    pub fn vocabulary_size(&self) -> usize {
        self.terms.len()
    }

    pub fn n_documents(&self) -> usize {
        self.n_documents
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn document_frequency(&self, term: &str) -> Option<usize> {
        self.column(term).map(|c| self.document_frequency[c])
    }

    pub fn idf(&self, term: &str) -> Option<f64> {
        self.column(term).map(|c| self.idf[c])
    }

    /// Count × idf per in-vocabulary n-gram, scaled to unit L2 norm. A
    /// document with no vocabulary n-grams maps to the zero vector.
    pub fn transform(&self, doc: &Document) -> SparseVector {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for gram in ngrams(doc) {
            if let Some(c) = self.column(&gram) {
                *counts.entry(c).or_default() += 1;
            }
        }
        let mut entries: Vec<(usize, f64)> = counts
            .into_iter()
            .map(|(c, n)| (c, n as f64 * self.idf[c]))
            .collect();
        let norm = entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            entries.iter_mut().for_each(|(_, v)| *v /= norm);
        }
        SparseVector {
            dimension: self.terms.len(),
            entries,
        }
    }
}

pub fn fit_tfidf(corpus: &[Document], min_df: usize) -> Result<TfidfModel> {
    TfidfModel::fit(corpus, min_df)
}

pub fn transform_tfidf(model: &TfidfModel, doc: &Document) -> SparseVector {
    model.transform(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;

    fn corpus() -> Vec<Document> {
        vec![tokenize("a b"), tokenize("a a")]
    }

    #[test]
    fn document_frequencies_and_idf() {
        let m = fit_tfidf(&corpus(), 1).unwrap();
        assert_eq!(m.document_frequency("a"), Some(2));
        assert_eq!(m.document_frequency("b"), Some(1));
        assert_eq!(m.idf("a"), Some(1.0));
        let expected_b = (3.0f64 / 2.0).ln() + 1.0;
        assert_eq!(m.idf("b"), Some(expected_b));
        assert_eq!(m.terms(), ["a", "a a", "a b", "b"]);
    }

    #[test]
    fn min_df_prunes() {
        let m = fit_tfidf(&corpus(), 2).unwrap();
        assert_eq!(m.terms(), ["a"]);
    }

    #[test]
    fn empty_corpus_and_empty_document() {
        assert!(matches!(fit_tfidf(&[], 1), Err(CoreError::EmptyCorpus)));
        let m = fit_tfidf(&[tokenize("")], 1).unwrap();
        assert_eq!(m.vocabulary_size(), 0);
        assert_eq!(m.n_documents(), 1);
    }

    #[test]
    fn transform_examples() {
        let m = fit_tfidf(&corpus(), 1).unwrap();
        let none = m.transform(&tokenize("zzz q"));
        assert!(none.entries.is_empty());
        let a = m.transform(&tokenize("a"));
        assert_eq!(a.entries.len(), 1);
        assert_eq!(a.entries[0].0, m.column("a").unwrap());
        assert!((a.norm() - 1.0).abs() < 1e-12);
        let d1 = m.transform(&tokenize("a b"));
        let cols: Vec<usize> = d1.entries.iter().map(|e| e.0).collect();
        let mut expected = vec![m.column("a").unwrap(), m.column("b").unwrap(), m.column("a b").unwrap()];
        expected.sort();
        assert_eq!(cols, expected);
    }

    #[test]
    fn serde_round_trip() {
        let m = fit_tfidf(&corpus(), 1).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        let back: TfidfModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
