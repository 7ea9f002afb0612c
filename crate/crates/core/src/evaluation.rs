//! Classification metrics, ROC analysis, score-regression metrics and
//! per-class feature profiles.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::features::{extract_features, N_FEATURES};
use crate::resources::LexiconSet;
use crate::text::Document;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    /// One-vs-rest counts for `class`.
    pub fn for_class(gold: &[usize], predicted: &[usize], class: usize) -> Self {
        let mut c = Self::default();
        for (&g, &p) in gold.iter().zip(predicted) {
            match (g == class, p == class) {
                (true, true) => c.tp += 1,
                (false, true) => c.fp += 1,
                (true, false) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
        c
    }

    pub fn scores(&self, class: usize) -> ClassScores {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(self.tp, self.tp + self.fp);
        let recall = ratio(self.tp, self.tp + self.fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        ClassScores { class, precision, recall, f1, counts: *self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub class: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: ConfusionCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    /// One entry per class seen in either list, ascending.
    pub per_class: Vec<ClassScores>,
    /// Scores of class 1 when every label is 0 or 1.
    pub positive: Option<ClassScores>,
}

/// Accuracy and macro-averaged precision, recall and F1 over every class that
/// appears in `gold` or `predicted`.
pub fn classification_metrics(gold: &[usize], predicted: &[usize]) -> Result<ClassificationMetrics> {
    if gold.len() != predicted.len() {
        return Err(CoreError::LengthMismatch { left: gold.len(), right: predicted.len() });
    }
    if gold.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    let classes: BTreeSet<usize> = gold.iter().chain(predicted).copied().collect();
    let per_class: Vec<ClassScores> = classes
        .iter()
        .map(|&c| ConfusionCounts::for_class(gold, predicted, c).scores(c))
        .collect();
    let n = per_class.len() as f64;
    let mean = |f: fn(&ClassScores) -> f64| per_class.iter().map(f).sum::<f64>() / n;
    let correct = gold.iter().zip(predicted).filter(|(g, p)| g == p).count();
    let binary = classes.iter().all(|&c| c <= 1);
    Ok(ClassificationMetrics {
        accuracy: correct as f64 / gold.len() as f64,
        macro_precision: mean(|s| s.precision),
        macro_recall: mean(|s| s.recall),
        macro_f1: mean(|s| s.f1),
        positive: binary.then(|| ConfusionCounts::for_class(gold, predicted, 1).scores(1)),
        per_class,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// `(fpr, tpr)` from `(0, 0)` to `(1, 1)`, one point per distinct score.
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

/// ROC curve of `scores` against binary `gold` (true = positive). The
/// threshold sweeps distinct scores from high to low; the trapezoid area is
/// accumulated in integer units of `1 / (2·P·N)` so it equals the pairwise
/// win rate with ties counted as one half.
pub fn roc_auc(gold: &[bool], scores: &[f64]) -> Result<RocCurve> {
    if gold.len() != scores.len() {
        return Err(CoreError::LengthMismatch { left: gold.len(), right: scores.len() });
    }
    let pos = gold.iter().filter(|g| **g).count();
    let neg = gold.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(CoreError::SingleClassInput);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut area2 = 0u64;
    let mut i = 0;
    while i < order.len() {
        let (prev_tp, prev_fp) = (tp, fp);
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]].total_cmp(&s).is_eq() {
            if gold[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        area2 += (fp - prev_fp) * (tp + prev_tp);
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
    }
    Ok(RocCurve { points, auc: area2 as f64 / (2 * pos * neg) as f64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentMetrics {
    pub cosine: f64,
    pub mse: f64,
}

/// Cosine similarity (0 when either vector is zero) and mean squared error.
pub fn sentiment_metrics(gold: &[f64], predicted: &[f64]) -> Result<SentimentMetrics> {
    if gold.len() != predicted.len() {
        return Err(CoreError::LengthMismatch { left: gold.len(), right: predicted.len() });
    }
    if gold.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    let dot: f64 = gold.iter().zip(predicted).map(|(g, p)| g * p).sum();
    let ng = gold.iter().map(|g| g * g).sum::<f64>().sqrt();
    let np = predicted.iter().map(|p| p * p).sum::<f64>().sqrt();
    let cosine = if ng == 0.0 || np == 0.0 { 0.0 } else { dot / (ng * np) };
    let mse = gold.iter().zip(predicted).map(|(g, p)| (g - p).powi(2)).sum::<f64>() / gold.len() as f64;
    Ok(SentimentMetrics { cosine, mse })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureProfile {
    /// `means[c][k]` is the mean of feature `k` over documents of class `c`.
    pub means: Vec<Vec<f64>>,
    pub counts: Vec<usize>,
}

/// Per-class means of precomputed feature rows.
pub fn profile_from_vectors(labels: &[usize], vectors: &[Vec<f64>], classes: usize) -> Result<FeatureProfile> {
    if labels.len() != vectors.len() {
        return Err(CoreError::LengthMismatch { left: labels.len(), right: vectors.len() });
    }
    let width = vectors.first().map_or(N_FEATURES, Vec::len);
    let mut sums = vec![vec![0.0; width]; classes];
    let mut counts = vec![0usize; classes];
    for (&label, v) in labels.iter().zip(vectors) {
        if label >= classes {
            return Err(CoreError::LabelOutOfRange { label, classes });
        }
        if v.len() != width {
            return Err(CoreError::DimensionMismatch { expected: width, found: v.len() });
        }
        counts[label] += 1;
        sums[label].iter_mut().zip(v).for_each(|(s, x)| *s += x);
    }
    if let Some(empty) = counts.iter().position(|&c| c == 0) {
        return Err(CoreError::EmptyClass(empty));
    }
    let means = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &n)| s.into_iter().map(|x| x / n as f64).collect())
        .collect();
    Ok(FeatureProfile { means, counts })
}

/// Mean engineered feature vector of each class `0..classes`. Unlabeled
/// documents are skipped.
pub fn class_feature_profile(docs: &[Document], resources: &LexiconSet, classes: usize) -> Result<FeatureProfile> {
    let labeled: Vec<&Document> = docs.iter().filter(|d| d.label.is_some()).collect();
    let labels: Vec<usize> = labeled.iter().filter_map(|d| d.label).collect();
    let vectors: Vec<Vec<f64>> = labeled.iter().map(|d| extract_features(d, resources).values).collect();
    profile_from_vectors(&labels, &vectors, classes)
}
