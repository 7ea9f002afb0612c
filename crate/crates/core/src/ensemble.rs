//! Soft-voting ensemble: member weights are the softmax of cross-validated
//! F1 scores, and the prediction is the argmax of the weighted sum of member
//! confidence vectors.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::evaluation::classification_metrics;
use crate::models::{argmax, ConfidenceVector, ModelInput, ModelParams};

pub const MEMBERS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleWeights {
    pub w: [f64; MEMBERS],
    pub source_f1: [f64; MEMBERS],
}

/// `w_i = exp(f1_i) / Σ_j exp(f1_j)`.
pub fn compute_weights(f1: [f64; MEMBERS]) -> Result<EnsembleWeights> {
    if let Some(&bad) = f1.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(CoreError::OutOfRangeF1(bad));
    }
    let max = f1.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp = f1.map(|v| (v - max).exp());
    let total: f64 = exp.iter().sum();
    Ok(EnsembleWeights {
        w: exp.map(|e| e / total),
        source_f1: f1,
    })
}

/// `Σ_i w_i p_i` for one sample.
pub fn combine(weights: &[f64; MEMBERS], members: [&ConfidenceVector; MEMBERS]) -> Result<Vec<f64>> {
    let classes = members[0].classes();
    if let Some(m) = members.iter().find(|m| m.classes() != classes) {
        return Err(CoreError::DimensionMismatch { expected: classes, found: m.classes() });
    }
    let mut out = vec![0.0; classes];
    for (w, m) in weights.iter().zip(members) {
        for (o, p) in out.iter_mut().zip(m.probs()) {
            *o += w * p;
        }
    }
    Ok(out)
}

/// Combined vector and its argmax (lowest class id on ties).
pub fn soft_vote(weights: &[f64; MEMBERS], members: [&ConfidenceVector; MEMBERS]) -> Result<(usize, Vec<f64>)> {
    let combined = combine(weights, members)?;
    Ok((argmax(&combined), combined))
}

/// The member inputs for one sample: dense features for the DNN and the
/// embedded token sequence for the two recurrent models.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleInput {
    pub dense: Vec<f64>,
    pub sequence: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleModel {
    /// DNN, BiLSTM, attentive BiLSTM.
    pub members: [ModelParams; MEMBERS],
    pub weights: EnsembleWeights,
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsemblePrediction {
    pub class: usize,
    pub combined: Vec<f64>,
    pub members: [ConfidenceVector; MEMBERS],
}

impl EnsembleModel {
    pub fn new(members: [ModelParams; MEMBERS], weights: EnsembleWeights) -> Result<Self> {
        let classes = members[0].classes;
        if let Some(m) = members.iter().find(|m| m.classes != classes) {
            return Err(CoreError::DimensionMismatch { expected: classes, found: m.classes });
        }
        Ok(Self { members, weights, classes })
    }

    pub fn predict(&self, inputs: &[EnsembleInput]) -> Result<Vec<EnsemblePrediction>> {
        let mut per_member: Vec<Vec<ConfidenceVector>> = Vec::with_capacity(MEMBERS);
        for model in &self.members {
            let xs: Vec<ModelInput> = inputs
                .iter()
                .map(|x| {
                    if model.architecture.is_sequential() {
                        ModelInput::Sequence(x.sequence.clone())
                    } else {
                        ModelInput::Dense(x.dense.clone())
                    }
                })
                .collect();
            per_member.push(model.predict_batch(&xs)?);
        }
        let [a, b, c]: [Vec<ConfidenceVector>; MEMBERS] =
            per_member.try_into().expect("one prediction list per member");
        a.into_iter()
            .zip(b)
            .zip(c)
            .map(|((a, b), c)| {
                let (class, combined) = soft_vote(&self.weights.w, [&a, &b, &c])?;
                Ok(EnsemblePrediction { class, combined, members: [a, b, c] })
            })
            .collect()
    }
}

pub fn ensemble_predict(model: &EnsembleModel, inputs: &[EnsembleInput]) -> Result<Vec<EnsemblePrediction>> {
    model.predict(inputs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum F1Flavor {
    #[default]
    Macro,
    /// F1 of class 1 only.
    Positive,
}

/// Stratified fold assignment: each class is shuffled with the seeded
/// generator and dealt round-robin over `k` folds. Returns the test indices
/// of each fold.
pub fn stratified_folds(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(CoreError::InvalidConfig(format!("need at least 2 folds, got {k}")));
    }
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    for (class, mut idx) in by_class.into_iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        if idx.len() < k {
            return Err(CoreError::TooFewSamplesPerClass { class, count: idx.len(), folds: k });
        }
        idx.shuffle(&mut rng);
        for (j, i) in idx.into_iter().enumerate() {
            folds[j % k].push(i);
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// Mean F1 over `k` stratified folds. `fit_predict(train, test)` trains on
/// the `train` indices and returns predicted labels for the `test` indices.
pub fn cross_validated_f1<F>(labels: &[usize], k: usize, seed: u64, flavor: F1Flavor, mut fit_predict: F) -> Result<f64>
where
    F: FnMut(&[usize], &[usize]) -> Result<Vec<usize>>,
{
    if labels.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    let folds = stratified_folds(labels, k, seed)?;
    let mut total = 0.0;
    for (f, test) in folds.iter().enumerate() {
        let train: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|(g, _)| *g != f)
            .flat_map(|(_, idx)| idx.iter().copied())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let predicted = fit_predict(&train, test)?;
        let gold: Vec<usize> = test.iter().map(|&i| labels[i]).collect();
        let m = classification_metrics(&gold, &predicted)?;
        total += match flavor {
            F1Flavor::Macro => m.macro_f1,
            F1Flavor::Positive => m.positive.map_or(0.0, |p| p.f1),
        };
    }
    Ok(total / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(p: &[f64]) -> ConfidenceVector {
        ConfidenceVector::new(p.to_vec()).unwrap()
    }

    #[test]
    fn weights_examples() {
        let w = compute_weights([0.70, 0.70, 0.67]).unwrap();
        for (got, want) in w.w.iter().zip([0.33665, 0.33665, 0.32670]) {
            assert!((got - want).abs() < 1e-5, "{got}");
        }
        let eq = compute_weights([0.4, 0.4, 0.4]).unwrap();
        assert!(eq.w.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
        let e = std::f64::consts::E;
        let one = compute_weights([1.0, 0.0, 0.0]).unwrap();
        let want = [e / (e + 2.0), 1.0 / (e + 2.0), 1.0 / (e + 2.0)];
        for (g, w) in one.w.iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        assert!(matches!(compute_weights([1.2, 0.0, 0.0]), Err(CoreError::OutOfRangeF1(_))));
        assert!(compute_weights([f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn soft_vote_example_and_ties() {
        let (class, combined) =
            soft_vote(&[0.5, 0.3, 0.2], [&cv(&[0.9, 0.1]), &cv(&[0.2, 0.8]), &cv(&[0.4, 0.6])]).unwrap();
        assert!((combined[0] - 0.59).abs() < 1e-12 && (combined[1] - 0.41).abs() < 1e-12);
        assert_eq!(class, 0);
        let u = ConfidenceVector::uniform(3);
        assert_eq!(soft_vote(&[0.2, 0.3, 0.5], [&u, &u, &u]).unwrap().0, 0);
    }

    #[test]
    fn folds_are_stratified_and_cover_everything() {
        let labels: Vec<usize> = (0..23).map(|i| usize::from(i % 3 == 0)).collect();
        let folds = stratified_folds(&labels, 4, 9).unwrap();
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
        for f in &folds {
            assert!(f.iter().any(|&i| labels[i] == 0) && f.iter().any(|&i| labels[i] == 1));
        }
        assert_eq!(folds, stratified_folds(&labels, 4, 9).unwrap());
        assert!(matches!(
            stratified_folds(&[0, 0, 0, 0, 0, 1, 1], 5, 0),
            Err(CoreError::TooFewSamplesPerClass { class: 1, count: 2, folds: 5 })
        ));
    }

    #[test]
    fn cross_validation_examples() {
        let labels: Vec<usize> = (0..20).map(|i| i % 2).collect();
        let perfect = cross_validated_f1(&labels, 5, 1, F1Flavor::Macro, |_, test| {
            Ok(test.iter().map(|&i| labels[i]).collect())
        })
        .unwrap();
        assert_eq!(perfect, 1.0);
        // Always predicting 1 on a balanced fold: class 1 has P=1/2, R=1,
        // F1=2/3; class 0 scores 0, so macro-F1 is 1/3.
        let constant =
            cross_validated_f1(&labels, 5, 1, F1Flavor::Macro, |_, test| Ok(vec![1; test.len()])).unwrap();
        assert!((constant - 1.0 / 3.0).abs() < 1e-15);
        let positive =
            cross_validated_f1(&labels, 5, 1, F1Flavor::Positive, |_, test| Ok(vec![1; test.len()])).unwrap();
        assert!((positive - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn train_and_test_indices_are_disjoint() {
        let labels: Vec<usize> = (0..15).map(|i| i % 3).collect();
        cross_validated_f1(&labels, 5, 3, F1Flavor::Macro, |train, test| {
            assert_eq!(train.len() + test.len(), 15);
            assert!(test.iter().all(|i| !train.contains(i)));
            Ok(test.iter().map(|&i| labels[i]).collect())
        })
        .unwrap();
    }
}
