use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ModelInput, ModelParams};
use crate::error::{CoreError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub seed: u64,
    /// Global L2 norm the gradient is clipped to before each update.
    pub clip_norm: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Epochs without validation improvement before stopping; 0 disables.
    pub patience: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 20,
            batch_size: 32,
            learning_rate: 1e-3,
            seed: 0,
            clip_norm: 5.0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            patience: 3,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        let ok = self.epochs > 0
            && self.batch_size > 0
            && self.learning_rate >= 0.0
            && self.learning_rate.is_finite()
            && self.clip_norm > 0.0
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2)
            && self.epsilon > 0.0;
        if ok {
            Ok(())
        } else {
            Err(CoreError::InvalidConfig(format!("invalid training config {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub inputs: Vec<ModelInput>,
    pub labels: Vec<usize>,
}

impl Dataset {
    pub fn new(inputs: Vec<ModelInput>, labels: Vec<usize>) -> Result<Self> {
        if inputs.len() != labels.len() {
            return Err(CoreError::LengthMismatch { left: inputs.len(), right: labels.len() });
        }
        Ok(Self { inputs, labels })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// The rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            inputs: indices.iter().map(|&i| self.inputs[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    /// Sample-weighted mean minibatch loss over the epoch.
    pub train_loss: f64,
    pub validation_loss: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: ModelParams,
    pub trace: Vec<EpochStats>,
    /// Epoch whose parameters were returned.
    pub best_epoch: usize,
}

struct Adam {
    m: BTreeMap<String, Vec<f64>>,
    v: BTreeMap<String, Vec<f64>>,
    step: i32,
}

impl Adam {
    fn new(params: &ModelParams) -> Self {
        let zeros: BTreeMap<String, Vec<f64>> =
            params.tensors.iter().map(|(k, t)| (k.clone(), vec![0.0; t.len()])).collect();
        Self { m: zeros.clone(), v: zeros, step: 0 }
    }

    fn update(&mut self, params: &mut ModelParams, grads: &BTreeMap<String, Vec<f64>>, cfg: &TrainConfig) {
        self.step += 1;
        let c1 = 1.0 - cfg.beta1.powi(self.step);
        let c2 = 1.0 - cfg.beta2.powi(self.step);
        for (name, tensor) in params.tensors.iter_mut() {
            let g = &grads[name];
            let m = self.m.get_mut(name).expect("moment per tensor");
            let v = self.v.get_mut(name).expect("moment per tensor");
            for (k, p) in tensor.data_mut().iter_mut().enumerate() {
                m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g[k];
                v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g[k] * g[k];
                let m_hat = m[k] / c1;
                let v_hat = v[k] / c2;
                *p -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
            }
        }
    }
}

fn clip(grads: &mut BTreeMap<String, Vec<f64>>, max_norm: f64) {
    let norm = grads.values().flatten().map(|g| g * g).sum::<f64>().sqrt();
    if norm > max_norm {
        let scale = max_norm / norm;
        grads.values_mut().flatten().for_each(|g| *g *= scale);
    }
}

/// Minibatch Adam on mean cross-entropy. Shuffling and dropout draw from one
/// generator seeded by `cfg.seed`, so identical inputs give identical runs.
/// With a validation set the parameters of the lowest validation loss are
/// returned, and training stops after `patience` epochs without improvement.
pub fn train(
    initial: ModelParams,
    data: &Dataset,
    validation: Option<&Dataset>,
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    if data.inputs.len() != data.labels.len() {
        return Err(CoreError::LengthMismatch { left: data.inputs.len(), right: data.labels.len() });
    }
    for ds in std::iter::once(data).chain(validation) {
        if let Some(&label) = ds.labels.iter().find(|&&l| l >= initial.classes) {
            return Err(CoreError::LabelOutOfRange { label, classes: initial.classes });
        }
    }
    let validation = validation.filter(|v| !v.is_empty());

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut params = initial;
    let mut adam = Adam::new(&params);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut trace = Vec::with_capacity(cfg.epochs);
    let mut best: Option<(f64, usize, ModelParams)> = None;
    let mut stale = 0;

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let batch = data.subset(chunk);
            let (loss, mut grads) = params.gradients_impl(&batch.inputs, &batch.labels, Some(&mut rng))?;
            total += loss * chunk.len() as f64;
            clip(&mut grads, cfg.clip_norm);
            adam.update(&mut params, &grads, cfg);
        }
        let validation_loss = validation
            .map(|v| params.loss(&v.inputs, &v.labels))
            .transpose()?;
        trace.push(EpochStats {
            epoch,
            train_loss: total / data.len() as f64,
            validation_loss,
        });
        if let Some(vl) = validation_loss {
            match &best {
                Some((b, _, _)) if vl >= *b => stale += 1,
                _ => {
                    best = Some((vl, epoch, params.clone()));
                    stale = 0;
                }
            }
            if cfg.patience > 0 && stale >= cfg.patience {
                break;
            }
        }
    }

    let last = trace.len() - 1;
    Ok(match best {
        Some((_, epoch, p)) => TrainOutcome { params: p, trace, best_epoch: epoch },
        None => TrainOutcome { params, trace, best_epoch: last },
    })
}
