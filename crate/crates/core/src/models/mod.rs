//! The three member classifiers and their shared parameter container.
//!
//! * `Dnn`: six affine layers, ReLU on the first five, softmax on the last.
//! * `BiLstm`: BiLSTM → per-step dense LeakyReLU → BiLSTM → final forward and
//!   backward states → dense softmax.
//! * `AttLstm`: BiLSTM with LeakyReLU → per-step score `tanh(w·h_t + b)` →
//!   softmax over valid steps → weighted sum of states → dense softmax.
//!
//! Sequences are truncated to `max_len` tokens and pre-padded to the longest
//! sequence of the batch. Padded steps are masked: recurrent state passes
//! through them untouched and they receive zero attention, so a sample's
//! output does not depend on what else is in its batch.

mod lstm;
mod serialize;
mod train;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use desc_autograd::{Tape, Tensor, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

pub use lstm::{LstmCell, StepMask};
pub use serialize::MODEL_FORMAT_VERSION;
pub use train::{train, Dataset, EpochStats, TrainConfig, TrainOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Architecture {
    #[serde(rename = "DNN")]
    Dnn,
    #[serde(rename = "BILSTM")]
    BiLstm,
    #[serde(rename = "ATTLSTM")]
    AttLstm,
}

impl Architecture {
    pub const ALL: [Architecture; 3] = [Architecture::Dnn, Architecture::BiLstm, Architecture::AttLstm];

    pub fn id(self) -> &'static str {
        match self {
            Architecture::Dnn => "DNN",
            Architecture::BiLstm => "BILSTM",
            Architecture::AttLstm => "ATTLSTM",
        }
    }

    pub fn is_sequential(self) -> bool {
        !matches!(self, Architecture::Dnn)
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Architecture {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Architecture::ALL
            .into_iter()
            .find(|a| a.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown architecture {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// LSTM units per direction.
    pub hidden_dim: usize,
    /// Width of the dense layer between the two BiLSTM layers.
    pub dense_dim: usize,
    /// Widths of the five hidden DNN layers; the sixth layer has one unit per class.
    pub dnn_widths: Vec<usize>,
    pub leaky_slope: f64,
    /// Dropout rate applied during training only.
    pub dropout: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            hidden_dim: 64,
            dense_dim: 128,
            dnn_widths: vec![512, 256, 128, 64, 32],
            leaky_slope: 0.01,
            dropout: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSpec {
    /// Dense feature vector; one name per column.
    Dense { features: Vec<String> },
    /// Sequence of word vectors.
    Sequence { embedding_dim: usize, max_len: usize },
}

impl InputSpec {
    pub fn width(&self) -> usize {
        match self {
            InputSpec::Dense { features } => features.len(),
            InputSpec::Sequence { embedding_dim, .. } => *embedding_dim,
        }
    }
}

/// One model input: a dense vector or a sequence of word vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelInput {
    Dense(Vec<f64>),
    Sequence(Vec<Vec<f64>>),
}

/// Class probabilities from one classifier for one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConfidenceVector(Vec<f64>);

impl ConfidenceVector {
    pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

    /// Accepts non-negative entries summing to 1 within [`Self::SIMPLEX_TOLERANCE`].
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        if probs.is_empty()
            || probs.iter().any(|p| p.is_nan() || *p < 0.0)
            || (total - 1.0).abs() > Self::SIMPLEX_TOLERANCE
        {
            return Err(CoreError::InvalidConfig(format!("not a probability vector: {probs:?}")));
        }
        Ok(Self(probs))
    }

    pub fn uniform(classes: usize) -> Self {
        Self(vec![1.0 / classes as f64; classes])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn classes(&self) -> usize {
        self.0.len()
    }

    /// Most probable class; ties go to the lowest id.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }
}

/// Index of the largest value, lowest index on ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Attention weights of an `AttLstm` batch, over padded positions.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionTrace {
    pub weights: Vec<Vec<f64>>,
    pub valid: Vec<Vec<bool>>,
}

/// A complete, serializable parameter set for one architecture.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub architecture: Architecture,
    pub config: ModelConfig,
    pub input: InputSpec,
    pub classes: usize,
    pub tensors: BTreeMap<String, Tensor>,
}

struct Graph {
    logits: Var,
    attention: Option<(Var, StepMask)>,
}

impl ModelParams {
    /// Xavier-uniform weights, zero biases, forget-gate biases at 1.
    pub fn init(
        architecture: Architecture,
        config: ModelConfig,
        input: InputSpec,
        classes: usize,
        seed: u64,
    ) -> Result<Self> {
        let shapes = param_shapes(architecture, &config, &input, classes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tensors = BTreeMap::new();
        for (name, shape) in shapes {
            let len: usize = shape.iter().product();
            let data = if shape.len() == 2 {
                let limit = (6.0 / (shape[0] + shape[1]) as f64).sqrt();
                (0..len).map(|_| rng.gen_range(-limit..=limit)).collect()
            } else if name.ends_with(".b_f") {
                vec![1.0; len]
            } else {
                vec![0.0; len]
            };
            tensors.insert(name, Tensor::new(shape, data)?);
        }
        Ok(Self {
            architecture,
            config,
            input,
            classes,
            tensors,
        })
    }

    pub fn parameter_count(&self) -> usize {
        self.tensors.values().map(Tensor::len).sum()
    }

    /// Checks that every expected tensor is present with the right shape.
    pub fn validate(&self) -> Result<()> {
        let shapes = param_shapes(self.architecture, &self.config, &self.input, self.classes)?;
        if shapes.len() != self.tensors.len() {
            return Err(CoreError::InvalidConfig(format!(
                "expected {} tensors, found {}",
                shapes.len(),
                self.tensors.len()
            )));
        }
        for (name, shape) in shapes {
            match self.tensors.get(&name) {
                Some(t) if t.shape() == shape.as_slice() => {}
                Some(t) => {
                    return Err(CoreError::InvalidConfig(format!(
                        "tensor {name} has shape {:?}, expected {shape:?}",
                        t.shape()
                    )))
                }
                None => return Err(CoreError::InvalidConfig(format!("missing tensor {name}"))),
            }
        }
        Ok(())
    }

    fn check_inputs(&self, inputs: &[ModelInput]) -> Result<()> {
        for (idx, input) in inputs.iter().enumerate() {
            match (&self.input, input) {
                (InputSpec::Dense { features }, ModelInput::Dense(x)) => {
                    if x.len() != features.len() {
                        return Err(CoreError::DimensionMismatch {
                            expected: features.len(),
                            found: x.len(),
                        });
                    }
                }
                (InputSpec::Sequence { embedding_dim, .. }, ModelInput::Sequence(seq)) => {
                    if seq.is_empty() {
                        return Err(CoreError::EmptySequence(idx));
                    }
                    if let Some(v) = seq.iter().find(|v| v.len() != *embedding_dim) {
                        return Err(CoreError::DimensionMismatch {
                            expected: *embedding_dim,
                            found: v.len(),
                        });
                    }
                }
                (InputSpec::Dense { .. }, ModelInput::Sequence(_)) | (InputSpec::Sequence { .. }, ModelInput::Dense(_)) => {
                    return Err(CoreError::InvalidConfig(format!(
                        "{} model given the wrong input kind",
                        self.architecture
                    )))
                }
            }
        }
        Ok(())
    }

    fn register(&self, tape: &mut Tape, trainable: bool) -> HashMap<String, Var> {
        self.tensors
            .iter()
            .map(|(name, t)| {
                let v = if trainable { tape.param(t) } else { tape.constant(t) };
                (name.clone(), v)
            })
            .collect()
    }

    fn build(
        &self,
        tape: &mut Tape,
        vars: &HashMap<String, Var>,
        batch: &[&ModelInput],
        mut dropout: Option<&mut ChaCha8Rng>,
    ) -> Result<Graph> {
        let slope = self.config.leaky_slope;
        let rate = self.config.dropout;
        let mut drop = |tape: &mut Tape, x: Var| -> Result<Var> {
            match dropout.as_deref_mut() {
                Some(rng) if rate > 0.0 => apply_dropout(tape, x, rate, rng),
                _ => Ok(x),
            }
        };
        match self.architecture {
            Architecture::Dnn => {
                let width = self.input.width();
                let mut data = Vec::with_capacity(batch.len() * width);
                for input in batch {
                    if let ModelInput::Dense(x) = input {
                        data.extend_from_slice(x);
                    }
                }
                let mut x = tape.constant(&Tensor::matrix(batch.len(), width, data)?);
                let layers = self.config.dnn_widths.len() + 1;
                for l in 0..layers {
                    let w = vars[&format!("dense{l}.weight")];
                    let b = vars[&format!("dense{l}.bias")];
                    let z = tape.matmul(x, w)?;
                    let z = tape.add(z, b)?;
                    x = if l + 1 < layers {
                        let a = tape.relu(z);
                        drop(tape, a)?
                    } else {
                        z
                    };
                }
                Ok(Graph {
                    logits: x,
                    attention: None,
                })
            }
            Architecture::BiLstm => {
                let (steps, mask) = self.sequence_batch(tape, batch)?;
                let h = self.config.hidden_dim;
                let dim = self.input.width();
                let first = bidirectional(tape, vars, "lstm1", dim, h, &steps, &mask)?;
                let mut bridged = Vec::with_capacity(first.len());
                let (bw, bb) = (vars["bridge.weight"], vars["bridge.bias"]);
                for x in first {
                    let z = tape.matmul(x, bw)?;
                    let z = tape.add(z, bb)?;
                    let a = tape.leaky_relu(z, slope);
                    bridged.push(drop(tape, a)?);
                }
                let fwd = LstmCell::new("lstm2.fwd", self.config.dense_dim, h);
                let bwd = LstmCell::new("lstm2.bwd", self.config.dense_dim, h);
                let f = fwd.run(tape, vars, &bridged, &mask, false)?;
                let b = bwd.run(tape, vars, &bridged, &mask, true)?;
                let last = *f.last().expect("non-empty batch");
                let summary = tape.concat(&[last, b[0]], 1)?;
                let summary = drop(tape, summary)?;
                let logits = self.head(tape, vars, summary)?;
                Ok(Graph {
                    logits,
                    attention: None,
                })
            }
            Architecture::AttLstm => {
                let (steps, mask) = self.sequence_batch(tape, batch)?;
                let h = self.config.hidden_dim;
                let dim = self.input.width();
                let states: Vec<Var> = bidirectional(tape, vars, "lstm1", dim, h, &steps, &mask)?
                    .into_iter()
                    .map(|s| tape.leaky_relu(s, slope))
                    .collect();
                let (weights, context) = attention_pool(
                    tape,
                    &states,
                    &mask.flat(),
                    vars["attention.weight"],
                    vars["attention.bias"],
                )?;
                let context = drop(tape, context)?;
                let logits = self.head(tape, vars, context)?;
                Ok(Graph {
                    logits,
                    attention: Some((weights, mask)),
                })
            }
        }
    }

    fn head(&self, tape: &mut Tape, vars: &HashMap<String, Var>, x: Var) -> Result<Var> {
        let z = tape.matmul(x, vars["head.weight"])?;
        Ok(tape.add(z, vars["head.bias"])?)
    }

    /// Per-step `[batch, dim]` inputs and validity mask, pre-padded to the
    /// longest (truncated) sequence in the batch.
    fn sequence_batch(&self, tape: &mut Tape, batch: &[&ModelInput]) -> Result<(Vec<Var>, StepMask)> {
        let InputSpec::Sequence { embedding_dim, max_len } = self.input else {
            unreachable!("sequence model with dense input");
        };
        let seqs: Vec<&[Vec<f64>]> = batch
            .iter()
            .map(|i| match i {
                ModelInput::Sequence(s) => &s[..s.len().min(max_len.max(1))],
                ModelInput::Dense(_) => unreachable!("checked by check_inputs"),
            })
            .collect();
        let steps = seqs.iter().map(|s| s.len()).max().unwrap_or(0);
        let valid: Vec<Vec<bool>> = seqs
            .iter()
            .map(|s| (0..steps).map(|t| t >= steps - s.len()).collect())
            .collect();
        let mut vars = Vec::with_capacity(steps);
        for t in 0..steps {
            let mut data = Vec::with_capacity(batch.len() * embedding_dim);
            for s in &seqs {
                let pad = steps - s.len();
                if t < pad {
                    data.extend(std::iter::repeat_n(0.0, embedding_dim));
                } else {
                    data.extend_from_slice(&s[t - pad]);
                }
            }
            vars.push(tape.constant(&Tensor::matrix(batch.len(), embedding_dim, data)?));
        }
        let mask = StepMask {
            batch: batch.len(),
            steps,
            valid,
        };
        Ok((vars, mask))
    }

    /// Class probabilities for each input, in order.
    pub fn predict_batch(&self, inputs: &[ModelInput]) -> Result<Vec<ConfidenceVector>> {
        self.check_inputs(inputs)?;
        let mut out = Vec::with_capacity(inputs.len());
        for chunk in inputs.chunks(64) {
            let refs: Vec<&ModelInput> = chunk.iter().collect();
            let mut tape = Tape::new();
            let vars = self.register(&mut tape, false);
            let graph = self.build(&mut tape, &vars, &refs, None)?;
            let probs = tape.softmax(graph.logits, 1)?;
            out.extend(
                tape.value(probs)
                    .chunks(self.classes)
                    .map(|row| ConfidenceVector(row.to_vec())),
            );
        }
        Ok(out)
    }

    pub fn predict(&self, input: &ModelInput) -> Result<ConfidenceVector> {
        Ok(self.predict_batch(std::slice::from_ref(input))?.remove(0))
    }

    /// Attention weights for a batch of sequences (attentive model only).
    pub fn attention_weights(&self, inputs: &[ModelInput]) -> Result<AttentionTrace> {
        if self.architecture != Architecture::AttLstm {
            return Err(CoreError::InvalidConfig("attention weights need an ATTLSTM model".into()));
        }
        self.check_inputs(inputs)?;
        let refs: Vec<&ModelInput> = inputs.iter().collect();
        let mut tape = Tape::new();
        let vars = self.register(&mut tape, false);
        let graph = self.build(&mut tape, &vars, &refs, None)?;
        let (a, mask) = graph.attention.expect("attentive graph records weights");
        let weights = tape.value(a).chunks(mask.steps).map(<[f64]>::to_vec).collect();
        Ok(AttentionTrace {
            weights,
            valid: mask.valid,
        })
    }

    /// Mean cross-entropy of `labels` on `inputs`.
    pub fn loss(&self, inputs: &[ModelInput], labels: &[usize]) -> Result<f64> {
        self.check_batch(inputs, labels)?;
        let refs: Vec<&ModelInput> = inputs.iter().collect();
        let mut tape = Tape::new();
        let vars = self.register(&mut tape, false);
        let graph = self.build(&mut tape, &vars, &refs, None)?;
        let loss = tape.softmax_cross_entropy(graph.logits, labels)?;
        Ok(tape.value(loss)[0])
    }

    /// Mean cross-entropy and its gradient for every tensor.
    pub fn loss_and_gradients(
        &self,
        inputs: &[ModelInput],
        labels: &[usize],
    ) -> Result<(f64, BTreeMap<String, Vec<f64>>)> {
        self.gradients_impl(inputs, labels, None)
    }

    pub(crate) fn gradients_impl(
        &self,
        inputs: &[ModelInput],
        labels: &[usize],
        dropout: Option<&mut ChaCha8Rng>,
    ) -> Result<(f64, BTreeMap<String, Vec<f64>>)> {
        self.check_batch(inputs, labels)?;
        let refs: Vec<&ModelInput> = inputs.iter().collect();
        let mut tape = Tape::new();
        let vars = self.register(&mut tape, true);
        let graph = self.build(&mut tape, &vars, &refs, dropout)?;
        let loss = tape.softmax_cross_entropy(graph.logits, labels)?;
        tape.backward(loss)?;
        let grads = self
            .tensors
            .iter()
            .map(|(name, t)| {
                let g = tape.grad(vars[name]).map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; t.len()]);
                (name.clone(), g)
            })
            .collect();
        Ok((tape.value(loss)[0], grads))
    }

    fn check_batch(&self, inputs: &[ModelInput], labels: &[usize]) -> Result<()> {
        if inputs.is_empty() {
            return Err(CoreError::EmptyDataset);
        }
        if inputs.len() != labels.len() {
            return Err(CoreError::LengthMismatch {
                left: inputs.len(),
                right: labels.len(),
            });
        }
        if let Some(&label) = labels.iter().find(|&&l| l >= self.classes) {
            return Err(CoreError::LabelOutOfRange {
                label,
                classes: self.classes,
            });
        }
        self.check_inputs(inputs)
    }
}

fn apply_dropout(tape: &mut Tape, x: Var, rate: f64, rng: &mut ChaCha8Rng) -> Result<Var> {
    let keep = 1.0 - rate;
    let mask: Vec<f64> = (0..tape.value(x).len())
        .map(|_| if rng.gen::<f64>() < keep { 1.0 / keep } else { 0.0 })
        .collect();
    let m = tape.constant(&Tensor::new(tape.shape(x).to_vec(), mask)?);
    Ok(tape.mul(x, m)?)
}

fn bidirectional(
    tape: &mut Tape,
    vars: &HashMap<String, Var>,
    prefix: &str,
    input_dim: usize,
    hidden: usize,
    steps: &[Var],
    mask: &StepMask,
) -> Result<Vec<Var>> {
    let fwd = LstmCell::new(format!("{prefix}.fwd"), input_dim, hidden);
    let bwd = LstmCell::new(format!("{prefix}.bwd"), input_dim, hidden);
    let f = fwd.run(tape, vars, steps, mask, false)?;
    let b = bwd.run(tape, vars, steps, mask, true)?;
    f.into_iter()
        .zip(b)
        .map(|(x, y)| Ok(tape.concat(&[x, y], 1)?))
        .collect()
}

/// Attention over per-step states (each `[batch, dim]`): scores
/// `r_t = tanh(h_t · weight + bias)`, weights `a = softmax_t(r)` over the
/// steps flagged valid in the row-major `[batch, steps]` mask, and context
/// `s = Σ_t a_t h_t`. Returns `(a, s)` with shapes `[batch, steps]` and
/// `[batch, dim]`.
pub fn attention_pool(
    tape: &mut Tape,
    states: &[Var],
    valid: &[bool],
    weight: Var,
    bias: Var,
) -> Result<(Var, Var)> {
    let scores: Vec<Var> = states
        .iter()
        .map(|&h| {
            let z = tape.matmul(h, weight)?;
            let z = tape.add(z, bias)?;
            Ok(tape.tanh(z))
        })
        .collect::<Result<_>>()?;
    let r = tape.concat(&scores, 1)?;
    let a = tape.masked_softmax(r, 1, valid)?;
    let mut context: Option<Var> = None;
    for (t, &h) in states.iter().enumerate() {
        let a_t = tape.narrow(a, 1, t, 1)?;
        let term = tape.mul(h, a_t)?;
        context = Some(match context {
            Some(acc) => tape.add(acc, term)?,
            None => term,
        });
    }
    Ok((a, context.expect("at least one step")))
}

fn param_shapes(
    architecture: Architecture,
    config: &ModelConfig,
    input: &InputSpec,
    classes: usize,
) -> Result<Vec<(String, Vec<usize>)>> {
    if classes < 2 {
        return Err(CoreError::InvalidConfig(format!("need at least 2 classes, got {classes}")));
    }
    if !(0.0..1.0).contains(&config.dropout) {
        return Err(CoreError::InvalidConfig(format!("dropout {} outside [0, 1)", config.dropout)));
    }
    let mut shapes = Vec::new();
    match (architecture, input) {
        (Architecture::Dnn, InputSpec::Dense { features }) => {
            if features.is_empty() || config.dnn_widths.len() != 5 || config.dnn_widths.contains(&0) {
                return Err(CoreError::InvalidConfig(
                    "DNN needs a non-empty input and five positive hidden widths".into(),
                ));
            }
            let mut fan_in = features.len();
            for (l, &w) in config.dnn_widths.iter().chain(std::iter::once(&classes)).enumerate() {
                shapes.push((format!("dense{l}.weight"), vec![fan_in, w]));
                shapes.push((format!("dense{l}.bias"), vec![w]));
                fan_in = w;
            }
        }
        (Architecture::BiLstm | Architecture::AttLstm, InputSpec::Sequence { embedding_dim, max_len }) => {
            let h = config.hidden_dim;
            if *embedding_dim == 0 || *max_len == 0 || h == 0 {
                return Err(CoreError::InvalidConfig(
                    "sequence models need positive embedding, length and hidden sizes".into(),
                ));
            }
            for dir in ["fwd", "bwd"] {
                shapes.extend(LstmCell::new(format!("lstm1.{dir}"), *embedding_dim, h).param_shapes());
            }
            if architecture == Architecture::BiLstm {
                if config.dense_dim == 0 {
                    return Err(CoreError::InvalidConfig("dense_dim must be positive".into()));
                }
                shapes.push(("bridge.weight".into(), vec![2 * h, config.dense_dim]));
                shapes.push(("bridge.bias".into(), vec![config.dense_dim]));
                for dir in ["fwd", "bwd"] {
                    shapes.extend(LstmCell::new(format!("lstm2.{dir}"), config.dense_dim, h).param_shapes());
                }
            } else {
                shapes.push(("attention.weight".into(), vec![2 * h, 1]));
                shapes.push(("attention.bias".into(), vec![1]));
            }
            shapes.push(("head.weight".into(), vec![2 * h, classes]));
            shapes.push(("head.bias".into(), vec![classes]));
        }
        (arch, _) => {
            return Err(CoreError::InvalidConfig(format!("{arch} does not accept this input kind")));
        }
    }
    Ok(shapes)
}

/// `dnn_forward` for a single dense vector.
pub fn dnn_forward(params: &ModelParams, input: &[f64]) -> Result<ConfidenceVector> {
    expect_arch(params, Architecture::Dnn)?;
    params.predict(&ModelInput::Dense(input.to_vec()))
}

pub fn bilstm_forward(params: &ModelParams, sequence: &[Vec<f64>]) -> Result<ConfidenceVector> {
    expect_arch(params, Architecture::BiLstm)?;
    params.predict(&ModelInput::Sequence(sequence.to_vec()))
}

pub fn attention_forward(params: &ModelParams, sequence: &[Vec<f64>]) -> Result<ConfidenceVector> {
    expect_arch(params, Architecture::AttLstm)?;
    params.predict(&ModelInput::Sequence(sequence.to_vec()))
}

fn expect_arch(params: &ModelParams, arch: Architecture) -> Result<()> {
    if params.architecture == arch {
        Ok(())
    } else {
        Err(CoreError::InvalidConfig(format!(
            "expected a {arch} model, got {}",
            params.architecture
        )))
    }
}
