//! Flat `key = value` run configuration. Blank lines and `#` comments are
//! ignored, unknown keys are rejected, and relative paths resolve against the
//! directory holding the config file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use desc_core::ensemble::F1Flavor;
use desc_core::models::{ModelConfig, TrainConfig};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    /// Two named classes, e.g. ironic / not ironic.
    #[default]
    Binary,
    /// Integer scores -5..=5, modeled as 11 classes.
    Sentiment11,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Binary => "binary",
            Task::Sentiment11 => "sentiment11",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How an 11-class distribution becomes a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decode {
    #[default]
    Argmax,
    /// Probability-weighted mean score.
    Expectation,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResourcePaths {
    pub sentiwordnet: Option<PathBuf>,
    pub vader: Option<PathBuf>,
    pub afinn: Option<PathBuf>,
    pub depechemood: Option<PathBuf>,
    pub dale_chall: Option<PathBuf>,
    pub pos_lexicon: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
}

impl ResourcePaths {
    /// `(name, path)` for every configured resource.
    pub fn entries(&self) -> Vec<(&'static str, &Path)> {
        [
            ("sentiwordnet", &self.sentiwordnet),
            ("vader", &self.vader),
            ("afinn", &self.afinn),
            ("depechemood", &self.depechemood),
            ("dale_chall", &self.dale_chall),
            ("pos_lexicon", &self.pos_lexicon),
            ("embeddings", &self.embeddings),
        ]
        .into_iter()
        .filter_map(|(k, p)| p.as_deref().map(|p| (k, p)))
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub seed: Option<u64>,
    pub resources: ResourcePaths,
    pub class_names: Option<Vec<String>>,
    pub train: TrainConfig,
    pub model: ModelConfig,
    pub max_seq_len: usize,
    pub validation_fraction: f64,
    pub min_df: usize,
    pub cv_folds: usize,
    pub f1_flavor: F1Flavor,
    pub decode: Decode,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            task: Task::Binary,
            seed: None,
            resources: ResourcePaths::default(),
            class_names: None,
            train: TrainConfig::default(),
            model: ModelConfig::default(),
            max_seq_len: 50,
            validation_fraction: 0.1,
            min_df: 2,
            cv_folds: 5,
            f1_flavor: F1Flavor::Macro,
            decode: Decode::Argmax,
            output_dir: None,
        }
    }
}

fn value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    raw.parse()
        .map_err(|e| CliError::Config { line, reason: format!("{key}: {e}") })
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(CliError::InvalidConfig(format!("config file {} not found", path.display())));
        }
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let config = Self::parse(&text, base)?;
        config.validate()?;
        Ok(config)
    }

    /// Parses without touching the file system.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut c = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let row = raw.trim();
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            let (key, val) = row
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| CliError::Config { line, reason: format!("expected key = value, got {row:?}") })?;
            if !seen.insert(key.to_string()) {
                return Err(CliError::Config { line, reason: format!("duplicate key {key}") });
            }
            let path = || Some(base.join(val));
            match key {
                "task" => {
                    c.task = match val {
                        "binary" => Task::Binary,
                        "sentiment11" => Task::Sentiment11,
                        _ => return Err(CliError::Config { line, reason: format!("unknown task {val:?}") }),
                    }
                }
                "seed" => c.seed = Some(value(line, key, val)?),
                "sentiwordnet" => c.resources.sentiwordnet = path(),
                "vader" => c.resources.vader = path(),
                "afinn" => c.resources.afinn = path(),
                "depechemood" => c.resources.depechemood = path(),
                "dale_chall" => c.resources.dale_chall = path(),
                "pos_lexicon" => c.resources.pos_lexicon = path(),
                "embeddings" => c.resources.embeddings = path(),
                "output_dir" => c.output_dir = path(),
                "class_names" => {
                    c.class_names = Some(val.split(',').map(|s| s.trim().to_string()).collect())
                }
                "epochs" => c.train.epochs = value(line, key, val)?,
                "batch_size" => c.train.batch_size = value(line, key, val)?,
                "learning_rate" => c.train.learning_rate = value(line, key, val)?,
                "beta1" => c.train.beta1 = value(line, key, val)?,
                "beta2" => c.train.beta2 = value(line, key, val)?,
                "adam_epsilon" => c.train.epsilon = value(line, key, val)?,
                "clip_norm" => c.train.clip_norm = value(line, key, val)?,
                "patience" => c.train.patience = value(line, key, val)?,
                "validation_fraction" => c.validation_fraction = value(line, key, val)?,
                "dropout" => c.model.dropout = value(line, key, val)?,
                "hidden_dim" => c.model.hidden_dim = value(line, key, val)?,
                "dense_dim" => c.model.dense_dim = value(line, key, val)?,
                "leaky_slope" => c.model.leaky_slope = value(line, key, val)?,
                "dnn_widths" => {
                    c.model.dnn_widths = val
                        .split(',')
                        .map(|w| value(line, key, w.trim()))
                        .collect::<Result<_>>()?
                }
                "max_seq_len" => c.max_seq_len = value(line, key, val)?,
                "min_df" => c.min_df = value(line, key, val)?,
                "cv_folds" => c.cv_folds = value(line, key, val)?,
                "f1_flavor" => {
                    c.f1_flavor = match val {
                        "macro" => F1Flavor::Macro,
                        "positive" => F1Flavor::Positive,
                        _ => return Err(CliError::Config { line, reason: format!("unknown f1_flavor {val:?}") }),
                    }
                }
                "decode" => {
                    c.decode = match val {
                        "argmax" => Decode::Argmax,
                        "expectation" => Decode::Expectation,
                        _ => return Err(CliError::Config { line, reason: format!("unknown decode {val:?}") }),
                    }
                }
                _ => return Err(CliError::Config { line, reason: format!("unknown key {key:?}") }),
            }
        }
        Ok(c)
    }

    /// Checks value ranges and that every referenced file exists.
    pub fn validate(&self) -> Result<()> {
        for (name, path) in self.resources.entries() {
            if !path.is_file() {
                return Err(CliError::InvalidConfig(format!("{name} file {} not found", path.display())));
            }
        }
        let bad = |msg: &str| Err(CliError::InvalidConfig(msg.to_string()));
        if self.model.dnn_widths.len() != 5 || self.model.dnn_widths.contains(&0) {
            return bad("dnn_widths needs five positive widths");
        }
        if self.model.hidden_dim == 0 || self.model.dense_dim == 0 || self.max_seq_len == 0 {
            return bad("hidden_dim, dense_dim and max_seq_len must be positive");
        }
        if !(0.0..1.0).contains(&self.model.dropout) {
            return bad("dropout must lie in [0, 1)");
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return bad("validation_fraction must lie in [0, 1)");
        }
        if self.cv_folds < 2 {
            return bad("cv_folds must be at least 2");
        }
        if self.train.epochs == 0 || self.train.batch_size == 0 || self.train.clip_norm <= 0.0 {
            return bad("epochs, batch_size and clip_norm must be positive");
        }
        if self.train.learning_rate < 0.0 || self.train.epsilon <= 0.0 {
            return bad("learning_rate must be non-negative and adam_epsilon positive");
        }
        if let Some(names) = &self.class_names {
            let unique: std::collections::BTreeSet<&String> = names.iter().collect();
            if unique.len() != names.len() || names.iter().any(String::is_empty) {
                return bad("class_names must be distinct and non-empty");
            }
            if self.task == Task::Binary && names.len() != 2 {
                return bad("a binary task needs exactly two class_names");
            }
        }
        Ok(())
    }

    /// The configured seed, or `override_seed` when given.
    pub fn seed(&self, override_seed: Option<u64>) -> Result<u64> {
        override_seed
            .or(self.seed)
            .ok_or_else(|| CliError::InvalidConfig("a seed is required (config key `seed` or --seed)".into()))
    }
}
