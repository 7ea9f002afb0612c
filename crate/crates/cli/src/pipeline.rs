//! Turning documents into member-model inputs and fitting the three members.

use desc_core::ensemble::{compute_weights, cross_validated_f1, EnsembleInput, EnsembleModel, EnsembleWeights, MEMBERS};
use desc_core::features::{extract_features, fit_tfidf, transform_tfidf, TfidfModel, FEATURE_NAMES, N_FEATURES};
use desc_core::models::{train, Architecture, Dataset, EpochStats, InputSpec, ModelInput, ModelParams, TrainConfig};
use desc_core::resources::{
    load_embeddings, load_mood_lexicon, load_pos_lexicon, load_sentiment_lexicon, load_wordlist, EmbeddingTable,
    LexiconSet, MoodLexicon, PosLexicon, SentimentLexicon, WordList,
};
use desc_core::text::Document;
use desc_core::Result as CoreResult;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{ResourcePaths, RunConfig};
use crate::error::{CliError, Result};

pub struct Resources {
    pub lexicons: LexiconSet,
    pub embeddings: Option<EmbeddingTable>,
}

impl Resources {
    /// Loads every configured resource; absent lexicons are empty.
    pub fn load(paths: &ResourcePaths) -> Result<Self> {
        let sentiment = |p: &Option<std::path::PathBuf>, name: &str| -> Result<SentimentLexicon> {
            Ok(match p {
                Some(p) => {
                    let (mut lex, _) = load_sentiment_lexicon(p)?;
                    lex.name = name.to_string();
                    lex
                }
                None => SentimentLexicon::new(name),
            })
        };
        let mood = match &paths.depechemood {
            Some(p) => load_mood_lexicon(p)?.0,
            None => MoodLexicon::default(),
        };
        let easy = match &paths.dale_chall {
            Some(p) => load_wordlist(p)?,
            None => WordList::default(),
        };
        let pos = match &paths.pos_lexicon {
            Some(p) => load_pos_lexicon(p)?,
            None => PosLexicon::default(),
        };
        let lexicons = LexiconSet::new(
            sentiment(&paths.sentiwordnet, "sentiwordnet")?,
            sentiment(&paths.vader, "vader")?,
            sentiment(&paths.afinn, "afinn")?,
            mood,
            easy,
            pos,
        );
        let embeddings = paths.embeddings.as_deref().map(load_embeddings).transpose()?;
        Ok(Self { lexicons, embeddings })
    }

    pub fn embeddings(&self) -> Result<&EmbeddingTable> {
        self.embeddings
            .as_ref()
            .ok_or_else(|| CliError::InvalidConfig("the recurrent models need an `embeddings` file".into()))
    }
}

/// Per-document representations that do not depend on any fitted state.
pub struct Prepared<'a> {
    pub docs: Vec<&'a Document>,
    pub engineered: Vec<Vec<f64>>,
    pub sequences: Vec<Vec<Vec<f64>>>,
}

impl<'a> Prepared<'a> {
    pub fn new(docs: Vec<&'a Document>, resources: &Resources) -> Result<Self> {
        let emb = resources.embeddings()?;
        let engineered = docs.iter().map(|d| extract_features(d, &resources.lexicons).values).collect();
        let sequences = docs.iter().map(|d| embed(d, emb)).collect();
        Ok(Self { docs, engineered, sequences })
    }
}

/// One embedding per token. A document without tokens becomes a single
/// out-of-vocabulary step so every text has a prediction.
pub fn embed(doc: &Document, emb: &EmbeddingTable) -> Vec<Vec<f64>> {
    if doc.tokens.is_empty() {
        return vec![vec![0.0; emb.dimension()]];
    }
    doc.tokens
        .iter()
        .map(|t| {
            if emb.contains(&t.normalized) {
                emb.lookup(&t.normalized).to_vec()
            } else {
                emb.lookup(&t.surface).to_vec()
            }
        })
        .collect()
}

pub const FEATURIZER_FORMAT_VERSION: u32 = 1;

/// Fitted input transform: the Tf-Idf vocabulary and a per-column
/// standardization of the dense input, both learned from training rows only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Featurizer {
    pub format: String,
    pub version: u32,
    pub tfidf: TfidfModel,
    /// Training mean of each dense column (Tf-Idf terms, then engineered features).
    pub column_mean: Vec<f64>,
    /// Training standard deviation of each dense column; 1 for constant columns.
    pub column_scale: Vec<f64>,
    pub embedding_dim: usize,
    pub max_seq_len: usize,
}

impl Featurizer {
    pub fn fit(
        prepared: &Prepared<'_>,
        rows: &[usize],
        min_df: usize,
        embedding_dim: usize,
        max_seq_len: usize,
    ) -> CoreResult<Self> {
        let docs: Vec<Document> = rows.iter().map(|&i| prepared.docs[i].clone()).collect();
        let tfidf = fit_tfidf(&docs, min_df)?;
        let raw: Vec<Vec<f64>> = rows
            .iter()
            .map(|&i| raw_dense(&tfidf, prepared.docs[i], &prepared.engineered[i]))
            .collect();
        let width = tfidf.vocabulary_size() + N_FEATURES;
        let n = rows.len() as f64;
        let mut mean = vec![0.0; width];
        for x in &raw {
            mean.iter_mut().zip(x).for_each(|(m, v)| *m += v / n);
        }
        let mut var = vec![0.0; width];
        for x in &raw {
            var.iter_mut().zip(x.iter().zip(&mean)).for_each(|(s, (v, m))| *s += (v - m).powi(2) / n);
        }
        let scale = var.into_iter().map(|v| if v > 1e-12 { v.sqrt() } else { 1.0 }).collect();
        Ok(Self {
            format: "desc-featurizer".into(),
            version: FEATURIZER_FORMAT_VERSION,
            tfidf,
            column_mean: mean,
            column_scale: scale,
            embedding_dim,
            max_seq_len,
        })
    }

    pub fn dense_names(&self) -> Vec<String> {
        self.tfidf
            .terms()
            .iter()
            .map(|t| format!("tfidf:{t}"))
            .chain(FEATURE_NAMES.iter().map(|n| n.to_string()))
            .collect()
    }

    /// Standardized Tf-Idf columns followed by the standardized engineered features.
    pub fn dense(&self, doc: &Document, engineered: &[f64]) -> Vec<f64> {
        let mut x = raw_dense(&self.tfidf, doc, engineered);
        x.iter_mut()
            .zip(self.column_mean.iter().zip(&self.column_scale))
            .for_each(|(v, (m, s))| *v = (*v - m) / s);
        x
    }

    pub fn input(&self, prepared: &Prepared<'_>, i: usize) -> EnsembleInput {
        EnsembleInput {
            dense: self.dense(prepared.docs[i], &prepared.engineered[i]),
            sequence: prepared.sequences[i].clone(),
        }
    }

    pub fn input_spec(&self, arch: Architecture) -> InputSpec {
        match arch {
            Architecture::Dnn => InputSpec::Dense { features: self.dense_names() },
            _ => InputSpec::Sequence { embedding_dim: self.embedding_dim, max_len: self.max_seq_len },
        }
    }
}

fn member_input(arch: Architecture, x: &EnsembleInput) -> ModelInput {
    if arch.is_sequential() {
        ModelInput::Sequence(x.sequence.clone())
    } else {
        ModelInput::Dense(x.dense.clone())
    }
}

fn raw_dense(tfidf: &TfidfModel, doc: &Document, engineered: &[f64]) -> Vec<f64> {
    let mut x = transform_tfidf(tfidf, doc).to_dense();
    x.extend_from_slice(engineered);
    x
}

/// Holds out `fraction` of each class (shuffled by `rng`) for early stopping.
fn validation_split(rows: &[usize], labels: &[usize], fraction: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    if fraction <= 0.0 {
        return (rows.to_vec(), Vec::new());
    }
    let classes = rows.iter().map(|&i| labels[i]).max().map_or(0, |m| m + 1);
    let (mut fit, mut held) = (Vec::new(), Vec::new());
    for c in 0..classes {
        let mut members: Vec<usize> = rows.iter().copied().filter(|&i| labels[i] == c).collect();
        members.shuffle(rng);
        let k = ((members.len() as f64) * fraction).floor() as usize;
        let k = k.min(members.len().saturating_sub(1));
        held.extend_from_slice(&members[..k]);
        fit.extend_from_slice(&members[k..]);
    }
    fit.sort_unstable();
    held.sort_unstable();
    (fit, held)
}

pub struct FittedMember {
    pub params: ModelParams,
    pub trace: Vec<EpochStats>,
}

/// Trains one member on `rows` with inputs from `featurizer`.
#[allow(clippy::too_many_arguments)]
pub fn fit_member(
    arch: Architecture,
    featurizer: &Featurizer,
    prepared: &Prepared<'_>,
    labels: &[usize],
    rows: &[usize],
    classes: usize,
    config: &RunConfig,
    seed: u64,
) -> CoreResult<FittedMember> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (fit_rows, held_rows) = validation_split(rows, labels, config.validation_fraction, &mut rng);
    let to_dataset = |idx: &[usize]| -> CoreResult<Dataset> {
        let inputs = idx.iter().map(|&i| member_input(arch, &featurizer.input(prepared, i))).collect();
        Dataset::new(inputs, idx.iter().map(|&i| labels[i]).collect())
    };
    let fit = to_dataset(&fit_rows)?;
    let held = to_dataset(&held_rows)?;
    let init = ModelParams::init(arch, config.model.clone(), featurizer.input_spec(arch), classes, rng.gen())?;
    let cfg = TrainConfig { seed: rng.gen(), ..config.train.clone() };
    let outcome = train(init, &fit, (!held.is_empty()).then_some(&held), &cfg)?;
    Ok(FittedMember { params: outcome.params, trace: outcome.trace })
}

pub struct TrainedEnsemble {
    pub featurizer: Featurizer,
    pub ensemble: EnsembleModel,
    pub traces: [Vec<EpochStats>; MEMBERS],
}

/// Cross-validated F1 of each member, then the final members on all rows.
pub fn train_ensemble(prepared: &Prepared<'_>, labels: &[usize], classes: usize, config: &RunConfig, seed: u64) -> Result<TrainedEnsemble> {
    let embedding_dim = prepared.sequences.first().and_then(|s| s.first()).map_or(1, Vec::len);
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let fold_seed: u64 = master.gen();
    let member_seeds: [u64; MEMBERS] = [master.gen(), master.gen(), master.gen()];

    let mut f1 = [0.0; MEMBERS];
    for (m, arch) in Architecture::ALL.into_iter().enumerate() {
        let mut fold = 0u64;
        f1[m] = cross_validated_f1(labels, config.cv_folds, fold_seed, config.f1_flavor, |train_rows, test_rows| {
            fold += 1;
            let feat = Featurizer::fit(prepared, train_rows, config.min_df, embedding_dim, config.max_seq_len)?;
            let member = fit_member(arch, &feat, prepared, labels, train_rows, classes, config, member_seeds[m] ^ fold)?;
            let xs: Vec<ModelInput> = test_rows.iter().map(|&i| member_input(arch, &feat.input(prepared, i))).collect();
            Ok(member.params.predict_batch(&xs)?.iter().map(|p| p.argmax()).collect())
        })?;
    }
    let weights: EnsembleWeights = compute_weights(f1)?;

    let all: Vec<usize> = (0..labels.len()).collect();
    let featurizer = Featurizer::fit(prepared, &all, config.min_df, embedding_dim, config.max_seq_len)?;
    let mut members = Vec::with_capacity(MEMBERS);
    let mut traces = Vec::with_capacity(MEMBERS);
    for (m, arch) in Architecture::ALL.into_iter().enumerate() {
        let fitted = fit_member(arch, &featurizer, prepared, labels, &all, classes, config, member_seeds[m])?;
        members.push(fitted.params);
        traces.push(fitted.trace);
    }
    let members: [ModelParams; MEMBERS] = members.try_into().expect("three members");
    let traces: [Vec<EpochStats>; MEMBERS] = traces.try_into().expect("three traces");
    Ok(TrainedEnsemble { featurizer, ensemble: EnsembleModel::new(members, weights)?, traces })
}
