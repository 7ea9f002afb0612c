//! The five subcommands. Each returns what it wrote so callers and tests can
//! inspect results without re-reading files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use desc_core::ensemble::{EnsemblePrediction, MEMBERS};
use desc_core::evaluation::{classification_metrics, profile_from_vectors, roc_auc, sentiment_metrics, RocCurve};
use desc_core::features::{extract_features, FEATURE_NAMES};
use desc_core::models::Architecture;
use desc_core::text::tokenize;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::artifacts::{commit_bundle, load_model_dir, write_file, Bundle, LoadedModel, Manifest};
use crate::config::{Decode, RunConfig, Task};
use crate::dataset::{ingest, read_rows, LabelMap};
use crate::error::{CliError, Result};
use crate::pipeline::{train_ensemble, Prepared, Resources};

pub const ENSEMBLE_ID: &str = "DESC";

/// Member ids in manifest order followed by the ensemble.
pub fn model_ids() -> [&'static str; MEMBERS + 1] {
    [Architecture::Dnn.id(), Architecture::BiLstm.id(), Architecture::AttLstm.id(), ENSEMBLE_ID]
}

pub struct TrainSummary {
    pub model_dir: PathBuf,
    pub manifest: Manifest,
    pub weights_report: String,
}

#[derive(Serialize)]
struct WeightRow {
    architecture: &'static str,
    cv_f1: f64,
    weight: f64,
}

fn weights_reports(manifest_weights: &desc_core::ensemble::EnsembleWeights, config: &RunConfig) -> (String, String) {
    let rows: Vec<WeightRow> = Architecture::ALL
        .iter()
        .enumerate()
        .map(|(i, a)| WeightRow { architecture: a.id(), cv_f1: manifest_weights.source_f1[i], weight: manifest_weights.w[i] })
        .collect();
    let json = serde_json::to_string_pretty(&json!({
        "f1_flavor": config.f1_flavor,
        "cv_folds": config.cv_folds,
        "members": rows,
    }))
    .expect("plain values serialize")
        + "\n";
    let mut text = format!("{:<10} {:>10} {:>10}\n", "model", "cv_f1", "weight");
    for r in &rows {
        let _ = writeln!(text, "{:<10} {:>10.6} {:>10.6}", r.architecture, r.cv_f1, r.weight);
    }
    (json, text)
}

/// Fits the featurizer and the three members on `input`, estimates member
/// F1 by stratified cross-validation, and writes the model directory.
pub fn cmd_train(config: &RunConfig, input: &Path, model_dir: &Path, seed_override: Option<u64>) -> Result<TrainSummary> {
    config.validate()?;
    let seed = config.seed(seed_override)?;
    let corpus = ingest(input, config.task, None, config.class_names.as_deref())?;
    if let Some(s) = corpus.samples.iter().find(|s| s.label.is_none()) {
        return Err(CliError::UnparseableLabel { path: input.to_path_buf(), line: 0, label: format!("<empty> for id {}", s.id) });
    }
    let resources = Resources::load(&config.resources)?;
    let labels: Vec<usize> = corpus.samples.iter().filter_map(|s| s.label).collect();
    let prepared = Prepared::new(corpus.samples.iter().map(|s| &s.doc).collect(), &resources)?;
    let trained = train_ensemble(&prepared, &labels, corpus.labels.classes(), config, seed)?;

    let (weights_json, weights_txt) = weights_reports(&trained.ensemble.weights, config);
    let traces: Vec<Value> = Architecture::ALL
        .iter()
        .zip(&trained.traces)
        .map(|(a, t)| json!({ "architecture": a.id(), "epochs": t }))
        .collect();
    let training_json = serde_json::to_string_pretty(&json!({ "members": traces }))? + "\n";
    let bundle = Bundle {
        task: config.task,
        labels: &corpus.labels,
        decode: config.decode,
        f1_flavor: config.f1_flavor,
        cv_folds: config.cv_folds,
        featurizer: &trained.featurizer,
        ensemble: &trained.ensemble,
        resources: &config.resources,
        reports: vec![
            ("weights.json".into(), weights_json),
            ("weights.txt".into(), weights_txt.clone()),
            ("training.json".into(), training_json),
        ],
    };
    let manifest = commit_bundle(model_dir, &bundle)?;
    Ok(TrainSummary { model_dir: model_dir.to_path_buf(), manifest, weights_report: weights_txt })
}

fn predict_rows(model: &LoadedModel, docs: Vec<&desc_core::text::Document>) -> Result<Vec<EnsemblePrediction>> {
    let resources = Resources::load(&model.resources)?;
    let prepared = Prepared::new(docs, &resources)?;
    let inputs: Vec<_> = (0..prepared.docs.len()).map(|i| model.featurizer.input(&prepared, i)).collect();
    Ok(model.ensemble.predict(&inputs)?)
}

/// Score implied by an 11-class distribution.
pub fn decode_score(probs: &[f64], decode: Decode) -> f64 {
    match decode {
        Decode::Argmax => desc_core::models::argmax(probs) as f64 - 5.0,
        Decode::Expectation => probs.iter().enumerate().map(|(c, p)| p * (c as f64 - 5.0)).sum(),
    }
}

pub struct EvalReport {
    pub out_dir: PathBuf,
    pub json: Value,
    pub text: String,
    pub roc: Vec<(String, RocCurve)>,
}

/// Per-model and ensemble metrics on the labeled rows of `input`.
pub fn cmd_evaluate(model_dir: &Path, input: &Path, out: Option<&Path>) -> Result<EvalReport> {
    let model = load_model_dir(model_dir)?;
    let task = model.manifest.task;
    let corpus = ingest(input, task, Some(&model.manifest.labels), None)?;
    let labeled: Vec<_> = corpus.labeled().collect();
    if labeled.is_empty() {
        return Err(CliError::Core(desc_core::CoreError::EmptyInput));
    }
    let gold: Vec<usize> = labeled.iter().filter_map(|s| s.label).collect();
    let preds = predict_rows(&model, labeled.iter().map(|s| &s.doc).collect())?;
    let probs_of = |k: usize, p: &EnsemblePrediction| -> Vec<f64> {
        if k < MEMBERS { p.members[k].probs().to_vec() } else { p.combined.clone() }
    };

    let mut models = Map::new();
    let mut roc = Vec::new();
    let mut text = String::new();
    match task {
        Task::Binary => {
            let _ = writeln!(
                text,
                "{:<8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
                "model", "acc", "macro_p", "macro_r", "macro_f1", "pos_p", "pos_r", "pos_f1", "auc"
            );
            for (k, id) in model_ids().into_iter().enumerate() {
                let probs: Vec<Vec<f64>> = preds.iter().map(|p| probs_of(k, p)).collect();
                let predicted: Vec<usize> = if k < MEMBERS {
                    preds.iter().map(|p| p.members[k].argmax()).collect()
                } else {
                    preds.iter().map(|p| p.class).collect()
                };
                let m = classification_metrics(&gold, &predicted)?;
                let pos = m.positive.map(|p| (p.precision, p.recall, p.f1)).unwrap_or((0.0, 0.0, 0.0));
                let is_pos: Vec<bool> = gold.iter().map(|&g| g == 1).collect();
                let scores: Vec<f64> = probs.iter().map(|p| p[1]).collect();
                let curve = roc_auc(&is_pos, &scores).ok();
                let auc = curve.as_ref().map(|c| c.auc);
                models.insert(
                    id.into(),
                    json!({
                        "accuracy": m.accuracy,
                        "macro_precision": m.macro_precision,
                        "macro_recall": m.macro_recall,
                        "macro_f1": m.macro_f1,
                        "positive_precision": pos.0,
                        "positive_recall": pos.1,
                        "positive_f1": pos.2,
                        "auc": auc,
                    }),
                );
                let auc_txt = auc.map_or("n/a".to_string(), |a| format!("{a:.4}"));
                let _ = writeln!(
                    text,
                    "{:<8} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8}",
                    id, m.accuracy, m.macro_precision, m.macro_recall, m.macro_f1, pos.0, pos.1, pos.2, auc_txt
                );
                if let Some(c) = curve {
                    roc.push((id.to_string(), c));
                }
            }
        }
        Task::Sentiment11 => {
            let gold_scores: Vec<f64> = gold.iter().map(|&g| g as f64 - 5.0).collect();
            let _ = writeln!(text, "{:<8} {:>8} {:>8}", "model", "cosine", "mse");
            for (k, id) in model_ids().into_iter().enumerate() {
                let predicted: Vec<f64> =
                    preds.iter().map(|p| decode_score(&probs_of(k, p), model.manifest.decode)).collect();
                let m = sentiment_metrics(&gold_scores, &predicted)?;
                models.insert(id.into(), json!({ "cosine": m.cosine, "mse": m.mse }));
                let _ = writeln!(text, "{:<8} {:>8.4} {:>8.4}", id, m.cosine, m.mse);
            }
        }
    }
    let report = json!({ "task": task, "samples": gold.len(), "models": models });
    let out_dir = out.map(Path::to_path_buf).unwrap_or_else(|| model_dir.join("eval"));
    write_file(&out_dir.join("report.json"), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    write_file(&out_dir.join("report.txt"), &text)?;
    for (id, curve) in &roc {
        let mut csv = String::from("fpr,tpr\n");
        for (f, t) in &curve.points {
            let _ = writeln!(csv, "{f},{t}");
        }
        write_file(&out_dir.join(format!("roc_{}.csv", id.to_lowercase())), &csv)?;
    }
    Ok(EvalReport { out_dir, json: report, text, roc })
}

fn score_label(score: f64, decode: Decode) -> String {
    match decode {
        Decode::Argmax if score > 0.0 => format!("+{score}"),
        _ => format!("{score}"),
    }
}

/// Tab-separated predictions with the combined class probabilities, one row
/// per input row in input order. Labels in the input are ignored.
pub fn cmd_predict(model_dir: &Path, input: &Path) -> Result<String> {
    let model = load_model_dir(model_dir)?;
    let rows = read_rows(input)?;
    let docs: Vec<_> = rows.iter().map(|r| tokenize(&r.text)).collect();
    let labels: &LabelMap = &model.manifest.labels;
    let mut out = String::from("id\tprediction");
    for name in &labels.0 {
        let _ = write!(out, "\tp_{name}");
    }
    out.push('\n');
    if rows.is_empty() {
        return Ok(out);
    }
    let preds = predict_rows(&model, docs.iter().collect())?;
    for (row, p) in rows.iter().zip(&preds) {
        let prediction = match model.manifest.task {
            Task::Binary => labels.name(p.class).to_string(),
            Task::Sentiment11 => score_label(decode_score(&p.combined, model.manifest.decode), model.manifest.decode),
        };
        let _ = write!(out, "{}\t{}", row.id, prediction);
        for v in &p.combined {
            let _ = write!(out, "\t{v}");
        }
        out.push('\n');
    }
    Ok(out)
}

/// CSV of the 44 engineered features, one line per input row.
pub fn cmd_extract_features(config: &RunConfig, input: &Path) -> Result<String> {
    let resources = Resources::load(&config.resources)?;
    let rows = read_rows(input)?;
    let mut out = FEATURE_NAMES.join(",");
    out.push('\n');
    for r in &rows {
        let v = extract_features(&tokenize(&r.text), &resources.lexicons).values;
        out.push_str(&v.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Per-class means of the 44 engineered features as CSV, one line per class.
pub fn cmd_profile(config: &RunConfig, input: &Path) -> Result<String> {
    let resources = Resources::load(&config.resources)?;
    let corpus = ingest(input, config.task, None, config.class_names.as_deref())?;
    let labeled: Vec<_> = corpus.labeled().collect();
    let labels: Vec<usize> = labeled.iter().filter_map(|s| s.label).collect();
    let vectors: Vec<Vec<f64>> = labeled.iter().map(|s| extract_features(&s.doc, &resources.lexicons).values).collect();
    let profile = profile_from_vectors(&labels, &vectors, corpus.labels.classes())?;
    let mut out = format!("class,count,{}\n", FEATURE_NAMES.join(","));
    for (c, means) in profile.means.iter().enumerate() {
        let values: Vec<String> = means.iter().map(f64::to_string).collect();
        let _ = writeln!(out, "{},{},{}", corpus.labels.name(c), profile.counts[c], values.join(","));
    }
    Ok(out)
}
