mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use common::*;
use desc_cli::artifacts::{load_model_dir, sha256_file, MANIFEST_FILE};
use desc_cli::commands::{cmd_evaluate, cmd_extract_features, cmd_predict, cmd_profile, cmd_train, model_ids};
use desc_cli::config::{RunConfig, Task};
use desc_cli::dataset::{ingest, LabelMap};
use desc_cli::CliError;
use desc_core::features::FEATURE_NAMES;

fn config(dir: &Path, seed: u64, extra: &str) -> RunConfig {
    RunConfig::load(&write(&dir.join("run.conf"), &config_text(seed, extra))).unwrap()
}

/// sha256 of every file under `dir`, keyed by relative path.
fn digests(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                out.insert(rel, sha256_file(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn ingest_maps_labels_and_rejects_bad_rows() {
    let dir = tempfile::tempdir().unwrap();
    let names = vec!["literal".to_string(), "ironic".to_string()];
    let bin = write(&dir.path().join("b.tsv"), "#id\tlabel\ttext\n1\tironic\tyeah right\n2\tliteral\tok then\n");
    let c = ingest(&bin, Task::Binary, None, Some(&names)).unwrap();
    assert_eq!(c.samples[0].label, Some(1));
    assert_eq!(c.samples[0].doc.tokens.len(), 2);

    let sent = write(&dir.path().join("s.tsv"), "2\t+3\tlovely day\n3\t-5\tawful\n");
    let c = ingest(&sent, Task::Sentiment11, None, None).unwrap();
    assert_eq!(c.samples[0].label, Some(8));
    assert_eq!(c.labels.name(8), "+3");
    assert_eq!(c.samples[1].label, Some(0));

    let out_of_range = write(&dir.path().join("r.tsv"), "1\t0\tfine\n2\t7\ttoo much\n");
    assert!(matches!(
        ingest(&out_of_range, Task::Sentiment11, None, None),
        Err(CliError::UnparseableLabel { line: 2, .. })
    ));
    let dup = write(&dir.path().join("d.tsv"), "1\t0\ta\n1\t1\tb\n");
    assert!(matches!(ingest(&dup, Task::Binary, None, None), Err(CliError::DuplicateId { line: 2, .. })));
    let short = write(&dir.path().join("m.tsv"), "1\t0\ta\n2 1 b\n");
    assert!(matches!(ingest(&short, Task::Binary, None, None), Err(CliError::MalformedRow { line: 2, .. })));
}

#[test]
fn train_is_deterministic_and_separable() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(&dir.path().join("train.tsv"), &to_tsv(&corpus(160, 3)));
    let cfg = config(dir.path(), 11, FAST);
    let a = cmd_train(&cfg, &data, &dir.path().join("a"), None).unwrap();
    let b = cmd_train(&cfg, &data, &dir.path().join("b"), None).unwrap();
    assert_eq!(a.weights_report, b.weights_report);

    assert_eq!(a.manifest.members.len(), 3);
    let read = |m: &str, f: &str| std::fs::read(dir.path().join(m).join("reports").join(f)).unwrap();
    assert_eq!(read("a", "weights.json"), read("b", "weights.json"));
    assert_eq!(read("a", "weights.txt"), read("b", "weights.txt"));
    assert_eq!(digests(&dir.path().join("a")), digests(&dir.path().join("b")));
    for f1 in a.manifest.weights.source_f1 {
        assert!(f1 >= 0.95, "cv f1 {f1}");
    }
    let w: f64 = a.manifest.weights.w.iter().sum();
    assert!((w - 1.0).abs() < 1e-12);

    let c = cmd_train(&cfg, &data, &dir.path().join("c"), Some(12)).unwrap();
    assert_ne!(digests(&dir.path().join("a")), digests(&dir.path().join("c")));
    assert_eq!(c.manifest.members.len(), 3);
}

#[test]
fn memorizable_set_scores_perfectly_on_itself() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(&dir.path().join("toy.tsv"), &to_tsv(&corpus(10, 4)));
    let extra = "epochs = 60\nhidden_dim = 8\ndense_dim = 16\ndnn_widths = 32, 16, 16, 8, 8\nlearning_rate = 0.01\npatience = 0\ncv_folds = 2\nmin_df = 1\nvalidation_fraction = 0\n";
    let cfg = config(dir.path(), 2, extra);
    let model = dir.path().join("model");
    cmd_train(&cfg, &data, &model, None).unwrap();
    let report = cmd_evaluate(&model, &data, None).unwrap();
    for id in model_ids() {
        assert_eq!(report.json["models"][id]["accuracy"], 1.0, "{id}\n{}", report.text);
    }
    assert!(model.join("eval/report.json").is_file());
    assert!(model.join("eval/report.txt").is_file());
    let roc = std::fs::read_to_string(model.join("eval/roc_desc.csv")).unwrap();
    assert!(roc.starts_with("fpr,tpr\n0,0\n"));
    assert!(roc.trim_end().ends_with("1,1"));
}

#[test]
fn sentiment_report_has_cosine_and_mse_only() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for i in 0..24 {
        let (score, body) = if i % 2 == 0 { ("+3", "love great day") } else { ("-2", "hate awful queue") };
        text.push_str(&format!("s{i}\t{score}\t{body}\n"));
    }
    let data = write(&dir.path().join("s.tsv"), &text);
    let extra = format!("task = sentiment11\n{}", FAST.replace("cv_folds = 5", "cv_folds = 2"));
    let cfg = RunConfig::load(&write(&dir.path().join("run.conf"), &config_text(1, "").replace("task = binary\n", &extra)))
        .unwrap();
    let model = dir.path().join("model");
    let summary = cmd_train(&cfg, &data, &model, None).unwrap();
    assert_eq!(summary.manifest.labels, LabelMap::sentiment());
    let report = cmd_evaluate(&model, &data, Some(&dir.path().join("eval"))).unwrap();
    for id in model_ids() {
        let keys: Vec<&String> = report.json["models"][id].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["cosine", "mse"]);
    }
    assert!(report.roc.is_empty());
    assert!(!dir.path().join("eval/roc_desc.csv").exists());
    let predictions = cmd_predict(&model, &data).unwrap();
    let header = predictions.lines().next().unwrap();
    assert!(header.starts_with("id\tprediction\tp_-5\tp_-4"));
    assert!(header.ends_with("p_+5"));
}

#[test]
fn damaged_model_dirs_fail_closed() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(&dir.path().join("toy.tsv"), &to_tsv(&corpus(20, 5)));
    let extra = FAST.replace("epochs = 12", "epochs = 2").replace("cv_folds = 5", "cv_folds = 2");
    let cfg = config(dir.path(), 3, &extra);
    let model = dir.path().join("model");
    cmd_train(&cfg, &data, &model, None).unwrap();
    load_model_dir(&model).unwrap();

    let copy = |name: &str| {
        let to = dir.path().join(name);
        for (rel, _) in digests(&model) {
            let dst = to.join(&rel);
            std::fs::create_dir_all(dst.parent().unwrap()).unwrap();
            std::fs::copy(model.join(&rel), dst).unwrap();
        }
        to
    };

    let tampered = copy("tampered");
    let member = tampered.join("models/dnn.json");
    let text = std::fs::read_to_string(&member).unwrap();
    std::fs::write(&member, text.replacen("0.", "1.", 1)).unwrap();
    assert!(matches!(load_model_dir(&tampered), Err(CliError::VersionMismatch { .. })));
    assert!(matches!(cmd_evaluate(&tampered, &data, None), Err(CliError::VersionMismatch { .. })));

    let digest = copy("digest");
    let manifest = digest.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&manifest).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    json["featurizer"]["sha256"] = serde_json::Value::String("0".repeat(64));
    std::fs::write(&manifest, json.to_string()).unwrap();
    assert!(matches!(load_model_dir(&digest), Err(CliError::VersionMismatch { .. })));

    let version = copy("version");
    let manifest = version.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&manifest).unwrap();
    std::fs::write(&manifest, text.replacen("\"version\": 1", "\"version\": 99", 1)).unwrap();
    assert!(matches!(load_model_dir(&version), Err(CliError::VersionMismatch { .. })));

    let missing = copy("missing");
    std::fs::remove_file(missing.join("resources/vader.tsv")).unwrap();
    assert!(matches!(load_model_dir(&missing), Err(CliError::MissingArtifact(p)) if p.ends_with("vader.tsv")));
    assert!(matches!(
        cmd_predict(&dir.path().join("nowhere"), &data),
        Err(CliError::MissingArtifact(p)) if p.ends_with(MANIFEST_FILE)
    ));
}

#[test]
fn failed_training_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(&dir.path().join("toy.tsv"), "1\t0\tgood day\n2\t1\tbad day\n3\t0\tnice\n");
    let cfg = config(dir.path(), 3, FAST);
    let model = dir.path().join("model");
    assert!(cmd_train(&cfg, &data, &model, None).is_err());
    assert!(!model.exists());
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains("staging"))
        .collect();
    assert!(leftovers.is_empty());

    let unlabeled = write(&dir.path().join("u.tsv"), &(to_tsv(&corpus(20, 1)) + "x1\t\tno label here\n"));
    assert!(cmd_train(&cfg, &unlabeled, &model, None).is_err());
    assert!(!model.exists());
}

#[test]
fn evaluate_ignores_unlabeled_rows_and_never_touches_training_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let rows = corpus(60, 6);
    let train = write(&dir.path().join("train.tsv"), &to_tsv(&rows[..40]));
    let test = write(&dir.path().join("test.tsv"), &to_tsv(&rows[40..]));
    let extra = FAST.replace("cv_folds = 5", "cv_folds = 3");
    let cfg = config(dir.path(), 8, &extra);
    let model = dir.path().join("model");
    cmd_train(&cfg, &train, &model, None).unwrap();
    let before = digests(&model);

    let plain = cmd_evaluate(&model, &test, Some(&dir.path().join("e1"))).unwrap();
    let mut extended = to_tsv(&rows[40..]);
    for (i, (_, _, text)) in corpus(30, 99).iter().enumerate() {
        extended.push_str(&format!("u{i}\t\t{text}\n"));
    }
    let test2 = write(&dir.path().join("test2.tsv"), &extended);
    let with_unlabeled = cmd_evaluate(&model, &test2, Some(&dir.path().join("e2"))).unwrap();
    assert_eq!(plain.json, with_unlabeled.json);
    assert_eq!(before, digests(&model));
}

#[test]
fn predict_output_follows_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let rows = corpus(40, 7);
    let data = write(&dir.path().join("d.tsv"), &to_tsv(&rows));
    let extra = FAST.replace("epochs = 12", "epochs = 3").replace("cv_folds = 5", "cv_folds = 2");
    let cfg = config(dir.path(), 4, &extra);
    let model = dir.path().join("model");
    cmd_train(&cfg, &data, &model, None).unwrap();

    let empty = write(&dir.path().join("empty.tsv"), "");
    assert_eq!(cmd_predict(&model, &empty).unwrap(), "id\tprediction\tp_0\tp_1\n");
    let header_only = write(&dir.path().join("h.tsv"), "#id\tlabel\ttext\n");
    assert_eq!(cmd_predict(&model, &header_only).unwrap(), "id\tprediction\tp_0\tp_1\n");

    let out = cmd_predict(&model, &data).unwrap();
    let lines: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(lines.len(), rows.len());
    for (line, (id, _, _)) in lines.iter().zip(&rows) {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols[0], id);
        let p: Vec<f64> = cols[2..].iter().map(|v| v.parse().unwrap()).collect();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let expected = if p[1] > p[0] { "1" } else { "0" };
        assert_eq!(cols[1], expected);
    }
}

#[test]
fn profile_is_the_per_class_mean_of_extracted_features() {
    let dir = tempfile::tempdir().unwrap();
    let rows = corpus(12, 8);
    let data = write(&dir.path().join("d.tsv"), &to_tsv(&rows));
    let cfg = config(dir.path(), 1, "");
    let features = cmd_extract_features(&cfg, &data).unwrap();
    let mut lines = features.lines();
    assert_eq!(lines.next().unwrap(), FEATURE_NAMES.join(","));
    let vectors: Vec<Vec<f64>> =
        lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(vectors.len(), rows.len());

    let profile = cmd_profile(&cfg, &data).unwrap();
    let mut lines = profile.lines();
    assert_eq!(lines.next().unwrap(), format!("class,count,{}", FEATURE_NAMES.join(",")));
    for (class, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0], class.to_string());
        let members: Vec<&Vec<f64>> =
            vectors.iter().zip(&rows).filter(|(_, r)| r.1 == class).map(|(v, _)| v).collect();
        assert_eq!(cols[1], members.len().to_string());
        for (k, col) in cols[2..].iter().enumerate() {
            let mean = members.iter().map(|v| v[k]).sum::<f64>() / members.len() as f64;
            let got: f64 = col.parse().unwrap();
            assert!((got - mean).abs() <= 1e-12 * mean.abs().max(1.0), "class {class} feature {k}");
        }
    }
}

#[test]
fn binary_runs_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let rows = corpus(30, 9);
    let data = write(&dir.path().join("d.tsv"), &to_tsv(&rows));
    let extra = FAST.replace("epochs = 12", "epochs = 2").replace("cv_folds = 5", "cv_folds = 2");
    let cfg = write(&dir.path().join("run.conf"), &config_text(5, &extra));
    let model = dir.path().join("model");
    let desc = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_desc")).args(args).output().unwrap();
        (out.status.success(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
    };
    let s = |p: &Path| p.display().to_string();

    let (ok, stdout, stderr) =
        desc(&["train", "--config", &s(&cfg), "--input", &s(&data), "--model-dir", &s(&model)]);
    assert!(ok, "{stderr}");
    assert!(stdout.starts_with("model"));
    let (ok, stdout, _) = desc(&["evaluate", "--model-dir", &s(&model), "--input", &s(&data)]);
    assert!(ok);
    assert!(stdout.contains("DESC"));
    let out = dir.path().join("out");
    let (ok, _, _) = desc(&["predict", "--model-dir", &s(&model), "--input", &s(&data), "--out", &s(&out)]);
    assert!(ok);
    assert_eq!(std::fs::read_to_string(out.join("predictions.tsv")).unwrap().lines().count(), rows.len() + 1);
    let (ok, stdout, _) = desc(&["extract-features", "--config", &s(&cfg), "--input", &s(&data)]);
    assert!(ok);
    assert_eq!(stdout.lines().next().unwrap(), FEATURE_NAMES.join(","));
    let (ok, stdout, _) = desc(&["profile", "--config", &s(&cfg), "--input", &s(&data)]);
    assert!(ok);
    assert_eq!(stdout.lines().count(), 3);

    let (ok, _, stderr) = desc(&["predict", "--model-dir", &s(&dir.path().join("none")), "--input", &s(&data)]);
    assert!(!ok);
    assert!(stderr.starts_with("error:"));
    let bad = write(&dir.path().join("bad.conf"), &config_text(5, "colour = blue\n"));
    let (ok, _, stderr) = desc(&["profile", "--config", &s(&bad), "--input", &s(&data)]);
    assert!(!ok);
    assert!(stderr.contains("colour"), "{stderr}");
}
