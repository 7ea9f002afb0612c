//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use common::*;
use desc_autograd::{Tape, Tensor};
use desc_cli::artifacts::sha256_file;
use desc_cli::commands::{cmd_evaluate, cmd_train, model_ids};
use desc_cli::config::RunConfig;
use desc_core::ensemble::{compute_weights, soft_vote};
use desc_core::evaluation::{classification_metrics, roc_auc, sentiment_metrics};
use desc_core::features::{fit_tfidf, lexicon_sentiment, readability_features, transform_tfidf, ReadabilityCounts};
use desc_core::models::{Architecture, ConfidenceVector, InputSpec, ModelConfig, ModelInput, ModelParams, attention_pool};
use desc_core::resources::{SentimentLexicon, WordList};
use desc_core::text::{tokenize, Document};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn check(ok: bool, detail: String) -> Outcome {
    if ok { Ok(detail) } else { Err(detail) }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn gradient_model(arch: Architecture, rng: &mut ChaCha8Rng) -> (ModelParams, Vec<ModelInput>) {
    let config = ModelConfig { hidden_dim: 8, dense_dim: 6, dnn_widths: vec![8, 8, 6, 6, 4], ..ModelConfig::default() };
    let input = match arch {
        Architecture::Dnn => InputSpec::Dense { features: (0..5).map(|i| format!("f{i}")).collect() },
        _ => InputSpec::Sequence { embedding_dim: 3, max_len: 5 },
    };
    let mut model = ModelParams::init(arch, config, input, 2, rng.gen()).unwrap();
    for t in model.tensors.values_mut() {
        if t.shape().len() == 1 {
            t.data_mut().iter_mut().for_each(|v| *v += rng.gen_range(-0.3..0.3));
        }
    }
    let inputs = (0..3)
        .map(|_| match arch {
            Architecture::Dnn => ModelInput::Dense((0..5).map(|_| rng.gen_range(-1.0..1.0)).collect()),
            _ => {
                let len = rng.gen_range(1..=5);
                ModelInput::Sequence((0..len).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect())
            }
        })
        .collect();
    (model, inputs)
}

fn criterion_1() -> Outcome {
    const EPS: f64 = 1e-5;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    for arch in Architecture::ALL {
        for _ in 0..2 {
            let (model, inputs) = gradient_model(arch, &mut rng);
            let labels: Vec<usize> = (0..inputs.len()).map(|_| rng.gen_range(0..2)).collect();
            let (_, grads) = model.loss_and_gradients(&inputs, &labels).unwrap();
            for name in model.tensors.keys() {
                for (k, &analytic) in grads[name].iter().enumerate() {
                    let mut plus = model.clone();
                    plus.tensors.get_mut(name).unwrap().data_mut()[k] += EPS;
                    let mut minus = model.clone();
                    minus.tensors.get_mut(name).unwrap().data_mut()[k] -= EPS;
                    let numeric =
                        (plus.loss(&inputs, &labels).unwrap() - minus.loss(&inputs, &labels).unwrap()) / (2.0 * EPS);
                    let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6);
                    worst = worst.max(rel);
                    checked += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst < 1e-4 && secs < 60.0,
        format!("{checked} parameters, max relative error {worst:.2e}, {secs:.1} s"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_sum: f64 = 0.0;
    let mut masked_nonzero = 0usize;
    for _ in 0..1000 {
        let batch = rng.gen_range(1..=4);
        let steps = rng.gen_range(1..=6);
        let dim = rng.gen_range(1..=5);
        let mut valid: Vec<bool> = (0..batch * steps).map(|_| rng.gen_bool(0.6)).collect();
        for b in 0..batch {
            let t = rng.gen_range(0..steps);
            valid[b * steps + t] = true;
        }
        let mut tape = Tape::new();
        let states: Vec<_> = (0..steps)
            .map(|_| {
                let data = (0..batch * dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
                tape.constant(&Tensor::matrix(batch, dim, data).unwrap())
            })
            .collect();
        let w = tape.constant(&Tensor::matrix(dim, 1, (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap());
        let bias = tape.constant(&Tensor::vector(&[rng.gen_range(-1.0..1.0)]));
        let (a, _) = attention_pool(&mut tape, &states, &valid, w, bias).unwrap();
        let a = tape.value(a);
        for b in 0..batch {
            let row = &a[b * steps..(b + 1) * steps];
            worst_sum = worst_sum.max((row.iter().sum::<f64>() - 1.0).abs());
            for t in 0..steps {
                if !valid[b * steps + t] && row[t] != 0.0 {
                    masked_nonzero += 1;
                }
            }
        }
    }
    let mut worst_uniform: f64 = 0.0;
    for steps in 1..=8 {
        let mut tape = Tape::new();
        let h = Tensor::matrix(2, 3, (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let states: Vec<_> = (0..steps).map(|_| tape.constant(&h)).collect();
        let w = tape.constant(&Tensor::matrix(3, 1, vec![0.7, -1.1, 0.4]).unwrap());
        let bias = tape.constant(&Tensor::vector(&[0.2]));
        let (a, _) = attention_pool(&mut tape, &states, &vec![true; 2 * steps], w, bias).unwrap();
        for v in tape.value(a) {
            worst_uniform = worst_uniform.max((v - 1.0 / steps as f64).abs());
        }
    }
    check(
        worst_sum <= 1e-9 && masked_nonzero == 0 && worst_uniform <= 1e-9,
        format!("max |sum - 1| {worst_sum:.1e}, masked non-zero {masked_nonzero}, uniform deviation {worst_uniform:.1e}"),
    )
}

fn criterion_3() -> Outcome {
    let w = compute_weights([0.70, 0.70, 0.67]).unwrap().w;
    let expected = [0.33665, 0.33665, 0.32670];
    let worst = w.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let classes = rng.gen_range(2..=11);
        let members: Vec<ConfidenceVector> = (0..3)
            .map(|_| {
                let raw: Vec<f64> = (0..classes).map(|_| rng.gen_range(0.0..1.0)).collect();
                let total: f64 = raw.iter().sum();
                let mut p: Vec<f64> = raw.iter().map(|v| v / total).collect();
                let rest: f64 = p[1..].iter().sum();
                p[0] = 1.0 - rest;
                ConfidenceVector::new(p).unwrap()
            })
            .collect();
        for k in 0..3 {
            let mut one_hot = [0.0; 3];
            one_hot[k] = 1.0;
            let (class, _) = soft_vote(&one_hot, [&members[0], &members[1], &members[2]]).unwrap();
            if class != members[k].argmax() {
                mismatches += 1;
            }
        }
    }
    check(
        worst <= 1e-5 && mismatches == 0,
        format!("weights {:.5?} (max deviation {worst:.1e}), one-hot mismatches {mismatches}/3000", w),
    )
}

fn criterion_4() -> Outcome {
    let ten = ReadabilityCounts { words: 10, sentences: 1, syllables: 15, difficult: 0, complex: 0 }.scores();
    let easy = WordList::parse("the\ncat\nsat\n");
    let cat = readability_features(&tokenize("the cat sat"), &easy);
    let mut lex = SentimentLexicon::new("hand");
    lex.insert("good", 0.8, 0.0);
    lex.insert("bad", 0.0, 0.6);
    let s = lexicon_sentiment(&tokenize("good good bad"), &lex);
    let ok = close(ten[2], 69.785, 1e-9)
        && close(cat[1], 0.1488, 1e-9)
        && close(ten[3], 4.0, 1e-9)
        && close(s[0], 1.6 / 3.0, 1e-9)
        && close(s[1], 0.2, 1e-9)
        && close(s[2], 1.0 / 3.0, 1e-9);
    check(
        ok,
        format!(
            "Flesch {:.9}, Dale-Chall {:.9}, Fog {:.9}, S ({:.9}, {:.9}, {:.9})",
            ten[2], cat[1], ten[3], s[0], s[1], s[2]
        ),
    )
}

/// Dense Tf-Idf rows computed straight from the definition.
fn brute_tfidf(corpus: &[Document], probe: &Document, min_df: usize) -> Vec<f64> {
    let grams = |d: &Document| {
        let w: Vec<&str> = d.tokens.iter().map(|t| t.normalized.as_str()).collect();
        let mut g: Vec<String> = w.iter().map(|s| s.to_string()).collect();
        for i in 1..w.len() {
            g.push(format!("{} {}", w[i - 1], w[i]));
        }
        g
    };
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for d in corpus {
        let mut g = grams(d);
        g.sort();
        g.dedup();
        for t in g {
            *df.entry(t).or_insert(0) += 1;
        }
    }
    let n = corpus.len() as f64;
    let probe = grams(probe);
    let mut row: Vec<f64> = df
        .iter()
        .filter(|(_, c)| **c >= min_df)
        .map(|(t, c)| probe.iter().filter(|g| *g == t).count() as f64 * (((1.0 + n) / (1.0 + *c as f64)).ln() + 1.0))
        .collect();
    let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        row.iter_mut().for_each(|v| *v /= norm);
    }
    row
}

fn criterion_5() -> Outcome {
    let words = ["yeah", "right", "#not", "love", "mondays", "so", "fun", "rain"];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let texts: Vec<String> = (0..5)
        .map(|_| {
            let len = rng.gen_range(1..10);
            (0..len).map(|_| words[rng.gen_range(0..words.len())]).collect::<Vec<_>>().join(" ")
        })
        .collect();
    let docs: Vec<Document> = texts.iter().map(|t| tokenize(t)).collect();
    let mut worst: f64 = 0.0;
    let mut shape_ok = true;
    for min_df in [1, 2] {
        let model = fit_tfidf(&docs, min_df).unwrap();
        for d in docs.iter().chain([&tokenize("so fun yeah right")]) {
            let got = transform_tfidf(&model, d).to_dense();
            let want = brute_tfidf(&docs, d, min_df);
            shape_ok &= got.len() == want.len();
            worst = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
        }
    }
    check(shape_ok && worst < 1e-12, format!("max absolute deviation {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut auc_mismatch = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=50);
        let mut gold: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        gold[0] = true;
        gold[1] = false;
        let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..8) as f64 / 8.0).collect();
        let (mut twice_wins, mut pairs) = (0u64, 0u64);
        for i in 0..n {
            for j in 0..n {
                if gold[i] && !gold[j] {
                    pairs += 1;
                    twice_wins += if scores[i] > scores[j] { 2 } else if scores[i] == scores[j] { 1 } else { 0 };
                }
            }
        }
        let brute = twice_wins as f64 / (2 * pairs) as f64;
        if roc_auc(&gold, &scores).unwrap().auc != brute {
            auc_mismatch += 1;
        }
    }
    let gold = [1, 1, 1, 1, 0, 0, 0, 0, 0, 0];
    let pred = [1, 1, 1, 0, 1, 0, 0, 0, 0, 0];
    let m = classification_metrics(&gold, &pred).unwrap();
    let pos = m.positive.unwrap();
    let confusion_ok = m.accuracy == 0.8 && pos.precision == 0.75 && pos.recall == 0.75 && pos.f1 == 0.75;
    let s = sentiment_metrics(&[1.0, 2.0], &[2.0, 1.0]).unwrap();
    let sentiment_ok = close(s.cosine, 0.8, 1e-12) && close(s.mse, 1.0, 1e-12);
    check(
        auc_mismatch == 0 && confusion_ok && sentiment_ok,
        format!(
            "AUC mismatches {auc_mismatch}/100, Acc {} P {} R {} F1 {}, cosine {} MSE {}",
            m.accuracy, pos.precision, pos.recall, pos.f1, s.cosine, s.mse
        ),
    )
}

fn run_config(dir: &Path, seed: u64, extra: &str) -> RunConfig {
    RunConfig::load(&write(&dir.join("run.conf"), &config_text(seed, extra))).unwrap()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let rows = corpus(400, 7);
    let train = write(&dir.path().join("train.tsv"), &to_tsv(&rows[..300]));
    let test = write(&dir.path().join("test.tsv"), &to_tsv(&rows[300..]));
    let cfg = run_config(dir.path(), 7, "");
    let model = dir.path().join("model");
    cmd_train(&cfg, &train, &model, None).map_err(|e| e.to_string())?;
    let report = cmd_evaluate(&model, &test, None).map_err(|e| e.to_string())?;
    let f1 = |id: &str| report.json["models"][id]["positive_f1"].as_f64().unwrap();
    let members: Vec<f64> = model_ids()[..3].iter().map(|id| f1(id)).collect();
    let desc = f1("DESC");
    let min_member = members.iter().copied().fold(f64::INFINITY, f64::min);
    let secs = start.elapsed().as_secs_f64();
    check(
        min_member >= 0.95 && desc >= 0.95 && desc >= min_member && secs < 300.0,
        format!(
            "held-out F1 DNN {:.4} BILSTM {:.4} ATTLSTM {:.4} DESC {desc:.4}, {secs:.1} s",
            members[0], members[1], members[2]
        ),
    )
}

fn digests(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().display().to_string(), sha256_file(&p).unwrap());
            }
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let rows = corpus(120, 8);
    let train = write(&dir.path().join("train.tsv"), &to_tsv(&rows[..90]));
    let cfg = run_config(dir.path(), 8, FAST);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    cmd_train(&cfg, &train, &a, None).map_err(|e| e.to_string())?;
    cmd_train(&cfg, &train, &b, None).map_err(|e| e.to_string())?;
    let report = |m: &Path| std::fs::read(m.join("reports/weights.json")).unwrap();
    let identical = report(&a) == report(&b) && digests(&a) == digests(&b);

    let before = digests(&a);
    let mut test = to_tsv(&rows[90..]);
    cmd_evaluate(&a, &write(&dir.path().join("t1.tsv"), &test), Some(&dir.path().join("e1")))
        .map_err(|e| e.to_string())?;
    for (i, (_, _, text)) in corpus(40, 80).iter().enumerate() {
        test.push_str(&format!("extra{i}\t\t{text}\n"));
    }
    cmd_evaluate(&a, &write(&dir.path().join("t2.tsv"), &test), Some(&dir.path().join("e2")))
        .map_err(|e| e.to_string())?;
    let untouched = digests(&a) == before;
    let same_reports = std::fs::read(dir.path().join("e1/report.json")).unwrap()
        == std::fs::read(dir.path().join("e2/report.json")).unwrap();
    check(
        identical && untouched && same_reports,
        format!(
            "repeat runs identical: {identical}, artifacts unchanged by extra rows: {untouched}, reports equal: {same_reports}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut differing = 0;
    for arch in Architecture::ALL {
        let input = match arch {
            Architecture::Dnn => InputSpec::Dense { features: (0..20).map(|i| format!("f{i}")).collect() },
            _ => InputSpec::Sequence { embedding_dim: 16, max_len: 50 },
        };
        let model = ModelParams::init(arch, ModelConfig::default(), input, 2, rng.gen()).unwrap();
        let path = dir.path().join(format!("{}.json", arch.id()));
        model.save(&path).map_err(|e| e.to_string())?;
        let loaded = ModelParams::load(&path).map_err(|e| e.to_string())?;
        let inputs: Vec<ModelInput> = (0..100)
            .map(|_| match arch {
                Architecture::Dnn => ModelInput::Dense((0..20).map(|_| rng.gen_range(-3.0..3.0)).collect()),
                _ => {
                    let len = rng.gen_range(1..=60);
                    ModelInput::Sequence((0..len).map(|_| (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect())
                }
            })
            .collect();
        let before = model.predict_batch(&inputs).unwrap();
        let after = loaded.predict_batch(&inputs).unwrap();
        for (x, y) in before.iter().zip(&after) {
            let same = x.probs().iter().zip(y.probs()).all(|(p, q)| p.to_bits() == q.to_bits());
            if !same {
                differing += 1;
            }
        }
    }
    check(differing == 0, format!("{differing}/300 predictions differ after reload"))
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("gradient correctness", criterion_1),
        ("attention normalization", criterion_2),
        ("ensemble weights and vote", criterion_3),
        ("readability and sentiment formulas", criterion_4),
        ("Tf-Idf oracle", criterion_5),
        ("metric oracles", criterion_6),
        ("end-to-end learnability", criterion_7),
        ("determinism and no leakage", criterion_8),
        ("serialization round trip", criterion_9),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
