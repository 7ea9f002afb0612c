//! Shared helpers: fixture paths, a seeded synthetic irony corpus and
//! config files for the integration tests.
#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const POSITIVE: [&str; 10] =
    ["love", "great", "wonderful", "happy", "awesome", "fantastic", "perfect", "nice", "good", "brilliant"];
pub const NEGATIVE: [&str; 10] =
    ["hate", "awful", "terrible", "sad", "bad", "horrible", "worst", "boring", "ugly", "annoying"];
pub const NEUTRAL: [&str; 12] =
    ["monday", "traffic", "work", "rain", "meeting", "homework", "dentist", "queue", "weekend", "coffee", "today", "day"];
pub const FILLER: [&str; 6] = ["the", "a", "is", "this", "so", "my"];
pub const MARKER: &str = "#not";

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// One tweet. Ironic texts carry the marker and positive words; literal
/// texts carry negative words and never the marker. Every text has at
/// least one sentiment word.
pub fn tweet(rng: &mut ChaCha8Rng, ironic: bool) -> String {
    let lexicon: &[&str] = if ironic { &POSITIVE } else { &NEGATIVE };
    let mut words: Vec<&str> = vec![lexicon[rng.gen_range(0..lexicon.len())]];
    let len = rng.gen_range(2..=5);
    for _ in 0..len {
        let pick = rng.gen_range(0..10);
        words.push(match pick {
            0..=3 => NEUTRAL[rng.gen_range(0..NEUTRAL.len())],
            4..=5 => FILLER[rng.gen_range(0..FILLER.len())],
            _ => lexicon[rng.gen_range(0..lexicon.len())],
        });
    }
    words.shuffle(rng);
    if ironic {
        let at = rng.gen_range(0..=words.len());
        words.insert(at, MARKER);
    }
    let mut text = words.join(" ");
    if rng.gen_bool(0.3) {
        text.push('!');
    }
    text
}

/// Balanced `(id, label, text)` rows, shuffled.
pub fn corpus(n: usize, seed: u64) -> Vec<(String, usize, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<(String, usize, String)> =
        (0..n).map(|i| (format!("t{i:04}"), i % 2, tweet(&mut rng, i % 2 == 1))).collect();
    rows.shuffle(&mut rng);
    rows
}

pub fn to_tsv(rows: &[(String, usize, String)]) -> String {
    let mut out = String::from("#id\tlabel\ttext\n");
    for (id, label, text) in rows {
        let _ = writeln!(out, "{id}\t{label}\t{text}");
    }
    out
}

/// Config text pointing at the shipped fixtures.
pub fn config_text(seed: u64, extra: &str) -> String {
    let f = fixtures();
    let p = |name: &str| f.join(name).display().to_string();
    format!(
        "task = binary\nseed = {seed}\nsentiwordnet = {}\nvader = {}\nafinn = {}\ndepechemood = {}\ndale_chall = {}\npos_lexicon = {}\nembeddings = {}\n{extra}",
        p("sentiwordnet.tsv"),
        p("vader.tsv"),
        p("afinn.tsv"),
        p("depechemood.tsv"),
        p("dale_chall.txt"),
        p("pos.tsv"),
        p("embeddings.txt"),
    )
}

/// Settings sized for test runtime.
pub const FAST: &str = "epochs = 12\nhidden_dim = 16\ndense_dim = 32\ndnn_widths = 64, 32, 32, 16, 16\nlearning_rate = 0.005\npatience = 4\ncv_folds = 5\nmin_df = 2\n";

pub fn write(path: &Path, text: &str) -> PathBuf {
    std::fs::write(path, text).unwrap();
    path.to_path_buf()
}
