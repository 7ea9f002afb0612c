//! The 44 engineered features and the Tf-Idf text representation.
//!
//! Feature order is fixed: 12 syntactic (POS frequencies), 8 demonstrative,
//! 12 sentiment (positive, negative and contrast for each of four lexicons),
//! 8 mood, 4 readability. [`FEATURE_NAMES`] is the canonical header.

mod tfidf;

use serde::{Deserialize, Serialize};

use crate::resources::{LexiconSet, MoodLexicon, PosLexicon, PosTag, SentimentLexicon, WordList};
use crate::text::{count_syllables, is_complex, is_polysyllabic, Document, TokenKind};

pub use tfidf::{fit_tfidf, ngrams, transform_tfidf, SparseVector, TfidfModel};

pub const N_FEATURES: usize = 44;

pub const FEATURE_NAMES: [&str; N_FEATURES] = [
    "pos_noun",
    "pos_verb",
    "pos_adj",
    "pos_adv",
    "pos_pron",
    "pos_det",
    "pos_adp",
    "pos_conj",
    "pos_num",
    "pos_intj",
    "pos_punct",
    "pos_other",
    "word_count",
    "emoji_count",
    "avg_word_length",
    "punctuation_freq",
    "exclamation_question_count",
    "elongated_count",
    "polysyllabic_freq",
    "all_caps_count",
    "sentiwordnet_pos",
    "sentiwordnet_neg",
    "sentiwordnet_contrast",
    "vader_pos",
    "vader_neg",
    "vader_contrast",
    "afinn_pos",
    "afinn_neg",
    "afinn_contrast",
    "depechemood_pos",
    "depechemood_neg",
    "depechemood_contrast",
    "mood_happiness",
    "mood_sadness",
    "mood_annoyance",
    "mood_inspiration",
    "mood_fear",
    "mood_indifference",
    "mood_anger",
    "mood_amusement",
    "difficult_words",
    "dale_chall",
    "flesch",
    "gunning_fog",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn names() -> &'static [&'static str; N_FEATURES] {
        &FEATURE_NAMES
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES.iter().position(|n| *n == name).map(|i| self.values[i])
    }
}

/// Full 44-dimensional vector for one document.
pub fn extract_features(doc: &Document, resources: &LexiconSet) -> FeatureVector {
    let mut values = Vec::with_capacity(N_FEATURES);
    values.extend(syntactic_features(doc, &resources.pos));
    values.extend(demonstrative_features(doc));
    values.extend(sentiment_features(doc, resources.sentiment_lexicons()));
    values.extend(mood_features(doc, &resources.mood));
    values.extend(readability_features(doc, &resources.easy_words));
    debug_assert_eq!(values.len(), N_FEATURES);
    FeatureVector { values }
}

/// Relative frequency of each coarse tag over word and punctuation tokens.
pub fn syntactic_features(doc: &Document, pos: &PosLexicon) -> [f64; 12] {
    let mut counts = [0usize; 12];
    let mut total = 0;
    for token in &doc.tokens {
        let tag = match token.kind {
            TokenKind::Punctuation => PosTag::Punct,
            TokenKind::Word => pos.tag_word(&token.normalized),
            _ => continue,
        };
        counts[tag.index()] += 1;
        total += 1;
    }
    if total == 0 {
        return [0.0; 12];
    }
    counts.map(|c| c as f64 / total as f64)
}

/// Word count, emoji count, mean word length, punctuation frequency,
/// `!`/`?` count, elongated words, polysyllabic-word frequency, all-caps words.
pub fn demonstrative_features(doc: &Document) -> [f64; 8] {
    let words: Vec<_> = doc.word_tokens().collect();
    let n_words = words.len() as f64;
    let emoji = doc.tokens.iter().filter(|t| t.kind == TokenKind::Emoji).count() as f64;
    let punct: Vec<_> = doc.tokens.iter().filter(|t| t.is_punctuation()).collect();
    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };
    let total_chars: usize = words.iter().map(|t| t.surface.chars().count()).sum();
    let exclaim = punct
        .iter()
        .flat_map(|t| t.surface.chars())
        .filter(|c| matches!(c, '!' | '?'))
        .count() as f64;
    let elongated = words.iter().filter(|t| t.is_elongated).count() as f64;
    let poly = words.iter().filter(|t| is_polysyllabic(&t.surface)).count() as f64;
    let caps = words.iter().filter(|t| t.is_all_caps).count() as f64;
    [
        n_words,
        emoji,
        ratio(total_chars as f64, n_words),
        ratio(punct.len() as f64, doc.tokens.len() as f64),
        exclaim,
        elongated,
        ratio(poly, n_words),
        caps,
    ]
}

/// Mean positive score, mean negative score and their difference, averaged
/// over the word tokens, for one lexicon.
pub fn lexicon_sentiment(doc: &Document, lexicon: &SentimentLexicon) -> [f64; 3] {
    let mut n = 0usize;
    let (mut pos, mut neg) = (0.0, 0.0);
    for t in doc.word_tokens() {
        let (p, q) = lexicon.lookup(&t.normalized);
        pos += p;
        neg += q;
        n += 1;
    }
    if n == 0 {
        return [0.0; 3];
    }
    let (pos, neg) = (pos / n as f64, neg / n as f64);
    [pos, neg, pos - neg]
}

pub fn sentiment_features(doc: &Document, lexicons: [&SentimentLexicon; 4]) -> [f64; 12] {
    let mut out = [0.0; 12];
    for (i, lex) in lexicons.iter().enumerate() {
        out[i * 3..i * 3 + 3].copy_from_slice(&lexicon_sentiment(doc, lex));
    }
    out
}

/// Per-dimension mean mood over word tokens; absent words count as zeros.
pub fn mood_features(doc: &Document, mood: &MoodLexicon) -> [f64; 8] {
    let mut sum = [0.0; 8];
    let mut n = 0usize;
    for t in doc.word_tokens() {
        for (s, v) in sum.iter_mut().zip(mood.lookup(&t.normalized)) {
            *s += v;
        }
        n += 1;
    }
    if n == 0 {
        return [0.0; 8];
    }
    sum.map(|s| s / n as f64)
}

/// Raw counts behind the readability scores.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReadabilityCounts {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    pub difficult: usize,
    pub complex: usize,
}

impl ReadabilityCounts {
    pub fn from_document(doc: &Document, easy_words: &WordList) -> Self {
        let mut counts = Self {
            sentences: doc.sentences.len(),
            ..Self::default()
        };
        for range in &doc.sentences {
            let mut first_word = true;
            for t in doc.tokens[range.clone()].iter().filter(|t| t.is_word()) {
                counts.words += 1;
                counts.syllables += count_syllables(&t.surface);
                if !easy_words.contains(&t.normalized) {
                    counts.difficult += 1;
                }
                if is_complex(&t.surface, first_word) {
                    counts.complex += 1;
                }
                first_word = false;
            }
        }
        counts
    }

    /// Difficult-word count, Dale-Chall, Flesch reading ease, Gunning Fog.
    /// All four are 0 when there are no words or no sentences.
    pub fn scores(&self) -> [f64; 4] {
        if self.words == 0 || self.sentences == 0 {
            return [0.0; 4];
        }
        let words = self.words as f64;
        let words_per_sentence = words / self.sentences as f64;
        let dale_chall = 0.1579 * (self.difficult as f64 / words * 100.0) + 0.0496 * words_per_sentence;
        let flesch = 206.835 - 1.015 * words_per_sentence - 84.6 * (self.syllables as f64 / words);
        let fog = 0.4 * (words_per_sentence + 100.0 * (self.complex as f64 / words));
        [self.difficult as f64, dale_chall, flesch, fog]
    }
}

pub fn readability_features(doc: &Document, easy_words: &WordList) -> [f64; 4] {
    ReadabilityCounts::from_document(doc, easy_words).scores()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;

    fn pos_fixture() -> PosLexicon {
        PosLexicon::parse("p", "the\tDET\ncat\tNOUN\nsat\tVERB\n").unwrap()
    }

    #[test]
    fn names_are_unique() {
        let set: std::collections::HashSet<_> = FEATURE_NAMES.iter().collect();
        assert_eq!(set.len(), N_FEATURES);
    }

    #[test]
    fn empty_document_is_all_zero() {
        let fv = extract_features(&tokenize(""), &LexiconSet::empty());
        assert_eq!(fv.values, vec![0.0; N_FEATURES]);
    }

    #[test]
    fn pos_frequencies() {
        let f = syntactic_features(&tokenize("the cat sat"), &pos_fixture());
        let third = 1.0 / 3.0;
        assert_eq!(f[PosTag::Det.index()], third);
        assert_eq!(f[PosTag::Noun.index()], third);
        assert_eq!(f[PosTag::Verb.index()], third);
        assert_eq!(f.iter().filter(|v| **v == 0.0).count(), 9);
        let bang = syntactic_features(&tokenize("!!"), &pos_fixture());
        assert_eq!(bang[PosTag::Punct.index()], 1.0);
        assert_eq!(syntactic_features(&tokenize(""), &pos_fixture()), [0.0; 12]);
    }

    #[test]
    fn demonstrative_counts() {
        let f = demonstrative_features(&tokenize("WOW soooo great !!"));
        assert_eq!(f[7], 1.0, "all caps");
        assert_eq!(f[5], 1.0, "elongated");
        assert_eq!(f[4], 2.0, "exclamations");
        assert_eq!(demonstrative_features(&tokenize("ab cdef"))[2], 3.0);
        assert_eq!(demonstrative_features(&tokenize("")), [0.0; 8]);
        let f = demonstrative_features(&tokenize("so tired 😒 soooo"));
        assert_eq!((f[1], f[5]), (1.0, 1.0));
    }

    #[test]
    fn sentiment_contrast() {
        let mut lex = SentimentLexicon::new("t");
        lex.insert("good", 0.8, 0.0);
        lex.insert("bad", 0.0, 0.6);
        let s = lexicon_sentiment(&tokenize("good good bad"), &lex);
        assert!((s[0] - 1.6 / 3.0).abs() < 1e-12);
        assert!((s[1] - 0.2).abs() < 1e-12);
        assert!((s[2] - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(lexicon_sentiment(&tokenize("nothing here"), &lex), [0.0; 3]);
        assert_eq!(lexicon_sentiment(&tokenize("good"), &lex), [0.8, 0.0, 0.8]);
    }

    #[test]
    fn mood_means() {
        let mut mood = MoodLexicon::default();
        let v = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let w = [0.0, 0.5, 0.0, 0.0, 0.25, 0.0, 0.0, 1.0];
        mood.insert("sunny", v);
        mood.insert("gloomy", w);
        assert_eq!(mood_features(&tokenize("sunny"), &mood), v);
        let both = mood_features(&tokenize("sunny gloomy"), &mood);
        for k in 0..8 {
            assert_eq!(both[k], (v[k] + w[k]) / 2.0);
        }
        assert_eq!(mood_features(&tokenize("meh"), &mood), [0.0; 8]);
    }

    #[test]
    fn readability_formulas() {
        let c = ReadabilityCounts {
            words: 10,
            sentences: 1,
            syllables: 15,
            difficult: 0,
            complex: 0,
        };
        let [_, _, flesch, fog] = c.scores();
        assert!((flesch - 69.785).abs() < 1e-9);
        assert!((fog - 4.0).abs() < 1e-9);

        let easy: WordList = ["the", "cat", "sat"].into_iter().collect();
        let r = readability_features(&tokenize("the cat sat"), &easy);
        assert_eq!(r[0], 0.0);
        assert!((r[1] - 0.1488).abs() < 1e-9);
        assert_eq!(readability_features(&tokenize("..."), &easy), [0.0; 4]);
    }

    #[test]
    fn hashtag_body_counts_as_word() {
        let f = demonstrative_features(&tokenize("love it #not"));
        assert_eq!(f[0], 3.0);
    }
}
