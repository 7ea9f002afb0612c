//! Tweet tokenization and sentence splitting.
//!
//! Token kinds are assigned by a fixed rule order: url, mention, hashtag,
//! emoji, number, punctuation, word. Each hashtag is followed by a word token
//! carrying its body so lexicons can score it.

mod emoji;
mod syllables;

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

pub use emoji::is_emoji;
pub use syllables::{count_syllables, is_complex, is_polysyllabic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    Word,
    Punctuation,
    Emoji,
    Hashtag,
    Mention,
    Url,
    Number,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    /// Lowercase form with elongated letter runs collapsed to two.
    pub normalized: String,
    pub is_elongated: bool,
    pub is_all_caps: bool,
}

impl Token {
    pub fn new(surface: impl Into<String>, kind: TokenKind) -> Self {
        let surface = surface.into();
        let lower = surface.to_lowercase();
        let is_elongated = has_elongation(&lower);
        let normalized = collapse_elongation(&lower);
        let is_all_caps = kind == TokenKind::Word && all_caps(&surface);
        Self {
            surface,
            kind,
            normalized,
            is_elongated,
            is_all_caps,
        }
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    pub fn is_punctuation(&self) -> bool {
        self.kind == TokenKind::Punctuation
    }

    fn is_terminal(&self) -> bool {
        self.is_punctuation()
            && (self.surface.chars().all(|c| c == '.')
                || matches!(self.surface.as_str(), "!" | "?" | "…"))
    }
}

/// Integer sentiment score on the eleven-point scale `-5..=5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub struct SentimentScore(i8);

impl SentimentScore {
    pub const MIN: i8 = -5;
    pub const MAX: i8 = 5;

    pub fn value(self) -> i8 {
        self.0
    }

    /// Class index `0..11` for the score.
    pub fn class_id(self) -> usize {
        (self.0 - Self::MIN) as usize
    }

    pub fn from_class_id(id: usize) -> Option<Self> {
        i8::try_from(id)
            .ok()
            .and_then(|id| Self::try_from(id + Self::MIN).ok())
    }
}

impl TryFrom<i8> for SentimentScore {
    type Error = CoreError;

    fn try_from(v: i8) -> Result<Self> {
        if (Self::MIN..=Self::MAX).contains(&v) {
            Ok(Self(v))
        } else {
            Err(CoreError::ScoreOutOfRange(v as i64))
        }
    }
}

impl From<SentimentScore> for i8 {
    fn from(s: SentimentScore) -> i8 {
        s.0
    }
}

/// One text sample with its tokens, sentence ranges and optional gold data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub raw_text: String,
    pub tokens: Vec<Token>,
    /// Half-open token ranges partitioning `tokens`.
    pub sentences: Vec<Range<usize>>,
    pub label: Option<usize>,
    pub score: Option<SentimentScore>,
}

impl Document {
    pub fn word_tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_word())
    }

    pub fn with_label(mut self, label: usize) -> Self {
        self.label = Some(label);
        self
    }

    pub fn with_score(mut self, score: SentimentScore) -> Self {
        self.score = Some(score);
        self
    }

    /// Index of the first token of every sentence.
    pub fn sentence_starts(&self) -> impl Iterator<Item = usize> + '_ {
        self.sentences.iter().map(|r| r.start)
    }
}

/// Tokenizes `raw_text` and splits it into sentences.
pub fn tokenize(raw_text: &str) -> Document {
    let doc = Document {
        raw_text: raw_text.to_string(),
        tokens: scan(raw_text),
        sentences: Vec::new(),
        label: None,
        score: None,
    };
    split_sentences(doc)
}

/// Recomputes sentence ranges: a boundary follows each run of terminal
/// punctuation (`.`, `!`, `?`, ellipsis). Trailing tokens form a last sentence.
pub fn split_sentences(mut doc: Document) -> Document {
    let mut sentences = Vec::new();
    let mut start = 0;
    let n = doc.tokens.len();
    for i in 0..n {
        let ends_run = doc.tokens[i].is_terminal() && (i + 1 == n || !doc.tokens[i + 1].is_terminal());
        if ends_run {
            sentences.push(start..i + 1);
            start = i + 1;
        }
    }
    if start < n {
        sentences.push(start..n);
    }
    doc.sentences = sentences;
    doc
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '’'
}

fn starts_url(chars: &[char]) -> bool {
    let head: String = chars.iter().take(8).flat_map(|c| c.to_lowercase()).collect();
    head.starts_with("http://") || head.starts_with("https://") || head.starts_with("www.")
}

fn scan(raw: &str) -> Vec<Token> {
    let chars: Vec<char> = raw.chars().collect();
    let n = chars.len();
    let take = |from: usize, to: usize| chars[from..to].iter().collect::<String>();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < n {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if starts_url(&chars[i..]) {
            let end = (i..n).find(|&j| chars[j].is_whitespace()).unwrap_or(n);
            tokens.push(Token::new(take(i, end), TokenKind::Url));
            i = end;
        } else if c == '@' && next.is_some_and(is_word_char) {
            let end = (i + 1..n).find(|&j| !is_word_char(chars[j])).unwrap_or(n);
            tokens.push(Token::new(take(i, end), TokenKind::Mention));
            i = end;
        } else if c == '#' && next.is_some_and(is_word_char) {
            let end = (i + 1..n).find(|&j| !is_word_char(chars[j])).unwrap_or(n);
            tokens.push(Token::new(take(i, end), TokenKind::Hashtag));
            tokens.push(Token::new(take(i + 1, end), TokenKind::Word));
            i = end;
        } else if emoji::is_emoji(c) {
            let mut end = i + 1;
            while end < n {
                if emoji::is_emoji_modifier(chars[end]) {
                    end += 1;
                } else if chars[end] == emoji::ZERO_WIDTH_JOINER
                    && chars.get(end + 1).is_some_and(|&c| emoji::is_emoji(c))
                {
                    end += 2;
                } else {
                    break;
                }
            }
            tokens.push(Token::new(take(i, end), TokenKind::Emoji));
            i = end;
        } else if c.is_ascii_digit() && number_end(&chars, i).is_some() {
            let end = number_end(&chars, i).unwrap();
            tokens.push(Token::new(take(i, end), TokenKind::Number));
            i = end;
        } else if is_word_char(c) {
            let mut end = i + 1;
            while end < n {
                if is_word_char(chars[end]) {
                    end += 1;
                } else if is_apostrophe(chars[end]) && chars.get(end + 1).is_some_and(|&c| c.is_alphabetic()) {
                    end += 2;
                } else {
                    break;
                }
            }
            tokens.push(Token::new(take(i, end), TokenKind::Word));
            i = end;
        } else if c == '.' {
            let end = (i..n).find(|&j| chars[j] != '.').unwrap_or(n);
            tokens.push(Token::new(take(i, end), TokenKind::Punctuation));
            i = end;
        } else {
            tokens.push(Token::new(c.to_string(), TokenKind::Punctuation));
            i += 1;
        }
    }
    tokens
}

/// End of a number starting at `start` (digits with internal `.`/`,` groups),
/// or `None` when the digits run straight into letters and so form a word.
fn number_end(chars: &[char], start: usize) -> Option<usize> {
    let mut end = start;
    while end < chars.len() {
        if chars[end].is_ascii_digit()
            || (matches!(chars[end], '.' | ',') && chars.get(end + 1).is_some_and(char::is_ascii_digit))
        {
            end += 1;
        } else {
            break;
        }
    }
    match chars.get(end) {
        Some(&c) if is_word_char(c) => None,
        _ => Some(end),
    }
}

fn has_elongation(lower: &str) -> bool {
    let mut run = 0;
    let mut prev = None;
    for c in lower.chars() {
        if Some(c) == prev && c.is_alphabetic() {
            run += 1;
            if run >= 3 {
                return true;
            }
        } else {
            run = 1;
        }
        prev = Some(c);
    }
    false
}

/// Collapses every run of three or more identical letters to two.
pub fn collapse_elongation(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut prev = None;
    let mut run = 0;
    for c in s.chars() {
        if Some(c) == prev {
            run += 1;
        } else {
            run = 1;
        }
        prev = Some(c);
        if run <= 2 || !c.is_alphabetic() {
            out.push(c);
        }
    }
    out
}

fn all_caps(surface: &str) -> bool {
    let letters: Vec<char> = surface.chars().filter(|c| c.is_alphabetic()).collect();
    letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase())
}
