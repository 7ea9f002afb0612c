//! External linguistic resources: sentiment and mood lexicons, the easy-word
//! list, the POS lexicon and pre-trained word embeddings.
//!
//! All text formats are UTF-8, one entry per line. Blank lines and lines
//! starting with `#` are skipped (embedding files excepted, which have no
//! comment syntax). Words are stored lowercase.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

fn read_file(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(CoreError::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|source| CoreError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn source_name(path: &Path) -> String {
    path.display().to_string()
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn malformed(source: &str, line: usize, reason: impl Into<String>) -> CoreError {
    CoreError::MalformedRow {
        source_name: source.to_string(),
        line,
        reason: reason.into(),
    }
}

fn parse_score(source: &str, line: usize, field: &str) -> Result<f64> {
    match field.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(malformed(source, line, format!("non-numeric score {field:?}"))),
    }
}

fn clamp_unit(v: f64, clamped: &mut usize) -> f64 {
    if (0.0..=1.0).contains(&v) {
        v
    } else {
        *clamped += 1;
        v.clamp(0.0, 1.0)
    }
}

/// Word-level positive/negative scores in `[0, 1]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentimentLexicon {
    pub name: String,
    entries: BTreeMap<String, (f64, f64)>,
}

impl SentimentLexicon {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            entries: BTreeMap::new(),
        }
    }

    /// Inserts an entry, clamping both scores to `[0, 1]`.
    pub fn insert(&mut self, word: &str, pos: f64, neg: f64) {
        let mut ignored = 0;
        self.entries.insert(
            word.to_lowercase(),
            (clamp_unit(pos, &mut ignored), clamp_unit(neg, &mut ignored)),
        );
    }

    /// `(positive, negative)`; `(0, 0)` for absent words.
    pub fn lookup(&self, word: &str) -> (f64, f64) {
        self.entries.get(word).copied().unwrap_or((0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Parses `word<TAB>pos<TAB>neg` rows. Returns the lexicon and the number
    /// of scores that had to be clamped into `[0, 1]`.
    pub fn parse(name: &str, text: &str) -> Result<(Self, usize)> {
        let mut lex = Self::new(name);
        let mut clamped = 0;
        for (line, row) in data_lines(text) {
            let cols: Vec<&str> = row.split('\t').collect();
            if cols.len() != 3 {
                return Err(malformed(name, line, format!("expected 3 columns, found {}", cols.len())));
            }
            let pos = clamp_unit(parse_score(name, line, cols[1])?, &mut clamped);
            let neg = clamp_unit(parse_score(name, line, cols[2])?, &mut clamped);
            lex.entries.insert(cols[0].trim().to_lowercase(), (pos, neg));
        }
        Ok((lex, clamped))
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (word, (pos, neg)) in &self.entries {
            writeln!(w, "{word}\t{pos}\t{neg}")?;
        }
        Ok(())
    }
}

/// Loads a sentiment lexicon, returning it with its clamp-warning count.
pub fn load_sentiment_lexicon(path: &Path) -> Result<(SentimentLexicon, usize)> {
    let text = read_file(path)?;
    let (mut lex, clamped) = SentimentLexicon::parse(&source_name(path), &text)?;
    lex.name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok((lex, clamped))
}

pub const MOOD_DIMENSIONS: [&str; 8] = [
    "happiness",
    "sadness",
    "annoyance",
    "inspiration",
    "fear",
    "indifference",
    "anger",
    "amusement",
];

pub type MoodVector = [f64; 8];

/// Eight-dimensional mood scores per word, dimension order [`MOOD_DIMENSIONS`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MoodLexicon {
    entries: BTreeMap<String, MoodVector>,
}

impl MoodLexicon {
    pub fn insert(&mut self, word: &str, mood: MoodVector) {
        let mut ignored = 0;
        self.entries
            .insert(word.to_lowercase(), mood.map(|v| clamp_unit(v, &mut ignored)));
    }

    pub fn lookup(&self, word: &str) -> MoodVector {
        self.entries.get(word).copied().unwrap_or([0.0; 8])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parse(name: &str, text: &str) -> Result<(Self, usize)> {
        let mut lex = Self::default();
        let mut clamped = 0;
        for (line, row) in data_lines(text) {
            let cols: Vec<&str> = row.split('\t').collect();
            if cols.len() != 9 {
                return Err(malformed(name, line, format!("expected 9 columns, found {}", cols.len())));
            }
            let mut mood = [0.0; 8];
            for (slot, field) in mood.iter_mut().zip(&cols[1..]) {
                *slot = clamp_unit(parse_score(name, line, field)?, &mut clamped);
            }
            lex.entries.insert(cols[0].trim().to_lowercase(), mood);
        }
        Ok((lex, clamped))
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (word, mood) in &self.entries {
            write!(w, "{word}")?;
            for v in mood {
                write!(w, "\t{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Positive/negative view used when the mood lexicon doubles as a
    /// sentiment lexicon: positive is the mean of happiness, amusement and
    /// inspiration; negative the mean of sadness, anger and fear.
    pub fn sentiment_view(&self, name: &str) -> SentimentLexicon {
        let mut lex = SentimentLexicon::new(name);
        for (word, m) in &self.entries {
            let pos = (m[0] + m[7] + m[3]) / 3.0;
            let neg = (m[1] + m[6] + m[4]) / 3.0;
            lex.insert(word, pos, neg);
        }
        lex
    }
}

pub fn load_mood_lexicon(path: &Path) -> Result<(MoodLexicon, usize)> {
    MoodLexicon::parse(&source_name(path), &read_file(path)?)
}

/// Case-insensitive word set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordList {
    words: BTreeSet<String>,
}

impl WordList {
    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&word.to_lowercase())
    }

    pub fn insert(&mut self, word: &str) {
        self.words.insert(word.trim().to_lowercase());
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn parse(text: &str) -> Self {
        let mut list = Self::default();
        for (_, row) in data_lines(text) {
            list.insert(row);
        }
        list
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for word in &self.words {
            writeln!(w, "{word}")?;
        }
        Ok(())
    }
}

impl<'a> FromIterator<&'a str> for WordList {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        let mut list = Self::default();
        iter.into_iter().for_each(|w| list.insert(w));
        list
    }
}

pub fn load_wordlist(path: &Path) -> Result<WordList> {
    Ok(WordList::parse(&read_file(path)?))
}

/// The 12-tag coarse part-of-speech set, in feature order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Conj,
    Num,
    Intj,
    Punct,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 12] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Det,
        PosTag::Adp,
        PosTag::Conj,
        PosTag::Num,
        PosTag::Intj,
        PosTag::Punct,
        PosTag::Other,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Det => "DET",
            PosTag::Adp => "ADP",
            PosTag::Conj => "CONJ",
            PosTag::Num => "NUM",
            PosTag::Intj => "INTJ",
            PosTag::Punct => "PUNCT",
            PosTag::Other => "OTHER",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let upper = s.trim().to_uppercase();
        PosTag::ALL
            .into_iter()
            .find(|t| t.name() == upper)
            .ok_or_else(|| format!("unknown POS tag {s:?}"))
    }
}

const DEFAULT_SUFFIX_RULES: &[(&str, PosTag)] = &[
    ("ly", PosTag::Adv),
    ("ing", PosTag::Verb),
    ("ed", PosTag::Verb),
    ("ize", PosTag::Verb),
    ("ise", PosTag::Verb),
    ("tion", PosTag::Noun),
    ("sion", PosTag::Noun),
    ("ness", PosTag::Noun),
    ("ment", PosTag::Noun),
    ("ity", PosTag::Noun),
    ("ship", PosTag::Noun),
    ("er", PosTag::Noun),
    ("ous", PosTag::Adj),
    ("ful", PosTag::Adj),
    ("less", PosTag::Adj),
    ("able", PosTag::Adj),
    ("ible", PosTag::Adj),
    ("ive", PosTag::Adj),
    ("ic", PosTag::Adj),
    ("al", PosTag::Adj),
];

/// Word → coarse tag lookup backed by ordered suffix rules.
///
/// In the file format `word<TAB>TAGNAME`, a word starting with `-` declares a
/// suffix rule (`-ly<TAB>ADV`). Files without suffix rules get a built-in
/// English rule set.
#[derive(Debug, Clone, PartialEq)]
pub struct PosLexicon {
    entries: BTreeMap<String, PosTag>,
    suffix_rules: Vec<(String, PosTag)>,
}

impl Default for PosLexicon {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
            suffix_rules: DEFAULT_SUFFIX_RULES
                .iter()
                .map(|(s, t)| (s.to_string(), *t))
                .collect(),
        }
    }
}

impl PosLexicon {
    pub fn insert(&mut self, word: &str, tag: PosTag) {
        self.entries.insert(word.to_lowercase(), tag);
    }

    pub fn get(&self, word: &str) -> Option<PosTag> {
        self.entries.get(word).copied()
    }

    pub fn suffix_rules(&self) -> &[(String, PosTag)] {
        &self.suffix_rules
    }

    /// Lexicon lookup, then the first matching suffix rule, then `OTHER`.
    /// A suffix only matches when something remains in front of it.
    pub fn tag_word(&self, word: &str) -> PosTag {
        if let Some(tag) = self.get(word) {
            return tag;
        }
        self.suffix_rules
            .iter()
            .find(|(suffix, _)| word.len() > suffix.len() && word.ends_with(suffix.as_str()))
            .map(|(_, tag)| *tag)
            .unwrap_or(PosTag::Other)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut suffix_rules = Vec::new();
        for (line, row) in data_lines(text) {
            let cols: Vec<&str> = row.split('\t').collect();
            if cols.len() != 2 {
                return Err(malformed(name, line, format!("expected 2 columns, found {}", cols.len())));
            }
            let tag: PosTag = cols[1].parse().map_err(|e: String| malformed(name, line, e))?;
            let word = cols[0].trim().to_lowercase();
            match word.strip_prefix('-') {
                Some(suffix) if !suffix.is_empty() => suffix_rules.push((suffix.to_string(), tag)),
                _ => {
                    entries.insert(word, tag);
                }
            }
        }
        let mut lex = Self {
            entries,
            ..Self::default()
        };
        if !suffix_rules.is_empty() {
            lex.suffix_rules = suffix_rules;
        }
        Ok(lex)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (word, tag) in &self.entries {
            writeln!(w, "{word}\t{tag}")?;
        }
        for (suffix, tag) in &self.suffix_rules {
            writeln!(w, "-{suffix}\t{tag}")?;
        }
        Ok(())
    }
}

pub fn load_pos_lexicon(path: &Path) -> Result<PosLexicon> {
    PosLexicon::parse(&source_name(path), &read_file(path)?)
}

/// Pre-trained word vectors. Unknown words map to the all-zeros vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: HashMap<String, Vec<f64>>,
    oov: Vec<f64>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension > 0, "embedding dimension must be positive");
        Self {
            dimension,
            vectors: HashMap::new(),
            oov: vec![0.0; dimension],
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn insert(&mut self, word: &str, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.dimension {
            return Err(CoreError::DimensionMismatch {
                expected: self.dimension,
                found: vector.len(),
            });
        }
        self.vectors.insert(word.to_string(), vector);
        Ok(())
    }

    /// Exact match first, then the lowercase form, then the OOV vector.
    pub fn lookup(&self, word: &str) -> &[f64] {
        self.vectors
            .get(word)
            .or_else(|| self.vectors.get(&word.to_lowercase()))
            .unwrap_or(&self.oov)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vectors.contains_key(word)
    }

    /// Parses `token v1 ... vD` lines; `D` comes from the first line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table: Option<Self> = None;
        for (idx, row) in text.lines().enumerate() {
            let line = idx + 1;
            let mut fields = row.split_whitespace();
            let Some(word) = fields.next() else { continue };
            let values = fields
                .map(|f| f.parse::<f64>().map_err(|_| malformed("embeddings", line, format!("bad value {f:?}"))))
                .collect::<Result<Vec<f64>>>()?;
            let table = match &mut table {
                Some(t) => t,
                None => {
                    if values.is_empty() {
                        return Err(malformed("embeddings", line, "no vector values"));
                    }
                    table.insert(Self::new(values.len()))
                }
            };
            if values.len() != table.dimension {
                return Err(CoreError::InconsistentDimension {
                    line,
                    expected: table.dimension,
                    found: values.len(),
                });
            }
            table.vectors.insert(word.to_string(), values);
        }
        table.ok_or_else(|| CoreError::EmptyFile("embeddings".into()))
    }

    /// Writes entries sorted by token.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut words: Vec<&String> = self.vectors.keys().collect();
        words.sort();
        for word in words {
            write!(w, "{word}")?;
            for v in &self.vectors[word] {
                write!(w, " {v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

pub fn load_embeddings(path: &Path) -> Result<EmbeddingTable> {
    let text = read_file(path)?;
    EmbeddingTable::parse(&text).map_err(|e| match e {
        CoreError::EmptyFile(_) => CoreError::EmptyFile(source_name(path)),
        other => other,
    })
}

/// Everything the engineered features read.
#[derive(Debug, Clone, PartialEq)]
pub struct LexiconSet {
    pub sentiwordnet: SentimentLexicon,
    pub vader: SentimentLexicon,
    pub afinn: SentimentLexicon,
    pub mood: MoodLexicon,
    pub easy_words: WordList,
    pub pos: PosLexicon,
    depeche: SentimentLexicon,
}

impl LexiconSet {
    pub fn new(
        sentiwordnet: SentimentLexicon,
        vader: SentimentLexicon,
        afinn: SentimentLexicon,
        mood: MoodLexicon,
        easy_words: WordList,
        pos: PosLexicon,
    ) -> Self {
        let depeche = mood.sentiment_view("depechemood");
        Self {
            sentiwordnet,
            vader,
            afinn,
            mood,
            easy_words,
            pos,
            depeche,
        }
    }

    /// Lexicons empty of entries: every feature that depends on them is zero.
    pub fn empty() -> Self {
        Self::new(
            SentimentLexicon::new("sentiwordnet"),
            SentimentLexicon::new("vader"),
            SentimentLexicon::new("afinn"),
            MoodLexicon::default(),
            WordList::default(),
            PosLexicon::default(),
        )
    }

    /// The four sentiment lexicons in feature order.
    pub fn sentiment_lexicons(&self) -> [&SentimentLexicon; 4] {
        [&self.sentiwordnet, &self.vader, &self.afinn, &self.depeche]
    }
}
