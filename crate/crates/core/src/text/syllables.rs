//! Vowel-group syllable heuristics.

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Number of maximal `[aeiouy]` runs in the lowercased word, less one for a
/// silent final `e` after a consonant, floored at 1 when any vowel is present.
/// Vowel-less strings count 0.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .flat_map(char::to_lowercase)
        .filter(|c| c.is_alphabetic())
        .collect();
    let mut groups = 0;
    let mut in_group = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    if groups == 0 {
        return 0;
    }
    if let [.., prev, 'e'] = letters.as_slice() {
        if !is_vowel(*prev) {
            groups -= 1;
        }
    }
    groups.max(1)
}

/// Three or more syllables.
pub fn is_polysyllabic(word: &str) -> bool {
    count_syllables(word) >= 3
}

const INFLECTIONS: [&str; 3] = ["ing", "es", "ed"];

/// Complex word in the Gunning Fog sense: at least three syllables, not a
/// proper noun, and not pushed to three syllables by an `-es`, `-ed` or
/// `-ing` ending.
///
/// Proper nouns are approximated as capitalized words that do not open a
/// sentence, so callers pass whether the word is sentence-initial.
pub fn is_complex(word: &str, sentence_initial: bool) -> bool {
    if count_syllables(word) < 3 {
        return false;
    }
    let capitalized = word.chars().next().is_some_and(char::is_uppercase);
    if capitalized && !sentence_initial {
        return false;
    }
    let lower = word.to_lowercase();
    for suffix in INFLECTIONS {
        if let Some(stem) = lower.strip_suffix(suffix) {
            if count_syllables(stem) < 3 {
                return false;
            }
        }
    }
    true
}
