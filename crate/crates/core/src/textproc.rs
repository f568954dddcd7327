//! Deterministic tokenization and consonant/vowel syllable analysis for
//! Latin-script Philippine orthographies.
//!
//! The consonant/vowel encoding treats `a e i o u` as vowels and every other
//! letter as a consonant; the digraph `ng`, a single phoneme in the target
//! languages, counts as one consonant unit. Syllables are cut at vowel
//! nuclei: an intervocalic consonant run of length `k` contributes its last
//! consonant(s) as the next syllable's onset (`k = 1` all onset, `k = 2` one
//! coda + one onset, `k >= 3` two onsets with the rest as coda); leading
//! consonants are all onset and trailing consonants all coda.

use std::fmt;

use crate::error::{Error, Result};

/// One symbol of a consonant/vowel encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CvSymbol {
    C,
    V,
}

/// The consonant/vowel shape of a word or syllable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CvString(Vec<CvSymbol>);

impl CvString {
    pub fn symbols(&self) -> &[CvSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for CvString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                CvSymbol::C => "c",
                CvSymbol::V => "v",
            })?;
        }
        Ok(())
    }
}

/// The syllable shapes tracked as features. Shapes outside the named set
/// fall into [`SyllablePattern::Other`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SyllablePattern {
    V,
    Cv,
    Vc,
    Cvc,
    Vcc,
    Ccv,
    Cvcc,
    Ccvcc,
    Ccvccc,
    Other,
}

impl SyllablePattern {
    /// The nine named patterns, in feature order.
    pub const NAMED: [SyllablePattern; 9] = [
        SyllablePattern::V,
        SyllablePattern::Cv,
        SyllablePattern::Vc,
        SyllablePattern::Cvc,
        SyllablePattern::Vcc,
        SyllablePattern::Ccv,
        SyllablePattern::Cvcc,
        SyllablePattern::Ccvcc,
        SyllablePattern::Ccvccc,
    ];

    pub fn from_shape(shape: &CvString) -> SyllablePattern {
        use CvSymbol::{C, V};
        match shape.symbols() {
            [V] => SyllablePattern::V,
            [C, V] => SyllablePattern::Cv,
            [V, C] => SyllablePattern::Vc,
            [C, V, C] => SyllablePattern::Cvc,
            [V, C, C] => SyllablePattern::Vcc,
            [C, C, V] => SyllablePattern::Ccv,
            [C, V, C, C] => SyllablePattern::Cvcc,
            [C, C, V, C, C] => SyllablePattern::Ccvcc,
            [C, C, V, C, C, C] => SyllablePattern::Ccvccc,
            _ => SyllablePattern::Other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SyllablePattern::V => "v",
            SyllablePattern::Cv => "cv",
            SyllablePattern::Vc => "vc",
            SyllablePattern::Cvc => "cvc",
            SyllablePattern::Vcc => "vcc",
            SyllablePattern::Ccv => "ccv",
            SyllablePattern::Cvcc => "cvcc",
            SyllablePattern::Ccvcc => "ccvcc",
            SyllablePattern::Ccvccc => "ccvccc",
            SyllablePattern::Other => "other",
        }
    }
}

const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];
const SENTENCE_TERMINATORS: [char; 4] = ['.', '!', '?', '\u{2026}'];

fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

fn is_word_joiner(c: char) -> bool {
    c == '-' || c == '\'' || c == '\u{2019}'
}

/// Split text into sentences at terminal punctuation (`.` `!` `?` `…`)
/// followed by whitespace or end of input. A trailing unterminated fragment
/// counts as a sentence; whitespace-only segments are dropped.
pub fn tokenize_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    for (i, &c) in chars.iter().enumerate() {
        let at_end = i + 1 == chars.len();
        let next_is_space = chars.get(i + 1).is_some_and(|n| n.is_whitespace());
        if SENTENCE_TERMINATORS.contains(&c) && (at_end || next_is_space) {
            let segment: String = chars[start..=i].iter().collect();
            let segment = segment.trim();
            if !segment.is_empty() {
                sentences.push(segment.to_string());
            }
            start = i + 1;
        }
    }
    if start < chars.len() {
        let tail: String = chars[start..].iter().collect();
        let tail = tail.trim();
        if !tail.is_empty() {
            sentences.push(tail.to_string());
        }
    }
    sentences
}

/// Split text into lowercased word tokens: maximal runs of letters, keeping
/// hyphens and apostrophes only between letters (`sin-o` is one token).
/// Digits and punctuation never join a token.
pub fn tokenize_words(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut words = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].is_alphabetic() {
            i += 1;
            continue;
        }
        let mut token = String::new();
        while i < chars.len() {
            let c = chars[i];
            if c.is_alphabetic() {
                token.extend(c.to_lowercase());
                i += 1;
            } else if is_word_joiner(c)
                && !token.is_empty()
                && chars.get(i + 1).is_some_and(|n| n.is_alphabetic())
            {
                token.push(c);
                i += 1;
            } else {
                break;
            }
        }
        words.push(token);
    }
    words
}

/// The word's consonant units and vowels: vowels stay single units, the
/// digraph `ng` collapses into one consonant unit, every other letter is one
/// consonant unit. Joiners and non-letters are dropped before digraph
/// detection. Empty when the word has no letters.
fn cv_units(word: &str) -> Vec<CvSymbol> {
    let letters: Vec<char> = word
        .to_lowercase()
        .chars()
        .filter(|c| c.is_alphabetic())
        .collect();
    let mut units = Vec::with_capacity(letters.len());
    let mut i = 0;
    while i < letters.len() {
        if is_vowel(letters[i]) {
            units.push(CvSymbol::V);
            i += 1;
        } else if letters[i] == 'n' && letters.get(i + 1) == Some(&'g') {
            units.push(CvSymbol::C);
            i += 2;
        } else {
            units.push(CvSymbol::C);
            i += 1;
        }
    }
    units
}

/// Encode a word as its consonant/vowel shape.
///
/// Errors when the word contains no letters.
pub fn cv_encode(word: &str) -> Result<CvString> {
    let units = cv_units(word);
    if units.is_empty() {
        return Err(Error::NotAWord(word.to_string()));
    }
    Ok(CvString(units))
}

/// Split a word into syllable shapes, one per vowel nucleus.
///
/// A word with letters but no vowel yields its whole shape as one syllable
/// (classified [`SyllablePattern::Other`]). Errors when the word has no
/// letters at all.
pub fn syllabify_shapes(word: &str) -> Result<Vec<CvString>> {
    let cv = cv_encode(word)?;
    let units = cv.symbols();
    let nuclei: Vec<usize> = units
        .iter()
        .enumerate()
        .filter_map(|(i, &s)| (s == CvSymbol::V).then_some(i))
        .collect();
    if nuclei.is_empty() {
        return Ok(vec![cv]);
    }

    // Boundary before each nucleus after the first: the intervocalic run of
    // k consonants leaves min(k, 2) of them as the next syllable's onset,
    // except k = 2 which splits one coda + one onset.
    let mut starts = vec![0usize];
    for pair in nuclei.windows(2) {
        let (prev, next) = (pair[0], pair[1]);
        let k = next - prev - 1;
        let onset = match k {
            0 => 0,
            1 | 2 => 1,
            _ => 2,
        };
        starts.push(next - onset);
    }
    starts.push(units.len());

    Ok(starts
        .windows(2)
        .map(|w| CvString(units[w[0]..w[1]].to_vec()))
        .collect())
}

/// Classify each syllable of the word against the named pattern set.
pub fn syllabify(word: &str) -> Result<Vec<SyllablePattern>> {
    Ok(syllabify_shapes(word)?
        .iter()
        .map(SyllablePattern::from_shape)
        .collect())
}

/// Number of syllable nuclei: every vowel letter is one nucleus. Zero for
/// vowel-less tokens.
pub fn count_syllables(word: &str) -> usize {
    word.to_lowercase().chars().filter(|&c| is_vowel(c)).count()
}

/// Consonant cluster statistics for one word.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterStats {
    pub cluster_count: usize,
    pub mean_cluster_len: f64,
}

/// Count maximal runs of two or more consonant units (`ng` is one unit)
/// with no intervening vowel, and their mean unit length (0.0 without any).
pub fn consonant_cluster_stats(word: &str) -> ClusterStats {
    let units = cv_units(word);
    let mut clusters: Vec<usize> = Vec::new();
    let mut run = 0usize;
    for &u in &units {
        match u {
            CvSymbol::C => run += 1,
            CvSymbol::V => {
                if run >= 2 {
                    clusters.push(run);
                }
                run = 0;
            }
        }
    }
    if run >= 2 {
        clusters.push(run);
    }
    let cluster_count = clusters.len();
    let mean_cluster_len = if clusters.is_empty() {
        0.0
    } else {
        clusters.iter().sum::<usize>() as f64 / clusters.len() as f64
    };
    ClusterStats {
        cluster_count,
        mean_cluster_len,
    }
}
