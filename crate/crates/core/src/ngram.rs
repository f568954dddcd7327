//! Character n-gram language profiles, pairwise overlap matrices, and the
//! per-document cross-lingual overlap features.
//!
//! N-grams are character-level within words: a word shorter than `n`
//! contributes nothing, and grams never span word boundaries. A language
//! profile keeps the top fraction of its distinct grams by frequency, ties
//! broken lexicographically; pairwise language similarity is the overlap
//! coefficient |A ∩ B| / min(|A|, |B|) over the retained sets.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, LanguageCode, CANONICAL_LANGUAGES};
use crate::error::{Error, Result};
use crate::textproc;

/// Supported n-gram sizes.
pub const NGRAM_SIZES: [usize; 2] = [2, 3];

fn check_n(n: usize) -> Result<()> {
    if NGRAM_SIZES.contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidNgramSize(n))
    }
}

fn check_fraction(fraction: f64) -> Result<()> {
    if fraction > 0.0 && fraction <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidFraction(fraction))
    }
}

/// All contiguous length-`n` substrings of the lowercased word, in order of
/// occurrence (a multiset: repeats are kept).
pub fn char_ngrams(word: &str, n: usize) -> Result<Vec<String>> {
    check_n(n)?;
    let chars: Vec<char> = word.to_lowercase().chars().collect();
    if chars.len() < n {
        return Ok(Vec::new());
    }
    Ok(chars.windows(n).map(|w| w.iter().collect()).collect())
}

/// A language's retained top-fraction character n-gram set with counts.
#[derive(Clone, Debug)]
pub struct NgramProfile {
    language: LanguageCode,
    n: usize,
    top_fraction: f64,
    /// Retained grams in retention order (count descending, gram ascending).
    grams: Vec<String>,
    gram_set: HashSet<String>,
    frequencies: HashMap<String, u64>,
}

impl NgramProfile {
    /// Build a profile from raw gram counts, retaining the top
    /// `ceil(top_fraction * distinct)` grams.
    pub fn from_counts(
        language: LanguageCode,
        n: usize,
        top_fraction: f64,
        counts: HashMap<String, u64>,
    ) -> Result<Self> {
        check_n(n)?;
        check_fraction(top_fraction)?;
        let mut ranked: Vec<(&String, &u64)> = counts.iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
        let keep = ((top_fraction * ranked.len() as f64).ceil() as usize).min(ranked.len());
        let grams: Vec<String> = ranked[..keep].iter().map(|(g, _)| (*g).clone()).collect();
        let gram_set = grams.iter().cloned().collect();
        let frequencies = grams
            .iter()
            .map(|g| (g.clone(), counts[g]))
            .collect();
        Ok(NgramProfile {
            language,
            n,
            top_fraction,
            grams,
            gram_set,
            frequencies,
        })
    }

    /// A profile with no grams, for languages absent from a training pool.
    /// Scoring against it yields 0; pairwise overlap against it is an error.
    pub fn empty(language: LanguageCode, n: usize, top_fraction: f64) -> Self {
        NgramProfile {
            language,
            n,
            top_fraction,
            grams: Vec::new(),
            gram_set: HashSet::new(),
            frequencies: HashMap::new(),
        }
    }

    pub fn language(&self) -> LanguageCode {
        self.language
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top_fraction(&self) -> f64 {
        self.top_fraction
    }

    /// Retained grams in retention order.
    pub fn grams(&self) -> &[String] {
        &self.grams
    }

    pub fn len(&self) -> usize {
        self.grams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grams.is_empty()
    }

    pub fn contains(&self, gram: &str) -> bool {
        self.gram_set.contains(gram)
    }

    /// Count of a retained gram, if present.
    pub fn frequency(&self, gram: &str) -> Option<u64> {
        self.frequencies.get(gram).copied()
    }
}

fn gram_counts<'a>(docs: impl Iterator<Item = &'a Document>, n: usize) -> HashMap<String, u64> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for doc in docs {
        for word in textproc::tokenize_words(&doc.text) {
            let chars: Vec<char> = word.chars().collect();
            if chars.len() < n {
                continue;
            }
            for w in chars.windows(n) {
                *counts.entry(w.iter().collect()).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Build a language's profile from every document of that language in the
/// corpus, all levels pooled.
pub fn build_profile(
    corpus: &Corpus,
    language: LanguageCode,
    n: usize,
    top_fraction: f64,
) -> Result<NgramProfile> {
    check_n(n)?;
    check_fraction(top_fraction)?;
    let docs = corpus.of_language(language);
    if docs.is_empty() {
        return Err(Error::NoDocuments(language.to_string()));
    }
    let counts = gram_counts(docs.into_iter(), n);
    NgramProfile::from_counts(language, n, top_fraction, counts)
}

/// Overlap coefficient |A ∩ B| / min(|A|, |B|) between two retained sets.
pub fn profile_overlap(a: &NgramProfile, b: &NgramProfile) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::MismatchedNgramSize(a.n, b.n));
    }
    if a.is_empty() {
        return Err(Error::EmptyProfile(a.language.to_string()));
    }
    if b.is_empty() {
        return Err(Error::EmptyProfile(b.language.to_string()));
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let shared = small.grams.iter().filter(|g| large.contains(g)).count();
    Ok(shared as f64 / small.len() as f64)
}

/// Symmetric pairwise overlap matrix with unit diagonal.
#[derive(Clone, Debug, Serialize)]
pub struct OverlapMatrix {
    pub n: usize,
    pub languages: Vec<LanguageCode>,
    pub matrix: Vec<Vec<f64>>,
}

impl OverlapMatrix {
    pub fn value(&self, a: LanguageCode, b: LanguageCode) -> Option<f64> {
        let i = self.languages.iter().position(|&l| l == a)?;
        let j = self.languages.iter().position(|&l| l == b)?;
        Some(self.matrix[i][j])
    }

    /// Aligned plain-text rendering with three-decimal cells.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<6}", ""));
        for l in &self.languages {
            let _ = write!(out, " {:>6}", l.as_str().to_uppercase());
        }
        out.push('\n');
        for (i, l) in self.languages.iter().enumerate() {
            out.push_str(&format!("{:<6}", l.as_str().to_uppercase()));
            for v in &self.matrix[i] {
                let _ = write!(out, " {v:>6.3}");
            }
            out.push('\n');
        }
        out
    }
}

/// Pairwise overlap of profiles sharing one n-gram size.
pub fn overlap_matrix(profiles: &[NgramProfile]) -> Result<OverlapMatrix> {
    if profiles.is_empty() {
        return Err(Error::InvalidParams("no profiles given".to_string()));
    }
    let n = profiles[0].n;
    let mut languages = Vec::with_capacity(profiles.len());
    for p in profiles {
        if p.n != n {
            return Err(Error::MismatchedNgramSize(n, p.n));
        }
        if languages.contains(&p.language) {
            return Err(Error::InvalidParams(format!(
                "duplicate language `{}` in profiles",
                p.language
            )));
        }
        languages.push(p.language);
    }
    let dim = profiles.len();
    let mut matrix = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        matrix[i][i] = 1.0;
        for j in (i + 1)..dim {
            let v = profile_overlap(&profiles[i], &profiles[j])?;
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
    }
    Ok(OverlapMatrix {
        n,
        languages,
        matrix,
    })
}

/// The fourteen profiles behind the cross-lingual overlap features: one per
/// canonical language for each n in {2, 3}, always in canonical order.
#[derive(Clone, Debug)]
pub struct ProfileSet {
    bigrams: Vec<NgramProfile>,
    trigrams: Vec<NgramProfile>,
    top_fraction: f64,
}

impl ProfileSet {
    /// Build profiles for every canonical language from the given documents.
    /// Languages without documents get empty profiles (their features score
    /// zero), so partial corpora still extract.
    pub fn build_from_docs<'a>(
        docs: impl Iterator<Item = &'a Document> + Clone,
        top_fraction: f64,
    ) -> Result<Self> {
        check_fraction(top_fraction)?;
        let mut bigrams = Vec::with_capacity(CANONICAL_LANGUAGES.len());
        let mut trigrams = Vec::with_capacity(CANONICAL_LANGUAGES.len());
        for &language in &CANONICAL_LANGUAGES {
            for (n, out) in [(2usize, &mut bigrams), (3usize, &mut trigrams)] {
                let counts = gram_counts(
                    docs.clone().filter(|d| d.language == language),
                    n,
                );
                let profile = if counts.is_empty() {
                    NgramProfile::empty(language, n, top_fraction)
                } else {
                    NgramProfile::from_counts(language, n, top_fraction, counts)?
                };
                out.push(profile);
            }
        }
        Ok(ProfileSet {
            bigrams,
            trigrams,
            top_fraction,
        })
    }

    /// Build from a whole corpus.
    pub fn build(corpus: &Corpus, top_fraction: f64) -> Result<Self> {
        Self::build_from_docs(corpus.documents().iter(), top_fraction)
    }

    pub fn top_fraction(&self) -> f64 {
        self.top_fraction
    }

    /// Profiles for one n-gram size, in canonical language order.
    pub fn profiles(&self, n: usize) -> Result<&[NgramProfile]> {
        match n {
            2 => Ok(&self.bigrams),
            3 => Ok(&self.trigrams),
            other => Err(Error::InvalidNgramSize(other)),
        }
    }
}

/// The fourteen per-document overlap features: for each canonical language,
/// the fraction of the document's distinct grams found in that language's
/// profile — bigrams first, then trigrams, language order fixed. Zero when
/// the document has no grams of that length.
pub fn crossngo_features(doc: &Document, profiles: &ProfileSet) -> [f64; 14] {
    let mut out = [0.0; 14];
    for (slot, n) in NGRAM_SIZES.iter().enumerate() {
        let mut doc_grams: HashSet<String> = HashSet::new();
        for word in textproc::tokenize_words(&doc.text) {
            let chars: Vec<char> = word.chars().collect();
            if chars.len() < *n {
                continue;
            }
            doc_grams.extend(chars.windows(*n).map(|w| w.iter().collect::<String>()));
        }
        let set = match *n {
            2 => &profiles.bigrams,
            _ => &profiles.trigrams,
        };
        for (i, profile) in set.iter().enumerate() {
            out[slot * 7 + i] = if doc_grams.is_empty() {
                0.0
            } else {
                let shared = doc_grams.iter().filter(|g| profile.contains(g)).count();
                shared as f64 / doc_grams.len() as f64
            };
        }
    }
    out
}

/// Serialized form of a profile cache file: counts omitted, gram order is
/// retention order.
#[derive(Serialize, Deserialize)]
struct ProfileFile {
    language: LanguageCode,
    n: usize,
    top_fraction: f64,
    grams: Vec<String>,
}

/// Write a profile cache file.
pub fn save_profile(profile: &NgramProfile, path: &Path) -> Result<()> {
    let file = ProfileFile {
        language: profile.language,
        n: profile.n,
        top_fraction: profile.top_fraction,
        grams: profile.grams.clone(),
    };
    fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
    Ok(())
}

/// Load a profile cache file. Counts are not stored, so frequencies are
/// unavailable on loaded profiles.
pub fn load_profile(path: &Path) -> Result<NgramProfile> {
    let file: ProfileFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    check_n(file.n)?;
    check_fraction(file.top_fraction)?;
    let gram_set = file.grams.iter().cloned().collect();
    Ok(NgramProfile {
        language: file.language,
        n: file.n,
        top_fraction: file.top_fraction,
        grams: file.grams,
        gram_set,
        frequencies: HashMap::new(),
    })
}
