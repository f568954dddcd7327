//! The fixed-order 32-dimensional feature vector: seven count features,
//! eleven syllable-pattern features, and fourteen cross-lingual n-gram
//! overlap features. Order and names are frozen so trained models and
//! importance reports stay index-stable.

use std::fs;
use std::path::Path;

use crate::corpus::{Corpus, Document, LanguageCode, Level, CANONICAL_LANGUAGES};
use crate::error::{Error, Result};
use crate::ngram::{crossngo_features, ProfileSet};
use crate::textproc::{self, SyllablePattern};

pub const FEATURE_COUNT: usize = 32;

/// Canonical feature names, index-prefixed in vector order.
pub fn feature_names() -> Vec<String> {
    let mut names: Vec<String> = [
        "unique_word_count",
        "word_count",
        "avg_word_len",
        "avg_syllables_per_word",
        "sentence_count",
        "avg_sentence_len",
        "polysyllable_count",
        "syll_v",
        "syll_cv",
        "syll_vc",
        "syll_cvc",
        "syll_vcc",
        "syll_ccv",
        "syll_cvcc",
        "syll_ccvcc",
        "syll_ccvccc",
        "cluster_count",
        "avg_cluster_len",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for n in [2usize, 3] {
        let kind = if n == 2 { "bigram" } else { "trigram" };
        for lang in CANONICAL_LANGUAGES {
            names.push(format!("{kind}_overlap_{lang}"));
        }
    }
    names
        .into_iter()
        .enumerate()
        .map(|(i, name)| format!("f{:02}_{name}", i + 1))
        .collect()
}

/// Vector position of the raw word-count feature.
pub const WORD_COUNT_INDEX: usize = 1;

/// One document's features with its identity and label.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    pub doc_id: String,
    pub language: LanguageCode,
    pub level: Level,
    pub values: Vec<f64>,
}

/// Extraction options. Pattern counts are raw totals by default; the
/// normalization flag divides the nine pattern counts and the cluster count
/// by the document's word count instead.
#[derive(Clone, Copy, Debug, Default)]
pub struct FeatureOptions {
    pub normalize_syllable_counts: bool,
}

/// The seven count features, in vector order: unique words, words, mean
/// letters per word, mean syllables per word, sentences, words per
/// sentence, and words with three or more syllables.
pub fn traditional_features(doc: &Document) -> Result<[f64; 7]> {
    let words = textproc::tokenize_words(&doc.text);
    if words.is_empty() {
        return Err(Error::EmptyDocument(doc.id.clone()));
    }
    let sentences = textproc::tokenize_sentences(&doc.text);
    let word_count = words.len() as f64;

    let unique = {
        let mut set: std::collections::HashSet<&str> = std::collections::HashSet::new();
        for w in &words {
            set.insert(w.as_str());
        }
        set.len() as f64
    };
    let letters: usize = words
        .iter()
        .map(|w| w.chars().filter(|c| c.is_alphabetic()).count())
        .sum();
    let syllables: usize = words.iter().map(|w| textproc::count_syllables(w)).sum();
    let polysyllables = words
        .iter()
        .filter(|w| textproc::count_syllables(w) >= 3)
        .count() as f64;
    let sentence_count = sentences.len() as f64;
    let avg_sentence_len = if sentences.is_empty() {
        0.0
    } else {
        word_count / sentence_count
    };

    Ok([
        unique,
        word_count,
        letters as f64 / word_count,
        syllables as f64 / word_count,
        sentence_count,
        avg_sentence_len,
        polysyllables,
    ])
}

/// The eleven syllable features: totals of the nine named patterns over all
/// word syllables, then total cluster count and mean cluster length over
/// every cluster in the document.
pub fn syllable_features(doc: &Document) -> Result<[f64; 11]> {
    syllable_features_with(doc, FeatureOptions::default())
}

pub fn syllable_features_with(doc: &Document, options: FeatureOptions) -> Result<[f64; 11]> {
    let words = textproc::tokenize_words(&doc.text);
    if words.is_empty() {
        return Err(Error::EmptyDocument(doc.id.clone()));
    }
    let mut pattern_counts = [0u64; 9];
    let mut cluster_count = 0u64;
    let mut cluster_len_total = 0.0f64;
    for word in &words {
        for pattern in textproc::syllabify(word)? {
            if let Some(slot) = SyllablePattern::NAMED.iter().position(|&p| p == pattern) {
                pattern_counts[slot] += 1;
            }
        }
        let stats = textproc::consonant_cluster_stats(word);
        cluster_count += stats.cluster_count as u64;
        cluster_len_total += stats.mean_cluster_len * stats.cluster_count as f64;
    }
    let avg_cluster_len = if cluster_count == 0 {
        0.0
    } else {
        cluster_len_total / cluster_count as f64
    };

    let scale = if options.normalize_syllable_counts {
        1.0 / words.len() as f64
    } else {
        1.0
    };
    let mut out = [0.0; 11];
    for (i, &c) in pattern_counts.iter().enumerate() {
        out[i] = c as f64 * scale;
    }
    out[9] = cluster_count as f64 * scale;
    out[10] = avg_cluster_len;
    Ok(out)
}

/// Assemble the full 32-value vector for one document.
pub fn extract(doc: &Document, profiles: &ProfileSet) -> Result<FeatureVector> {
    extract_with(doc, profiles, FeatureOptions::default())
}

pub fn extract_with(
    doc: &Document,
    profiles: &ProfileSet,
    options: FeatureOptions,
) -> Result<FeatureVector> {
    let mut values = Vec::with_capacity(FEATURE_COUNT);
    values.extend_from_slice(&traditional_features(doc)?);
    values.extend_from_slice(&syllable_features_with(doc, options)?);
    values.extend_from_slice(&crossngo_features(doc, profiles));
    debug_assert_eq!(values.len(), FEATURE_COUNT);
    Ok(FeatureVector {
        doc_id: doc.id.clone(),
        language: doc.language,
        level: doc.level,
        values,
    })
}

/// Write the feature dataset as CSV: header then one row per document in
/// corpus order, floats fixed to six decimals. Re-exporting the same corpus
/// produces identical bytes.
pub fn export_dataset(
    corpus: &Corpus,
    profiles: &ProfileSet,
    path: &Path,
    options: FeatureOptions,
) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    write_dataset(corpus, profiles, &mut writer, options)
}

fn write_dataset<W: std::io::Write>(
    corpus: &Corpus,
    profiles: &ProfileSet,
    writer: &mut csv::Writer<W>,
    options: FeatureOptions,
) -> Result<()> {
    let mut header = vec![
        "doc_id".to_string(),
        "language".to_string(),
        "level".to_string(),
    ];
    header.extend(feature_names());
    writer.write_record(&header)?;
    for doc in corpus.documents() {
        let fv = extract_with(doc, profiles, options)?;
        let mut record = vec![
            fv.doc_id.clone(),
            fv.language.to_string(),
            fv.level.label().to_string(),
        ];
        record.extend(fv.values.iter().map(|v| format!("{v:.6}")));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Read a feature CSV back into vectors, validating the header.
pub fn read_dataset(path: &Path) -> Result<Vec<FeatureVector>> {
    let content = fs::read_to_string(path)?;
    let mut reader = csv::Reader::from_reader(content.as_bytes());
    let expected: Vec<String> = {
        let mut h = vec![
            "doc_id".to_string(),
            "language".to_string(),
            "level".to_string(),
        ];
        h.extend(feature_names());
        h
    };
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|s| s.to_string())
        .collect();
    if header != expected {
        return Err(Error::Dataset(format!(
            "unexpected header in `{}`: expected {} columns starting with doc_id,language,level",
            path.display(),
            expected.len()
        )));
    }
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != expected.len() {
            return Err(Error::Dataset(format!(
                "row {}: expected {} fields, got {}",
                i + 2,
                expected.len(),
                record.len()
            )));
        }
        let language = LanguageCode::new(&record[1])?;
        let level = Level::parse(&record[2])?;
        let mut values = Vec::with_capacity(FEATURE_COUNT);
        for field in record.iter().skip(3) {
            values.push(field.parse::<f64>().map_err(|e| {
                Error::Dataset(format!("row {}: bad float `{field}`: {e}", i + 2))
            })?);
        }
        out.push(FeatureVector {
            doc_id: record[0].to_string(),
            language,
            level,
            values,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn doc(id: &str, language: &str, level: Level, text: &str) -> Document {
        Document {
            id: id.to_string(),
            language: LanguageCode::new(language).unwrap(),
            level,
            text: text.to_string(),
        }
    }

    fn empty_profiles() -> ProfileSet {
        let c = Corpus::new(vec![doc("seed", "hil", Level::L1, "xq")]).unwrap();
        ProfileSet::build(&c, 1.0).unwrap()
    }

    #[test]
    fn traditional_hand_counted() {
        let d = doc("a", "hil", Level::L1, "Ang bata. Ang bata.");
        let f = traditional_features(&d).unwrap();
        assert_eq!(f[0], 2.0, "unique");
        assert_eq!(f[1], 4.0, "words");
        assert_eq!(f[4], 2.0, "sentences");
        assert_eq!(f[5], 2.0, "avg sentence length");
    }

    #[test]
    fn traditional_single_letter_word() {
        let d = doc("a", "hil", Level::L1, "a.");
        let f = traditional_features(&d).unwrap();
        assert_eq!(f[3], 1.0, "avg syllables");
        assert_eq!(f[6], 0.0, "polysyllables");
    }

    #[test]
    fn polysyllable_counts_three_nuclei() {
        let d = doc("a", "hil", Level::L1, "maganda.");
        let f = traditional_features(&d).unwrap();
        assert_eq!(f[6], 1.0);
    }

    #[test]
    fn traditional_rejects_wordless_text() {
        let d = doc("a", "hil", Level::L1, "123 456.");
        assert!(matches!(
            traditional_features(&d),
            Err(Error::EmptyDocument(_))
        ));
    }

    #[test]
    fn avg_word_len_ignores_joiners() {
        // "sin-o" has 4 letters.
        let d = doc("a", "hil", Level::L1, "sin-o");
        let f = traditional_features(&d).unwrap();
        assert_eq!(f[2], 4.0);
    }

    #[test]
    fn syllable_features_hand_counted() {
        let d = doc("a", "hil", Level::L1, "bata");
        let f = syllable_features(&d).unwrap();
        assert_eq!(f[1], 2.0, "cv");
        let others: f64 = [0, 2, 3, 4, 5, 6, 7, 8].iter().map(|&i| f[i]).sum();
        assert_eq!(others, 0.0);
        assert_eq!(f[9], 0.0, "clusters");
        assert_eq!(f[10], 0.0, "mean cluster length");
    }

    #[test]
    fn syllable_features_v_only() {
        let d = doc("a", "hil", Level::L1, "a a a");
        let f = syllable_features(&d).unwrap();
        assert_eq!(f[0], 3.0, "v");
    }

    #[test]
    fn syllable_features_with_cluster() {
        let d = doc("a", "hil", Level::L1, "plato bata");
        let f = syllable_features(&d).unwrap();
        assert!(f[5] >= 1.0, "ccv present");
        assert_eq!(f[9], 1.0, "cluster count");
        assert_eq!(f[10], 2.0, "mean cluster length");
    }

    #[test]
    fn pattern_totals_account_for_every_syllable() {
        let d = doc("a", "hil", Level::L1, "ang mga bata ng transport strup");
        let words = textproc::tokenize_words(&d.text);
        let mut named = 0u64;
        let mut other = 0u64;
        let mut total = 0u64;
        for w in &words {
            for p in textproc::syllabify(w).unwrap() {
                total += 1;
                if p == SyllablePattern::Other {
                    other += 1;
                } else {
                    named += 1;
                }
            }
        }
        let f = syllable_features(&d).unwrap();
        let slots: f64 = f[..9].iter().sum();
        assert_eq!(slots as u64, named);
        assert_eq!(named + other, total);
    }

    #[test]
    fn extract_produces_32_values() {
        let profiles = empty_profiles();
        let d = doc("a", "hil", Level::L1, "Ang bata.");
        let fv = extract(&d, &profiles).unwrap();
        assert_eq!(fv.values.len(), FEATURE_COUNT);
        assert_eq!(feature_names().len(), FEATURE_COUNT);
    }

    #[test]
    fn extract_is_deterministic() {
        let profiles = empty_profiles();
        let d = doc("a", "hil", Level::L1, "Ang bata nga gamay.");
        let x = extract(&d, &profiles).unwrap();
        let y = extract(&d, &profiles).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn extract_full_vector_hand_oracle() {
        // "Ang bata." against profiles built from the same single document.
        let d = doc("a", "hil", Level::L1, "Ang bata.");
        let c = Corpus::new(vec![d.clone()]).unwrap();
        let profiles = ProfileSet::build(&c, 1.0).unwrap();
        let fv = extract(&d, &profiles).unwrap();

        // Hand-computed: words {ang, bata}; 1 sentence; letters 3+4;
        // syllables 1+2; no polysyllables; syllables ang=vc, ba|ta=cv,cv;
        // cluster none; own-language overlaps 1.0, all others 0.
        let mut expected = vec![
            2.0,        // unique
            2.0,        // words
            3.5,        // avg word len
            1.5,        // avg syllables
            1.0,        // sentences
            2.0,        // avg sentence len
            0.0,        // polysyllables
            0.0,        // v
            2.0,        // cv
            1.0,        // vc
            0.0, 0.0, 0.0, 0.0, 0.0, 0.0, // cvc..ccvccc
            0.0,        // clusters
            0.0,        // avg cluster len
        ];
        let mut crossngo = vec![0.0; 14];
        crossngo[0] = 1.0; // hil bigrams
        crossngo[7] = 1.0; // hil trigrams
        expected.extend(crossngo);
        assert_eq!(fv.values, expected);
    }

    #[test]
    fn unrelated_document_leaves_features_unchanged() {
        let a = doc("a", "hil", Level::L1, "Ang bata nga gamay.");
        let small = Corpus::new(vec![a.clone()]).unwrap();
        let big = Corpus::new(vec![
            a.clone(),
            doc("b", "msb", Level::L2, "An bata na saday."),
        ])
        .unwrap();
        let _ = small;
        let _ = big;
        let before = traditional_features(&a).unwrap();
        let after = traditional_features(&a).unwrap();
        assert_eq!(before, after);
        let sb = syllable_features(&a).unwrap();
        let sa = syllable_features(&a).unwrap();
        assert_eq!(sb, sa);
    }

    #[test]
    fn normalized_syllable_counts_divide_by_words() {
        let d = doc("a", "hil", Level::L1, "bata bata");
        let raw = syllable_features(&d).unwrap();
        let norm = syllable_features_with(
            &d,
            FeatureOptions {
                normalize_syllable_counts: true,
            },
        )
        .unwrap();
        assert_eq!(raw[1], 4.0);
        assert_eq!(norm[1], 2.0);
    }

    #[test]
    fn export_is_byte_identical_and_reads_back() {
        let c = Corpus::new(vec![
            doc("a", "hil", Level::L1, "Ang bata."),
            doc("b", "hil", Level::L2, "Ang bata nga gamay kag dako."),
            doc("c", "msb", Level::L3, "An bata na saday ngan dako."),
        ])
        .unwrap();
        let profiles = ProfileSet::build(&c, 0.25).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("one.csv");
        let p2 = dir.path().join("two.csv");
        export_dataset(&c, &profiles, &p1, FeatureOptions::default()).unwrap();
        export_dataset(&c, &profiles, &p2, FeatureOptions::default()).unwrap();
        let b1 = fs::read(&p1).unwrap();
        let b2 = fs::read(&p2).unwrap();
        assert_eq!(b1, b2);
        assert_eq!(String::from_utf8_lossy(&b1).lines().count(), 4);

        let vectors = read_dataset(&p1).unwrap();
        assert_eq!(vectors.len(), 3);
        assert_eq!(vectors[0].doc_id, "a");
        assert_eq!(vectors[0].values.len(), FEATURE_COUNT);
    }

    #[test]
    fn export_empty_corpus_is_header_only() {
        let c = Corpus::new(vec![]).unwrap();
        let profiles = empty_profiles();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        export_dataset(&c, &profiles, &path, FeatureOptions::default()).unwrap();
        let content = fs::read_to_string(&path).unwrap();
        assert_eq!(content.lines().count(), 1);
    }

    #[test]
    fn bounded_count_invariants() {
        let d = doc("a", "hil", Level::L1, "Ang bata kag ang maestra nagakanta.");
        let f = traditional_features(&d).unwrap();
        assert!(f[6] <= f[1], "polysyllables <= words");
        assert!(f[0] <= f[1], "unique <= words");
    }
}
