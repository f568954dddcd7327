//! Leveled corpus ingestion, validation, per-level statistics, and the
//! language family tree behind the cross-lingual training setups.
//!
//! Corpora arrive as JSON Lines manifests (one document per line with `id`,
//! `language`, `level`, `text`); a directory-tree importer
//! (`<lang>/<level>/<id>.txt`) is provided as a convenience converter.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::textproc;

/// A three-letter lowercase language code from the registry.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageCode([u8; 3]);

impl LanguageCode {
    pub fn new(code: &str) -> Result<Self> {
        let bytes = code.as_bytes();
        if bytes.len() == 3 && bytes.iter().all(|b| b.is_ascii_lowercase()) {
            Ok(LanguageCode([bytes[0], bytes[1], bytes[2]]))
        } else {
            Err(Error::InvalidLanguageCode(code.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("codes are ASCII")
    }
}

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LanguageCode({})", self.as_str())
    }
}

impl Serialize for LanguageCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for LanguageCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        LanguageCode::new(&s).map_err(D::Error::custom)
    }
}

/// The seven languages scored by the cross-lingual overlap features, in
/// their fixed feature order.
pub const CANONICAL_LANGUAGES: [LanguageCode; 7] = [
    LanguageCode(*b"hil"),
    LanguageCode(*b"msb"),
    LanguageCode(*b"krj"),
    LanguageCode(*b"bto"),
    LanguageCode(*b"tgl"),
    LanguageCode(*b"ceb"),
    LanguageCode(*b"bcl"),
];

/// A reading level; exactly three classes, ordered L1 < L2 < L3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    L1,
    L2,
    L3,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::L1, Level::L2, Level::L3];

    pub fn parse(label: &str) -> Result<Self> {
        match label {
            "L1" => Ok(Level::L1),
            "L2" => Ok(Level::L2),
            "L3" => Ok(Level::L3),
            other => Err(Error::UnknownLevel(other.to_string())),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Level::L1 => "L1",
            Level::L2 => "L2",
            Level::L3 => "L3",
        }
    }

    /// Zero-based class index.
    pub fn index(self) -> usize {
        match self {
            Level::L1 => 0,
            Level::L2 => 1,
            Level::L3 => 2,
        }
    }

    /// One-based ordinal, L1 = 1.
    pub fn ordinal(self) -> usize {
        self.index() + 1
    }

    pub fn from_index(index: usize) -> Option<Level> {
        Level::ALL.get(index).copied()
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Level::parse(&s).map_err(D::Error::custom)
    }
}

/// One leveled story.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub language: LanguageCode,
    pub level: Level,
    pub text: String,
}

/// An immutable, deterministically ordered collection of documents.
///
/// Iteration order is sorted by (language, level, id) regardless of the
/// order records were read in, so every downstream computation is
/// permutation-invariant with respect to manifest line order.
#[derive(Clone, Debug)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    /// Validate and sort documents into canonical corpus order.
    pub fn new(mut documents: Vec<Document>) -> Result<Self> {
        for doc in &documents {
            if doc.id.is_empty() {
                return Err(Error::Dataset("document with empty id".to_string()));
            }
            if doc.text.trim().is_empty() {
                return Err(Error::Dataset(format!(
                    "document `{}` has empty text",
                    doc.id
                )));
            }
        }
        documents.sort_by(|a, b| {
            (a.language, a.level, a.id.as_str()).cmp(&(b.language, b.level, b.id.as_str()))
        });
        let mut seen: HashSet<(LanguageCode, &str)> = HashSet::new();
        for doc in &documents {
            if !seen.insert((doc.language, doc.id.as_str())) {
                return Err(Error::Dataset(format!(
                    "duplicate id `{}` for language `{}`",
                    doc.id, doc.language
                )));
            }
        }
        Ok(Corpus { documents })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Distinct languages, in corpus order.
    pub fn languages(&self) -> Vec<LanguageCode> {
        let mut out = Vec::new();
        for doc in &self.documents {
            if out.last() != Some(&doc.language) {
                out.push(doc.language);
            }
        }
        out
    }

    pub fn of_language(&self, language: LanguageCode) -> Vec<&Document> {
        self.documents
            .iter()
            .filter(|d| d.language == language)
            .collect()
    }
}

/// One language's position in the family tree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub name: String,
    pub parent: Option<LanguageCode>,
    pub national: LanguageCode,
}

/// Per-language metadata: display name, parent (lingua franca) language,
/// and national language. Shipped as a data file so other language families
/// can reuse the tool; the embedded default covers the seven-language
/// registry.
#[derive(Clone, Debug)]
pub struct FamilyTree {
    entries: BTreeMap<LanguageCode, FamilyEntry>,
}

const DEFAULT_TREE_JSON: &str = include_str!("../data/family_tree.json");

impl FamilyTree {
    pub fn from_json_str(json: &str) -> Result<Self> {
        let entries: BTreeMap<LanguageCode, FamilyEntry> = serde_json::from_str(json)?;
        let tree = FamilyTree { entries };
        tree.validate()?;
        Ok(tree)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json_str(&fs::read_to_string(path)?)
    }

    /// The embedded default tree.
    pub fn default_tree() -> Self {
        Self::from_json_str(DEFAULT_TREE_JSON).expect("embedded tree is valid")
    }

    fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::FamilyTree("tree has no entries".to_string()));
        }
        for (code, entry) in &self.entries {
            if let Some(parent) = entry.parent {
                if !self.entries.contains_key(&parent) {
                    return Err(Error::FamilyTree(format!(
                        "parent `{parent}` of `{code}` is not registered"
                    )));
                }
                if parent == *code {
                    return Err(Error::FamilyTree(format!("`{code}` is its own parent")));
                }
            }
            if !self.entries.contains_key(&entry.national) {
                return Err(Error::FamilyTree(format!(
                    "national language `{}` of `{code}` is not registered",
                    entry.national
                )));
            }
        }
        // Parent chains must terminate.
        for start in self.entries.keys() {
            let mut seen = HashSet::new();
            let mut cur = *start;
            while let Some(parent) = self.entries[&cur].parent {
                if !seen.insert(cur) {
                    return Err(Error::FamilyTree(format!(
                        "cycle in parent chain starting at `{start}`"
                    )));
                }
                cur = parent;
            }
        }
        Ok(())
    }

    pub fn contains(&self, language: LanguageCode) -> bool {
        self.entries.contains_key(&language)
    }

    /// Registered codes in sorted order.
    pub fn codes(&self) -> Vec<LanguageCode> {
        self.entries.keys().copied().collect()
    }

    pub fn lookup(&self, language: LanguageCode) -> Result<&FamilyEntry> {
        self.entries
            .get(&language)
            .ok_or_else(|| Error::UnknownLanguage(language.to_string()))
    }
}

/// Shape of one manifest record. Extra fields are tolerated (with a warning
/// on stderr) so manifests can carry provenance metadata.
#[derive(Deserialize)]
struct ManifestRecord {
    id: Option<serde_json::Value>,
    language: Option<serde_json::Value>,
    level: Option<serde_json::Value>,
    text: Option<serde_json::Value>,
    #[serde(flatten)]
    extra: BTreeMap<String, serde_json::Value>,
}

fn manifest_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Manifest {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn required_str(
    field: Option<serde_json::Value>,
    name: &str,
    path: &Path,
    line: usize,
) -> Result<String> {
    match field {
        Some(serde_json::Value::String(s)) => Ok(s),
        Some(_) => Err(manifest_err(path, line, format!("field `{name}` must be a string"))),
        None => Err(manifest_err(path, line, format!("missing field `{name}`"))),
    }
}

/// Load a JSON Lines manifest, validating language codes against the given
/// family tree's registry. Blank lines are skipped.
pub fn load_corpus_with_tree(manifest_path: &Path, tree: &FamilyTree) -> Result<Corpus> {
    let file = fs::File::open(manifest_path).map_err(|e| {
        Error::Manifest {
            path: manifest_path.display().to_string(),
            line: 0,
            message: format!("cannot open manifest: {e}"),
        }
    })?;
    let reader = BufReader::new(file);
    let mut documents = Vec::new();
    let mut seen: HashSet<(LanguageCode, String)> = HashSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ManifestRecord = serde_json::from_str(&line)
            .map_err(|e| manifest_err(manifest_path, line_no, format!("malformed record: {e}")))?;

        for key in record.extra.keys() {
            eprintln!(
                "warning: {}:{line_no}: ignoring unknown field `{key}`",
                manifest_path.display()
            );
        }

        let id = required_str(record.id, "id", manifest_path, line_no)?;
        if id.is_empty() {
            return Err(manifest_err(manifest_path, line_no, "empty `id`"));
        }
        let lang_str = required_str(record.language, "language", manifest_path, line_no)?;
        let language = LanguageCode::new(&lang_str)
            .map_err(|e| manifest_err(manifest_path, line_no, e.to_string()))?;
        if !tree.contains(language) {
            return Err(manifest_err(
                manifest_path,
                line_no,
                format!("unknown language code `{language}`"),
            ));
        }
        let level_str = required_str(record.level, "level", manifest_path, line_no)?;
        let level = Level::parse(&level_str)
            .map_err(|e| manifest_err(manifest_path, line_no, e.to_string()))?;
        let text = required_str(record.text, "text", manifest_path, line_no)?;
        if text.trim().is_empty() {
            return Err(manifest_err(manifest_path, line_no, "empty `text`"));
        }

        if !seen.insert((language, id.clone())) {
            return Err(manifest_err(
                manifest_path,
                line_no,
                format!("duplicate id `{id}` for language `{language}`"),
            ));
        }
        documents.push(Document {
            id,
            language,
            level,
            text,
        });
    }

    Corpus::new(documents)
}

/// Load a manifest against the default family tree.
pub fn load_corpus(manifest_path: &Path) -> Result<Corpus> {
    load_corpus_with_tree(manifest_path, &FamilyTree::default_tree())
}

/// Import a `<lang>/<level>/<id>.txt` directory tree as a corpus.
pub fn import_directory(root: &Path, tree: &FamilyTree) -> Result<Corpus> {
    let mut documents = Vec::new();
    for lang_entry in sorted_dir(root)? {
        if !lang_entry.is_dir() {
            continue;
        }
        let lang_name = file_name(&lang_entry);
        let language = LanguageCode::new(&lang_name)?;
        if !tree.contains(language) {
            return Err(Error::UnknownLanguage(lang_name));
        }
        for level_entry in sorted_dir(&lang_entry)? {
            if !level_entry.is_dir() {
                continue;
            }
            let level = Level::parse(&file_name(&level_entry))?;
            for file in sorted_dir(&level_entry)? {
                if file.extension().and_then(|e| e.to_str()) != Some("txt") {
                    continue;
                }
                let id = file
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or_default()
                    .to_string();
                let text = fs::read_to_string(&file)?;
                documents.push(Document {
                    id,
                    language,
                    level,
                    text,
                });
            }
        }
    }
    Corpus::new(documents)
}

fn sorted_dir(path: &Path) -> Result<Vec<std::path::PathBuf>> {
    let mut entries: Vec<_> = fs::read_dir(path)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|e| e.path())
        .collect();
    entries.sort();
    Ok(entries)
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .and_then(|s| s.to_str())
        .unwrap_or_default()
        .to_string()
}

/// Write a corpus back out as a JSON Lines manifest, in corpus order.
pub fn write_manifest(corpus: &Corpus, path: &Path) -> Result<()> {
    let mut out = String::new();
    for doc in corpus.documents() {
        out.push_str(&serde_json::to_string(doc)?);
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Per-level summary statistics for one language.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelStats {
    pub document_count: usize,
    pub mean_word_count: f64,
    pub mean_sentence_count: f64,
    /// Distinct lowercased word types across the level.
    pub vocabulary: usize,
}

/// Per-level document counts, mean word/sentence counts, and vocabulary
/// size for one language. Only levels with at least one document appear.
pub fn corpus_stats(
    corpus: &Corpus,
    language: LanguageCode,
) -> Result<BTreeMap<Level, LevelStats>> {
    let docs = corpus.of_language(language);
    if docs.is_empty() {
        return Err(Error::NoDocuments(language.to_string()));
    }
    let mut by_level: BTreeMap<Level, Vec<&Document>> = BTreeMap::new();
    for doc in docs {
        by_level.entry(doc.level).or_default().push(doc);
    }
    let mut stats = BTreeMap::new();
    for (level, docs) in by_level {
        let mut word_total = 0usize;
        let mut sentence_total = 0usize;
        let mut vocab: HashSet<String> = HashSet::new();
        for doc in &docs {
            let words = textproc::tokenize_words(&doc.text);
            word_total += words.len();
            sentence_total += textproc::tokenize_sentences(&doc.text).len();
            vocab.extend(words);
        }
        let n = docs.len() as f64;
        stats.insert(
            level,
            LevelStats {
                document_count: docs.len(),
                mean_word_count: word_total as f64 / n,
                mean_sentence_count: sentence_total as f64 / n,
                vocabulary: vocab.len(),
            },
        );
    }
    Ok(stats)
}

/// Resolved family relations for one language.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyRelations {
    pub parent: Option<LanguageCode>,
    pub national: LanguageCode,
}

/// Look up a language's parent and national language.
pub fn family_lookup(tree: &FamilyTree, language: LanguageCode) -> Result<FamilyRelations> {
    let entry = tree.lookup(language)?;
    Ok(FamilyRelations {
        parent: entry.parent,
        national: entry.national,
    })
}

/// Render per-language stats in the leveled-table layout used by reports.
pub fn render_stats_table(per_language: &[(LanguageCode, BTreeMap<Level, LevelStats>)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:>6}  {:<6} {:>10} {:>12} {:>12} {:>12}\n",
        "Language", "Total", "Level", "Docs", "Mean Words", "Mean Sents", "Vocabulary"
    ));
    for (language, stats) in per_language {
        let total: usize = stats.values().map(|s| s.document_count).sum();
        let mut first = true;
        for (level, s) in stats {
            out.push_str(&format!(
                "{:<10} {:>6}  {:<6} {:>10} {:>12.1} {:>12.1} {:>12}\n",
                if first { language.as_str() } else { "" },
                if first { total.to_string() } else { String::new() },
                level.label(),
                s.document_count,
                s.mean_word_count,
                s.mean_sentence_count,
                s.vocabulary
            ));
            first = false;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn lang(code: &str) -> LanguageCode {
        LanguageCode::new(code).unwrap()
    }

    fn doc(id: &str, language: &str, level: Level, text: &str) -> Document {
        Document {
            id: id.to_string(),
            language: lang(language),
            level,
            text: text.to_string(),
        }
    }

    fn write_manifest_lines(lines: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        for line in lines {
            writeln!(f, "{line}").unwrap();
        }
        f
    }

    #[test]
    fn language_codes_validate_shape() {
        assert!(LanguageCode::new("hil").is_ok());
        assert!(LanguageCode::new("HIL").is_err());
        assert!(LanguageCode::new("hi").is_err());
        assert!(LanguageCode::new("hill").is_err());
        assert!(LanguageCode::new("h1l").is_err());
    }

    #[test]
    fn levels_order_and_parse() {
        assert!(Level::L1 < Level::L2 && Level::L2 < Level::L3);
        assert_eq!(Level::parse("L2").unwrap(), Level::L2);
        assert!(Level::parse("L4").is_err());
        assert_eq!(Level::L1.ordinal(), 1);
    }

    #[test]
    fn load_single_record() {
        let f = write_manifest_lines(&[
            r#"{"id":"s1","language":"hil","level":"L1","text":"Ang bata."}"#,
        ]);
        let corpus = load_corpus(f.path()).unwrap();
        assert_eq!(corpus.len(), 1);
        assert_eq!(corpus.documents()[0].id, "s1");
    }

    #[test]
    fn load_rejects_duplicates() {
        let f = write_manifest_lines(&[
            r#"{"id":"s1","language":"hil","level":"L1","text":"Ang bata."}"#,
            r#"{"id":"s1","language":"hil","level":"L2","text":"Ang bata gid."}"#,
        ]);
        let err = load_corpus(f.path()).unwrap_err().to_string();
        assert!(err.contains("duplicate id"), "{err}");
        assert!(err.contains(":2:"), "{err}");
    }

    #[test]
    fn load_rejects_malformed_line_with_number() {
        let f = write_manifest_lines(&[
            r#"{"id":"s1","language":"hil","level":"L1","text":"Ang bata."}"#,
            r#"{"id":"s2""#,
        ]);
        let err = load_corpus(f.path()).unwrap_err().to_string();
        assert!(err.contains(":2:"), "{err}");
    }

    #[test]
    fn load_rejects_unknown_language_and_level() {
        let f = write_manifest_lines(&[r#"{"id":"a","language":"xxx","level":"L1","text":"t"}"#]);
        assert!(load_corpus(f.path()).is_err());
        let f = write_manifest_lines(&[r#"{"id":"a","language":"hil","level":"L4","text":"t"}"#]);
        assert!(load_corpus(f.path()).is_err());
    }

    #[test]
    fn load_rejects_blank_text() {
        let f = write_manifest_lines(&[r#"{"id":"a","language":"hil","level":"L1","text":"  "}"#]);
        assert!(load_corpus(f.path()).is_err());
    }

    #[test]
    fn corpus_order_is_independent_of_line_order() {
        let lines = [
            r#"{"id":"b","language":"msb","level":"L2","text":"Isa duha."}"#,
            r#"{"id":"a","language":"hil","level":"L1","text":"Ang bata."}"#,
            r#"{"id":"c","language":"hil","level":"L3","text":"Madamo nga bata."}"#,
        ];
        let forward = load_corpus(write_manifest_lines(&lines).path()).unwrap();
        let mut reversed_lines = lines;
        reversed_lines.reverse();
        let reversed = load_corpus(write_manifest_lines(&reversed_lines).path()).unwrap();
        assert_eq!(forward.documents(), reversed.documents());
    }

    #[test]
    fn stats_hand_counted() {
        let corpus = Corpus::new(vec![
            doc("a", "hil", Level::L1, "Isa duha tatlo."),
            doc("b", "hil", Level::L1, "Isa duha tatlo apat lima."),
        ])
        .unwrap();
        let stats = corpus_stats(&corpus, lang("hil")).unwrap();
        let l1 = &stats[&Level::L1];
        assert_eq!(l1.document_count, 2);
        assert_eq!(l1.mean_word_count, 4.0);
        assert_eq!(l1.mean_sentence_count, 1.0);
        assert_eq!(l1.vocabulary, 5);
    }

    #[test]
    fn stats_error_for_absent_language() {
        let corpus = Corpus::new(vec![doc("a", "hil", Level::L1, "Ang bata.")]).unwrap();
        assert!(matches!(
            corpus_stats(&corpus, lang("msb")),
            Err(Error::NoDocuments(_))
        ));
    }

    #[test]
    fn vocabulary_never_exceeds_tokens() {
        let corpus = Corpus::new(vec![
            doc("a", "hil", Level::L1, "ang ang ang bata"),
            doc("b", "hil", Level::L1, "ang bata bata"),
        ])
        .unwrap();
        let stats = corpus_stats(&corpus, lang("hil")).unwrap();
        let l1 = &stats[&Level::L1];
        let tokens = (l1.mean_word_count * l1.document_count as f64).round() as usize;
        assert!(l1.vocabulary <= tokens);
        assert_eq!(l1.vocabulary, 2);
    }

    #[test]
    fn default_tree_relations() {
        let tree = FamilyTree::default_tree();
        let hil = family_lookup(&tree, lang("hil")).unwrap();
        assert_eq!(hil.parent, Some(lang("ceb")));
        assert_eq!(hil.national, lang("tgl"));

        let bto = family_lookup(&tree, lang("bto")).unwrap();
        assert_eq!(bto.parent, Some(lang("bcl")));
        assert_eq!(bto.national, lang("tgl"));

        let tgl = family_lookup(&tree, lang("tgl")).unwrap();
        assert_eq!(tgl.parent, None);
        assert_eq!(tgl.national, lang("tgl"));

        assert!(family_lookup(&tree, lang("xyz")).is_err());
    }

    #[test]
    fn tree_rejects_cycles_and_unregistered_parents() {
        let cyclic = r#"{
            "aaa": { "name": "A", "parent": "bbb", "national": "aaa" },
            "bbb": { "name": "B", "parent": "aaa", "national": "aaa" }
        }"#;
        assert!(FamilyTree::from_json_str(cyclic).is_err());

        let dangling = r#"{ "aaa": { "name": "A", "parent": "zzz", "national": "aaa" } }"#;
        assert!(FamilyTree::from_json_str(dangling).is_err());
    }

    #[test]
    fn directory_import_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let story = dir.path().join("hil/L1");
        fs::create_dir_all(&story).unwrap();
        fs::write(story.join("s1.txt"), "Ang bata.").unwrap();
        fs::write(story.join("s2.txt"), "Ang adlaw.").unwrap();
        let tree = FamilyTree::default_tree();
        let corpus = import_directory(dir.path(), &tree).unwrap();
        assert_eq!(corpus.len(), 2);

        let manifest = dir.path().join("m.jsonl");
        write_manifest(&corpus, &manifest).unwrap();
        let reloaded = load_corpus(&manifest).unwrap();
        assert_eq!(reloaded.documents(), corpus.documents());
    }
}
