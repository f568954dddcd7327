//! Hierarchy-based cross-lingual experiment grid: five training setups per
//! target language, stratified k-fold evaluation with leakage-free per-fold
//! n-gram profiles, accuracy reporting, significance testing, and
//! top-feature reports.

pub mod kfold;
pub mod ttest;

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::corpus::{Corpus, Document, FamilyTree, LanguageCode};
use crate::error::{Error, Result};
use crate::features::{extract, FeatureVector};
use crate::forest::{fit, mdi_importance, Dataset, Forest, ForestParams};
use crate::ngram::ProfileSet;
use crate::rng::{derive_seed, stream_rng};

pub use kfold::stratified_kfold;
pub use ttest::{paired_ttest, t_survival, Tail, TTestResult};

// Stream indices for seed derivation within one experiment cell.
const STREAM_KFOLD: u64 = 1;
const STREAM_FOREST_BASE: u64 = 0x100;
const STREAM_BALANCE_BASE: u64 = 0x200;
const STREAM_FULL_MODEL: u64 = 0x300;

/// The five training setups: target folds alone, plus the parent language,
/// plus the national language, plus both, or plus every other registered
/// language in full.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Setup {
    Mono,
    WithParent,
    WithNational,
    WithParentNational,
    AllLanguages,
}

impl Setup {
    pub const ALL: [Setup; 5] = [
        Setup::Mono,
        Setup::WithParent,
        Setup::WithNational,
        Setup::WithParentNational,
        Setup::AllLanguages,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Setup::Mono => "L",
            Setup::WithParent => "L+P",
            Setup::WithNational => "L+N",
            Setup::WithParentNational => "L+P+N",
            Setup::AllLanguages => "*L",
        }
    }

    /// Filesystem-safe name.
    pub fn slug(self) -> &'static str {
        match self {
            Setup::Mono => "l",
            Setup::WithParent => "l_p",
            Setup::WithNational => "l_n",
            Setup::WithParentNational => "l_p_n",
            Setup::AllLanguages => "all",
        }
    }

    pub fn parse(s: &str) -> Result<Setup> {
        Setup::ALL
            .into_iter()
            .find(|setup| setup.label() == s)
            .ok_or_else(|| {
                Error::Experiment(format!(
                    "unknown setup `{s}`: expected one of L, L+P, L+N, L+P+N, *L"
                ))
            })
    }
}

impl fmt::Display for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Setup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// Configuration for one (target, setup) evaluation.
///
/// `seed` is the cell's master seed: fold assignment, per-fold forests, and
/// balancing all derive their streams from it, so `forest_params.seed` is
/// overridden during evaluation.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub target: LanguageCode,
    pub setup: Setup,
    pub k_folds: usize,
    pub seed: u64,
    pub forest_params: ForestParams,
    pub profile_fraction: f64,
    /// Downsample auxiliary languages to equal per-level counts before
    /// merging.
    pub balance: bool,
}

impl ExperimentConfig {
    pub fn new(target: LanguageCode, setup: Setup, seed: u64) -> Self {
        ExperimentConfig {
            target,
            setup,
            k_folds: 5,
            seed,
            forest_params: ForestParams::new(seed),
            profile_fraction: 0.25,
            balance: false,
        }
    }
}

/// The auxiliary languages a setup pulls into training, in deterministic
/// order, excluding the target itself.
fn auxiliary_languages(
    setup: Setup,
    target: LanguageCode,
    tree: &FamilyTree,
) -> Result<Vec<LanguageCode>> {
    let entry = tree.lookup(target)?;
    let mut langs: BTreeSet<LanguageCode> = BTreeSet::new();
    match setup {
        Setup::Mono => {}
        Setup::WithParent => {
            let parent = entry.parent.ok_or_else(|| {
                Error::Experiment(format!("target `{target}` has no parent language"))
            })?;
            langs.insert(parent);
        }
        Setup::WithNational => {
            langs.insert(entry.national);
        }
        Setup::WithParentNational => {
            let parent = entry.parent.ok_or_else(|| {
                Error::Experiment(format!("target `{target}` has no parent language"))
            })?;
            langs.insert(parent);
            langs.insert(entry.national);
        }
        Setup::AllLanguages => {
            langs.extend(tree.codes());
        }
    }
    langs.remove(&target);
    Ok(langs.into_iter().collect())
}

/// Assemble a fold's training documents: the target-language training folds
/// plus the setup's auxiliary languages in full. The test side always stays
/// target-only. Errors when a required auxiliary corpus is absent.
pub fn assemble_training<'a>(
    setup: Setup,
    target: LanguageCode,
    fold_train_docs: &[&'a Document],
    corpus: &'a Corpus,
    tree: &FamilyTree,
) -> Result<Vec<&'a Document>> {
    debug_assert!(fold_train_docs.iter().all(|d| d.language == target));
    let mut training: Vec<&Document> = fold_train_docs.to_vec();
    for language in auxiliary_languages(setup, target, tree)? {
        let docs = corpus.of_language(language);
        if docs.is_empty() {
            return Err(Error::Experiment(format!(
                "setup {} for target `{target}` requires a corpus for `{language}`",
                setup.label()
            )));
        }
        training.extend(docs);
    }
    Ok(training)
}

/// Downsample each auxiliary language to equal per-level counts (the size
/// of its smallest level), seeded per language. Target documents pass
/// through untouched.
fn balance_auxiliary<'a>(
    training: Vec<&'a Document>,
    target: LanguageCode,
    seed: u64,
) -> Vec<&'a Document> {
    use rand::seq::SliceRandom;

    let mut kept: Vec<&Document> = training
        .iter()
        .copied()
        .filter(|d| d.language == target)
        .collect();
    let aux_langs: BTreeSet<LanguageCode> = training
        .iter()
        .filter(|d| d.language != target)
        .map(|d| d.language)
        .collect();
    for (i, language) in aux_langs.iter().enumerate() {
        let mut per_level: Vec<Vec<&Document>> = vec![Vec::new(); 3];
        for doc in training.iter().filter(|d| d.language == *language) {
            per_level[doc.level.index()].push(doc);
        }
        let cap = per_level
            .iter()
            .filter(|v| !v.is_empty())
            .map(|v| v.len())
            .min()
            .unwrap_or(0);
        let mut rng = stream_rng(seed, STREAM_BALANCE_BASE + i as u64);
        for level_docs in &mut per_level {
            level_docs.shuffle(&mut rng);
            kept.extend(level_docs.iter().take(cap));
        }
    }
    kept.sort_by(|a, b| {
        (a.language, a.level, a.id.as_str()).cmp(&(b.language, b.level, b.id.as_str()))
    });
    kept
}

/// One fold's outcome.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FoldResult {
    pub accuracy: f64,
    pub n_train: usize,
    pub n_test: usize,
}

/// One (target, setup, seed) cell's outcome.
#[derive(Clone, Debug)]
pub struct SetupResult {
    pub mean_accuracy: f64,
    pub folds: Vec<FoldResult>,
}

/// The fold assignment a cell with this (target, k, seed) uses: the
/// target's documents in corpus order paired with their fold indices.
pub fn target_fold_assignment<'a>(
    corpus: &'a Corpus,
    target: LanguageCode,
    k_folds: usize,
    seed: u64,
) -> Result<(Vec<&'a Document>, Vec<usize>)> {
    let target_docs = corpus.of_language(target);
    if target_docs.is_empty() {
        return Err(Error::NoDocuments(target.to_string()));
    }
    let labels: Vec<_> = target_docs.iter().map(|d| d.level).collect();
    let assignment = stratified_kfold(&labels, k_folds, derive_seed(seed, STREAM_KFOLD))?;
    Ok((target_docs, assignment))
}

/// Evaluate one cell: stratified k-fold over the target language, n-gram
/// profiles rebuilt per fold from training documents only, a forest fitted
/// per fold, accuracy read off the target-language test fold.
pub fn run_setup(
    config: &ExperimentConfig,
    corpus: &Corpus,
    tree: &FamilyTree,
) -> Result<SetupResult> {
    let (target_docs, assignment) =
        target_fold_assignment(corpus, config.target, config.k_folds, config.seed)?;

    let mut folds = Vec::with_capacity(config.k_folds);
    for fold in 0..config.k_folds {
        let test: Vec<&Document> = target_docs
            .iter()
            .zip(&assignment)
            .filter_map(|(&d, &f)| (f == fold).then_some(d))
            .collect();
        let fold_train: Vec<&Document> = target_docs
            .iter()
            .zip(&assignment)
            .filter_map(|(&d, &f)| (f != fold).then_some(d))
            .collect();
        if test.is_empty() {
            return Err(Error::Experiment(format!(
                "fold {fold} has no test documents: target `{}` is too small for k = {}",
                config.target, config.k_folds
            )));
        }
        // Test folds hold target-language documents only, in every setup.
        assert!(test.iter().all(|d| d.language == config.target));

        let mut training =
            assemble_training(config.setup, config.target, &fold_train, corpus, tree)?;
        if config.balance {
            training = balance_auxiliary(training, config.target, config.seed);
        }

        let profiles =
            ProfileSet::build_from_docs(training.iter().copied(), config.profile_fraction)?;
        let train_vectors: Vec<FeatureVector> = training
            .iter()
            .map(|d| extract(d, &profiles))
            .collect::<Result<_>>()?;
        let dataset = Dataset::from_feature_vectors(&train_vectors)?;

        let mut params = config.forest_params.clone();
        params.seed = derive_seed(config.seed, STREAM_FOREST_BASE + fold as u64);
        let forest = fit(&dataset, &params)?;

        let mut correct = 0usize;
        for doc in &test {
            let fv = extract(doc, &profiles)?;
            if forest.predict(&fv.values)? == doc.level {
                correct += 1;
            }
        }
        folds.push(FoldResult {
            accuracy: correct as f64 / test.len() as f64,
            n_train: training.len(),
            n_test: test.len(),
        });
    }
    let mean_accuracy = folds.iter().map(|f| f.accuracy).sum::<f64>() / folds.len() as f64;
    Ok(SetupResult {
        mean_accuracy,
        folds,
    })
}

/// Fit one final model for a cell on the full training pool (all target
/// documents plus the setup's auxiliaries) for inspection and export.
/// Returns the forest together with the profiles it was extracted with.
pub fn fit_cell_model(
    config: &ExperimentConfig,
    corpus: &Corpus,
    tree: &FamilyTree,
) -> Result<(Forest, ProfileSet)> {
    let target_docs = corpus.of_language(config.target);
    if target_docs.is_empty() {
        return Err(Error::NoDocuments(config.target.to_string()));
    }
    let mut training =
        assemble_training(config.setup, config.target, &target_docs, corpus, tree)?;
    if config.balance {
        training = balance_auxiliary(training, config.target, config.seed);
    }
    let profiles =
        ProfileSet::build_from_docs(training.iter().copied(), config.profile_fraction)?;
    let vectors: Vec<FeatureVector> = training
        .iter()
        .map(|d| extract(d, &profiles))
        .collect::<Result<_>>()?;
    let dataset = Dataset::from_feature_vectors(&vectors)?;
    let mut params = config.forest_params.clone();
    params.seed = derive_seed(config.seed, STREAM_FULL_MODEL);
    let forest = fit(&dataset, &params)?;
    Ok((forest, profiles))
}

/// Structural knobs shared by every cell of a grid run.
#[derive(Clone, Debug)]
pub struct GridParams {
    pub k_folds: usize,
    pub profile_fraction: f64,
    pub forest_params: ForestParams,
    pub balance: bool,
}

impl GridParams {
    pub fn new() -> Self {
        GridParams {
            k_folds: 5,
            profile_fraction: 0.25,
            forest_params: ForestParams::new(0),
            balance: false,
        }
    }
}

impl Default for GridParams {
    fn default() -> Self {
        Self::new()
    }
}

/// One evaluated grid cell.
#[derive(Clone, Debug, Serialize)]
pub struct GridCell {
    pub target: LanguageCode,
    pub setup: Setup,
    pub seed: u64,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub n_train: Vec<usize>,
    pub n_test: Vec<usize>,
}

/// Grid outcome: evaluated cells in (target, setup, seed) order, plus any
/// cells that could not run (for example a setup whose auxiliary corpus is
/// missing).
#[derive(Clone, Debug, Serialize)]
pub struct GridReport {
    pub cells: Vec<GridCell>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl GridReport {
    /// Mean accuracy for a (target, setup), averaged over seeds.
    pub fn mean_accuracy(&self, target: LanguageCode, setup: Setup) -> Option<f64> {
        let values: Vec<f64> = self
            .cells
            .iter()
            .filter(|c| c.target == target && c.setup == setup)
            .map(|c| c.mean_accuracy)
            .collect();
        if values.is_empty() {
            None
        } else {
            Some(values.iter().sum::<f64>() / values.len() as f64)
        }
    }

    /// Per-target accuracy column for one setup, for paired comparisons.
    /// `None` when any target lacks the setup.
    pub fn setup_column(&self, setup: Setup, targets: &[LanguageCode]) -> Option<Vec<f64>> {
        targets
            .iter()
            .map(|&t| self.mean_accuracy(t, setup))
            .collect()
    }

    /// Accuracy table: one row per target, one column per setup.
    pub fn render_table(&self, targets: &[LanguageCode], setups: &[Setup]) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<10}", "Language"));
        for setup in setups {
            let _ = write!(out, " {:>8}", setup.label());
        }
        out.push('\n');
        for &target in targets {
            out.push_str(&format!("{:<10}", target.as_str().to_uppercase()));
            for &setup in setups {
                match self.mean_accuracy(target, setup) {
                    Some(acc) => {
                        let _ = write!(out, " {acc:>8.3}");
                    }
                    None => {
                        let _ = write!(out, " {:>8}", "-");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Run the full experiment grid. Cells run independently (optionally across
/// `jobs` worker threads); output is identical for any job count because
/// every cell derives its randomness from its own seed.
pub fn run_grid(
    corpus: &Corpus,
    tree: &FamilyTree,
    targets: &[LanguageCode],
    setups: &[Setup],
    seeds: &[u64],
    params: &GridParams,
    jobs: Option<usize>,
) -> Result<GridReport> {
    if targets.is_empty() || setups.is_empty() || seeds.is_empty() {
        return Err(Error::Experiment(
            "grid needs at least one target, setup, and seed".to_string(),
        ));
    }
    let mut specs = Vec::new();
    for &target in targets {
        for &setup in setups {
            for &seed in seeds {
                specs.push((target, setup, seed));
            }
        }
    }

    let run_cell = |&(target, setup, seed): &(LanguageCode, Setup, u64)| {
        let config = ExperimentConfig {
            target,
            setup,
            k_folds: params.k_folds,
            seed,
            forest_params: params.forest_params.clone(),
            profile_fraction: params.profile_fraction,
            balance: params.balance,
        };
        run_setup(&config, corpus, tree).map(|result| GridCell {
            target,
            setup,
            seed,
            fold_accuracies: result.folds.iter().map(|f| f.accuracy).collect(),
            mean_accuracy: result.mean_accuracy,
            n_train: result.folds.iter().map(|f| f.n_train).collect(),
            n_test: result.folds.iter().map(|f| f.n_test).collect(),
        })
    };

    let outcomes: Vec<Result<GridCell>> = match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Experiment(format!("thread pool: {e}")))?;
            pool.install(|| specs.par_iter().map(run_cell).collect())
        }
        None => specs.par_iter().map(run_cell).collect(),
    };

    let mut cells = Vec::new();
    let mut failures = Vec::new();
    let mut first_error = None;
    for ((target, setup, seed), outcome) in specs.iter().zip(outcomes) {
        match outcome {
            Ok(cell) => cells.push(cell),
            Err(e) => {
                failures.push(format!(
                    "cell (target {target}, setup {}, seed {seed}): {e}",
                    setup.label()
                ));
                if first_error.is_none() {
                    first_error = Some(e);
                }
            }
        }
    }
    if cells.is_empty() {
        if let Some(e) = first_error {
            return Err(e);
        }
    }
    Ok(GridReport { cells, failures })
}

/// The top-k features of a fitted forest by mean decrease in impurity,
/// descending, ties broken by name.
pub fn top_features(forest: &Forest, k: usize) -> Result<Vec<(String, f64)>> {
    if k < 1 {
        return Err(Error::InvalidParams("k must be >= 1".to_string()));
    }
    let importances = mdi_importance(forest)?;
    let mut ranked: Vec<(String, f64)> = forest
        .feature_names
        .iter()
        .cloned()
        .zip(importances)
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    Ok(ranked)
}

/// Two-column feature/score rendering.
pub fn render_importance_table(rows: &[(String, f64)]) -> String {
    let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(7).max(7);
    let mut out = format!("{:<width$}  {:>8}\n", "feature", "score");
    for (name, score) in rows {
        let _ = writeln!(out, "{name:<width$}  {score:>8.3}");
    }
    out
}
