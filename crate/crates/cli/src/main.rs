//! `ara` — readability assessment pipeline over leveled JSONL corpora:
//! corpus statistics, n-gram overlap matrices, feature extraction, forest
//! training and prediction, the cross-lingual experiment grid, feature
//! importances, paired t-tests, and a syllabifier debug command.
//!
//! Every subcommand exits 0 on success and 2 on usage or data errors;
//! diagnostics go to stderr, results to stdout or files. All randomized
//! commands take an explicit seed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use ara_core::corpus::{
    self, Corpus, FamilyTree, LanguageCode, Level, LevelStats, CANONICAL_LANGUAGES,
};
use ara_core::experiments::{
    self, paired_ttest, run_grid, top_features, ExperimentConfig, GridParams, Setup, Tail,
};
use ara_core::features::{self, FeatureOptions};
use ara_core::forest::{ForestParams, MaxFeatures};
use ara_core::ngram;

#[derive(Parser)]
#[command(
    name = "ara",
    version,
    about = "Readability assessment for leveled corpora in related languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-language, per-level corpus statistics.
    Stats {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Restrict to one language (default: all present).
        #[arg(long)]
        language: Option<String>,
        /// Also write the statistics as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Pairwise n-gram overlap matrix over the corpus languages.
    Overlap {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
        /// N-gram size, 2 or 3.
        #[arg(long, value_parser = parse_ngram_size)]
        n: usize,
        /// Top fraction of grams kept per profile.
        #[arg(long, default_value_t = 0.25)]
        fraction: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build and cache per-language n-gram profiles.
    Profiles {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, default_value_t = 0.25)]
        fraction: f64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Extract the 32-feature dataset as CSV.
    Extract {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, default_value_t = 0.25)]
        fraction: f64,
        /// Divide syllable-pattern and cluster counts by word count.
        #[arg(long)]
        normalize_syllables: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a forest on selected languages and save the model.
    Train {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Languages whose documents form the training set.
        #[arg(long, value_delimiter = ',', required = true)]
        languages: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        fraction: Option<f64>,
        #[command(flatten)]
        forest: ForestArgs,
        /// JSON file of default values for omitted flags.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict levels for a feature CSV with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        features: PathBuf,
        /// Output CSV (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the hierarchical cross-lingual experiment grid.
    Grid {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
        /// One grid run per seed.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        /// Target languages (default: every corpus language with a parent).
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
        /// Setups to run (default: L,L+P,L+N,L+P+N,*L).
        #[arg(long, value_delimiter = ',')]
        setups: Vec<String>,
        #[arg(long)]
        k_folds: Option<usize>,
        #[arg(long)]
        fraction: Option<f64>,
        /// Downsample auxiliary languages to equal per-level counts.
        #[arg(long)]
        balance: bool,
        /// Worker threads (default: one per logical CPU).
        #[arg(long)]
        jobs: Option<usize>,
        /// Paired t-test between two setup columns, e.g. `L:*L`.
        #[arg(long)]
        ttest: Option<String>,
        #[arg(long, default_value = "one", value_parser = parse_tail)]
        ttest_tail: Tail,
        /// Rows per importance report.
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        #[command(flatten)]
        forest: ForestArgs,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Top features of a saved model by mean decrease in impurity.
    Importance {
        #[arg(long)]
        model: PathBuf,
        #[arg(short = 'k', long, default_value_t = 10)]
        top_k: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Paired t-test over two accuracy columns.
    Ttest {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<f64>,
        #[arg(long, default_value = "one", value_parser = parse_tail)]
        tail: Tail,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print word → syllable patterns.
    Syllabify {
        #[arg(required = true)]
        words: Vec<String>,
    },
}

/// Forest hyperparameter overrides shared by `train` and `grid`.
#[derive(Args, Clone)]
struct ForestArgs {
    /// Number of trees.
    #[arg(long)]
    trees: Option<usize>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    min_samples_split: Option<usize>,
    #[arg(long)]
    min_samples_leaf: Option<usize>,
    /// Features considered per node: `sqrt` or `all`.
    #[arg(long, value_parser = parse_max_features)]
    max_features: Option<MaxFeatures>,
}

/// Optional defaults loaded with `--config`; explicit flags win.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    seeds: Option<Vec<u64>>,
    k_folds: Option<usize>,
    fraction: Option<f64>,
    trees: Option<usize>,
    max_depth: Option<usize>,
    min_samples_split: Option<usize>,
    min_samples_leaf: Option<usize>,
    max_features: Option<String>,
    jobs: Option<usize>,
    targets: Option<Vec<String>>,
    setups: Option<Vec<String>>,
    balance: Option<bool>,
}

fn parse_ngram_size(s: &str) -> std::result::Result<usize, String> {
    match s {
        "2" => Ok(2),
        "3" => Ok(3),
        other => Err(format!("n must be 2 or 3, got `{other}`")),
    }
}

fn parse_tail(s: &str) -> std::result::Result<Tail, String> {
    Tail::parse(s).map_err(|e| e.to_string())
}

fn parse_max_features(s: &str) -> std::result::Result<MaxFeatures, String> {
    match s {
        "sqrt" => Ok(MaxFeatures::Sqrt),
        "all" => Ok(MaxFeatures::All),
        other => Err(format!("max-features must be `sqrt` or `all`, got `{other}`")),
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Stats {
            manifest,
            tree,
            language,
            json,
        } => cmd_stats(&manifest, tree.as_deref(), language.as_deref(), json.as_deref()),
        Command::Overlap {
            manifest,
            tree,
            n,
            fraction,
            json,
        } => cmd_overlap(&manifest, tree.as_deref(), n, fraction, json.as_deref()),
        Command::Profiles {
            manifest,
            tree,
            fraction,
            out_dir,
        } => cmd_profiles(&manifest, tree.as_deref(), fraction, &out_dir),
        Command::Extract {
            manifest,
            tree,
            fraction,
            normalize_syllables,
            out,
        } => cmd_extract(&manifest, tree.as_deref(), fraction, normalize_syllables, &out),
        Command::Train {
            manifest,
            tree,
            languages,
            seed,
            fraction,
            forest,
            config,
            out,
        } => cmd_train(
            &manifest,
            tree.as_deref(),
            &languages,
            seed,
            fraction,
            &forest,
            config.as_deref(),
            &out,
        ),
        Command::Predict {
            model,
            features,
            out,
        } => cmd_predict(&model, &features, out.as_deref()),
        Command::Grid {
            manifest,
            tree,
            seeds,
            targets,
            setups,
            k_folds,
            fraction,
            balance,
            jobs,
            ttest,
            ttest_tail,
            top_k,
            forest,
            config,
            out_dir,
        } => cmd_grid(GridArgs {
            manifest,
            tree,
            seeds,
            targets,
            setups,
            k_folds,
            fraction,
            balance,
            jobs,
            ttest,
            ttest_tail,
            top_k,
            forest,
            config,
            out_dir,
        }),
        Command::Importance { model, top_k, json } => {
            cmd_importance(&model, top_k, json.as_deref())
        }
        Command::Ttest { a, b, tail, json } => cmd_ttest(&a, &b, tail, json.as_deref()),
        Command::Syllabify { words } => cmd_syllabify(&words),
    }
}

fn load_tree(path: Option<&Path>) -> Result<FamilyTree> {
    match path {
        Some(p) => FamilyTree::from_file(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(FamilyTree::default_tree()),
    }
}

fn load_corpus(manifest: &Path, tree: &FamilyTree) -> Result<Corpus> {
    let corpus = corpus::load_corpus_with_tree(manifest, tree)?;
    if corpus.is_empty() {
        bail!("manifest {} contains no documents", manifest.display());
    }
    Ok(corpus)
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
        None => Ok(FileConfig::default()),
    }
}

/// Canonical display order: the seven registry languages first, everything
/// else alphabetically after.
fn canonical_order(mut languages: Vec<LanguageCode>) -> Vec<LanguageCode> {
    languages.sort_by_key(|l| {
        (
            CANONICAL_LANGUAGES
                .iter()
                .position(|c| c == l)
                .unwrap_or(CANONICAL_LANGUAGES.len()),
            *l,
        )
    });
    languages
}

fn resolve_forest_params(seed: u64, args: &ForestArgs, cfg: &FileConfig) -> Result<ForestParams> {
    let mut params = ForestParams::new(seed);
    if let Some(n) = args.trees.or(cfg.trees) {
        params.n_estimators = n;
    }
    params.max_depth = args.max_depth.or(cfg.max_depth);
    if let Some(v) = args.min_samples_split.or(cfg.min_samples_split) {
        params.min_samples_split = v;
    }
    if let Some(v) = args.min_samples_leaf.or(cfg.min_samples_leaf) {
        params.min_samples_leaf = v;
    }
    let cfg_mf = cfg
        .max_features
        .as_deref()
        .map(|s| parse_max_features(s).map_err(|e| anyhow!(e)))
        .transpose()?;
    if let Some(mf) = args.max_features.or(cfg_mf) {
        params.max_features = mf;
    }
    Ok(params)
}

fn cmd_stats(
    manifest: &Path,
    tree: Option<&Path>,
    language: Option<&str>,
    json: Option<&Path>,
) -> Result<()> {
    let tree = load_tree(tree)?;
    let corpus = load_corpus(manifest, &tree)?;
    let languages = match language {
        Some(code) => vec![LanguageCode::new(code)?],
        None => canonical_order(corpus.languages()),
    };
    let mut table_rows = Vec::new();
    let mut json_map: BTreeMap<LanguageCode, BTreeMap<Level, LevelStats>> = BTreeMap::new();
    for lang in languages {
        let stats = corpus::corpus_stats(&corpus, lang)?;
        json_map.insert(lang, stats.clone());
        table_rows.push((lang, stats));
    }
    print!("{}", corpus::render_stats_table(&table_rows));
    if let Some(path) = json {
        fs::write(path, serde_json::to_string_pretty(&json_map)? + "\n")?;
    }
    Ok(())
}

fn cmd_overlap(
    manifest: &Path,
    tree: Option<&Path>,
    n: usize,
    fraction: f64,
    json: Option<&Path>,
) -> Result<()> {
    let tree = load_tree(tree)?;
    let corpus = load_corpus(manifest, &tree)?;
    let languages = canonical_order(corpus.languages());
    let profiles: Vec<_> = languages
        .iter()
        .map(|&lang| ngram::build_profile(&corpus, lang, n, fraction))
        .collect::<ara_core::Result<_>>()?;
    let matrix = ngram::overlap_matrix(&profiles)?;
    print!("{}", matrix.render_table());
    if let Some(path) = json {
        fs::write(path, serde_json::to_string_pretty(&matrix)? + "\n")?;
    }
    Ok(())
}

fn cmd_profiles(
    manifest: &Path,
    tree: Option<&Path>,
    fraction: f64,
    out_dir: &Path,
) -> Result<()> {
    let tree = load_tree(tree)?;
    let corpus = load_corpus(manifest, &tree)?;
    fs::create_dir_all(out_dir)?;
    for lang in canonical_order(corpus.languages()) {
        for n in ngram::NGRAM_SIZES {
            let profile = ngram::build_profile(&corpus, lang, n, fraction)?;
            let path = out_dir.join(format!("profile_{lang}_{n}.json"));
            ngram::save_profile(&profile, &path)?;
            println!("{}: {} grams", path.display(), profile.len());
        }
    }
    Ok(())
}

fn cmd_extract(
    manifest: &Path,
    tree: Option<&Path>,
    fraction: f64,
    normalize_syllables: bool,
    out: &Path,
) -> Result<()> {
    let tree = load_tree(tree)?;
    let corpus = load_corpus(manifest, &tree)?;
    let profiles = ngram::ProfileSet::build(&corpus, fraction)?;
    let options = FeatureOptions {
        normalize_syllable_counts: normalize_syllables,
    };
    features::export_dataset(&corpus, &profiles, out, options)?;
    eprintln!("wrote {} rows to {}", corpus.len(), out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    manifest: &Path,
    tree: Option<&Path>,
    languages: &[String],
    seed: Option<u64>,
    fraction: Option<f64>,
    forest_args: &ForestArgs,
    config: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let cfg = load_file_config(config)?;
    let seed = seed
        .or(cfg.seed)
        .ok_or_else(|| anyhow!("--seed is required (or `seed` in --config)"))?;
    let fraction = fraction.or(cfg.fraction).unwrap_or(0.25);
    let tree = load_tree(tree)?;
    let corpus = load_corpus(manifest, &tree)?;

    let mut selected = Vec::new();
    for code in languages {
        let lang = LanguageCode::new(code)?;
        let docs = corpus.of_language(lang);
        if docs.is_empty() {
            bail!("no documents for language `{lang}`");
        }
        selected.extend(docs);
    }
    let profiles = ngram::ProfileSet::build_from_docs(selected.iter().copied(), fraction)?;
    let vectors: Vec<_> = selected
        .iter()
        .map(|d| features::extract(d, &profiles))
        .collect::<ara_core::Result<_>>()?;
    let dataset = ara_core::forest::Dataset::from_feature_vectors(&vectors)?;
    let params = resolve_forest_params(seed, forest_args, &cfg)?;
    let forest = ara_core::forest::fit(&dataset, &params)?;
    ara_core::forest::save_model(&forest, out)?;
    eprintln!(
        "trained {} trees on {} documents; model written to {}",
        forest.trees.len(),
        dataset.len(),
        out.display()
    );
    Ok(())
}

fn cmd_predict(model: &Path, feature_csv: &Path, out: Option<&Path>) -> Result<()> {
    let forest = ara_core::forest::load_model(model)?;
    let vectors = features::read_dataset(feature_csv)?;
    let mut lines = String::from("doc_id,language,predicted_level\n");
    for fv in &vectors {
        let predicted = forest.predict(&fv.values)?;
        lines.push_str(&format!("{},{},{}\n", fv.doc_id, fv.language, predicted));
    }
    match out {
        Some(path) => fs::write(path, lines)?,
        None => print!("{lines}"),
    }
    Ok(())
}

struct GridArgs {
    manifest: PathBuf,
    tree: Option<PathBuf>,
    seeds: Vec<u64>,
    targets: Vec<String>,
    setups: Vec<String>,
    k_folds: Option<usize>,
    fraction: Option<f64>,
    balance: bool,
    jobs: Option<usize>,
    ttest: Option<String>,
    ttest_tail: Tail,
    top_k: usize,
    forest: ForestArgs,
    config: Option<PathBuf>,
    out_dir: PathBuf,
}

fn cmd_grid(args: GridArgs) -> Result<()> {
    let cfg = load_file_config(args.config.as_deref())?;
    let seeds = if !args.seeds.is_empty() {
        args.seeds.clone()
    } else if let Some(seeds) = &cfg.seeds {
        seeds.clone()
    } else if let Some(seed) = cfg.seed {
        vec![seed]
    } else {
        bail!("--seeds is required (or `seeds` in --config)");
    };
    let tree = load_tree(args.tree.as_deref())?;
    let corpus = load_corpus(&args.manifest, &tree)?;

    let target_names = if !args.targets.is_empty() {
        args.targets.clone()
    } else {
        cfg.targets.clone().unwrap_or_default()
    };
    let targets: Vec<LanguageCode> = if target_names.is_empty() {
        // Default: every corpus language that has a parent in the tree.
        canonical_order(
            corpus
                .languages()
                .into_iter()
                .filter(|&l| tree.lookup(l).map(|e| e.parent.is_some()).unwrap_or(false))
                .collect(),
        )
    } else {
        target_names
            .iter()
            .map(|s| LanguageCode::new(s).map_err(Into::into))
            .collect::<Result<_>>()?
    };
    if targets.is_empty() {
        bail!("no target languages: none of the corpus languages has a parent in the tree");
    }

    let setup_names = if !args.setups.is_empty() {
        args.setups.clone()
    } else {
        cfg.setups.clone().unwrap_or_default()
    };
    let setups: Vec<Setup> = if setup_names.is_empty() {
        Setup::ALL.to_vec()
    } else {
        setup_names
            .iter()
            .map(|s| Setup::parse(s).map_err(Into::into))
            .collect::<Result<_>>()?
    };

    let mut params = GridParams::new();
    params.k_folds = args.k_folds.or(cfg.k_folds).unwrap_or(5);
    params.profile_fraction = args.fraction.or(cfg.fraction).unwrap_or(0.25);
    params.balance = args.balance || cfg.balance.unwrap_or(false);
    params.forest_params = resolve_forest_params(0, &args.forest, &cfg)?;
    let jobs = args.jobs.or(cfg.jobs);

    let report = run_grid(&corpus, &tree, &targets, &setups, &seeds, &params, jobs)?;
    for failure in &report.failures {
        eprintln!("warning: {failure}");
    }

    fs::create_dir_all(&args.out_dir)?;
    fs::write(
        args.out_dir.join("grid.json"),
        serde_json::to_string_pretty(&report)? + "\n",
    )?;
    let table = report.render_table(&targets, &setups);
    fs::write(args.out_dir.join("grid.txt"), &table)?;
    print!("{table}");

    // One full-pool model per evaluated cell, plus importance reports from
    // each target's all-languages model (first seed).
    let model_dir = args.out_dir.join("models");
    fs::create_dir_all(&model_dir)?;
    for cell in &report.cells {
        let config = ExperimentConfig {
            target: cell.target,
            setup: cell.setup,
            k_folds: params.k_folds,
            seed: cell.seed,
            forest_params: params.forest_params.clone(),
            profile_fraction: params.profile_fraction,
            balance: params.balance,
        };
        let (forest, _) = experiments::fit_cell_model(&config, &corpus, &tree)?;
        let model_path = model_dir.join(format!(
            "model_{}_{}_{}.json",
            cell.target,
            cell.setup.slug(),
            cell.seed
        ));
        ara_core::forest::save_model(&forest, &model_path)?;

        if cell.setup == Setup::AllLanguages && cell.seed == seeds[0] {
            let rows = top_features(&forest, args.top_k)?;
            fs::write(
                args.out_dir.join(format!("importance_{}.txt", cell.target)),
                experiments::render_importance_table(&rows),
            )?;
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(name, score)| serde_json::json!({"feature": name, "importance": score}))
                .collect();
            fs::write(
                args.out_dir.join(format!("importance_{}.json", cell.target)),
                serde_json::to_string_pretty(&json_rows)? + "\n",
            )?;
        }
    }

    if let Some(spec) = &args.ttest {
        let (left, right) = spec
            .split_once(':')
            .ok_or_else(|| anyhow!("--ttest expects `SETUP:SETUP`, e.g. `L:*L`"))?;
        let setup_a = Setup::parse(left)?;
        let setup_b = Setup::parse(right)?;
        let col_a = report
            .setup_column(setup_a, &targets)
            .ok_or_else(|| anyhow!("missing grid cells for setup {}", setup_a.label()))?;
        let col_b = report
            .setup_column(setup_b, &targets)
            .ok_or_else(|| anyhow!("missing grid cells for setup {}", setup_b.label()))?;
        let result = paired_ttest(&col_a, &col_b, args.ttest_tail)?;
        let json = serde_json::to_string_pretty(&result)? + "\n";
        fs::write(args.out_dir.join("ttest.json"), &json)?;
        eprintln!(
            "t-test {}:{} -> t = {:.4}, df = {}, p = {:.4}",
            setup_a.label(),
            setup_b.label(),
            result.t,
            result.df,
            result.p
        );
    }
    Ok(())
}

fn cmd_importance(model: &Path, top_k: usize, json: Option<&Path>) -> Result<()> {
    let forest = ara_core::forest::load_model(model)?;
    let rows = top_features(&forest, top_k)?;
    print!("{}", experiments::render_importance_table(&rows));
    if let Some(path) = json {
        let json_rows: Vec<serde_json::Value> = rows
            .iter()
            .map(|(name, score)| serde_json::json!({"feature": name, "importance": score}))
            .collect();
        fs::write(path, serde_json::to_string_pretty(&json_rows)? + "\n")?;
    }
    Ok(())
}

fn cmd_ttest(a: &[f64], b: &[f64], tail: Tail, json: Option<&Path>) -> Result<()> {
    let result = paired_ttest(a, b, tail)?;
    let rendered = serde_json::to_string_pretty(&result)? + "\n";
    print!("{rendered}");
    if let Some(path) = json {
        fs::write(path, &rendered)?;
    }
    Ok(())
}

fn cmd_syllabify(words: &[String]) -> Result<()> {
    for word in words {
        let patterns = ara_core::textproc::syllabify(word)?;
        let joined: Vec<&str> = patterns.iter().map(|p| p.name()).collect();
        println!("{word}\t{}", joined.join("."));
    }
    Ok(())
}
