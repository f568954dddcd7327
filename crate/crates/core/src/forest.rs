//! From-scratch CART decision trees and a random forest over the three
//! reading levels: Gini impurity, bootstrap aggregation, per-node feature
//! subsampling, and mean-decrease-in-impurity importances.
//!
//! Determinism contract: tree `t` draws everything from the stream
//! `derive_seed(params.seed, t)` (see [`crate::rng`]), and `fit`
//! canonicalizes sample order before training, so the same seed and data
//! produce the same forest regardless of input order or thread scheduling.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Level;
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::rng::stream_rng;

pub const CLASS_COUNT: usize = 3;

/// How many features each node considers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    /// floor(sqrt(width)), at least 1.
    Sqrt,
    /// Every feature at every node.
    All,
}

/// Forest hyperparameters. The seed is explicit: there is no unseeded mode.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    pub max_features: MaxFeatures,
    /// Draw each tree's training set with replacement. Disabled, every tree
    /// sees the dataset as-is (used by the exhaustive-oracle equivalence
    /// checks).
    pub bootstrap: bool,
    pub seed: u64,
}

impl ForestParams {
    pub fn new(seed: u64) -> Self {
        ForestParams {
            n_estimators: 100,
            max_depth: None,
            min_samples_split: 2,
            min_samples_leaf: 1,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
            seed,
        }
    }

    pub fn with_n_estimators(mut self, n: usize) -> Self {
        self.n_estimators = n;
        self
    }

    pub fn with_max_depth(mut self, depth: Option<usize>) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn with_max_features(mut self, mf: MaxFeatures) -> Self {
        self.max_features = mf;
        self
    }

    pub fn with_bootstrap(mut self, bootstrap: bool) -> Self {
        self.bootstrap = bootstrap;
        self
    }

    pub fn with_min_samples_split(mut self, v: usize) -> Self {
        self.min_samples_split = v;
        self
    }

    pub fn with_min_samples_leaf(mut self, v: usize) -> Self {
        self.min_samples_leaf = v;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_estimators < 1 {
            return Err(Error::InvalidParams("n_estimators must be >= 1".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::InvalidParams("min_samples_split must be >= 2".into()));
        }
        if self.min_samples_leaf < 1 {
            return Err(Error::InvalidParams("min_samples_leaf must be >= 1".into()));
        }
        Ok(())
    }
}

/// A training set: row-major features with one level label per row.
#[derive(Clone, Debug)]
pub struct Dataset {
    rows: Vec<Vec<f64>>,
    labels: Vec<Level>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<Level>, feature_names: Vec<String>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Dataset(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let width = feature_names.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Dataset(format!(
                    "row {i} has {} values, expected {width}",
                    row.len()
                )));
            }
        }
        Ok(Dataset {
            rows,
            labels,
            feature_names,
        })
    }

    pub fn from_feature_vectors(vectors: &[FeatureVector]) -> Result<Self> {
        let rows = vectors.iter().map(|v| v.values.clone()).collect();
        let labels = vectors.iter().map(|v| v.level).collect();
        Dataset::new(rows, labels, crate::features::feature_names())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.feature_names.len()
    }

    pub fn labels(&self) -> &[Level] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// Row indices in canonical order: rows compared lexicographically by
    /// value, then by label. Training works over this order so fitting is
    /// invariant to input permutation.
    fn canonical_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by(|&a, &b| {
            let row_cmp = self.rows[a]
                .iter()
                .zip(self.rows[b].iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|c| c.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal);
            row_cmp.then(self.labels[a].cmp(&self.labels[b]))
        });
        order
    }
}

/// A fitted tree node. Split nodes keep their class counts so importances
/// can be recomputed from the stored tree alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TreeNode {
    Split {
        feature_index: usize,
        threshold: f64,
        class_counts: [u64; CLASS_COUNT],
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        class_counts: [u64; CLASS_COUNT],
        prediction: Level,
    },
}

impl TreeNode {
    fn predict(&self, x: &[f64]) -> Level {
        match self {
            TreeNode::Leaf { prediction, .. } => *prediction,
            TreeNode::Split {
                feature_index,
                threshold,
                left,
                right,
                ..
            } => {
                if x[*feature_index] <= *threshold {
                    left.predict(x)
                } else {
                    right.predict(x)
                }
            }
        }
    }

    fn counts(&self) -> &[u64; CLASS_COUNT] {
        match self {
            TreeNode::Leaf { class_counts, .. } => class_counts,
            TreeNode::Split { class_counts, .. } => class_counts,
        }
    }

    fn min_leaf_size(&self) -> u64 {
        match self {
            TreeNode::Leaf { class_counts, .. } => class_counts.iter().sum(),
            TreeNode::Split { left, right, .. } => left.min_leaf_size().min(right.min_leaf_size()),
        }
    }

    pub fn has_split(&self) -> bool {
        matches!(self, TreeNode::Split { .. })
    }
}

/// A fitted random forest.
#[derive(Clone, Debug)]
pub struct Forest {
    pub params: ForestParams,
    pub trees: Vec<TreeNode>,
    pub feature_names: Vec<String>,
    pub classes: [Level; CLASS_COUNT],
}

/// Gini impurity 1 − Σ pᵢ² of a class-count vector.
pub fn gini(class_counts: &[u64]) -> Result<f64> {
    let total: u64 = class_counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidParams("gini of empty counts".into()));
    }
    let total = total as f64;
    Ok(1.0 - class_counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            p * p
        })
        .sum::<f64>())
}

fn gini_unchecked(class_counts: &[u64; CLASS_COUNT]) -> f64 {
    let total: u64 = class_counts.iter().sum();
    debug_assert!(total > 0);
    let total = total as f64;
    1.0 - class_counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            p * p
        })
        .sum::<f64>()
}

fn count_classes(labels: &[Level], idxs: &[usize]) -> [u64; CLASS_COUNT] {
    let mut counts = [0u64; CLASS_COUNT];
    for &i in idxs {
        counts[labels[i].index()] += 1;
    }
    counts
}

fn majority(class_counts: &[u64; CLASS_COUNT]) -> Level {
    let mut best = 0usize;
    for c in 1..CLASS_COUNT {
        if class_counts[c] > class_counts[best] {
            best = c;
        }
    }
    Level::from_index(best).expect("class index in range")
}

/// The winning split for one node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitCandidate {
    pub feature_index: usize,
    pub threshold: f64,
    pub impurity_decrease: f64,
}

/// Exhaustive scan over the offered features: candidate thresholds are
/// midpoints of consecutive distinct sorted values, the winner maximizes
/// the weighted Gini decrease, ties break toward the lower feature index
/// then the lower threshold. `None` when nothing yields a positive decrease
/// or every candidate violates `min_samples_leaf`.
pub fn best_split(
    dataset: &Dataset,
    idxs: &[usize],
    feature_subset: &[usize],
    min_samples_leaf: usize,
) -> Option<SplitCandidate> {
    let node_counts = count_classes(dataset.labels(), idxs);
    let node_gini = gini_unchecked(&node_counts);
    if node_gini == 0.0 {
        return None;
    }
    let n = idxs.len() as f64;
    let mut best: Option<SplitCandidate> = None;

    let mut ordered_features: Vec<usize> = feature_subset.to_vec();
    ordered_features.sort_unstable();
    ordered_features.dedup();

    for &feature in &ordered_features {
        let mut values: Vec<(f64, Level)> = idxs
            .iter()
            .map(|&i| (dataset.row(i)[feature], dataset.labels()[i]))
            .collect();
        values.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut left = [0u64; CLASS_COUNT];
        let mut right = node_counts;
        for k in 0..values.len() - 1 {
            let (v, label) = values[k];
            left[label.index()] += 1;
            right[label.index()] -= 1;
            let next = values[k + 1].0;
            if v == next {
                continue;
            }
            let n_left = k + 1;
            let n_right = values.len() - n_left;
            if n_left < min_samples_leaf || n_right < min_samples_leaf {
                continue;
            }
            let decrease = node_gini
                - (n_left as f64 / n) * gini_unchecked(&left)
                - (n_right as f64 / n) * gini_unchecked(&right);
            if decrease <= 0.0 {
                continue;
            }
            let threshold = (v + next) / 2.0;
            let better = match &best {
                None => true,
                Some(b) => decrease > b.impurity_decrease,
            };
            if better {
                best = Some(SplitCandidate {
                    feature_index: feature,
                    threshold,
                    impurity_decrease: decrease,
                });
            }
        }
    }
    best
}

fn subset_size(width: usize, max_features: MaxFeatures) -> usize {
    match max_features {
        MaxFeatures::All => width,
        MaxFeatures::Sqrt => ((width as f64).sqrt().floor() as usize).clamp(1, width),
    }
}

fn grow_tree(
    dataset: &Dataset,
    idxs: &[usize],
    depth: usize,
    params: &ForestParams,
    rng: &mut ChaCha8Rng,
) -> TreeNode {
    let class_counts = count_classes(dataset.labels(), idxs);
    let leaf = |class_counts: [u64; CLASS_COUNT]| TreeNode::Leaf {
        prediction: majority(&class_counts),
        class_counts,
    };

    let pure = class_counts.iter().filter(|&&c| c > 0).count() <= 1;
    let too_small = idxs.len() < params.min_samples_split;
    let too_deep = params.max_depth.is_some_and(|d| depth >= d);
    if pure || too_small || too_deep {
        return leaf(class_counts);
    }

    // Fresh feature subset at every node, distinct draws without
    // replacement.
    let k = subset_size(dataset.width(), params.max_features);
    let subset: Vec<usize> = rand::seq::index::sample(rng, dataset.width(), k).into_vec();

    match best_split(dataset, idxs, &subset, params.min_samples_leaf) {
        None => leaf(class_counts),
        Some(split) => {
            let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = idxs
                .iter()
                .partition(|&&i| dataset.row(i)[split.feature_index] <= split.threshold);
            let left = grow_tree(dataset, &left_idx, depth + 1, params, rng);
            let right = grow_tree(dataset, &right_idx, depth + 1, params, rng);
            TreeNode::Split {
                feature_index: split.feature_index,
                threshold: split.threshold,
                class_counts,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
    }
}

/// Fit a forest. Each tree draws a bootstrap sample (when enabled) and
/// grows unpruned until pure, too small, or out of positive-decrease
/// splits.
pub fn fit(dataset: &Dataset, params: &ForestParams) -> Result<Forest> {
    params.validate()?;
    if dataset.is_empty() {
        return Err(Error::Dataset("cannot fit on an empty dataset".into()));
    }
    let order = dataset.canonical_order();
    let n = order.len();

    let trees: Vec<TreeNode> = (0..params.n_estimators)
        .map(|t| {
            let mut rng = stream_rng(params.seed, t as u64);
            let idxs: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| order[rng.gen_range(0..n)]).collect()
            } else {
                order.clone()
            };
            grow_tree(dataset, &idxs, 0, params, &mut rng)
        })
        .collect();

    Ok(Forest {
        params: params.clone(),
        trees,
        feature_names: dataset.feature_names.clone(),
        classes: Level::ALL,
    })
}

impl Forest {
    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Majority vote over trees; ties break toward the lowest level.
    pub fn predict(&self, x: &[f64]) -> Result<Level> {
        if x.len() != self.n_features() {
            return Err(Error::Dimensionality {
                expected: self.n_features(),
                got: x.len(),
            });
        }
        let mut votes = [0u64; CLASS_COUNT];
        for tree in &self.trees {
            votes[tree.predict(x).index()] += 1;
        }
        Ok(majority(&votes))
    }

    pub fn predict_batch(&self, rows: &[Vec<f64>]) -> Result<Vec<Level>> {
        rows.iter().map(|r| self.predict(r)).collect()
    }

    /// Fraction of correct predictions over a labeled set.
    pub fn accuracy(&self, dataset: &Dataset) -> Result<f64> {
        if dataset.is_empty() {
            return Err(Error::Dataset("accuracy of empty dataset".into()));
        }
        let mut correct = 0usize;
        for i in 0..dataset.len() {
            if self.predict(dataset.row(i))? == dataset.labels()[i] {
                correct += 1;
            }
        }
        Ok(correct as f64 / dataset.len() as f64)
    }

    /// Smallest training-sample count over all leaves of all trees.
    pub fn min_leaf_size(&self) -> u64 {
        self.trees
            .iter()
            .map(|t| t.min_leaf_size())
            .min()
            .unwrap_or(0)
    }
}

fn accumulate_importance(node: &TreeNode, root_n: f64, out: &mut [f64]) {
    if let TreeNode::Split {
        feature_index,
        class_counts,
        left,
        right,
        ..
    } = node
    {
        let n_node: u64 = class_counts.iter().sum();
        let n_left: u64 = left.counts().iter().sum();
        let n_right: u64 = right.counts().iter().sum();
        let decrease = gini_unchecked(class_counts)
            - (n_left as f64 / n_node as f64) * gini_unchecked(left.counts())
            - (n_right as f64 / n_node as f64) * gini_unchecked(right.counts());
        out[*feature_index] += (n_node as f64 / root_n) * decrease;
        accumulate_importance(left, root_n, out);
        accumulate_importance(right, root_n, out);
    }
}

/// Mean decrease in impurity per feature: each split contributes its
/// sample-weighted Gini decrease, per-tree vectors are normalized to sum to
/// one (trees without splits contribute zeros), and the result is the mean
/// over trees.
pub fn mdi_importance(forest: &Forest) -> Result<Vec<f64>> {
    if forest.trees.is_empty() {
        return Err(Error::Model("forest has no trees".into()));
    }
    let width = forest.n_features();
    let mut mean = vec![0.0; width];
    for tree in &forest.trees {
        let mut per_tree = vec![0.0; width];
        let root_n: u64 = tree.counts().iter().sum();
        if root_n > 0 {
            accumulate_importance(tree, root_n as f64, &mut per_tree);
        }
        let total: f64 = per_tree.iter().sum();
        if total > 0.0 {
            for v in &mut per_tree {
                *v /= total;
            }
        }
        for (m, v) in mean.iter_mut().zip(per_tree.iter()) {
            *m += v;
        }
    }
    for v in &mut mean {
        *v /= forest.trees.len() as f64;
    }
    Ok(mean)
}

const MODEL_FORMAT: &str = "ara-forest/v1";

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    params: ForestParams,
    feature_names: Vec<String>,
    classes: [Level; CLASS_COUNT],
    trees: Vec<TreeNode>,
}

/// Write the forest as versioned JSON. Loading it back reproduces every
/// prediction exactly.
pub fn save_model(forest: &Forest, path: &Path) -> Result<()> {
    let file = ModelFile {
        format: MODEL_FORMAT.to_string(),
        params: forest.params.clone(),
        feature_names: forest.feature_names.clone(),
        classes: forest.classes,
        trees: forest.trees.clone(),
    };
    fs::write(path, serde_json::to_string(&file)? + "\n")?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<Forest> {
    let file: ModelFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    if file.format != MODEL_FORMAT {
        return Err(Error::Model(format!(
            "unsupported model format `{}` (expected `{MODEL_FORMAT}`)",
            file.format
        )));
    }
    if file.trees.is_empty() {
        return Err(Error::Model("model has no trees".into()));
    }
    Ok(Forest {
        params: file.params,
        trees: file.trees,
        feature_names: file.feature_names,
        classes: file.classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(width: usize) -> Vec<String> {
        (0..width).map(|i| format!("x{i}")).collect()
    }

    fn dataset(rows: Vec<Vec<f64>>, labels: Vec<Level>) -> Dataset {
        let width = rows.first().map_or(0, |r| r.len());
        Dataset::new(rows, labels, named(width)).unwrap()
    }

    #[test]
    fn gini_known_values() {
        assert_eq!(gini(&[5, 5, 0]).unwrap(), 0.5);
        assert_eq!(gini(&[7, 0, 0]).unwrap(), 0.0);
        assert!((gini(&[1, 1, 1]).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(gini(&[0, 0, 0]).is_err());
    }

    #[test]
    fn best_split_single_midpoint() {
        let d = dataset(
            vec![vec![1.0], vec![2.0]],
            vec![Level::L1, Level::L2],
        );
        let s = best_split(&d, &[0, 1], &[0], 1).unwrap();
        assert_eq!(s.feature_index, 0);
        assert_eq!(s.threshold, 1.5);
        assert_eq!(s.impurity_decrease, 0.5);
    }

    #[test]
    fn best_split_none_for_constant_feature() {
        let d = dataset(
            vec![vec![3.0], vec![3.0]],
            vec![Level::L1, Level::L2],
        );
        assert!(best_split(&d, &[0, 1], &[0], 1).is_none());
    }

    #[test]
    fn best_split_prefers_perfect_separator() {
        // Feature 1 separates perfectly; feature 0 does not.
        let d = dataset(
            vec![
                vec![1.0, 0.0],
                vec![2.0, 0.0],
                vec![1.5, 1.0],
                vec![2.5, 1.0],
            ],
            vec![Level::L1, Level::L1, Level::L2, Level::L2],
        );
        // Exhaustive enumeration oracle over all (feature, midpoint) pairs.
        let mut oracle_best: Option<SplitCandidate> = None;
        for feature in 0..2 {
            let mut vals: Vec<f64> = (0..4).map(|i| d.row(i)[feature]).collect();
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            for w in vals.windows(2) {
                let threshold = (w[0] + w[1]) / 2.0;
                let mut left = [0u64; 3];
                let mut right = [0u64; 3];
                for i in 0..4 {
                    if d.row(i)[feature] <= threshold {
                        left[d.labels()[i].index()] += 1;
                    } else {
                        right[d.labels()[i].index()] += 1;
                    }
                }
                let nl: u64 = left.iter().sum();
                let nr: u64 = right.iter().sum();
                let dec = gini(&[2, 2, 0]).unwrap()
                    - (nl as f64 / 4.0) * gini(&left).unwrap()
                    - (nr as f64 / 4.0) * gini(&right).unwrap();
                let better = oracle_best.map_or(dec > 0.0, |b| dec > b.impurity_decrease);
                if better {
                    oracle_best = Some(SplitCandidate {
                        feature_index: feature,
                        threshold,
                        impurity_decrease: dec,
                    });
                }
            }
        }
        let s = best_split(&d, &[0, 1, 2, 3], &[0, 1], 1).unwrap();
        let o = oracle_best.unwrap();
        assert_eq!(s.feature_index, o.feature_index);
        assert_eq!(s.feature_index, 1);
        assert_eq!(s.threshold, o.threshold);
    }

    #[test]
    fn best_split_respects_min_samples_leaf() {
        let d = dataset(
            vec![vec![1.0], vec![2.0], vec![3.0]],
            vec![Level::L1, Level::L2, Level::L2],
        );
        // min_samples_leaf 2 leaves no legal cut for 3 samples... the 1|2
        // and 2|1 partitions both violate it.
        assert!(best_split(&d, &[0, 1, 2], &[0], 2).is_none());
    }

    fn separable_dataset() -> Dataset {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            let level = Level::from_index(i % 3).unwrap();
            let base = (i % 3) as f64 * 10.0;
            rows.push(vec![base + (i as f64) * 0.01, (i as f64).sin()]);
            labels.push(level);
        }
        dataset(rows, labels)
    }

    #[test]
    fn separable_data_is_memorized() {
        let d = separable_dataset();
        let params = ForestParams::new(7).with_n_estimators(5);
        let forest = fit(&d, &params).unwrap();
        assert_eq!(forest.accuracy(&d).unwrap(), 1.0);
    }

    #[test]
    fn single_class_always_predicted() {
        let d = dataset(
            vec![vec![1.0], vec![2.0], vec![3.0]],
            vec![Level::L2, Level::L2, Level::L2],
        );
        let forest = fit(&d, &ForestParams::new(1).with_n_estimators(3)).unwrap();
        assert_eq!(forest.predict(&[10.0]).unwrap(), Level::L2);
        assert_eq!(forest.predict(&[-5.0]).unwrap(), Level::L2);
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let d = separable_dataset();
        let params = ForestParams::new(99).with_n_estimators(8);
        let a = fit(&d, &params).unwrap();
        let b = fit(&d, &params).unwrap();
        assert_eq!(a.trees, b.trees);
    }

    #[test]
    fn fit_is_invariant_to_sample_order() {
        let d = separable_dataset();
        let params = ForestParams::new(3).with_n_estimators(6);
        let forward = fit(&d, &params).unwrap();

        let mut rows: Vec<Vec<f64>> = (0..d.len()).map(|i| d.row(i).to_vec()).collect();
        let mut labels = d.labels().to_vec();
        rows.reverse();
        labels.reverse();
        let shuffled = dataset(rows, labels);
        let backward = fit(&shuffled, &params).unwrap();

        assert_eq!(forward.trees, backward.trees);
        for probe in [[0.5, 0.1], [10.2, -0.4], [20.9, 0.7], [15.0, 0.0]] {
            assert_eq!(
                forward.predict(&probe).unwrap(),
                backward.predict(&probe).unwrap()
            );
        }
    }

    #[test]
    fn empty_dataset_rejected() {
        let d = dataset(vec![], vec![]);
        assert!(fit(&d, &ForestParams::new(1)).is_err());
    }

    #[test]
    fn predict_checks_dimensionality() {
        let d = separable_dataset();
        let forest = fit(&d, &ForestParams::new(1).with_n_estimators(2)).unwrap();
        assert!(forest.predict(&[1.0]).is_err());
        assert!(forest.predict(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn vote_tie_breaks_to_lowest_level() {
        let leaf = |level: Level| TreeNode::Leaf {
            class_counts: [0, 0, 0],
            prediction: level,
        };
        let forest = Forest {
            params: ForestParams::new(0).with_n_estimators(2),
            trees: vec![leaf(Level::L3), leaf(Level::L1)],
            feature_names: named(1),
            classes: Level::ALL,
        };
        assert_eq!(forest.predict(&[0.0]).unwrap(), Level::L1);

        let forest = Forest {
            params: ForestParams::new(0).with_n_estimators(3),
            trees: vec![leaf(Level::L1), leaf(Level::L1), leaf(Level::L3)],
            feature_names: named(1),
            classes: Level::ALL,
        };
        assert_eq!(forest.predict(&[0.0]).unwrap(), Level::L1);
    }

    #[test]
    fn single_leaf_tree_predicts_its_class() {
        let forest = Forest {
            params: ForestParams::new(0).with_n_estimators(1),
            trees: vec![TreeNode::Leaf {
                class_counts: [0, 4, 0],
                prediction: Level::L2,
            }],
            feature_names: named(2),
            classes: Level::ALL,
        };
        assert_eq!(forest.predict(&[1.0, 2.0]).unwrap(), Level::L2);
    }

    #[test]
    fn leaves_respect_min_samples_leaf() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..30 {
            rows.push(vec![(i % 7) as f64, (i % 5) as f64]);
            labels.push(Level::from_index(i % 3).unwrap());
        }
        let d = dataset(rows, labels);
        let params = ForestParams::new(11).with_n_estimators(10).with_min_samples_leaf(3);
        let forest = fit(&d, &params).unwrap();
        assert!(forest.min_leaf_size() >= 3);
    }

    #[test]
    fn mdi_single_split_is_one_hot() {
        let d = dataset(
            vec![vec![0.0, 1.0], vec![0.0, 2.0], vec![0.0, 3.0], vec![0.0, 4.0]],
            vec![Level::L1, Level::L1, Level::L2, Level::L2],
        );
        let params = ForestParams::new(5)
            .with_n_estimators(1)
            .with_max_features(MaxFeatures::All)
            .with_bootstrap(false);
        let forest = fit(&d, &params).unwrap();
        let imp = mdi_importance(&forest).unwrap();
        assert_eq!(imp, vec![0.0, 1.0]);
    }

    #[test]
    fn mdi_zero_for_splitless_forest() {
        let d = dataset(
            vec![vec![1.0], vec![2.0]],
            vec![Level::L1, Level::L1],
        );
        let forest = fit(&d, &ForestParams::new(1).with_n_estimators(4)).unwrap();
        let imp = mdi_importance(&forest).unwrap();
        assert_eq!(imp, vec![0.0]);
    }

    #[test]
    fn mdi_hand_evaluated_two_split_tree() {
        // Root [3,3,3]: feature 0 peels off L1, then feature 1 separates
        // L2 from L3. Hand evaluation: root decrease 2/3 - (6/9)(1/2) = 1/3
        // at weight 1, inner decrease 1/2 at weight 6/9 — both contribute
        // 1/3, normalizing to [0.5, 0.5].
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..3 {
            rows.push(vec![0.0, i as f64]);
            labels.push(Level::L1);
        }
        for i in 0..3 {
            rows.push(vec![1.0, 10.0 + i as f64]);
            labels.push(Level::L2);
        }
        for i in 0..3 {
            rows.push(vec![1.0, 20.0 + i as f64]);
            labels.push(Level::L3);
        }
        let d = dataset(rows, labels);
        let params = ForestParams::new(0)
            .with_n_estimators(1)
            .with_max_features(MaxFeatures::All)
            .with_bootstrap(false);
        let forest = fit(&d, &params).unwrap();
        let imp = mdi_importance(&forest).unwrap();
        assert!((imp[0] - 0.5).abs() < 1e-12, "{imp:?}");
        assert!((imp[1] - 0.5).abs() < 1e-12, "{imp:?}");
    }

    #[test]
    fn mdi_sums_to_one_when_split_exists() {
        let d = separable_dataset();
        let forest = fit(&d, &ForestParams::new(21).with_n_estimators(25)).unwrap();
        assert!(forest.trees.iter().any(TreeNode::has_split));
        let total: f64 = mdi_importance(&forest).unwrap().iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "sum {total}");
    }

    #[test]
    fn model_round_trip_is_exact() {
        let d = separable_dataset();
        let forest = fit(&d, &ForestParams::new(13).with_n_estimators(7)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model(&forest, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(loaded.trees, forest.trees);
        assert_eq!(loaded.feature_names, forest.feature_names);
        for i in 0..d.len() {
            assert_eq!(
                loaded.predict(d.row(i)).unwrap(),
                forest.predict(d.row(i)).unwrap()
            );
        }
    }

    #[test]
    fn model_format_is_checked() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(
            &path,
            r#"{"format":"other/v9","params":{"n_estimators":1,"max_depth":null,"min_samples_split":2,"min_samples_leaf":1,"max_features":"sqrt","bootstrap":true,"seed":0},"feature_names":[],"classes":["L1","L2","L3"],"trees":[]}"#,
        )
        .unwrap();
        assert!(load_model(&path).is_err());
    }
}
