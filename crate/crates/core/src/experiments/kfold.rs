//! Stratified k-fold assignment with seeded, order-independent shuffling.

use rand::seq::SliceRandom;

use crate::corpus::Level;
use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Assign each sample to one of `k` folds, stratified by class: within each
/// class the indices are shuffled by a seeded stream and dealt round-robin,
/// so per-class fold sizes differ by at most one. Classes with fewer than
/// `k` samples are allowed (some folds then lack them) with a warning on
/// stderr.
pub fn stratified_kfold(labels: &[Level], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::Experiment(format!("k must be >= 2, got {k}")));
    }
    if labels.is_empty() {
        return Err(Error::Experiment("no labels to fold".to_string()));
    }
    let mut assignment = vec![0usize; labels.len()];
    for level in Level::ALL {
        let mut indices: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == level).then_some(i))
            .collect();
        if indices.is_empty() {
            continue;
        }
        if indices.len() < k {
            eprintln!(
                "warning: class {level} has {} samples, fewer than k = {k}; some folds will lack it",
                indices.len()
            );
        }
        let mut rng = stream_rng(seed, level.index() as u64);
        indices.shuffle(&mut rng);
        for (j, &sample) in indices.iter().enumerate() {
            assignment[sample] = j % k;
        }
    }
    Ok(assignment)
}
