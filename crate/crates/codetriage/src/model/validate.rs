//! Stratified cross-validation and exhaustive configuration search.
//!
//! Folds are assigned per class, round-robin in dataset order, so the
//! assignment is deterministic and every fold sees every class. Each
//! fold refits the vocabulary on its own training portion before
//! training, keeping held-out documents out of the document frequencies.

use super::{train, TrainConfig};
use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::features;
use crate::lexer::{tokenize, Token};

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
}

/// K-fold cross-validated accuracy. Every class must hold at least `k`
/// samples so each fold keeps full class coverage on both sides.
pub fn cross_validate(dataset: &Dataset, config: &TrainConfig, k: usize) -> Result<CvResult> {
    config.validate()?;
    if k < 2 {
        return Err(Error::InvalidConfig(format!(
            "cross-validation needs at least 2 folds, got {k}"
        )));
    }
    let labelset = dataset.labelset();
    for (class, &count) in dataset.class_counts().iter().enumerate() {
        if count < k {
            return Err(Error::ClassTooSmall {
                label: labelset.name(class).to_string(),
                min: k,
            });
        }
    }

    let mut fold_of = vec![0usize; dataset.len()];
    let mut seen = vec![0usize; labelset.len()];
    for (i, snippet) in dataset.snippets().iter().enumerate() {
        let class = labelset.index_of(&snippet.classification).unwrap();
        fold_of[i] = seen[class] % k;
        seen[class] += 1;
    }

    let mut fold_accuracies = Vec::with_capacity(k);
    for fold in 0..k {
        let train_snippets: Vec<_> = dataset
            .snippets()
            .iter()
            .zip(&fold_of)
            .filter(|(_, &f)| f != fold)
            .map(|(s, _)| s.clone())
            .collect();
        let train_set = Dataset::new(train_snippets, labelset.clone())?;
        let streams: Vec<_> = train_set
            .snippets()
            .iter()
            .map(|s| tokenize(&s.code))
            .collect();
        let documents: Vec<&[Token]> = streams.iter().map(|s| s.tokens.as_slice()).collect();
        let vocabulary = features::fit_vocabulary(&documents, config.features)?;
        let model = train(&train_set, &vocabulary, config)?;

        let mut total = 0usize;
        let mut correct = 0usize;
        for (snippet, _) in dataset
            .snippets()
            .iter()
            .zip(&fold_of)
            .filter(|(_, &f)| f == fold)
        {
            total += 1;
            if model.predict_label(&snippet.code) == snippet.classification {
                correct += 1;
            }
        }
        fold_accuracies.push(correct as f64 / total as f64);
    }

    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / k as f64;
    Ok(CvResult {
        fold_accuracies,
        mean_accuracy,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchResult {
    pub best_index: usize,
    pub best_config: TrainConfig,
    pub results: Vec<CvResult>,
}

/// Cross-validates every candidate and keeps the highest mean accuracy;
/// ties keep the earliest grid position.
pub fn grid_search(
    dataset: &Dataset,
    grid: &[TrainConfig],
    k: usize,
) -> Result<GridSearchResult> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("configuration grid is empty".into()));
    }
    let results: Vec<CvResult> = grid
        .iter()
        .map(|config| cross_validate(dataset, config, k))
        .collect::<Result<_>>()?;
    let mut best_index = 0;
    for (i, result) in results.iter().enumerate().skip(1) {
        if result.mean_accuracy > results[best_index].mean_accuracy {
            best_index = i;
        }
    }
    Ok(GridSearchResult {
        best_index,
        best_config: grid[best_index].clone(),
        results,
    })
}
