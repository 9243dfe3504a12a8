//! Gradient-boosted regression trees for multiclass classification.
//!
//! Boosting starts from all-zero class scores. Each round computes
//! softmax probabilities, then fits one tree per class to the residuals
//! (one-hot truth minus probability) with variance-reduction splits; leaf
//! values take a Newton step, scaled by (K-1)/K over the sum of p(1-p),
//! and every tree's contribution is shrunk by the learning rate. The mean
//! negative log-likelihood on the training set is recorded before the
//! first round and after every round.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::softmax_into;
use super::tree::{fit_tree, ColumnMatrix, Tree, TreeParams};
use crate::error::{Error, Result};
use crate::features::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbtParams {
    pub rounds: u32,
    pub max_depth: u32,
    pub learning_rate: f64,
    pub min_samples_leaf: u32,
}

impl Default for GbtParams {
    fn default() -> Self {
        GbtParams {
            rounds: 100,
            max_depth: 3,
            learning_rate: 0.1,
            min_samples_leaf: 2,
        }
    }
}

impl GbtParams {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidConfig("rounds must be at least 1".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidConfig("max depth must be at least 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be finite and positive, got {}",
                self.learning_rate
            )));
        }
        if self.min_samples_leaf == 0 {
            return Err(Error::InvalidConfig(
                "min samples per leaf must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbtModel {
    pub n_classes: u32,
    pub learning_rate: f64,
    /// trees[round][class]
    pub trees: Vec<Vec<Tree>>,
    /// Mean training negative log-likelihood: the initial value, then one
    /// entry per boosting round.
    pub train_loss: Vec<f64>,
}

impl GbtModel {
    /// Raw additive scores per class (before the softmax).
    pub fn decision_scores(&self, x: &FeatureVector) -> Vec<f64> {
        let mut scores = vec![0.0; self.n_classes as usize];
        for round in &self.trees {
            for (score, tree) in scores.iter_mut().zip(round) {
                *score += self.learning_rate * tree.predict(x);
            }
        }
        scores
    }

    /// Class probabilities: softmax over the decision scores.
    pub fn predict_proba(&self, x: &FeatureVector) -> Vec<f64> {
        let mut scores = self.decision_scores(x);
        softmax_into(&mut scores);
        scores
    }
}

/// Mean negative log-likelihood of the labels under softmax of the score
/// rows, in the numerically stable log-sum-exp form.
fn mean_nll(scores: &[f64], labels: &[usize], k: usize) -> f64 {
    let n = labels.len();
    let mut total = 0.0;
    for (i, &label) in labels.iter().enumerate() {
        let row = &scores[i * k..(i + 1) * k];
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + row.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
        total += lse - row[label];
    }
    total / n as f64
}

/// Trains a boosted model on featurized samples with class-index labels.
pub fn train_gbt(
    samples: &[FeatureVector],
    labels: &[usize],
    n_classes: usize,
    params: &GbtParams,
) -> Result<GbtModel> {
    params.validate()?;
    let n = samples.len();
    if n == 0 {
        return Err(Error::InvalidConfig("no training samples".into()));
    }
    assert_eq!(labels.len(), n);
    let k = n_classes;
    assert!(labels.iter().all(|&y| y < k), "label out of range");

    let matrix = ColumnMatrix::from_rows(samples);
    let tree_params = TreeParams {
        max_depth: params.max_depth,
        min_samples_leaf: params.min_samples_leaf as usize,
    };
    let leaf_scale = (k as f64 - 1.0) / k as f64;

    // Score and probability rows, flattened n x k.
    let mut scores = vec![0.0f64; n * k];
    let mut probs = vec![0.0f64; n * k];
    let mut trees = Vec::with_capacity(params.rounds as usize);
    let mut train_loss = Vec::with_capacity(params.rounds as usize + 1);
    train_loss.push(mean_nll(&scores, labels, k));

    for _ in 0..params.rounds {
        probs.copy_from_slice(&scores);
        for row in probs.chunks_mut(k) {
            softmax_into(row);
        }
        let round: Vec<(Tree, Vec<f64>)> = (0..k)
            .into_par_iter()
            .map(|class| {
                let mut targets = Vec::with_capacity(n);
                let mut weights = Vec::with_capacity(n);
                for (i, &label) in labels.iter().enumerate() {
                    let p = probs[i * k + class];
                    let truth = if label == class { 1.0 } else { 0.0 };
                    targets.push(truth - p);
                    weights.push(p * (1.0 - p));
                }
                fit_tree(&matrix, &targets, &weights, leaf_scale, tree_params)
            })
            .collect();
        let mut round_trees = Vec::with_capacity(k);
        for (class, (tree, fitted)) in round.into_iter().enumerate() {
            for (i, value) in fitted.into_iter().enumerate() {
                scores[i * k + class] += params.learning_rate * value;
            }
            round_trees.push(tree);
        }
        trees.push(round_trees);
        train_loss.push(mean_nll(&scores, labels, k));
    }

    Ok(GbtModel {
        n_classes: k as u32,
        learning_rate: params.learning_rate,
        trees,
        train_loss,
    })
}
