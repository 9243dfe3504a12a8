//! Multinomial naive Bayes over raw term counts with Laplace smoothing.
//!
//! Priors are empirical class frequencies; term likelihoods are smoothed
//! per-class term frequencies. Scoring sums log-likelihoods weighted by
//! the document's term counts, and the exact class posteriors fall out of
//! a softmax over the joint log-probabilities.

use serde::{Deserialize, Serialize};

use super::softmax_into;
use crate::error::{Error, Result};
use crate::features::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NbParams {
    pub alpha: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        NbParams { alpha: 1.0 }
    }
}

impl NbParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "smoothing alpha must be finite and positive, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub n_classes: u32,
    pub vocab_size: u32,
    pub alpha: f64,
    /// ln(class count / total count), by class index.
    pub log_priors: Vec<f64>,
    /// log_likelihoods[class][term] = ln((count + alpha) / (total + alpha * V))
    pub log_likelihoods: Vec<Vec<f64>>,
}

impl NbModel {
    /// Unnormalized log-posterior per class for a raw count vector.
    pub fn log_posteriors(&self, counts: &FeatureVector) -> Vec<f64> {
        (0..self.n_classes as usize)
            .map(|class| {
                let mut score = self.log_priors[class];
                for &(term, count) in &counts.entries {
                    score += count * self.log_likelihoods[class][term as usize];
                }
                score
            })
            .collect()
    }

    /// Exact class posteriors: softmax of the log-posteriors.
    pub fn predict_proba(&self, counts: &FeatureVector) -> Vec<f64> {
        let mut scores = self.log_posteriors(counts);
        softmax_into(&mut scores);
        scores
    }
}

/// Trains the model on raw count vectors with class-index labels. Every
/// class must appear at least once, or its prior would be undefined.
pub fn train_nb(
    samples: &[FeatureVector],
    labels: &[usize],
    n_classes: usize,
    vocab_size: usize,
    params: &NbParams,
) -> Result<NbModel> {
    params.validate()?;
    let n = samples.len();
    if n == 0 {
        return Err(Error::InvalidConfig("no training samples".into()));
    }
    assert_eq!(labels.len(), n);
    assert!(labels.iter().all(|&y| y < n_classes), "label out of range");

    let mut doc_counts = vec![0usize; n_classes];
    let mut term_counts = vec![vec![0.0f64; vocab_size]; n_classes];
    for (sample, &label) in samples.iter().zip(labels) {
        doc_counts[label] += 1;
        for &(term, count) in &sample.entries {
            term_counts[label][term as usize] += count;
        }
    }
    if let Some(class) = doc_counts.iter().position(|&c| c == 0) {
        return Err(Error::InvalidConfig(format!(
            "class {class} has no training samples"
        )));
    }

    let alpha = params.alpha;
    let log_priors = doc_counts
        .iter()
        .map(|&c| (c as f64 / n as f64).ln())
        .collect();
    let log_likelihoods = term_counts
        .iter()
        .map(|counts| {
            let total: f64 = counts.iter().sum();
            let denominator = total + alpha * vocab_size as f64;
            counts
                .iter()
                .map(|&count| ((count + alpha) / denominator).ln())
                .collect()
        })
        .collect();

    Ok(NbModel {
        n_classes: n_classes as u32,
        vocab_size: vocab_size as u32,
        alpha,
        log_priors,
        log_likelihoods,
    })
}
