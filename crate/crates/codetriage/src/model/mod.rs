//! Trainable classifiers over lexical features, and their persistence.
//!
//! A trained model bundles the label set, the fitted vocabulary, the
//! classifier proper, and the configuration it was trained with. The
//! vocabulary is fitted by the caller (on training data only) and passed
//! in, so held-out evaluation can never leak document frequencies.
//! Feature extraction depends on the classifier: boosted trees consume
//! TF-IDF vectors, naive Bayes consumes raw term counts.
//!
//! Persistence writes three versioned JSON files into a directory:
//! `model.json`, `vectorizer.json`, and `label_to_index.json`. Loading
//! checks each file's `format_version` before attempting a full parse,
//! and everything serialized is a plain list, so byte layout never
//! depends on hash-map iteration order.

pub mod gbt;
pub mod nb;
pub mod tree;
pub mod validate;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, LabelSet};
use crate::error::{Error, Result};
use crate::features::{self, FeatureSettings, FeatureVector, Vocabulary};
use crate::lexer::tokenize;
pub use gbt::{train_gbt, GbtModel, GbtParams};
pub use nb::{train_nb, NbModel, NbParams};
pub use validate::{cross_validate, grid_search, CvResult, GridSearchResult};

pub const MODEL_FILE: &str = "model.json";
pub const VECTORIZER_FILE: &str = "vectorizer.json";
pub const LABEL_INDEX_FILE: &str = "label_to_index.json";
const FORMAT_VERSION: u64 = 1;

/// In-place softmax: shift by the max, exponentiate, normalize.
pub(crate) fn softmax_into(scores: &mut [f64]) {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for score in scores.iter_mut() {
        *score = (*score - max).exp();
        total += *score;
    }
    for score in scores.iter_mut() {
        *score /= total;
    }
}

/// Index of the largest score; ties keep the lowest index.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &score) in scores.iter().enumerate().skip(1) {
        if score > scores[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Gbt,
    Nb,
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gbt" => Ok(ClassifierKind::Gbt),
            "nb" => Ok(ClassifierKind::Nb),
            other => Err(Error::InvalidConfig(format!(
                "unknown classifier {other:?} (expected \"gbt\" or \"nb\")"
            ))),
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassifierKind::Gbt => "gbt",
            ClassifierKind::Nb => "nb",
        })
    }
}

/// Everything a training run needs beyond the data itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub classifier: ClassifierKind,
    pub gbt: GbtParams,
    pub nb: NbParams,
    pub features: FeatureSettings,
    pub seed: u64,
    pub test_split: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            classifier: ClassifierKind::Gbt,
            gbt: GbtParams::default(),
            nb: NbParams::default(),
            features: FeatureSettings::default(),
            seed: 42,
            test_split: 0.2,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        self.gbt.validate()?;
        self.nb.validate()?;
        if self.features.min_df == 0 {
            return Err(Error::InvalidConfig(
                "minimum document frequency must be at least 1".into(),
            ));
        }
        if !(self.test_split > 0.0 && self.test_split < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "test split must be strictly between 0 and 1, got {}",
                self.test_split
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classifier {
    Gbt(GbtModel),
    Nb(NbModel),
}

impl Classifier {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            Classifier::Gbt(_) => ClassifierKind::Gbt,
            Classifier::Nb(_) => ClassifierKind::Nb,
        }
    }
}

/// A classifier together with the vocabulary, label set, and config it
/// was trained with.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    labelset: LabelSet,
    vocabulary: Vocabulary,
    classifier: Classifier,
    config: TrainConfig,
}

impl TrainedModel {
    pub fn labelset(&self) -> &LabelSet {
        &self.labelset
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn classifier(&self) -> &Classifier {
        &self.classifier
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    /// Featurizes code the way this model's classifier expects.
    pub fn feature_vector(&self, code: &str) -> FeatureVector {
        let tokens = tokenize(code);
        match self.classifier {
            Classifier::Gbt(_) => features::transform(&tokens, &self.vocabulary),
            Classifier::Nb(_) => features::term_counts(&tokens, &self.vocabulary),
        }
    }

    /// Class probabilities for a snippet, in label index order.
    pub fn predict_scores(&self, code: &str) -> Vec<f64> {
        let x = self.feature_vector(code);
        match &self.classifier {
            Classifier::Gbt(model) => model.predict_proba(&x),
            Classifier::Nb(model) => model.predict_proba(&x),
        }
    }

    /// Most probable label name; ties keep the lowest class index.
    pub fn predict_label(&self, code: &str) -> &str {
        self.labelset.name(argmax(&self.predict_scores(code)))
    }
}

/// Trains a classifier on a dataset with an externally fitted vocabulary.
pub fn train(
    train_set: &Dataset,
    vocabulary: &Vocabulary,
    config: &TrainConfig,
) -> Result<TrainedModel> {
    config.validate()?;
    if train_set.is_empty() {
        return Err(Error::InvalidConfig("training set is empty".into()));
    }
    let labelset = train_set.labelset().clone();
    let labels: Vec<usize> = train_set
        .snippets()
        .iter()
        .map(|s| labelset.index_of(&s.classification).unwrap())
        .collect();
    let streams: Vec<_> = train_set
        .snippets()
        .iter()
        .map(|s| tokenize(&s.code))
        .collect();
    let classifier = match config.classifier {
        ClassifierKind::Gbt => {
            let samples: Vec<FeatureVector> = streams
                .iter()
                .map(|t| features::transform(t, vocabulary))
                .collect();
            Classifier::Gbt(train_gbt(&samples, &labels, labelset.len(), &config.gbt)?)
        }
        ClassifierKind::Nb => {
            let samples: Vec<FeatureVector> = streams
                .iter()
                .map(|t| features::term_counts(t, vocabulary))
                .collect();
            Classifier::Nb(train_nb(
                &samples,
                &labels,
                labelset.len(),
                vocabulary.len(),
                &config.nb,
            )?)
        }
    };
    Ok(TrainedModel {
        labelset,
        vocabulary: vocabulary.clone(),
        classifier,
        config: config.clone(),
    })
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u64,
    config: TrainConfig,
    classifier: Classifier,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    term: String,
    doc_freq: u32,
}

#[derive(Serialize, Deserialize)]
struct VectorizerFile {
    format_version: u64,
    n_documents: u32,
    settings: FeatureSettings,
    /// Terms in feature index order.
    terms: Vec<TermRecord>,
}

#[derive(Serialize, Deserialize)]
struct LabelIndexFile {
    format_version: u64,
    /// Label names in class index order.
    labels: Vec<String>,
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::CorruptArtifact {
        name: name.to_string(),
        reason: e.to_string(),
    })?;
    text.push('\n');
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| Error::io(path, e))
}

/// Saves the three model artifacts into `dir`, creating it if needed.
pub fn save_model(model: &TrainedModel, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_json(
        dir,
        MODEL_FILE,
        &ModelFile {
            format_version: FORMAT_VERSION,
            config: model.config.clone(),
            classifier: model.classifier.clone(),
        },
    )?;
    write_json(
        dir,
        VECTORIZER_FILE,
        &VectorizerFile {
            format_version: FORMAT_VERSION,
            n_documents: model.vocabulary.n_documents(),
            settings: model.vocabulary.settings(),
            terms: model
                .vocabulary
                .terms()
                .iter()
                .map(|entry| TermRecord {
                    term: entry.term.clone(),
                    doc_freq: entry.doc_freq,
                })
                .collect(),
        },
    )?;
    write_json(
        dir,
        LABEL_INDEX_FILE,
        &LabelIndexFile {
            format_version: FORMAT_VERSION,
            labels: model.labelset.names().to_vec(),
        },
    )
}

/// Reads one artifact, checking the format version before the full parse.
fn read_versioned<T: serde::de::DeserializeOwned>(dir: &Path, name: &str) -> Result<T> {
    let path = dir.join(name);
    let text = match fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::MissingArtifact {
                name: name.to_string(),
            });
        }
        Err(e) => return Err(Error::io(path, e)),
    };
    let corrupt = |reason: String| Error::CorruptArtifact {
        name: name.to_string(),
        reason,
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
    let found = value
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| corrupt("missing format_version".to_string()))?;
    if found != FORMAT_VERSION {
        return Err(Error::FormatVersion {
            name: name.to_string(),
            found,
            expected: FORMAT_VERSION,
        });
    }
    serde_json::from_value(value).map_err(|e| corrupt(e.to_string()))
}

/// Loads a model saved by [`save_model`].
pub fn load_model(dir: &Path) -> Result<TrainedModel> {
    let model_file: ModelFile = read_versioned(dir, MODEL_FILE)?;
    let vectorizer_file: VectorizerFile = read_versioned(dir, VECTORIZER_FILE)?;
    let label_file: LabelIndexFile = read_versioned(dir, LABEL_INDEX_FILE)?;

    let labelset = LabelSet::new(label_file.labels)?;
    let vocabulary = Vocabulary::from_parts(
        vectorizer_file
            .terms
            .into_iter()
            .map(|record| (record.term, record.doc_freq))
            .collect(),
        vectorizer_file.n_documents,
        vectorizer_file.settings,
    )?;

    let k = match &model_file.classifier {
        Classifier::Gbt(m) => m.n_classes as usize,
        Classifier::Nb(m) => m.n_classes as usize,
    };
    if k != labelset.len() {
        return Err(Error::CorruptArtifact {
            name: MODEL_FILE.to_string(),
            reason: format!(
                "classifier covers {k} classes but the label index lists {}",
                labelset.len()
            ),
        });
    }
    if let Classifier::Nb(m) = &model_file.classifier {
        if m.vocab_size as usize != vocabulary.len() {
            return Err(Error::CorruptArtifact {
                name: MODEL_FILE.to_string(),
                reason: format!(
                    "classifier covers {} terms but the vectorizer lists {}",
                    m.vocab_size,
                    vocabulary.len()
                ),
            });
        }
    }

    Ok(TrainedModel {
        labelset,
        vocabulary,
        classifier: model_file.classifier,
        config: model_file.config,
    })
}
