//! Snippet datasets: labels, JSON persistence, stratified splitting,
//! label corrections, and synthetic corpus generation.

pub mod mutation;

use std::collections::{HashMap, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Canonical names of the default seven-way taxonomy.
pub mod labels {
    pub const CORRECT_CODE: &str = "Correct Code";
    pub const COMPATIBILITY_ISSUE: &str = "Compatibility Issue";
    pub const PERFORMANCE_ISSUE: &str = "Performance Issue";
    pub const RUNTIME_ERROR: &str = "Runtime Error";
    pub const SYNTAX_ERROR: &str = "Syntax Error";
    pub const LOGIC_ERROR: &str = "Logic Error";
    pub const SECURITY_ISSUE: &str = "Security Issue";
}

/// The default labels in index order. Class indices everywhere in the crate
/// (model outputs, reports, confusion matrices) refer to this order unless a
/// dataset supplies its own set.
pub fn default_labelset() -> LabelSet {
    LabelSet::new([
        labels::CORRECT_CODE,
        labels::COMPATIBILITY_ISSUE,
        labels::PERFORMANCE_ISSUE,
        labels::RUNTIME_ERROR,
        labels::SYNTAX_ERROR,
        labels::LOGIC_ERROR,
        labels::SECURITY_ISSUE,
    ])
    .expect("default labels are distinct")
}

/// An ordered set of class names. The position of a name is its class index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidConfig(format!("duplicate label {name:?}")));
            }
        }
        if names.is_empty() {
            return Err(Error::InvalidConfig("label set is empty".to_string()));
        }
        Ok(LabelSet { names, index })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Content hash of a snippet's code: lowercase SHA-256 hex. The id is a pure
/// function of the code and is recomputed on every load, never trusted from
/// a file.
pub fn snippet_id(code: &str) -> String {
    let digest = Sha256::digest(code.as_bytes());
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSnippet {
    pub id: String,
    pub code: String,
    pub classification: String,
}

impl CodeSnippet {
    pub fn new(code: impl Into<String>, classification: impl Into<String>) -> Self {
        let code = code.into();
        CodeSnippet {
            id: snippet_id(&code),
            code,
            classification: classification.into(),
        }
    }
}

/// A labeled collection of snippets. Construction validates that every
/// classification belongs to the label set and that snippet ids (hence code
/// bodies) are unique.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    snippets: Vec<CodeSnippet>,
    labelset: LabelSet,
}

impl Dataset {
    pub fn new(snippets: Vec<CodeSnippet>, labelset: LabelSet) -> Result<Self> {
        let mut seen = HashSet::new();
        for snippet in &snippets {
            if labelset.index_of(&snippet.classification).is_none() {
                return Err(Error::UnknownLabel {
                    label: snippet.classification.clone(),
                });
            }
            if !seen.insert(snippet.id.as_str()) {
                return Err(Error::DuplicateId {
                    id: snippet.id.clone(),
                });
            }
        }
        drop(seen);
        Ok(Dataset { snippets, labelset })
    }

    pub fn snippets(&self) -> &[CodeSnippet] {
        &self.snippets
    }

    pub fn labelset(&self) -> &LabelSet {
        &self.labelset
    }

    pub fn len(&self) -> usize {
        self.snippets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snippets.is_empty()
    }

    /// Snippet count per class, in label index order.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.labelset.len()];
        for snippet in &self.snippets {
            counts[self.labelset.index_of(&snippet.classification).unwrap()] += 1;
        }
        counts
    }

    /// Order-sensitive digest of (id, classification) pairs; two datasets
    /// with the same fingerprint hold the same labeled code.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for snippet in &self.snippets {
            hasher.update(snippet.id.as_bytes());
            hasher.update(b"\n");
            hasher.update(snippet.classification.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Serialize)]
struct RecordOut<'a> {
    code: &'a str,
    classification: &'a str,
    id: &'a str,
}

/// Loads a dataset file (a JSON array of `{"code", "classification"}`
/// records, optionally with an `id`), inferring the label set from the
/// labels present in first-seen order.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    load_inner(path, None)
}

/// Like [`load_dataset`] but validates every record against `labelset`
/// instead of inferring one.
pub fn load_dataset_with(path: &Path, labelset: &LabelSet) -> Result<Dataset> {
    load_inner(path, Some(labelset))
}

fn load_inner(path: &Path, labelset: Option<&LabelSet>) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        reason: format!("invalid JSON: {e}"),
    })?;
    let records = value.as_array().ok_or_else(|| Error::Format {
        path: path.to_path_buf(),
        reason: "expected a JSON array of records".to_string(),
    })?;

    let mut snippets = Vec::with_capacity(records.len());
    let mut seen_labels: Vec<String> = Vec::new();
    for (index, record) in records.iter().enumerate() {
        let object = record.as_object().ok_or_else(|| Error::MalformedRecord {
            index,
            reason: "not an object".to_string(),
        })?;
        for key in object.keys() {
            if key != "code" && key != "classification" && key != "id" {
                return Err(Error::MalformedRecord {
                    index,
                    reason: format!("unexpected field {key:?}"),
                });
            }
        }
        let field = |name: &str| -> Result<&str> {
            let value = object.get(name).ok_or_else(|| Error::MalformedRecord {
                index,
                reason: format!("missing {name}"),
            })?;
            value.as_str().ok_or_else(|| Error::MalformedRecord {
                index,
                reason: format!("non-string {name}"),
            })
        };
        let code = field("code")?;
        let classification = field("classification")?;
        if code.trim().is_empty() {
            return Err(Error::MalformedRecord {
                index,
                reason: "empty code".to_string(),
            });
        }
        if !seen_labels.iter().any(|l| l == classification) {
            seen_labels.push(classification.to_string());
        }
        snippets.push(CodeSnippet::new(code, classification));
    }

    let labelset = match labelset {
        Some(set) => set.clone(),
        None if snippets.is_empty() => default_labelset(),
        None => LabelSet::new(seen_labels)?,
    };
    Dataset::new(snippets, labelset)
}

/// Writes the dataset as a pretty-printed JSON array with `code`,
/// `classification`, and (recomputed) `id` per record. Byte-deterministic
/// for a given dataset.
pub fn save_dataset(dataset: &Dataset, path: &Path) -> Result<()> {
    let records: Vec<RecordOut> = dataset
        .snippets
        .iter()
        .map(|s| RecordOut {
            code: &s.code,
            classification: &s.classification,
            id: &s.id,
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&records).expect("dataset serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Mixes a master seed with a domain tag and an index into a fresh seed, so
/// that each consumer of randomness gets an independent, reproducible
/// stream.
pub(crate) fn derive_seed(master: u64, domain: &str, index: u64) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(domain.as_bytes());
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// Splits into (train, test) with per-class proportions preserved: each
/// class contributes `round(count * test_fraction)` test snippets, clamped
/// so both sides keep at least one. Deterministic in `seed`; input order is
/// preserved within each side.
pub fn stratified_split(
    dataset: &Dataset,
    test_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "test fraction must be strictly between 0 and 1, got {test_fraction}"
        )));
    }
    let labelset = &dataset.labelset;
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); labelset.len()];
    for (i, snippet) in dataset.snippets.iter().enumerate() {
        by_class[labelset.index_of(&snippet.classification).unwrap()].push(i);
    }

    let mut in_test = vec![false; dataset.snippets.len()];
    for (class, members) in by_class.iter().enumerate() {
        if members.len() < 2 {
            return Err(Error::ClassTooSmall {
                label: labelset.name(class).to_string(),
                min: 2,
            });
        }
        let count = members.len();
        let n_test = ((count as f64 * test_fraction).round() as usize).clamp(1, count - 1);
        let mut shuffled = members.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "split", class as u64));
        shuffled.shuffle(&mut rng);
        for &i in &shuffled[..n_test] {
            in_test[i] = true;
        }
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, snippet) in dataset.snippets.iter().enumerate() {
        if in_test[i] {
            test.push(snippet.clone());
        } else {
            train.push(snippet.clone());
        }
    }
    Ok((
        Dataset::new(train, labelset.clone())?,
        Dataset::new(test, labelset.clone())?,
    ))
}

/// A relabeling of one snippet, addressed by content id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Correction {
    pub id: String,
    pub classification: String,
}

pub fn load_corrections(path: &Path) -> Result<Vec<Correction>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        reason: format!("invalid corrections file: {e}"),
    })
}

/// Applies label corrections in order, returning the updated dataset and
/// how many snippets actually changed label. Applying the same corrections
/// twice is a no-op the second time.
pub fn apply_corrections(
    dataset: &Dataset,
    corrections: &[Correction],
) -> Result<(Dataset, usize)> {
    let mut by_id: HashMap<&str, usize> = HashMap::new();
    for (i, snippet) in dataset.snippets.iter().enumerate() {
        by_id.insert(snippet.id.as_str(), i);
    }
    let mut snippets = dataset.snippets.clone();
    let mut changed = 0usize;
    for correction in corrections {
        let &i = by_id.get(correction.id.as_str()).ok_or_else(|| Error::UnknownId {
            id: correction.id.clone(),
        })?;
        if dataset.labelset.index_of(&correction.classification).is_none() {
            return Err(Error::UnknownLabel {
                label: correction.classification.clone(),
            });
        }
        if snippets[i].classification != correction.classification {
            snippets[i].classification = correction.classification.clone();
            changed += 1;
        }
    }
    Ok((Dataset::new(snippets, dataset.labelset.clone())?, changed))
}

/// Builds a synthetic corpus with exactly `per_class` snippets per label.
/// Correct snippets are drawn from `pool` verbatim; every other class is
/// produced by applying a label-targeted mutation to a pool snippet. Each
/// class samples the pool without replacement, so the pool must hold at
/// least `per_class` snippets. Fully determined by `seed`.
pub fn generate_corpus(
    pool: &[CodeSnippet],
    per_class: usize,
    labelset: &LabelSet,
    seed: u64,
) -> Result<Dataset> {
    use rand::Rng;

    if per_class == 0 {
        return Err(Error::InvalidConfig(
            "per-class count must be at least 1".to_string(),
        ));
    }
    if pool.len() < per_class {
        return Err(Error::PoolTooSmall {
            pool: pool.len(),
            needed: per_class,
        });
    }
    for name in labelset.names() {
        if name != labels::CORRECT_CODE && mutation::Mutation::operators_for(name).is_empty() {
            return Err(Error::NoOperatorForLabel {
                label: name.clone(),
            });
        }
    }

    let mut out = Vec::with_capacity(per_class * labelset.len());
    for (class, label) in labelset.names().iter().enumerate() {
        let mut order: Vec<usize> = (0..pool.len()).collect();
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(seed, "pool-order", class as u64));
        order.shuffle(&mut rng);
        for slot in 0..per_class {
            let source = &pool[order[slot]];
            if label == labels::CORRECT_CODE {
                out.push(CodeSnippet::new(source.code.clone(), label.clone()));
                continue;
            }
            let snippet_seed =
                derive_seed(seed, "snippet", ((class as u64) << 32) | slot as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(snippet_seed);
            let operators = mutation::Mutation::operators_for(label);
            let stream = crate::lexer::tokenize(&source.code);
            let start = rng.random_range(0..operators.len());
            let operator = (0..operators.len())
                .map(|k| operators[(start + k) % operators.len()])
                .find(|op| op.applies(&stream))
                .ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "no applicable mutation for label {label:?} on snippet {}",
                        source.id
                    ))
                })?;
            let mutated = operator.apply(&source.code, rng.random());
            debug_assert_ne!(mutated, source.code);
            out.push(CodeSnippet::new(mutated, label.clone()));
        }
    }
    Dataset::new(out, labelset.clone())
}
