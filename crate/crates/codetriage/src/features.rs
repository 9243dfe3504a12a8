//! Bag-of-tokens TF-IDF features.
//!
//! Terms are the lexemes of identifier, keyword, operator, and punctuation
//! tokens; string and number literals collapse to placeholder terms so that
//! `'a.txt'` and `'b.txt'` look alike. Layout tokens (newline, indent,
//! dedent) and comments carry no signal here and are dropped. With bigrams
//! enabled (the default), adjacent retained terms also form joined terms,
//! which is what separates `print (` from the Python 2 statement `print x`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexer::{Token, TokenKind};

pub const STR_TERM: &str = "<STR>";
pub const NUM_TERM: &str = "<NUM>";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureSettings {
    /// Emit adjacent-term bigrams in addition to unigrams.
    pub bigrams: bool,
    /// Keep only terms that appear in at least this many documents.
    pub min_df: u32,
}

impl Default for FeatureSettings {
    fn default() -> Self {
        FeatureSettings {
            bigrams: true,
            min_df: 2,
        }
    }
}

fn term_of(token: &Token) -> Option<&str> {
    match token.kind {
        TokenKind::Identifier | TokenKind::Keyword | TokenKind::Operator
        | TokenKind::Punctuation => Some(token.text.as_str()),
        TokenKind::String => Some(STR_TERM),
        TokenKind::Number => Some(NUM_TERM),
        TokenKind::Newline | TokenKind::Indent | TokenKind::Dedent | TokenKind::Comment => None,
    }
}

/// The retained unigram terms of a token slice, in source order.
pub fn unigrams(tokens: &[Token]) -> Vec<String> {
    tokens
        .iter()
        .filter_map(term_of)
        .map(str::to_string)
        .collect()
}

/// The full term sequence of a document: each unigram, followed by the
/// bigram it closes (bigrams join adjacent retained terms with a space and
/// freely cross line boundaries). This order is what assigns first-seen
/// vocabulary indices.
pub fn terms(tokens: &[Token], bigrams: bool) -> Vec<String> {
    let unigrams = unigrams(tokens);
    let mut out = Vec::with_capacity(if bigrams {
        unigrams.len().saturating_mul(2)
    } else {
        unigrams.len()
    });
    for i in 0..unigrams.len() {
        out.push(unigrams[i].clone());
        if bigrams && i > 0 {
            out.push(format!("{} {}", unigrams[i - 1], unigrams[i]));
        }
    }
    out
}

/// Smoothed inverse document frequency: `ln((1 + N) / (1 + df)) + 1`.
/// Strictly positive, so present terms always leave a trace in the vector.
pub fn idf(n_documents: u32, doc_freq: u32) -> f64 {
    ((1.0 + n_documents as f64) / (1.0 + doc_freq as f64)).ln() + 1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermEntry {
    pub term: String,
    pub doc_freq: u32,
    pub idf: f64,
}

/// A fitted vocabulary: terms in first-seen order with their document
/// frequencies and idf weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<TermEntry>,
    lookup: HashMap<String, u32>,
    n_documents: u32,
    settings: FeatureSettings,
}

impl Vocabulary {
    /// Rebuilds a vocabulary from stored (term, doc_freq) pairs; idf values
    /// are always recomputed from the formula rather than persisted.
    pub fn from_parts(
        terms: Vec<(String, u32)>,
        n_documents: u32,
        settings: FeatureSettings,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(terms.len());
        let mut lookup = HashMap::with_capacity(terms.len());
        for (i, (term, doc_freq)) in terms.into_iter().enumerate() {
            if lookup.insert(term.clone(), i as u32).is_some() {
                return Err(Error::InvalidConfig(format!(
                    "duplicate vocabulary term {term:?}"
                )));
            }
            entries.push(TermEntry {
                idf: idf(n_documents, doc_freq),
                term,
                doc_freq,
            });
        }
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        Ok(Vocabulary {
            terms: entries,
            lookup,
            n_documents,
            settings,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[TermEntry] {
        &self.terms
    }

    pub fn index_of(&self, term: &str) -> Option<u32> {
        self.lookup.get(term).copied()
    }

    pub fn n_documents(&self) -> u32 {
        self.n_documents
    }

    pub fn settings(&self) -> FeatureSettings {
        self.settings
    }
}

/// Fits a vocabulary over tokenized documents: terms indexed in first-seen
/// order, then filtered by `min_df` (order preserved).
pub fn fit_vocabulary(documents: &[&[Token]], settings: FeatureSettings) -> Result<Vocabulary> {
    if documents.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut order: Vec<String> = Vec::new();
    let mut doc_freq: HashMap<String, u32> = HashMap::new();
    for document in documents {
        let mut seen: HashSet<String> = HashSet::new();
        for term in terms(document, settings.bigrams) {
            if seen.insert(term.clone()) {
                if !doc_freq.contains_key(&term) {
                    order.push(term.clone());
                }
                *doc_freq.entry(term).or_insert(0) += 1;
            }
        }
    }
    let n_documents = documents.len() as u32;
    let kept: Vec<(String, u32)> = order
        .into_iter()
        .filter_map(|term| {
            let df = doc_freq[&term];
            (df >= settings.min_df).then_some((term, df))
        })
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Vocabulary::from_parts(kept, n_documents, settings)
}

/// A sparse vector over vocabulary indices, entries sorted by index.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub dim: u32,
    pub entries: Vec<(u32, f64)>,
}

impl FeatureVector {
    pub fn get(&self, index: u32) -> f64 {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, w)| w * w)
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

fn count_vector(tokens: &[Token], vocabulary: &Vocabulary) -> FeatureVector {
    let mut counts: HashMap<u32, f64> = HashMap::new();
    for term in terms(tokens, vocabulary.settings.bigrams) {
        if let Some(index) = vocabulary.index_of(&term) {
            *counts.entry(index).or_insert(0.0) += 1.0;
        }
    }
    let mut entries: Vec<(u32, f64)> = counts.into_iter().collect();
    entries.sort_by_key(|e| e.0);
    FeatureVector {
        dim: vocabulary.len() as u32,
        entries,
    }
}

/// Raw in-vocabulary term counts, no idf weighting or normalization.
pub fn term_counts(tokens: &[Token], vocabulary: &Vocabulary) -> FeatureVector {
    count_vector(tokens, vocabulary)
}

/// TF-IDF transform: term count times idf, then L2-normalized. A document
/// with no in-vocabulary terms stays the zero vector (no normalization).
pub fn transform(tokens: &[Token], vocabulary: &Vocabulary) -> FeatureVector {
    let mut vector = count_vector(tokens, vocabulary);
    for (index, weight) in &mut vector.entries {
        *weight *= vocabulary.terms[*index as usize].idf;
    }
    let norm = vector.l2_norm();
    if norm > 0.0 {
        for (_, weight) in &mut vector.entries {
            *weight /= norm;
        }
    }
    vector
}
