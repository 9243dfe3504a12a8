//! Combines deterministic lint findings with classifier predictions into
//! a single verdict per snippet.
//!
//! Definite findings decide the category outright: they are certain from
//! the tokens alone, so the earliest one (lowest line, then rule id)
//! wins and the classifier is only reported, never consulted. Without a
//! definite finding the verdict is the classifier's argmax. Advisory
//! findings ride along either way, and a model-sourced verdict whose top
//! probability falls below 0.5 carries a low-confidence flag.

use crate::error::{Error, Result};
use crate::lexer::tokenize;
use crate::lint::{run_rules, Certainty, Finding};
use crate::model::{argmax, TrainedModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictSource {
    Rule,
    Model,
}

impl VerdictSource {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictSource::Rule => "rule",
            VerdictSource::Model => "model",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub final_category: String,
    pub source: VerdictSource,
    /// Class probabilities in label index order.
    pub model_scores: Vec<f64>,
    /// Top model probability, whatever the source.
    pub confidence: f64,
    /// Set when the verdict came from the model with confidence below 0.5.
    pub low_confidence: bool,
    pub findings: Vec<Finding>,
}

/// Lints and classifies one snippet, fusing both into a verdict.
pub fn check(code: &str, model: &TrainedModel) -> Result<Verdict> {
    if code.is_empty() {
        return Err(Error::InvalidConfig("cannot check empty code".into()));
    }
    let stream = tokenize(code);
    let findings = run_rules(&stream);
    let model_scores = model.predict_scores(code);
    let confidence = model_scores.iter().copied().fold(0.0f64, f64::max);

    let definite = findings
        .iter()
        .find(|f| f.certainty == Certainty::Definite);
    let (final_category, source) = match definite {
        Some(finding) => (finding.category.to_string(), VerdictSource::Rule),
        None => (
            model.labelset().name(argmax(&model_scores)).to_string(),
            VerdictSource::Model,
        ),
    };
    let low_confidence = source == VerdictSource::Model && confidence < 0.5;

    Ok(Verdict {
        final_category,
        source,
        model_scores,
        confidence,
        low_confidence,
        findings,
    })
}

/// One-snippet text record: category, source, confidence to four
/// decimals, then the findings in lint line format.
pub fn render_verdict(verdict: &Verdict) -> String {
    let mut out = format!(
        "verdict: {}\nsource: {}\nconfidence: {:.4}\n",
        verdict.final_category,
        verdict.source.as_str(),
        verdict.confidence
    );
    if verdict.low_confidence {
        out.push_str("low-confidence: model probability below 0.5\n");
    }
    for finding in &verdict.findings {
        out.push_str(&finding.render());
        out.push('\n');
    }
    out
}
