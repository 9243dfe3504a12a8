//! Quality triage for Python snippets: deterministic lint rules fused with a
//! TF-IDF + gradient-boosted-tree classifier over a seven-way defect taxonomy.
//!
//! The pipeline is end-to-end deterministic: corpus generation, train/test
//! splitting, and model fitting all derive their randomness from explicit
//! seeds, so identical inputs produce byte-identical artifacts.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod features;
pub mod fusion;
pub mod lexer;
pub mod lint;
pub mod metrics;
pub mod model;

pub use error::{Error, Result};
