//! Command-line surface tying the pipeline together.
//!
//! Subcommands: `generate` a synthetic corpus, `train` and `evaluate` a
//! classifier, `classify` / `lint` / `check` a single file, and `retrain`
//! from a corrections file. Exit codes: 0 success, 1 quality-gate failure
//! (`check` with a flagged category), 2 usage or configuration error,
//! 3 runtime failure. All results go to stdout, diagnostics to stderr,
//! and every subcommand is deterministic given its inputs and seeds.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;

use crate::corpus::{
    self, apply_corrections, generate_corpus, load_corrections, load_dataset, save_dataset,
    stratified_split, CodeSnippet, Dataset,
};
use crate::error::{Error, Result};
use crate::features::{self, Vocabulary};
use crate::fusion;
use crate::lexer::{tokenize, Token};
use crate::lint;
use crate::metrics::{self, ConfusionMatrix, EvaluationReport};
use crate::model::{self, load_model, save_model, train, TrainConfig, TrainedModel};

#[derive(Parser)]
#[command(name = "codetriage", about = "Lint and classify Python snippets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled synthetic corpus from a pool of clean snippets.
    Generate {
        /// Directory of .py files to use as clean source material.
        #[arg(long, value_name = "dir")]
        clean_pool: PathBuf,
        /// Snippets to produce per class.
        #[arg(long, value_name = "n")]
        per_class: usize,
        #[arg(long, value_name = "s", default_value_t = 42)]
        seed: u64,
        /// Dataset file to write.
        #[arg(long, value_name = "file")]
        out: PathBuf,
    },
    /// Train a classifier and report held-out metrics.
    Train {
        #[arg(long, value_name = "file")]
        data: PathBuf,
        #[arg(long, value_name = "dir")]
        model_dir: PathBuf,
        /// Classifier kind: gbt or nb.
        #[arg(long, default_value = "gbt")]
        classifier: String,
        #[arg(long, value_name = "r", default_value_t = 0.2)]
        test_split: f64,
        #[arg(long, value_name = "s", default_value_t = 42)]
        seed: u64,
        /// JSON array of hyperparameter overrides to search over.
        #[arg(long, value_name = "file")]
        grid_search: Option<PathBuf>,
        /// Cross-validation folds (default 5 when grid searching).
        #[arg(long, value_name = "k")]
        cv: Option<usize>,
        #[arg(long, value_name = "file")]
        report: PathBuf,
        #[arg(long, value_name = "file")]
        confusion: PathBuf,
    },
    /// Evaluate a saved model on a dataset.
    Evaluate {
        #[arg(long, value_name = "dir")]
        model_dir: PathBuf,
        #[arg(long, value_name = "file")]
        data: PathBuf,
        #[arg(long, value_name = "file")]
        report: PathBuf,
        #[arg(long, value_name = "file")]
        confusion: PathBuf,
    },
    /// Print the model's label for one source file.
    Classify {
        #[arg(long, value_name = "dir")]
        model_dir: PathBuf,
        path: PathBuf,
    },
    /// Print lint findings for one source file.
    Lint { path: PathBuf },
    /// Lint plus classify one source file, fusing both into a verdict.
    Check {
        #[arg(long, value_name = "dir")]
        model_dir: PathBuf,
        path: PathBuf,
        /// Comma-separated categories that fail the quality gate.
        #[arg(long, value_name = "categories")]
        fail_on: Option<String>,
    },
    /// Apply label corrections, retrain, and save the new model.
    Retrain {
        #[arg(long, value_name = "dir")]
        model_dir: PathBuf,
        #[arg(long, value_name = "file")]
        data: PathBuf,
        #[arg(long, value_name = "file")]
        corrections: PathBuf,
        #[arg(long, value_name = "dir")]
        out_model_dir: PathBuf,
        #[arg(long, value_name = "file")]
        report: PathBuf,
    },
}

/// Parses and dispatches; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                3
            }
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Generate {
            clean_pool,
            per_class,
            seed,
            out,
        } => cmd_generate(&clean_pool, per_class, seed, &out),
        Command::Train {
            data,
            model_dir,
            classifier,
            test_split,
            seed,
            grid_search,
            cv,
            report,
            confusion,
        } => cmd_train(
            &data,
            &model_dir,
            &classifier,
            test_split,
            seed,
            grid_search.as_deref(),
            cv,
            &report,
            &confusion,
        ),
        Command::Evaluate {
            model_dir,
            data,
            report,
            confusion,
        } => cmd_evaluate(&model_dir, &data, &report, &confusion),
        Command::Classify { model_dir, path } => cmd_classify(&model_dir, &path),
        Command::Lint { path } => cmd_lint(&path),
        Command::Check {
            model_dir,
            path,
            fail_on,
        } => cmd_check(&model_dir, &path, fail_on.as_deref()),
        Command::Retrain {
            model_dir,
            data,
            corrections,
            out_model_dir,
            report,
        } => cmd_retrain(&model_dir, &data, &corrections, &out_model_dir, &report),
    }
}

fn read_source(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Clean pool: every .py file in the directory, in file-name order.
fn load_clean_pool(dir: &Path) -> Result<Vec<CodeSnippet>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "py"))
        .collect();
    paths.sort();
    let mut pool = Vec::with_capacity(paths.len());
    for path in paths {
        let code = read_source(&path)?;
        pool.push(CodeSnippet::new(code, corpus::labels::CORRECT_CODE));
    }
    Ok(pool)
}

fn cmd_generate(clean_pool: &Path, per_class: usize, seed: u64, out: &Path) -> Result<i32> {
    let pool = load_clean_pool(clean_pool)?;
    let labelset = corpus::default_labelset();
    let dataset = generate_corpus(&pool, per_class, &labelset, seed)?;
    save_dataset(&dataset, out)?;
    println!(
        "Generated {} snippets ({} classes x {per_class}).",
        dataset.len(),
        labelset.len()
    );
    Ok(0)
}

fn fit_vocab(train_set: &Dataset, config: &TrainConfig) -> Result<Vocabulary> {
    let streams: Vec<_> = train_set
        .snippets()
        .iter()
        .map(|s| tokenize(&s.code))
        .collect();
    let documents: Vec<&[Token]> = streams.iter().map(|s| s.tokens.as_slice()).collect();
    features::fit_vocabulary(&documents, config.features)
}

/// Held-out evaluation: confusion matrix and report over a labeled set.
fn evaluate_on(
    model: &TrainedModel,
    dataset: &Dataset,
) -> Result<(ConfusionMatrix, EvaluationReport)> {
    let truth: Vec<&str> = dataset
        .snippets()
        .iter()
        .map(|s| s.classification.as_str())
        .collect();
    let predicted: Vec<&str> = dataset
        .snippets()
        .iter()
        .map(|s| model.predict_label(&s.code))
        .collect();
    let cm = metrics::confusion_matrix(&truth, &predicted, model.labelset())?;
    let report = EvaluationReport::from_confusion(&cm)?;
    Ok((cm, report))
}

fn write_evaluation(
    model: &TrainedModel,
    test_set: &Dataset,
    report_path: &Path,
    confusion_path: &Path,
) -> Result<()> {
    let (cm, report) = evaluate_on(model, test_set)?;
    let text = metrics::render_report(&report);
    print!("{text}");
    write_text(report_path, &text)?;
    write_text(confusion_path, &metrics::confusion_to_csv(&cm))
}

/// One hyperparameter-override row of a grid file; unset fields keep the
/// base configuration's values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridEntry {
    classifier: Option<String>,
    rounds: Option<u32>,
    max_depth: Option<u32>,
    learning_rate: Option<f64>,
    min_samples_leaf: Option<u32>,
    alpha: Option<f64>,
    bigrams: Option<bool>,
    min_df: Option<u32>,
}

impl GridEntry {
    fn apply(&self, base: &TrainConfig) -> Result<TrainConfig> {
        let mut config = base.clone();
        if let Some(kind) = &self.classifier {
            config.classifier = kind.parse()?;
        }
        if let Some(rounds) = self.rounds {
            config.gbt.rounds = rounds;
        }
        if let Some(max_depth) = self.max_depth {
            config.gbt.max_depth = max_depth;
        }
        if let Some(learning_rate) = self.learning_rate {
            config.gbt.learning_rate = learning_rate;
        }
        if let Some(min_samples_leaf) = self.min_samples_leaf {
            config.gbt.min_samples_leaf = min_samples_leaf;
        }
        if let Some(alpha) = self.alpha {
            config.nb.alpha = alpha;
        }
        if let Some(bigrams) = self.bigrams {
            config.features.bigrams = bigrams;
        }
        if let Some(min_df) = self.min_df {
            config.features.min_df = min_df;
        }
        Ok(config)
    }
}

fn load_grid(path: &Path, base: &TrainConfig) -> Result<Vec<TrainConfig>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let entries: Vec<GridEntry> = serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        reason: format!("invalid grid file: {e}"),
    })?;
    entries.iter().map(|entry| entry.apply(base)).collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    data: &Path,
    model_dir: &Path,
    classifier: &str,
    test_split: f64,
    seed: u64,
    grid_search: Option<&Path>,
    cv: Option<usize>,
    report: &Path,
    confusion: &Path,
) -> Result<i32> {
    let mut config = TrainConfig {
        classifier: classifier.parse()?,
        seed,
        test_split,
        ..TrainConfig::default()
    };
    config.validate()?;

    println!("Loading data...");
    let dataset = load_dataset(data)?;
    println!("Data loaded.");

    let (train_set, test_set) = stratified_split(&dataset, config.test_split, config.seed)?;

    if let Some(grid_path) = grid_search {
        let grid = load_grid(grid_path, &config)?;
        let folds = cv.unwrap_or(5);
        let outcome = model::grid_search(&train_set, &grid, folds)?;
        println!(
            "Grid search selected candidate {} of {} (mean accuracy {:.4}).",
            outcome.best_index + 1,
            grid.len(),
            outcome.results[outcome.best_index].mean_accuracy
        );
        config = outcome.best_config;
    } else if let Some(folds) = cv {
        let result = model::cross_validate(&train_set, &config, folds)?;
        println!(
            "Cross-validation mean accuracy over {folds} folds: {:.4}.",
            result.mean_accuracy
        );
    }

    let vocabulary = fit_vocab(&train_set, &config)?;
    let model = train(&train_set, &vocabulary, &config)?;
    save_model(&model, model_dir)?;
    println!("Model, vectorizer, and label_to_index saved.");
    write_evaluation(&model, &test_set, report, confusion)?;
    Ok(0)
}

fn cmd_evaluate(model_dir: &Path, data: &Path, report: &Path, confusion: &Path) -> Result<i32> {
    let model = load_model(model_dir)?;
    let dataset = corpus::load_dataset_with(data, model.labelset())?;
    write_evaluation(&model, &dataset, report, confusion)?;
    Ok(0)
}

fn cmd_classify(model_dir: &Path, path: &Path) -> Result<i32> {
    let model = load_model(model_dir)?;
    let code = read_source(path)?;
    println!("{}", model.predict_label(&code));
    Ok(0)
}

fn cmd_lint(path: &Path) -> Result<i32> {
    let code = read_source(path)?;
    let findings = lint::run_rules(&tokenize(&code));
    print!("{}", lint::render_findings(&findings));
    Ok(0)
}

fn cmd_check(model_dir: &Path, path: &Path, fail_on: Option<&str>) -> Result<i32> {
    let model = load_model(model_dir)?;
    let gate: Vec<String> = fail_on
        .map(|list| {
            list.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        })
        .unwrap_or_default();
    for category in &gate {
        if model.labelset().index_of(category).is_none() {
            return Err(Error::UnknownLabel {
                label: category.clone(),
            });
        }
    }
    let code = read_source(path)?;
    let verdict = fusion::check(&code, &model)?;
    print!("{}", fusion::render_verdict(&verdict));
    if gate.contains(&verdict.final_category) {
        Ok(1)
    } else {
        Ok(0)
    }
}

fn cmd_retrain(
    model_dir: &Path,
    data: &Path,
    corrections_path: &Path,
    out_model_dir: &Path,
    report: &Path,
) -> Result<i32> {
    let previous = load_model(model_dir)?;
    let dataset = corpus::load_dataset_with(data, previous.labelset())?;
    let corrections = load_corrections(corrections_path)?;
    let (updated, _changed) = apply_corrections(&dataset, &corrections)?;
    save_dataset(&updated, data)?;
    println!("Updated data saved.");

    // Retraining reseeds deterministically off the stored seed, so the
    // new split differs from the original yet reruns stay byte-identical.
    let config = TrainConfig {
        seed: previous.config().seed + 1,
        ..previous.config().clone()
    };
    let (train_set, test_set) = stratified_split(&updated, config.test_split, config.seed)?;
    let vocabulary = fit_vocab(&train_set, &config)?;
    let model = train(&train_set, &vocabulary, &config)?;
    save_model(&model, out_model_dir)?;
    println!("Model, vectorizer, and label_to_index saved.");
    println!("Model retrained and saved with updated classifications.");

    let (_, evaluation) = evaluate_on(&model, &test_set)?;
    let text = metrics::render_report(&evaluation);
    print!("{text}");
    write_text(report, &text)?;
    Ok(0)
}
