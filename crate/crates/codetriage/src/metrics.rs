//! Evaluation metrics and the plain-text classification report.
//!
//! Undefined ratios (class never predicted, class absent from the truth)
//! follow the 0/0 = 0 convention. Aggregate accuracy is computed as
//! support-weighted recall, which over a confusion matrix is identically
//! the trace divided by the total, so aggregates can also be rebuilt from
//! published per-class rows alone.

use crate::corpus::LabelSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    class_names: Vec<String>,
    /// counts[truth][predicted]
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.counts.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.trace() as f64 / total as f64
        }
    }
}

/// Builds a confusion matrix from parallel truth/prediction label lists.
pub fn confusion_matrix<S: AsRef<str>>(
    truth: &[S],
    predicted: &[S],
    labelset: &LabelSet,
) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            truth: truth.len(),
            predicted: predicted.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::InvalidConfig(
            "no samples to evaluate".to_string(),
        ));
    }
    let index_of = |label: &str| {
        labelset
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel {
                label: label.to_string(),
            })
    };
    let k = labelset.len();
    let mut counts = vec![vec![0u64; k]; k];
    for (t, p) in truth.iter().zip(predicted) {
        counts[index_of(t.as_ref())?][index_of(p.as_ref())?] += 1;
    }
    Ok(ConfusionMatrix {
        class_names: labelset.names().to_vec(),
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Per-class precision, recall, F1, and support, in class index order.
pub fn per_class_metrics(cm: &ConfusionMatrix) -> Vec<ClassMetrics> {
    let k = cm.counts.len();
    (0..k)
        .map(|c| {
            let tp = cm.counts[c][c] as f64;
            let predicted: f64 = (0..k).map(|t| cm.counts[t][c] as f64).sum();
            let support: u64 = cm.counts[c].iter().sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support as f64);
            let f1 = ratio(2.0 * precision * recall, precision + recall);
            ClassMetrics {
                precision,
                recall,
                f1,
                support,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageRow {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregates {
    /// Support-weighted recall; equals trace/total of the confusion matrix.
    pub accuracy: f64,
    pub macro_avg: AverageRow,
    pub weighted_avg: AverageRow,
    pub total_support: u64,
}

/// Aggregates per-class rows: unweighted (macro) and support-weighted
/// averages, plus accuracy derived as weighted recall. Errors when the
/// rows carry no samples at all.
pub fn aggregate_metrics(rows: &[ClassMetrics]) -> Result<Aggregates> {
    let total_support: u64 = rows.iter().map(|r| r.support).sum();
    if total_support == 0 {
        return Err(Error::InvalidConfig(
            "cannot aggregate metrics over zero total support".to_string(),
        ));
    }
    let k = rows.len() as f64;
    let total = total_support as f64;
    let macro_avg = AverageRow {
        precision: rows.iter().map(|r| r.precision).sum::<f64>() / k,
        recall: rows.iter().map(|r| r.recall).sum::<f64>() / k,
        f1: rows.iter().map(|r| r.f1).sum::<f64>() / k,
    };
    let weighted = |f: fn(&ClassMetrics) -> f64| -> f64 {
        rows.iter().map(|r| f(r) * r.support as f64).sum::<f64>() / total
    };
    let weighted_avg = AverageRow {
        precision: weighted(|r| r.precision),
        recall: weighted(|r| r.recall),
        f1: weighted(|r| r.f1),
    };
    Ok(Aggregates {
        accuracy: weighted_avg.recall,
        macro_avg,
        weighted_avg,
        total_support,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub class_names: Vec<String>,
    pub rows: Vec<ClassMetrics>,
    pub aggregates: Aggregates,
}

impl EvaluationReport {
    pub fn from_confusion(cm: &ConfusionMatrix) -> Result<Self> {
        let rows = per_class_metrics(cm);
        let aggregates = aggregate_metrics(&rows)?;
        Ok(EvaluationReport {
            class_names: cm.class_names.clone(),
            rows,
            aggregates,
        })
    }

    /// Rebuilds a report from per-class rows alone (e.g. a published
    /// table); aggregate values follow from the rows.
    pub fn from_rows(class_names: Vec<String>, rows: Vec<ClassMetrics>) -> Result<Self> {
        let aggregates = aggregate_metrics(&rows)?;
        Ok(EvaluationReport {
            class_names,
            rows,
            aggregates,
        })
    }

    pub fn accuracy(&self) -> f64 {
        self.aggregates.accuracy
    }
}

/// Rounds to two decimals, ties away from zero.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn cell(x: f64) -> String {
    format!("{:.2}", round2(x))
}

/// Renders the report: a full-precision accuracy line, then a fixed-width
/// table with one row per class index, a blank line, and accuracy /
/// macro avg / weighted avg rows. Two-decimal cells.
pub fn render_report(report: &EvaluationReport) -> String {
    const NAME_WIDTH: usize = 12;
    let mut out = String::new();
    out.push_str(&format!("Model accuracy: {}\n", report.accuracy()));
    out.push_str("Classification report:\n");
    out.push_str(&format!(
        "{:>NAME_WIDTH$}  {:>9} {:>9}  {:>8}   {:>7}\n",
        "", "precision", "recall", "f1-score", "support"
    ));
    out.push('\n');
    let row_line = |name: &str, p: &str, r: &str, f1: &str, support: &str| {
        format!("{name:>NAME_WIDTH$}  {p:>9} {r:>9}  {f1:>8}   {support:>7}\n")
    };
    for (i, row) in report.rows.iter().enumerate() {
        out.push_str(&row_line(
            &i.to_string(),
            &cell(row.precision),
            &cell(row.recall),
            &cell(row.f1),
            &row.support.to_string(),
        ));
    }
    out.push('\n');
    let agg = &report.aggregates;
    let support = agg.total_support.to_string();
    out.push_str(&row_line("accuracy", "", "", &cell(agg.accuracy), &support));
    for (name, avg) in [("macro avg", agg.macro_avg), ("weighted avg", agg.weighted_avg)] {
        out.push_str(&row_line(
            name,
            &cell(avg.precision),
            &cell(avg.recall),
            &cell(avg.f1),
            &support,
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRow {
    pub name: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedReport {
    /// Full-precision value from the `Model accuracy:` line.
    pub accuracy: f64,
    pub class_rows: Vec<ParsedRow>,
    /// Rounded value and support from the `accuracy` table row.
    pub accuracy_row: (f64, u64),
    pub macro_avg: ParsedRow,
    pub weighted_avg: ParsedRow,
}

/// Parses text produced by [`render_report`].
pub fn parse_report(text: &str) -> Result<ParsedReport> {
    let corrupt = |reason: &str| Error::CorruptArtifact {
        name: "report".to_string(),
        reason: reason.to_string(),
    };
    let mut accuracy = None;
    let mut class_rows = Vec::new();
    let mut accuracy_row = None;
    let mut macro_avg = None;
    let mut weighted_avg = None;

    let parse_f64 = |s: &str| s.parse::<f64>().map_err(|_| corrupt("bad number"));
    let parse_u64 = |s: &str| s.parse::<u64>().map_err(|_| corrupt("bad support"));

    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("Model accuracy: ") {
            accuracy = Some(parse_f64(rest.trim())?);
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [name, p, r, f1, support] if name.chars().all(|c| c.is_ascii_digit()) => {
                class_rows.push(ParsedRow {
                    name: name.to_string(),
                    precision: parse_f64(p)?,
                    recall: parse_f64(r)?,
                    f1: parse_f64(f1)?,
                    support: parse_u64(support)?,
                });
            }
            ["accuracy", value, support] => {
                accuracy_row = Some((parse_f64(value)?, parse_u64(support)?));
            }
            [kind, "avg", p, r, f1, support] if *kind == "macro" || *kind == "weighted" => {
                let row = ParsedRow {
                    name: format!("{kind} avg"),
                    precision: parse_f64(p)?,
                    recall: parse_f64(r)?,
                    f1: parse_f64(f1)?,
                    support: parse_u64(support)?,
                };
                if *kind == "macro" {
                    macro_avg = Some(row);
                } else {
                    weighted_avg = Some(row);
                }
            }
            _ => {}
        }
    }

    Ok(ParsedReport {
        accuracy: accuracy.ok_or_else(|| corrupt("missing accuracy line"))?,
        class_rows,
        accuracy_row: accuracy_row.ok_or_else(|| corrupt("missing accuracy row"))?,
        macro_avg: macro_avg.ok_or_else(|| corrupt("missing macro avg row"))?,
        weighted_avg: weighted_avg.ok_or_else(|| corrupt("missing weighted avg row"))?,
    })
}

/// Confusion matrix as CSV: class-name header row, then one row per truth
/// class, first cell the class name.
pub fn confusion_to_csv(cm: &ConfusionMatrix) -> String {
    let mut out = String::new();
    out.push_str(&format!(",{}\n", cm.class_names.join(",")));
    for (name, row) in cm.class_names.iter().zip(&cm.counts) {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        out.push_str(&format!("{name},{}\n", cells.join(",")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::LabelSet;
    use proptest::prelude::*;

    fn two_class() -> LabelSet {
        LabelSet::new(["Neg", "Pos"]).unwrap()
    }

    fn named(labelset: &LabelSet, indices: &[usize]) -> Vec<String> {
        indices.iter().map(|&i| labelset.name(i).to_string()).collect()
    }

    fn confusion(truth: &[usize], predicted: &[usize], labelset: &LabelSet) -> ConfusionMatrix {
        confusion_matrix(&named(labelset, truth), &named(labelset, predicted), labelset).unwrap()
    }

    #[test]
    fn confusion_counts_land_at_truth_row_predicted_column() {
        let cm = confusion(&[0, 0, 1, 1, 1], &[0, 1, 1, 1, 0], &two_class());
        assert_eq!(cm.counts(), &[vec![1, 1], vec![1, 2]]);
        assert_eq!(cm.total(), 5);
        assert_eq!(cm.trace(), 3);
    }

    #[test]
    fn confusion_rejects_mismatched_lengths() {
        let err = confusion_matrix(&["Neg", "Pos"], &["Neg"], &two_class()).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { truth: 2, predicted: 1 }));
    }

    #[test]
    fn confusion_rejects_labels_outside_the_labelset() {
        let err = confusion_matrix(&["Neg"], &["Maybe"], &two_class()).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel { label } if label == "Maybe"));
    }

    #[test]
    fn confusion_requires_at_least_one_sample() {
        let empty: [&str; 0] = [];
        let err = confusion_matrix(&empty, &empty, &two_class()).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn per_class_metrics_match_hand_computation() {
        // counts = [[8, 2], [1, 4]]:
        //   class 0: tp=8, predicted=9, support=10 -> P=8/9, R=0.8
        //   class 1: tp=4, predicted=6, support=5  -> P=4/6, R=0.8
        let truth = [vec![0; 10], vec![1; 5]].concat();
        let predicted = [vec![0; 8], vec![1; 2], vec![0; 1], vec![1; 4]].concat();
        let cm = confusion(&truth, &predicted, &two_class());
        let rows = per_class_metrics(&cm);
        assert!((rows[0].precision - 8.0 / 9.0).abs() < 1e-12);
        assert!((rows[0].recall - 0.8).abs() < 1e-12);
        let f1 = 2.0 * (8.0 / 9.0) * 0.8 / (8.0 / 9.0 + 0.8);
        assert!((rows[0].f1 - f1).abs() < 1e-12);
        assert_eq!(rows[0].support, 10);
        assert!((rows[1].precision - 4.0 / 6.0).abs() < 1e-12);
        assert_eq!(rows[1].support, 5);
    }

    #[test]
    fn undefined_ratios_become_zero() {
        // Class 1 never occurs and is never predicted: all three metrics 0.
        let cm = confusion(&[0, 0], &[0, 0], &two_class());
        let rows = per_class_metrics(&cm);
        assert_eq!(
            (rows[1].precision, rows[1].recall, rows[1].f1),
            (0.0, 0.0, 0.0)
        );
        assert_eq!(rows[1].support, 0);
    }

    #[test]
    fn aggregate_accuracy_is_weighted_recall() {
        let truth = [vec![0; 10], vec![1; 5]].concat();
        let predicted = [vec![0; 8], vec![1; 2], vec![0; 1], vec![1; 4]].concat();
        let cm = confusion(&truth, &predicted, &two_class());
        let agg = aggregate_metrics(&per_class_metrics(&cm)).unwrap();
        assert!((agg.accuracy - cm.accuracy()).abs() < 1e-12);
        assert!((agg.accuracy - 12.0 / 15.0).abs() < 1e-12);
        assert_eq!(agg.total_support, 15);
        // macro averages ignore support.
        assert!((agg.macro_avg.recall - 0.8).abs() < 1e-12);
    }

    #[test]
    fn aggregate_rejects_zero_total_support() {
        let rows = vec![
            ClassMetrics { precision: 0.0, recall: 0.0, f1: 0.0, support: 0 };
            3
        ];
        assert!(matches!(
            aggregate_metrics(&rows).unwrap_err(),
            Error::InvalidConfig(_)
        ));
    }

    #[test]
    fn rounding_is_two_decimals_half_away_from_zero() {
        assert_eq!(round2(0.005), 0.01);
        assert_eq!(round2(0.004999), 0.0);
        assert_eq!(round2(-0.005), -0.01);
        assert_eq!(round2(0.8016415), 0.8);
        assert_eq!(round2(0.815000001), 0.82);
    }

    fn sample_report() -> EvaluationReport {
        let truth = [vec![0; 10], vec![1; 5]].concat();
        let predicted = [vec![0; 8], vec![1; 2], vec![0; 1], vec![1; 4]].concat();
        let cm = confusion(&truth, &predicted, &two_class());
        EvaluationReport::from_confusion(&cm).unwrap()
    }

    #[test]
    fn rendered_report_has_the_expected_shape() {
        let text = render_report(&sample_report());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("Model accuracy: {}", 0.8));
        assert_eq!(lines[1], "Classification report:");
        assert!(lines[2].contains("precision"));
        assert!(lines[2].contains("support"));
        assert_eq!(lines[3], "");
        assert!(lines[4].trim_start().starts_with("0 "));
        assert!(lines[5].trim_start().starts_with("1 "));
        assert_eq!(lines[6], "");
        assert!(lines[7].trim_start().starts_with("accuracy"));
        assert!(lines[8].trim_start().starts_with("macro avg"));
        assert!(lines[9].trim_start().starts_with("weighted avg"));
    }

    #[test]
    fn report_rows_are_keyed_by_class_index() {
        let text = render_report(&sample_report());
        let parsed = parse_report(&text).unwrap();
        assert_eq!(parsed.class_rows.len(), 2);
        assert_eq!(parsed.class_rows[0].name, "0");
        assert_eq!(parsed.class_rows[1].name, "1");
    }

    #[test]
    fn parse_recovers_rendered_values() {
        let report = sample_report();
        let parsed = parse_report(&render_report(&report)).unwrap();
        assert!((parsed.accuracy - report.accuracy()).abs() < 1e-12);
        for (parsed_row, row) in parsed.class_rows.iter().zip(&report.rows) {
            assert_eq!(parsed_row.precision, round2(row.precision));
            assert_eq!(parsed_row.recall, round2(row.recall));
            assert_eq!(parsed_row.f1, round2(row.f1));
            assert_eq!(parsed_row.support, row.support);
        }
        assert_eq!(parsed.accuracy_row.0, round2(report.aggregates.accuracy));
        assert_eq!(parsed.accuracy_row.1, report.aggregates.total_support);
        assert_eq!(parsed.macro_avg.precision, round2(report.aggregates.macro_avg.precision));
        assert_eq!(
            parsed.weighted_avg.f1,
            round2(report.aggregates.weighted_avg.f1)
        );
    }

    #[test]
    fn parse_rejects_reports_missing_sections() {
        assert!(parse_report("").is_err());
        assert!(parse_report("Model accuracy: 0.5\n").is_err());
    }

    #[test]
    fn csv_layout_is_names_then_truth_rows() {
        let cm = confusion(&[0, 1, 1], &[0, 1, 0], &two_class());
        assert_eq!(confusion_to_csv(&cm), ",Neg,Pos\nNeg,1,0\nPos,1,1\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn accuracy_identity_holds_for_random_matrices(
            pairs in proptest::collection::vec((0usize..3, 0usize..3), 1..60)
        ) {
            let labelset = LabelSet::new(["A", "B", "C"]).unwrap();
            let truth: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let predicted: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            let cm = confusion(&truth, &predicted, &labelset);
            let agg = aggregate_metrics(&per_class_metrics(&cm)).unwrap();
            prop_assert!((agg.accuracy - cm.accuracy()).abs() < 1e-12);
        }

        #[test]
        fn f1_is_bounded_by_the_arithmetic_mean(
            pairs in proptest::collection::vec((0usize..3, 0usize..3), 1..60)
        ) {
            let labelset = LabelSet::new(["A", "B", "C"]).unwrap();
            let truth: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let predicted: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            let cm = confusion(&truth, &predicted, &labelset);
            for row in per_class_metrics(&cm) {
                prop_assert!(row.f1 <= (row.precision + row.recall) / 2.0 + 1e-12);
                if row.precision > 0.0 && row.recall > 0.0 {
                    prop_assert!(row.f1 > 0.0);
                }
            }
        }

        #[test]
        fn render_parse_round_trips_for_random_matrices(
            pairs in proptest::collection::vec((0usize..4, 0usize..4), 4..80)
        ) {
            let labelset = LabelSet::new(["A", "B", "C", "D"]).unwrap();
            let truth: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let predicted: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            let cm = confusion(&truth, &predicted, &labelset);
            let report = EvaluationReport::from_confusion(&cm).unwrap();
            let parsed = parse_report(&render_report(&report)).unwrap();
            prop_assert_eq!(parsed.class_rows.len(), 4);
            for (parsed_row, row) in parsed.class_rows.iter().zip(&report.rows) {
                prop_assert_eq!(parsed_row.f1, round2(row.f1));
                prop_assert_eq!(parsed_row.support, row.support);
            }
        }
    }
}
