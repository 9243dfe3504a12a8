//! Depth-limited regression trees fit by exact greedy variance reduction.
//!
//! Feature data is held column-wise with each column's nonzero entries
//! sorted by value; absent entries are implicit zeros, which sort before
//! every explicit value because feature values are never negative. Trees
//! are grown level by level: one pass per feature collects the nonzero
//! statistics of every node on the level, a second pass sweeps the column
//! once evaluating every candidate threshold for every node. Candidate
//! thresholds are the midpoints of consecutive distinct values seen by a
//! node; a split is kept only when its score beats the parent's by more
//! than `SCORE_EPS`, and score ties keep the lowest feature index, then
//! the lowest threshold.

use serde::{Deserialize, Serialize};

use crate::features::FeatureVector;

/// Minimum score improvement over the parent for a split to be kept.
const SCORE_EPS: f64 = 1e-12;
/// Leaf denominators smaller than this in magnitude yield a zero leaf.
const LEAF_DENOM_EPS: f64 = 1e-150;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub max_depth: u32,
    pub min_samples_leaf: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        value: f64,
    },
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
}

/// A fitted regression tree; nodes are stored in breadth-first order with
/// the root at index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tree {
    pub(crate) nodes: Vec<Node>,
}

impl Tree {
    pub fn predict(&self, x: &FeatureVector) -> f64 {
        let mut id = 0usize;
        loop {
            match &self.nodes[id] {
                Node::Leaf { value } => return *value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    id = if x.get(*feature) <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
            }
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }
}

/// Sparse column-major feature storage for tree fitting. Within a column,
/// entries are ordered by value and then by row, so a single sweep visits
/// a node's samples in ascending value order.
pub struct ColumnMatrix {
    n_rows: usize,
    n_cols: usize,
    col_ptr: Vec<usize>,
    rows: Vec<u32>,
    values: Vec<f64>,
}

impl ColumnMatrix {
    /// Builds the column store from row vectors, which must share one
    /// dimension and hold no negative values.
    pub fn from_rows(samples: &[FeatureVector]) -> Self {
        let n_cols = samples.first().map_or(0, |s| s.dim as usize);
        let mut col_entries: Vec<Vec<(f64, u32)>> = vec![Vec::new(); n_cols];
        for (row, sample) in samples.iter().enumerate() {
            assert_eq!(sample.dim as usize, n_cols, "row dimension mismatch");
            for &(index, value) in &sample.entries {
                assert!(value >= 0.0, "negative feature value");
                if value != 0.0 {
                    col_entries[index as usize].push((value, row as u32));
                }
            }
        }
        let mut col_ptr = Vec::with_capacity(n_cols + 1);
        let mut rows = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for mut entries in col_entries {
            entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (value, row) in entries {
                values.push(value);
                rows.push(row);
            }
            col_ptr.push(rows.len());
        }
        ColumnMatrix {
            n_rows: samples.len(),
            n_cols,
            col_ptr,
            rows,
            values,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    fn column(&self, col: usize) -> (&[u32], &[f64]) {
        let range = self.col_ptr[col]..self.col_ptr[col + 1];
        (&self.rows[range.clone()], &self.values[range])
    }
}

/// Candidate score of a split: sum of squared child target sums over
/// child counts (larger is better; equals variance reduction up to a
/// node-constant shift).
fn split_score(left_sum: f64, left_count: usize, right_sum: f64, right_count: usize) -> f64 {
    left_sum * left_sum / (left_count as f64) + right_sum * right_sum / (right_count as f64)
}

fn leaf_value(scale: f64, target_sum: f64, weight_sum: f64) -> f64 {
    if weight_sum.abs() < LEAF_DENOM_EPS {
        0.0
    } else {
        scale * target_sum / weight_sum
    }
}

struct PendingSplit {
    feature: u32,
    threshold: f64,
}

/// Fits a tree to `targets` and returns it with the fitted prediction for
/// every training sample. `weights` are the per-sample leaf denominators
/// and `leaf_scale` multiplies every leaf.
pub fn fit_tree(
    matrix: &ColumnMatrix,
    targets: &[f64],
    weights: &[f64],
    leaf_scale: f64,
    params: TreeParams,
) -> (Tree, Vec<f64>) {
    let n = matrix.n_rows();
    assert_eq!(targets.len(), n);
    assert_eq!(weights.len(), n);
    let min_leaf = params.min_samples_leaf.max(1);

    let mut nodes = vec![Node::Leaf { value: 0.0 }];
    // Current node of each sample; ids only grow, so an id below the
    // level base marks a sample already settled in a leaf.
    let mut node_of: Vec<u32> = vec![0; n];
    let mut base = 0usize;
    let mut n_level = 1usize;
    let mut depth = 0u32;

    while n_level > 0 {
        // Per-node statistics for this level, indexed by id - base.
        let mut count = vec![0usize; n_level];
        let mut sum = vec![0.0f64; n_level];
        let mut weight_sum = vec![0.0f64; n_level];
        for i in 0..n {
            let id = node_of[i] as usize;
            if id >= base {
                let slot = id - base;
                count[slot] += 1;
                sum[slot] += targets[i];
                weight_sum[slot] += weights[i];
            }
        }

        // Best split per node; the bar starts above the parent score so
        // strict comparison keeps the first best candidate.
        let mut best_score: Vec<f64> = (0..n_level)
            .map(|slot| {
                if count[slot] == 0 {
                    f64::INFINITY
                } else {
                    sum[slot] * sum[slot] / (count[slot] as f64) + SCORE_EPS
                }
            })
            .collect();
        let mut best: Vec<Option<PendingSplit>> = (0..n_level).map(|_| None).collect();
        let splittable: Vec<bool> = (0..n_level)
            .map(|slot| depth < params.max_depth && count[slot] >= 2 * min_leaf)
            .collect();

        if splittable.iter().any(|&s| s) {
            let mut nnz_count = vec![0usize; n_level];
            let mut nnz_sum = vec![0.0f64; n_level];
            let mut left_count = vec![0usize; n_level];
            let mut left_sum = vec![0.0f64; n_level];
            let mut prev_value = vec![0.0f64; n_level];
            let mut started = vec![false; n_level];
            for feature in 0..matrix.n_cols() {
                let (rows, values) = matrix.column(feature);
                nnz_count.fill(0);
                nnz_sum.fill(0.0);
                for (&row, _) in rows.iter().zip(values) {
                    let id = node_of[row as usize] as usize;
                    if id >= base && splittable[id - base] {
                        let slot = id - base;
                        nnz_count[slot] += 1;
                        nnz_sum[slot] += targets[row as usize];
                    }
                }
                for slot in 0..n_level {
                    if !splittable[slot] {
                        continue;
                    }
                    let zero_count = count[slot] - nnz_count[slot];
                    if zero_count > 0 {
                        left_count[slot] = zero_count;
                        left_sum[slot] = sum[slot] - nnz_sum[slot];
                        prev_value[slot] = 0.0;
                        started[slot] = true;
                    } else {
                        left_count[slot] = 0;
                        left_sum[slot] = 0.0;
                        started[slot] = false;
                    }
                }
                for (&row, &value) in rows.iter().zip(values) {
                    let id = node_of[row as usize] as usize;
                    if id < base {
                        continue;
                    }
                    let slot = id - base;
                    if !splittable[slot] {
                        continue;
                    }
                    if started[slot] && value > prev_value[slot] {
                        let lc = left_count[slot];
                        let rc = count[slot] - lc;
                        if lc >= min_leaf && rc >= min_leaf {
                            let ls = left_sum[slot];
                            let score = split_score(ls, lc, sum[slot] - ls, rc);
                            if score > best_score[slot] {
                                best_score[slot] = score;
                                best[slot] = Some(PendingSplit {
                                    feature: feature as u32,
                                    threshold: (prev_value[slot] + value) / 2.0,
                                });
                            }
                        }
                    }
                    prev_value[slot] = value;
                    started[slot] = true;
                    left_count[slot] += 1;
                    left_sum[slot] += targets[row as usize];
                }
            }
        }

        // Write out this level: leaves finalize, splits get children on
        // the next contiguous id block.
        let mut next_id = (base + n_level) as u32;
        let mut split_of: Vec<Option<(u32, f64, u32)>> = Vec::with_capacity(n_level);
        for slot in 0..n_level {
            let id = base + slot;
            match best[slot].take() {
                Some(split) => {
                    let left = next_id;
                    let right = next_id + 1;
                    next_id += 2;
                    nodes[id] = Node::Split {
                        feature: split.feature,
                        threshold: split.threshold,
                        left,
                        right,
                    };
                    nodes.push(Node::Leaf { value: 0.0 });
                    nodes.push(Node::Leaf { value: 0.0 });
                    split_of.push(Some((split.feature, split.threshold, left)));
                }
                None => {
                    nodes[id] = Node::Leaf {
                        value: leaf_value(leaf_scale, sum[slot], weight_sum[slot]),
                    };
                    split_of.push(None);
                }
            }
        }

        let created = next_id as usize - (base + n_level);
        if created > 0 {
            // Route: implicit zeros and values at or below the threshold
            // go left, so default every sample left and walk each split
            // feature's column to move the strictly-greater ones right.
            let old_node_of = node_of.clone();
            for i in 0..n {
                let id = old_node_of[i] as usize;
                if id >= base {
                    if let Some((_, _, left)) = split_of[id - base] {
                        node_of[i] = left;
                    }
                }
            }
            let mut features_used: Vec<u32> = split_of
                .iter()
                .filter_map(|s| s.map(|(feature, _, _)| feature))
                .collect();
            features_used.sort_unstable();
            features_used.dedup();
            for feature in features_used {
                let (rows, values) = matrix.column(feature as usize);
                for (&row, &value) in rows.iter().zip(values) {
                    let id = old_node_of[row as usize] as usize;
                    if id >= base {
                        if let Some((split_feature, threshold, left)) = split_of[id - base] {
                            if split_feature == feature && value > threshold {
                                node_of[row as usize] = left + 1;
                            }
                        }
                    }
                }
            }
        }

        base += n_level;
        n_level = created;
        depth += 1;
    }

    let fitted = node_of
        .iter()
        .map(|&id| match nodes[id as usize] {
            Node::Leaf { value } => value,
            Node::Split { .. } => unreachable!("sample settled on an internal node"),
        })
        .collect();
    (Tree { nodes }, fitted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(dim: u32, entries: &[(u32, f64)]) -> FeatureVector {
        FeatureVector {
            dim,
            entries: entries.to_vec(),
        }
    }

    fn dense_rows(dense: &[Vec<f64>]) -> Vec<FeatureVector> {
        let dim = dense.first().map_or(0, Vec::len) as u32;
        dense
            .iter()
            .map(|values| FeatureVector {
                dim,
                entries: values
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(i, &v)| (i as u32, v))
                    .collect(),
            })
            .collect()
    }

    /// Reference implementation: exhaustive recursive search over every
    /// feature and midpoint threshold with the same acceptance and tie
    /// rules. Kept deliberately naive and dense.
    fn naive_fit(
        dense: &[Vec<f64>],
        targets: &[f64],
        weights: &[f64],
        leaf_scale: f64,
        params: TreeParams,
    ) -> NaiveNode {
        let all: Vec<usize> = (0..dense.len()).collect();
        naive_node(dense, targets, weights, leaf_scale, params, &all, 0)
    }

    enum NaiveNode {
        Leaf(f64),
        Split {
            feature: usize,
            threshold: f64,
            left: Box<NaiveNode>,
            right: Box<NaiveNode>,
        },
    }

    impl NaiveNode {
        fn predict(&self, x: &[f64]) -> f64 {
            match self {
                NaiveNode::Leaf(value) => *value,
                NaiveNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    if x[*feature] <= *threshold {
                        left.predict(x)
                    } else {
                        right.predict(x)
                    }
                }
            }
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn naive_node(
        dense: &[Vec<f64>],
        targets: &[f64],
        weights: &[f64],
        leaf_scale: f64,
        params: TreeParams,
        samples: &[usize],
        depth: u32,
    ) -> NaiveNode {
        let sum: f64 = samples.iter().map(|&i| targets[i]).sum();
        let weight_sum: f64 = samples.iter().map(|&i| weights[i]).sum();
        let count = samples.len();
        let min_leaf = params.min_samples_leaf.max(1);
        let leaf = |sum: f64, weight_sum: f64| {
            if weight_sum.abs() < 1e-150 {
                NaiveNode::Leaf(0.0)
            } else {
                NaiveNode::Leaf(leaf_scale * sum / weight_sum)
            }
        };
        if depth >= params.max_depth || count < 2 * min_leaf {
            return leaf(sum, weight_sum);
        }
        let parent = sum * sum / (count as f64);
        let mut best_score = parent + 1e-12;
        let mut best: Option<(usize, f64)> = None;
        let n_features = dense[0].len();
        for feature in 0..n_features {
            let mut values: Vec<f64> = samples.iter().map(|&i| dense[i][feature]).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            for pair in values.windows(2) {
                let threshold = (pair[0] + pair[1]) / 2.0;
                let left: Vec<usize> = samples
                    .iter()
                    .copied()
                    .filter(|&i| dense[i][feature] <= threshold)
                    .collect();
                let lc = left.len();
                let rc = count - lc;
                if lc < min_leaf || rc < min_leaf {
                    continue;
                }
                let ls: f64 = left.iter().map(|&i| targets[i]).sum();
                let rs = sum - ls;
                let score = ls * ls / (lc as f64) + rs * rs / (rc as f64);
                if score > best_score {
                    best_score = score;
                    best = Some((feature, threshold));
                }
            }
        }
        match best {
            None => leaf(sum, weight_sum),
            Some((feature, threshold)) => {
                let (left, right): (Vec<usize>, Vec<usize>) = samples
                    .iter()
                    .partition(|&&i| dense[i][feature] <= threshold);
                NaiveNode::Split {
                    feature,
                    threshold,
                    left: Box::new(naive_node(
                        dense, targets, weights, leaf_scale, params, &left, depth + 1,
                    )),
                    right: Box::new(naive_node(
                        dense, targets, weights, leaf_scale, params, &right, depth + 1,
                    )),
                }
            }
        }
    }

    #[test]
    fn single_threshold_split_recovers_the_step() {
        // Feature 0 separates targets -1 and +1 at 0.5; equal weights.
        let samples = dense_rows(&[
            vec![0.0],
            vec![0.0],
            vec![1.0],
            vec![1.0],
        ]);
        let matrix = ColumnMatrix::from_rows(&samples);
        let targets = [-1.0, -1.0, 1.0, 1.0];
        let weights = [1.0; 4];
        let (tree, fitted) = fit_tree(
            &matrix,
            &targets,
            &weights,
            1.0,
            TreeParams {
                max_depth: 2,
                min_samples_leaf: 1,
            },
        );
        assert!(matches!(
            tree.nodes[0],
            Node::Split { feature: 0, threshold, .. } if threshold == 0.5
        ));
        assert_eq!(fitted, vec![-1.0, -1.0, 1.0, 1.0]);
        assert_eq!(tree.predict(&row(1, &[])), -1.0);
        assert_eq!(tree.predict(&row(1, &[(0, 1.0)])), 1.0);
    }

    #[test]
    fn constant_targets_never_split() {
        let samples = dense_rows(&[vec![0.0], vec![1.0], vec![2.0]]);
        let matrix = ColumnMatrix::from_rows(&samples);
        let (tree, _) = fit_tree(
            &matrix,
            &[0.5, 0.5, 0.5],
            &[1.0, 1.0, 1.0],
            1.0,
            TreeParams {
                max_depth: 3,
                min_samples_leaf: 1,
            },
        );
        assert_eq!(tree.n_nodes(), 1);
        assert!(matches!(tree.nodes[0], Node::Leaf { value } if value == 0.5));
    }

    #[test]
    fn ties_prefer_the_lowest_feature_index() {
        // Features 1 and 0 carry the same separating column; feature 0
        // must win even though 1 is scanned too.
        let samples = dense_rows(&[
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![2.0, 2.0],
            vec![2.0, 2.0],
        ]);
        let matrix = ColumnMatrix::from_rows(&samples);
        let (tree, _) = fit_tree(
            &matrix,
            &[-1.0, -1.0, 1.0, 1.0],
            &[1.0; 4],
            1.0,
            TreeParams {
                max_depth: 1,
                min_samples_leaf: 1,
            },
        );
        assert!(matches!(tree.nodes[0], Node::Split { feature: 0, .. }));
    }

    #[test]
    fn ties_prefer_the_lowest_threshold() {
        // Both boundaries of the middle value isolate the same nonzero
        // target sum, so their scores tie; the lower midpoint must win.
        let samples = dense_rows(&[vec![0.0], vec![2.0], vec![4.0]]);
        let matrix = ColumnMatrix::from_rows(&samples);
        let (tree, _) = fit_tree(
            &matrix,
            &[1.0, 0.0, -1.0],
            &[1.0; 3],
            1.0,
            TreeParams {
                max_depth: 1,
                min_samples_leaf: 1,
            },
        );
        let Node::Split { threshold, .. } = tree.nodes[0] else {
            panic!("expected a split at the root");
        };
        assert_eq!(threshold, 1.0);
    }

    #[test]
    fn min_samples_leaf_blocks_small_children() {
        // The only useful boundary strands one sample; with a two-sample
        // floor the node must stay a leaf.
        let samples = dense_rows(&[vec![0.0], vec![1.0], vec![1.0], vec![1.0]]);
        let matrix = ColumnMatrix::from_rows(&samples);
        let (tree, _) = fit_tree(
            &matrix,
            &[9.0, 1.0, 1.0, 1.0],
            &[1.0; 4],
            1.0,
            TreeParams {
                max_depth: 2,
                min_samples_leaf: 2,
            },
        );
        assert_eq!(tree.n_nodes(), 1);
    }

    #[test]
    fn vanishing_weight_sum_yields_zero_leaf() {
        let samples = dense_rows(&[vec![0.0], vec![1.0]]);
        let matrix = ColumnMatrix::from_rows(&samples);
        let (tree, fitted) = fit_tree(
            &matrix,
            &[3.0, 3.0],
            &[0.0, 0.0],
            1.0,
            TreeParams {
                max_depth: 0,
                min_samples_leaf: 1,
            },
        );
        assert!(matches!(tree.nodes[0], Node::Leaf { value } if value == 0.0));
        assert_eq!(fitted, vec![0.0, 0.0]);
    }

    #[test]
    fn leaf_scale_multiplies_the_ratio() {
        let samples = dense_rows(&[vec![0.0], vec![0.0]]);
        let matrix = ColumnMatrix::from_rows(&samples);
        let (tree, _) = fit_tree(
            &matrix,
            &[1.0, 2.0],
            &[0.5, 1.0],
            0.5,
            TreeParams {
                max_depth: 0,
                min_samples_leaf: 1,
            },
        );
        assert!(matches!(tree.nodes[0], Node::Leaf { value } if value == 0.5 * 3.0 / 1.5));
    }

    #[test]
    fn implicit_zeros_sort_before_explicit_values() {
        // Rows 0 and 1 never appear in column 0's entries; a split on the
        // zero/nonzero boundary must still be found and route them left.
        let samples = vec![
            row(1, &[]),
            row(1, &[]),
            row(1, &[(0, 0.5)]),
            row(1, &[(0, 0.5)]),
        ];
        let matrix = ColumnMatrix::from_rows(&samples);
        let (tree, fitted) = fit_tree(
            &matrix,
            &[-2.0, -2.0, 2.0, 2.0],
            &[1.0; 4],
            1.0,
            TreeParams {
                max_depth: 1,
                min_samples_leaf: 1,
            },
        );
        assert!(matches!(
            tree.nodes[0],
            Node::Split { feature: 0, threshold, .. } if threshold == 0.25
        ));
        assert_eq!(fitted, vec![-2.0, -2.0, 2.0, 2.0]);
    }

    #[test]
    fn fitted_values_match_predict_on_training_rows() {
        let samples = dense_rows(&[
            vec![0.0, 1.0],
            vec![0.5, 0.0],
            vec![1.0, 0.25],
            vec![0.25, 0.75],
            vec![0.75, 0.5],
        ]);
        let matrix = ColumnMatrix::from_rows(&samples);
        let targets = [1.0, -1.0, 0.5, -0.5, 0.25];
        let (tree, fitted) = fit_tree(
            &matrix,
            &targets,
            &[1.0; 5],
            1.0,
            TreeParams {
                max_depth: 3,
                min_samples_leaf: 1,
            },
        );
        for (sample, &value) in samples.iter().zip(&fitted) {
            assert_eq!(tree.predict(sample), value);
        }
    }

    #[test]
    fn empty_matrix_fits_a_zero_leaf() {
        let matrix = ColumnMatrix::from_rows(&[]);
        let (tree, fitted) = fit_tree(
            &matrix,
            &[],
            &[],
            1.0,
            TreeParams {
                max_depth: 3,
                min_samples_leaf: 1,
            },
        );
        assert_eq!(tree.n_nodes(), 1);
        assert!(fitted.is_empty());
    }

    /// Inputs on a coarse dyadic grid so both implementations compute
    /// every sum and difference exactly; agreement must then be bitwise.
    fn dyadic_case() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, Vec<f64>)> {
        (1usize..12, 1usize..5).prop_flat_map(|(n, d)| {
            let grid = prop::collection::vec(
                prop::collection::vec((0u8..8).prop_map(|q| q as f64 * 0.25), d),
                n,
            );
            let targets =
                prop::collection::vec((-16i8..16).prop_map(|q| q as f64 * 0.125), n);
            let weights = prop::collection::vec((0u8..8).prop_map(|q| q as f64 * 0.125), n);
            (grid, targets, weights)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(192))]

        #[test]
        fn level_wise_fit_agrees_with_exhaustive_recursion(
            (dense, targets, weights) in dyadic_case(),
            max_depth in 1u32..4,
            min_samples_leaf in 1usize..3,
        ) {
            let params = TreeParams { max_depth, min_samples_leaf };
            let samples = dense_rows(&dense);
            let matrix = ColumnMatrix::from_rows(&samples);
            let (tree, fitted) = fit_tree(&matrix, &targets, &weights, 6.0 / 7.0, params);
            let naive = naive_fit(&dense, &targets, &weights, 6.0 / 7.0, params);
            for (i, sample) in samples.iter().enumerate() {
                let expected = naive.predict(&dense[i]);
                prop_assert_eq!(fitted[i], expected);
                prop_assert_eq!(tree.predict(sample), expected);
            }
        }

        #[test]
        fn depth_one_fit_agrees_with_exhaustive_stump_search(
            (dense, targets, weights) in dyadic_case(),
        ) {
            let params = TreeParams { max_depth: 1, min_samples_leaf: 1 };
            let samples = dense_rows(&dense);
            let matrix = ColumnMatrix::from_rows(&samples);
            let (tree, _) = fit_tree(&matrix, &targets, &weights, 1.0, params);
            let naive = naive_fit(&dense, &targets, &weights, 1.0, params);
            match (&tree.nodes[0], &naive) {
                (Node::Leaf { value }, NaiveNode::Leaf(expected)) => {
                    prop_assert_eq!(value, expected);
                }
                (
                    Node::Split { feature, threshold, left, right },
                    NaiveNode::Split {
                        feature: expected_feature,
                        threshold: expected_threshold,
                        left: expected_left,
                        right: expected_right,
                    },
                ) => {
                    prop_assert_eq!(*feature as usize, *expected_feature);
                    prop_assert_eq!(threshold, expected_threshold);
                    let (NaiveNode::Leaf(lv), NaiveNode::Leaf(rv)) =
                        (expected_left.as_ref(), expected_right.as_ref())
                    else {
                        panic!("stump children must be leaves");
                    };
                    let Node::Leaf { value: left_value } = tree.nodes[*left as usize] else {
                        panic!("stump children must be leaves");
                    };
                    let Node::Leaf { value: right_value } = tree.nodes[*right as usize] else {
                        panic!("stump children must be leaves");
                    };
                    prop_assert_eq!(left_value, *lv);
                    prop_assert_eq!(right_value, *rv);
                }
                _ => prop_assert!(false, "tree shapes disagree at the root"),
            }
        }
    }
}
