//! Bagged CART classifier with Gini splits.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MlError;
use crate::features::FeatureMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeaturesPerSplit {
    Sqrt,
    All,
}

impl FeaturesPerSplit {
    fn count(self, width: usize) -> usize {
        match self {
            FeaturesPerSplit::Sqrt => ((width as f64).sqrt().round() as usize).clamp(1, width),
            FeaturesPerSplit::All => width,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// `None` grows until leaves are pure or too small to split.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub features_per_split: FeaturesPerSplit,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 100,
            max_depth: None,
            min_samples_leaf: 1,
            features_per_split: FeaturesPerSplit::Sqrt,
            seed: 0,
        }
    }
}

impl ForestConfig {
    pub fn validate(&self) -> Result<(), MlError> {
        if self.n_trees == 0 {
            return Err(MlError::InvalidConfig("n_trees must be at least 1".into()));
        }
        if self.min_samples_leaf == 0 {
            return Err(MlError::InvalidConfig(
                "min_samples_leaf must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
enum Node {
    Leaf(usize),
    Split {
        feature: usize,
        /// Samples with `x <= threshold` go left. Thresholds are observed
        /// training values, so predictions only depend on each column's order.
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Debug)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn predict(&self, row: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf(c) => return c,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if row[feature] <= threshold {
                        left
                    } else {
                        right
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomForest {
    classes: Vec<String>,
    trees: Vec<Tree>,
    width: usize,
}

pub fn train_forest(x: &FeatureMatrix, config: &ForestConfig) -> Result<RandomForest, MlError> {
    RandomForest::fit(x.rows(), x.labels(), config)
}

impl RandomForest {
    pub fn fit<S: AsRef<str>>(
        rows: &[Vec<f64>],
        labels: &[S],
        config: &ForestConfig,
    ) -> Result<Self, MlError> {
        config.validate()?;
        if rows.len() != labels.len() {
            return Err(MlError::LengthMismatch(rows.len(), labels.len()));
        }
        if rows.is_empty() {
            return Err(MlError::Empty);
        }
        let width = rows[0].len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(MlError::InvalidConfig(format!(
                    "row {r} has {} columns, expected {width}",
                    row.len()
                )));
            }
            if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                return Err(MlError::NonFinite { row: r, col: c });
            }
        }
        let classes: Vec<String> = labels
            .iter()
            .map(|l| l.as_ref().to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if classes.len() < 2 {
            return Err(MlError::SingleClass(classes[0].clone()));
        }
        let y: Vec<usize> = labels
            .iter()
            .map(|l| {
                classes
                    .binary_search_by(|c| c.as_str().cmp(l.as_ref()))
                    .unwrap()
            })
            .collect();
        let columns: Vec<Vec<f64>> = (0..width)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();

        let data = TrainData {
            columns: &columns,
            y: &y,
            n_classes: classes.len(),
        };
        let trees = (0..config.n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(t as u64);
                let n = y.len();
                let sample: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                grow(&data, sample, config, &mut rng)
            })
            .collect();

        Ok(RandomForest {
            classes,
            trees,
            width,
        })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Majority vote; ties go to the lexicographically first class.
    pub fn predict_row(&self, row: &[f64]) -> &str {
        assert_eq!(row.len(), self.width, "feature width mismatch");
        let mut votes = vec![0usize; self.classes.len()];
        for t in &self.trees {
            votes[t.predict(row)] += 1;
        }
        &self.classes[argmax(&votes)]
    }

    pub fn predict(&self, rows: &[Vec<f64>]) -> Vec<String> {
        rows.iter()
            .map(|r| self.predict_row(r).to_string())
            .collect()
    }
}

struct TrainData<'a> {
    columns: &'a [Vec<f64>],
    y: &'a [usize],
    n_classes: usize,
}

fn argmax(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

fn gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / nf).powi(2)).sum::<f64>()
}

struct Candidate {
    feature: usize,
    threshold: f64,
    /// Weighted child impurity `n_l * gini_l + n_r * gini_r`.
    score: f64,
}

fn grow(data: &TrainData, sample: Vec<usize>, config: &ForestConfig, rng: &mut ChaCha8Rng) -> Tree {
    let mut nodes = Vec::new();
    // (node slot, samples, depth)
    let mut work = vec![(0usize, sample, 0usize)];
    nodes.push(Node::Leaf(0));
    let width = data.columns.len();
    let m = config.features_per_split.count(width);
    let mut features: Vec<usize> = (0..width).collect();

    while let Some((slot, idx, depth)) = work.pop() {
        let mut counts = vec![0usize; data.n_classes];
        for &i in &idx {
            counts[data.y[i]] += 1;
        }
        let majority = argmax(&counts);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_capped = config.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_capped || idx.len() < 2 * config.min_samples_leaf {
            nodes[slot] = Node::Leaf(majority);
            continue;
        }

        features.shuffle(rng);
        let mut best: Option<Candidate> = None;
        for (tried, &f) in features.iter().enumerate() {
            // keep drawing past `m` only while every feature so far was constant
            if tried >= m && best.is_some() {
                break;
            }
            if let Some(c) = best_split(data, &idx, f, config.min_samples_leaf) {
                if best.as_ref().is_none_or(|b| c.score < b.score) {
                    best = Some(c);
                }
            }
        }

        let Some(split) = best else {
            nodes[slot] = Node::Leaf(majority);
            continue;
        };
        let col = &data.columns[split.feature];
        let (l, r): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| col[i] <= split.threshold);
        let left = nodes.len();
        nodes.push(Node::Leaf(0));
        let right = nodes.len();
        nodes.push(Node::Leaf(0));
        nodes[slot] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        work.push((right, r, depth + 1));
        work.push((left, l, depth + 1));
    }
    Tree { nodes }
}

fn best_split(
    data: &TrainData,
    idx: &[usize],
    feature: usize,
    min_leaf: usize,
) -> Option<Candidate> {
    let col = &data.columns[feature];
    let mut order: Vec<usize> = idx.to_vec();
    order.sort_by(|&a, &b| col[a].total_cmp(&col[b]));

    let n = order.len();
    let mut right = vec![0usize; data.n_classes];
    for &i in &order {
        right[data.y[i]] += 1;
    }
    let mut left = vec![0usize; data.n_classes];
    let mut best: Option<Candidate> = None;
    for k in 0..n - 1 {
        let c = data.y[order[k]];
        left[c] += 1;
        right[c] -= 1;
        let (nl, nr) = (k + 1, n - k - 1);
        let (lo, hi) = (col[order[k]], col[order[k + 1]]);
        if lo == hi || nl < min_leaf || nr < min_leaf {
            continue;
        }
        let score = nl as f64 * gini(&left, nl) + nr as f64 * gini(&right, nr);
        if best.as_ref().is_none_or(|b| score < b.score) {
            best = Some(Candidate {
                feature,
                threshold: lo,
                score,
            });
        }
    }
    best
}
