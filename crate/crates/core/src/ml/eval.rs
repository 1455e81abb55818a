//! Repeated stratified hold-out evaluation.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{f1_score, ForestConfig, MlError, RandomForest};
use crate::features::{FeatureMatrix, Pca};

#[derive(Clone, Debug, PartialEq)]
pub struct EvalOptions {
    pub n_repeats: usize,
    pub train_fraction: f64,
    /// When set, a PCA projection to this many components is fitted on each
    /// split's training rows and applied to both sides.
    pub projection_dim: Option<usize>,
    pub positive_class: String,
    pub max_split_attempts: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            n_repeats: 300,
            train_fraction: 0.9,
            projection_dim: None,
            positive_class: "phishing".to_string(),
            max_split_attempts: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalSummary {
    pub mean_f1: f64,
    /// Sample standard deviation over repeats (0 for a single repeat).
    pub std_f1: f64,
    pub n_repeats: usize,
    pub f1_per_repeat: Vec<f64>,
}

/// SplitMix64 finalizer over `(master, index)`; gives every repeat its own
/// stream regardless of scheduling order.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Shuffles each class separately and sends `round(n_c * train_fraction)`
/// of it to training, clamped so both sides keep at least one member when
/// the class has two or more. Returns sorted `(train, test)` indices.
pub fn stratified_split<S: AsRef<str>>(
    labels: &[S],
    train_fraction: f64,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, Vec<usize>) {
    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        by_class.entry(l.as_ref()).or_default().push(i);
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (_, mut idx) in by_class {
        idx.shuffle(rng);
        let n = idx.len();
        let mut k = (n as f64 * train_fraction).round() as usize;
        if n >= 2 {
            k = k.clamp(1, n - 1);
        } else {
            k = k.min(n);
        }
        train.extend_from_slice(&idx[..k]);
        test.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

fn covers_all_classes(labels: &[String], idx: &[usize], n_classes: usize) -> bool {
    let mut seen: Vec<&str> = idx.iter().map(|&i| labels[i].as_str()).collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len() == n_classes
}

pub fn evaluate(
    dataset: &FeatureMatrix,
    config: &ForestConfig,
    opts: &EvalOptions,
) -> Result<EvalSummary, MlError> {
    config.validate()?;
    if opts.n_repeats == 0 {
        return Err(MlError::InvalidConfig(
            "n_repeats must be at least 1".into(),
        ));
    }
    if !(opts.train_fraction > 0.0 && opts.train_fraction < 1.0) {
        return Err(MlError::InvalidConfig(format!(
            "train_fraction must lie in (0, 1), got {}",
            opts.train_fraction
        )));
    }
    if dataset.n_rows() == 0 {
        return Err(MlError::Empty);
    }
    let labels = dataset.labels();
    if !labels.contains(&opts.positive_class) {
        return Err(MlError::UnknownPositiveClass(opts.positive_class.clone()));
    }
    let mut classes: Vec<&str> = labels.iter().map(String::as_str).collect();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(MlError::SingleClass(classes[0].to_string()));
    }

    let f1_per_repeat = (0..opts.n_repeats)
        .into_par_iter()
        .map(|r| run_repeat(dataset, config, opts, classes.len(), r as u64))
        .collect::<Result<Vec<f64>, MlError>>()?;

    let n = f1_per_repeat.len() as f64;
    let mean_f1 = f1_per_repeat.iter().sum::<f64>() / n;
    let std_f1 = if f1_per_repeat.len() > 1 {
        (f1_per_repeat
            .iter()
            .map(|f| (f - mean_f1).powi(2))
            .sum::<f64>()
            / (n - 1.0))
            .sqrt()
    } else {
        0.0
    };
    Ok(EvalSummary {
        mean_f1,
        std_f1,
        n_repeats: opts.n_repeats,
        f1_per_repeat,
    })
}

fn run_repeat(
    dataset: &FeatureMatrix,
    config: &ForestConfig,
    opts: &EvalOptions,
    n_classes: usize,
    repeat: u64,
) -> Result<f64, MlError> {
    let labels = dataset.labels();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, 2 * repeat));
    let mut split = None;
    for _ in 0..opts.max_split_attempts.max(1) {
        let (train, test) = stratified_split(labels, opts.train_fraction, &mut rng);
        if covers_all_classes(labels, &train, n_classes)
            && covers_all_classes(labels, &test, n_classes)
        {
            split = Some((train, test));
            break;
        }
    }
    let (train, test) = split.ok_or(MlError::SplitFailed(opts.max_split_attempts.max(1)))?;

    let train_m = dataset.select(&train);
    let test_m = dataset.select(&test);
    let (train_x, test_x) = match opts.projection_dim {
        Some(k) => {
            let pca = Pca::fit(train_m.rows(), k)?;
            (pca.transform(train_m.rows()), pca.transform(test_m.rows()))
        }
        None => (train_m.rows().to_vec(), test_m.rows().to_vec()),
    };

    let forest_cfg = ForestConfig {
        seed: derive_seed(config.seed, 2 * repeat + 1),
        ..config.clone()
    };
    let model = RandomForest::fit(&train_x, train_m.labels(), &forest_cfg)?;
    let pred = model.predict(&test_x);
    f1_score(&pred, test_m.labels(), &opts.positive_class)
}
