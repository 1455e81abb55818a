//! Random-forest classification and the repeated-split evaluation protocol.

mod eval;
mod forest;
mod metrics;
mod report;

use thiserror::Error;

use crate::features::FeatureError;

pub use eval::{derive_seed, evaluate, stratified_split, EvalOptions, EvalSummary};
pub use forest::{train_forest, FeaturesPerSplit, ForestConfig, RandomForest};
pub use metrics::{f1_score, percent_increase};
pub use report::{EvalRecord, EvalReport};

#[derive(Debug, Error)]
pub enum MlError {
    #[error("length mismatch: {0} predictions vs {1} labels")]
    LengthMismatch(usize, usize),
    #[error("no samples")]
    Empty,
    #[error("baseline F1 must be positive, got {0}")]
    NonPositiveBaseline(f64),
    #[error("training data holds a single class ('{0}')")]
    SingleClass(String),
    #[error("non-finite feature at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("could not draw a split with every class on both sides after {0} attempts")]
    SplitFailed(usize),
    #[error("positive class '{0}' does not occur in the dataset")]
    UnknownPositiveClass(String),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error("report serialization failed: {0}")]
    Serialize(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
