//! Transaction subgraph networks (TSGN) for ego-network classification.
//!
//! The pipeline has four stages, one module each:
//!
//! 1. [`ingest`]: load transaction exports, cut labeled ego-networks around
//!    target accounts, or generate a synthetic labeled dataset.
//! 2. [`transforms`]: map each ego-network into its TSGN variants, where
//!    transactions become nodes linked by shared addresses, head-to-tail
//!    flow, or time-ordered flow.
//! 3. [`features`]: ten topological features per graph, plus concatenation
//!    and PCA projection of original and mapped features.
//! 4. [`ml`]: random-forest classification scored by F1 over repeated
//!    stratified splits.
//!
//! [`graph`] holds the shared data model.

pub mod features;
pub mod graph;
pub mod ingest;
pub mod ml;
pub mod transforms;

pub use features::{fuse_and_project, handcrafted_features, FeatureMatrix, FeatureVector, Source};
pub use graph::{Address, EdgeId, EdgeRecord, GraphFlags, TransactionGraph};
pub use ingest::{AttributeTier, DatasetManifest, EgoForm};
pub use ml::{evaluate, EvalOptions, EvalReport, ForestConfig};
pub use transforms::{
    build_directed_tsgn, build_multiple_tsgn, build_temporal_tsgn, build_tsgn, map_weight,
    TsgnGraph, Variant,
};
