//! Shared fixtures for the criterion benches.

use tsgn_core::ingest::{dense_ego_network, generate_synthetic_dataset, SizeProfile, SynthConfig};
use tsgn_core::{DatasetManifest, TransactionGraph};

/// Dense net-form ego-networks of `n_nodes` nodes, three neighbor trades per
/// neighbor, one per seed in `0..count`.
pub fn dense_set(n_nodes: usize, count: u64) -> Vec<TransactionGraph> {
    (0..count)
        .map(|s| dense_ego_network(n_nodes, 3, s))
        .collect()
}

/// The 700-graph EtherG1-profile dataset used for end-to-end runs.
pub fn etherg1() -> DatasetManifest {
    generate_synthetic_dataset(&SynthConfig {
        n_per_class: 350,
        profile: SizeProfile::EtherG1,
        seed: 7,
    })
}
