use std::collections::BTreeSet;

use super::{AttributeTier, EgoForm, IngestError};
use crate::graph::{Address, EdgeRecord, GraphFlags, TransactionGraph};

/// Builds the ego-network of `target`.
///
/// Star form keeps the transactions touching `target`; net form also keeps
/// transactions between two of its 1-hop neighbors. The tier then decides
/// how much of each record survives:
///
/// * `Plain`: undirected, one edge per address pair, no timestamps.
/// * `Directed`: one edge per ordered pair; timestamps of the kept records
///   stay when every record has one.
/// * `Multiedge`: every record.
///
/// Collapsing keeps the largest amount.
pub fn extract_ego_network(
    records: &[EdgeRecord],
    target: &Address,
    form: EgoForm,
    tier: AttributeTier,
) -> Result<TransactionGraph, IngestError> {
    let neighbors: BTreeSet<&Address> = records
        .iter()
        .filter(|r| !r.is_self_loop())
        .filter_map(|r| {
            if r.src == *target {
                Some(&r.dst)
            } else if r.dst == *target {
                Some(&r.src)
            } else {
                None
            }
        })
        .collect();
    if neighbors.is_empty() {
        return Err(IngestError::TargetAbsent(target.clone()));
    }

    let kept: Vec<EdgeRecord> = records
        .iter()
        .filter(|r| !r.is_self_loop())
        .filter(|r| {
            let incident = r.src == *target || r.dst == *target;
            incident
                || (form == EgoForm::Net
                    && neighbors.contains(&r.src)
                    && neighbors.contains(&r.dst))
        })
        .cloned()
        .collect();

    let temporal = kept.iter().all(|r| r.timestamp.is_some());
    let full = TransactionGraph::new(
        kept,
        GraphFlags {
            directed: true,
            temporal,
            multiedge: true,
        },
        target.clone(),
        None,
    )?;
    Ok(match tier {
        AttributeTier::Plain => full.undirected_projection().without_timestamps(),
        AttributeTier::Directed => full.directed_projection(),
        AttributeTier::Multiedge => full,
    })
}
