//! Handcrafted topological features and feature fusion.
//!
//! All ten features are computed on the unweighted, undirected simple view
//! of a graph, whether it is an original transaction network or one of its
//! TSGN mappings.

mod centrality;
mod matrix;
mod pca;
mod spectral;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::TransactionGraph;
use crate::transforms::{TsgnGraph, Variant};

pub use centrality::{betweenness_centrality, closeness_centrality};
pub use matrix::{fuse_and_project, FeatureMatrix};
pub use pca::Pca;
pub use spectral::{largest_eigenvalue, POWER_MAX_ITER, POWER_TOLERANCE};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("cannot extract features from an empty graph")]
    EmptyGraph,
    #[error("row count mismatch: {0} vs {1}")]
    RowMismatch(usize, usize),
    #[error("labels differ at row {0}")]
    LabelMismatch(usize),
    #[error("row {row} has {got} columns, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("target dimension {target} exceeds feature width {width}")]
    TargetTooWide { target: usize, width: usize },
    #[error("target dimension must be at least 1")]
    ZeroTarget,
    #[error("need at least one row to fit a projection")]
    NoRows,
    #[error("invalid feature CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const FEATURE_COUNT: usize = 10;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "n_nodes",
    "n_edges",
    "avg_degree",
    "leaf_fraction",
    "density",
    "avg_neighbor_degree",
    "avg_clustering",
    "largest_eigenvalue",
    "avg_betweenness",
    "avg_closeness",
];

/// Which graph a feature vector was extracted from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    Tn,
    Mapped(Variant),
}

impl Source {
    pub fn short_name(self) -> &'static str {
        match self {
            Source::Tn => "tn",
            Source::Mapped(v) => v.short_name(),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("tn") {
            Ok(Source::Tn)
        } else {
            s.parse().map(Source::Mapped)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    pub values: [f64; FEATURE_COUNT],
    pub source: Source,
}

impl FeatureVector {
    pub fn column_names(source: Source) -> Vec<String> {
        FEATURE_NAMES
            .iter()
            .map(|n| format!("{}.{n}", source.short_name()))
            .collect()
    }
}

/// Undirected simple graph over dense indices `0..n`; adjacency lists are
/// sorted and free of duplicates and self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Symmetrizes `edges`, dropping self-loops and repeats.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut sets = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u != v {
                sets[u].insert(v);
                sets[v].insert(u);
            }
        }
        SimpleGraph {
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }
}

/// Anything that exposes an undirected simple topology.
pub trait Topology {
    fn simple_view(&self) -> SimpleGraph;
    fn source(&self) -> Source;
}

impl Topology for TransactionGraph {
    fn simple_view(&self) -> SimpleGraph {
        let index: HashMap<_, _> = self
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        SimpleGraph::from_edges(
            self.node_count(),
            self.edges().iter().map(|e| (index[&e.src], index[&e.dst])),
        )
    }

    fn source(&self) -> Source {
        Source::Tn
    }
}

impl Topology for TsgnGraph {
    fn simple_view(&self) -> SimpleGraph {
        SimpleGraph::from_edges(
            self.node_count(),
            self.edges().iter().map(|e| (e.from, e.to)),
        )
    }

    fn source(&self) -> Source {
        Source::Mapped(self.variant())
    }
}

impl Topology for SimpleGraph {
    fn simple_view(&self) -> SimpleGraph {
        self.clone()
    }

    fn source(&self) -> Source {
        Source::Tn
    }
}

pub fn handcrafted_features<G: Topology + ?Sized>(g: &G) -> Result<FeatureVector, FeatureError> {
    let values = simple_graph_features(&g.simple_view())?;
    Ok(FeatureVector {
        values,
        source: g.source(),
    })
}

/// The ten features, in [`FEATURE_NAMES`] order.
pub fn simple_graph_features(g: &SimpleGraph) -> Result<[f64; FEATURE_COUNT], FeatureError> {
    let n = g.node_count();
    if n == 0 {
        return Err(FeatureError::EmptyGraph);
    }
    let m = g.edge_count();
    let nf = n as f64;
    let mf = m as f64;

    let avg_degree = 2.0 * mf / nf;
    let leaves = (0..n).filter(|&v| g.degree(v) == 1).count() as f64 / nf;
    let density = if n > 1 {
        2.0 * mf / (nf * (nf - 1.0))
    } else {
        0.0
    };

    let avg_nbr_degree = (0..n)
        .map(|v| {
            let nb = g.neighbors(v);
            if nb.is_empty() {
                0.0
            } else {
                nb.iter().map(|&u| g.degree(u) as f64).sum::<f64>() / nb.len() as f64
            }
        })
        .sum::<f64>()
        / nf;

    let avg_clustering = (0..n).map(|v| local_clustering(g, v)).sum::<f64>() / nf;

    let eigen = largest_eigenvalue(g);
    let betweenness = betweenness_centrality(g).iter().sum::<f64>() / nf;
    let closeness = closeness_centrality(g).iter().sum::<f64>() / nf;

    Ok([
        nf,
        mf,
        avg_degree,
        leaves,
        density,
        avg_nbr_degree,
        avg_clustering,
        eigen,
        betweenness,
        closeness,
    ])
}

fn local_clustering(g: &SimpleGraph, v: usize) -> f64 {
    let nb = g.neighbors(v);
    let k = nb.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &a) in nb.iter().enumerate() {
        let na = g.neighbors(a);
        links += nb[i + 1..]
            .iter()
            .filter(|b| na.binary_search(b).is_ok())
            .count();
    }
    2.0 * links as f64 / (k * (k - 1)) as f64
}
