//! Loading transaction exports, extracting labeled ego-networks, generating
//! synthetic datasets and summarizing them.

mod dataset;
mod ego;
mod records;
mod stats;
mod synth;

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Address, GraphError, TransactionGraph};

pub use dataset::{graph_id, graph_ids, read_dataset, write_dataset, LABELS_FILE, META_FILE};
pub use ego::extract_ego_network;
pub use records::{
    load_edge_list, load_jsonl, read_edge_list, read_jsonl, write_edge_list, LoadReport, RowError,
    Schema,
};
pub use stats::{dataset_stats, render_table, DatasetStats, EdgeStats};
pub use synth::{
    dense_ego_network, generate_synthetic_dataset, SizeProfile, SynthConfig, BENIGN, PHISHING,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("i/o error: {0}")]
    Stream(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(String),
    #[error("missing mandatory column '{0}'")]
    MissingColumn(String),
    #[error("{} malformed row(s): {}", .0.len(), describe_rows(.0))]
    Malformed(Vec<RowError>),
    #[error("target {0} does not appear in any record")]
    TargetAbsent(Address),
    #[error("graph {0} has no label")]
    Unlabeled(usize),
    #[error("dataset is empty")]
    EmptyManifest,
    #[error("{} is not a dataset directory (no labels.csv)", .0.display())]
    NotADataset(PathBuf),
    #[error("{}: {inner}", path.display())]
    InFile {
        path: PathBuf,
        inner: Box<IngestError>,
    },
    #[error("cannot derive the {want} tier from a {have} dataset")]
    TierUnavailable {
        have: AttributeTier,
        want: AttributeTier,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn describe_rows(rows: &[RowError]) -> String {
    rows.iter()
        .map(|r| format!("line {}: {}", r.line, r.reason))
        .collect::<Vec<_>>()
        .join("; ")
}

impl IngestError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        IngestError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Star keeps only transactions touching the target; net also keeps those
/// between its 1-hop neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EgoForm {
    Star,
    Net,
}

impl fmt::Display for EgoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EgoForm::Star => "star",
            EgoForm::Net => "net",
        })
    }
}

impl FromStr for EgoForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "star" => Ok(EgoForm::Star),
            "net" => Ok(EgoForm::Net),
            _ => Err(format!("unknown form '{s}' (expected star|net)")),
        }
    }
}

/// How many transaction attributes a dataset keeps, poorest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeTier {
    Plain,
    Directed,
    Multiedge,
}

impl fmt::Display for AttributeTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttributeTier::Plain => "plain",
            AttributeTier::Directed => "directed",
            AttributeTier::Multiedge => "multiedge",
        })
    }
}

impl FromStr for AttributeTier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(AttributeTier::Plain),
            "directed" => Ok(AttributeTier::Directed),
            "multiedge" => Ok(AttributeTier::Multiedge),
            _ => Err(format!(
                "unknown tier '{s}' (expected plain|directed|multiedge)"
            )),
        }
    }
}

/// A labeled collection of ego-networks.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetManifest {
    pub graphs: Vec<TransactionGraph>,
    pub label_set: BTreeSet<String>,
    pub provenance: String,
    pub form: EgoForm,
    pub tier: AttributeTier,
}

impl DatasetManifest {
    pub fn new(
        graphs: Vec<TransactionGraph>,
        provenance: String,
        form: EgoForm,
        tier: AttributeTier,
    ) -> Result<Self, IngestError> {
        let mut label_set = BTreeSet::new();
        for (i, g) in graphs.iter().enumerate() {
            label_set.insert(g.label().ok_or(IngestError::Unlabeled(i))?.to_string());
        }
        Ok(DatasetManifest {
            graphs,
            label_set,
            provenance,
            form,
            tier,
        })
    }

    pub fn labels(&self) -> Vec<String> {
        self.graphs
            .iter()
            .map(|g| g.label().unwrap_or_default().to_string())
            .collect()
    }

    /// Re-extracts every graph with a (possibly) narrower form and tier.
    pub fn reshape(
        &self,
        form: EgoForm,
        tier: AttributeTier,
    ) -> Result<DatasetManifest, IngestError> {
        if tier > self.tier {
            return Err(IngestError::TierUnavailable {
                have: self.tier,
                want: tier,
            });
        }
        let graphs = self
            .graphs
            .iter()
            .map(|g| {
                let label = g.label().unwrap_or_default().to_string();
                extract_ego_network(g.edges(), g.center(), form, tier).map(|x| x.with_label(label))
            })
            .collect::<Result<Vec<_>, _>>()?;
        DatasetManifest::new(graphs, self.provenance.clone(), form, tier)
    }
}
