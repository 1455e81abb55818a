//! On-disk dataset layout: one directory holding `labels.csv`
//! (`graph_id,center_address,label`), one `<graph_id>.csv` edge list per
//! graph, and an optional `dataset.toml` with provenance metadata.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::records::{load_edge_list, write_edge_list, Schema};
use super::{extract_ego_network, AttributeTier, DatasetManifest, EgoForm, IngestError};
use crate::graph::Address;

pub const LABELS_FILE: &str = "labels.csv";
pub const META_FILE: &str = "dataset.toml";

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    provenance: String,
    form: EgoForm,
    tier: AttributeTier,
}

#[derive(Debug, Serialize, Deserialize)]
struct LabelRow {
    graph_id: String,
    center_address: String,
    label: String,
}

pub fn graph_id(index: usize) -> String {
    format!("g{index:05}")
}

pub fn write_dataset(dir: &Path, manifest: &DatasetManifest) -> Result<(), IngestError> {
    fs::create_dir_all(dir).map_err(|e| IngestError::io(dir, e))?;

    let labels_path = dir.join(LABELS_FILE);
    let file = File::create(&labels_path).map_err(|e| IngestError::io(&labels_path, e))?;
    let mut labels = csv::Writer::from_writer(BufWriter::new(file));
    for (i, g) in manifest.graphs.iter().enumerate() {
        let id = graph_id(i);
        labels
            .serialize(LabelRow {
                graph_id: id.clone(),
                center_address: g.center().to_string(),
                label: g.label().unwrap_or_default().to_string(),
            })
            .map_err(|e| IngestError::Csv(e.to_string()))?;

        let mut edges = g.edges().to_vec();
        edges.sort_by_key(|e| e.edge_id);
        let path = dir.join(format!("{id}.csv"));
        let f = File::create(&path).map_err(|e| IngestError::io(&path, e))?;
        write_edge_list(BufWriter::new(f), &edges)?;
    }
    labels.flush()?;

    let meta = Meta {
        provenance: manifest.provenance.clone(),
        form: manifest.form,
        tier: manifest.tier,
    };
    let text = toml::to_string(&meta).map_err(|e| IngestError::Parse(e.to_string()))?;
    let meta_path = dir.join(META_FILE);
    fs::write(&meta_path, text).map_err(|e| IngestError::io(&meta_path, e))?;
    Ok(())
}

/// Graph ids in `labels.csv` order, matching the graphs of [`read_dataset`].
pub fn graph_ids(dir: &Path) -> Result<Vec<String>, IngestError> {
    let labels_path = dir.join(LABELS_FILE);
    if !labels_path.is_file() {
        return Err(IngestError::NotADataset(dir.to_path_buf()));
    }
    let file = File::open(&labels_path).map_err(|e| IngestError::io(&labels_path, e))?;
    csv::Reader::from_reader(file)
        .deserialize::<LabelRow>()
        .map(|row| {
            row.map(|r| r.graph_id)
                .map_err(|e| IngestError::Csv(format!("{LABELS_FILE}: {e}")))
        })
        .collect()
}

/// Loads every graph listed in `labels.csv` and re-extracts its ego-network
/// around the listed center with the requested form and tier.
pub fn read_dataset(
    dir: &Path,
    form: EgoForm,
    tier: AttributeTier,
) -> Result<DatasetManifest, IngestError> {
    let labels_path = dir.join(LABELS_FILE);
    if !labels_path.is_file() {
        return Err(IngestError::NotADataset(dir.to_path_buf()));
    }
    let provenance = match fs::read_to_string(dir.join(META_FILE)) {
        Ok(text) => {
            toml::from_str::<Meta>(&text)
                .map_err(|e| IngestError::Parse(format!("{META_FILE}: {e}")))?
                .provenance
        }
        Err(_) => dir.display().to_string(),
    };

    let file = File::open(&labels_path).map_err(|e| IngestError::io(&labels_path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let mut graphs = Vec::new();
    for row in rdr.deserialize::<LabelRow>() {
        let row = row.map_err(|e| IngestError::Csv(format!("{LABELS_FILE}: {e}")))?;
        let path = dir.join(format!("{}.csv", row.graph_id));
        let records = load_edge_list(&path, &Schema::default())?
            .into_records()
            .map_err(|e| IngestError::InFile {
                path: path.clone(),
                inner: Box::new(e),
            })?;
        let center = Address::new(&row.center_address)?;
        let g = extract_ego_network(&records, &center, form, tier).map_err(|e| {
            IngestError::InFile {
                path: path.clone(),
                inner: Box::new(e),
            }
        })?;
        graphs.push(g.with_label(row.label));
    }
    DatasetManifest::new(graphs, provenance, form, tier)
}
