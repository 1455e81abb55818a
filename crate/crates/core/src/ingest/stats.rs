use std::collections::BTreeMap;
use std::fmt::Write;

use super::{AttributeTier, DatasetManifest, EgoForm, IngestError};

/// Edge counts of one attribute tier: total and maximum over graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeStats {
    pub total: usize,
    pub max: usize,
}

/// Per-dataset size summary: graph, class and node/edge counts.
/// Means are kept as exact totals; the `mean_*` accessors round half away
/// from zero for display.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetStats {
    pub name: String,
    pub form: EgoForm,
    pub tier: AttributeTier,
    pub n_graphs: usize,
    pub n_largest_class: usize,
    pub n_classes: usize,
    pub total_nodes: usize,
    pub max_nodes: usize,
    /// Plain, directed and multiedge edge counts; a tier richer than the
    /// manifest's own is `None`.
    pub edges: [Option<EdgeStats>; 3],
}

impl DatasetStats {
    pub fn mean_nodes_exact(&self) -> f64 {
        self.total_nodes as f64 / self.n_graphs as f64
    }

    pub fn mean_nodes(&self) -> usize {
        self.mean_nodes_exact().round() as usize
    }

    fn tier_edges(&self) -> EdgeStats {
        self.edges[tier_index(self.tier)].expect("manifest tier is always computed")
    }

    pub fn mean_edges_exact(&self) -> f64 {
        self.tier_edges().total as f64 / self.n_graphs as f64
    }

    pub fn mean_edges(&self) -> usize {
        self.mean_edges_exact().round() as usize
    }

    pub fn max_edges(&self) -> usize {
        self.tier_edges().max
    }

    /// Aligned text table, one header block and one row.
    pub fn to_table(&self) -> String {
        render_table(std::slice::from_ref(self))
    }
}

fn tier_index(t: AttributeTier) -> usize {
    match t {
        AttributeTier::Plain => 0,
        AttributeTier::Directed => 1,
        AttributeTier::Multiedge => 2,
    }
}

pub fn dataset_stats(manifest: &DatasetManifest, name: &str) -> Result<DatasetStats, IngestError> {
    let graphs = &manifest.graphs;
    if graphs.is_empty() {
        return Err(IngestError::EmptyManifest);
    }
    let mut class_sizes: BTreeMap<&str, usize> = BTreeMap::new();
    for g in graphs {
        *class_sizes
            .entry(g.label().unwrap_or_default())
            .or_default() += 1;
    }

    let mut edges = [None; 3];
    for (slot, tier) in [
        AttributeTier::Plain,
        AttributeTier::Directed,
        AttributeTier::Multiedge,
    ]
    .into_iter()
    .enumerate()
    {
        if tier > manifest.tier {
            continue;
        }
        let counts = graphs.iter().map(|g| match tier {
            AttributeTier::Plain => g.undirected_projection().edge_count(),
            AttributeTier::Directed => g.directed_projection().edge_count(),
            AttributeTier::Multiedge => g.edge_count(),
        });
        let (total, max) = counts.fold((0, 0), |(t, m), c| (t + c, m.max(c)));
        edges[slot] = Some(EdgeStats { total, max });
    }

    Ok(DatasetStats {
        name: name.to_string(),
        form: manifest.form,
        tier: manifest.tier,
        n_graphs: graphs.len(),
        n_largest_class: class_sizes.values().copied().max().unwrap_or(0),
        n_classes: class_sizes.len(),
        total_nodes: graphs.iter().map(|g| g.node_count()).sum(),
        max_nodes: graphs.iter().map(|g| g.node_count()).max().unwrap_or(0),
        edges,
    })
}

/// Renders several datasets as one aligned table.
pub fn render_table(rows: &[DatasetStats]) -> String {
    let header = [
        "Dataset",
        "Type",
        "N_G",
        "#C_max",
        "N_C",
        "#N",
        "max#N",
        "Plain#E",
        "Plain max#E",
        "Directed#E",
        "Directed max#E",
        "Multiedge#E",
        "Multiedge max#E",
    ];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|s| {
            let mut row = vec![
                s.name.clone(),
                match s.form {
                    EgoForm::Star => "Star".to_string(),
                    EgoForm::Net => "Net".to_string(),
                },
                s.n_graphs.to_string(),
                s.n_largest_class.to_string(),
                s.n_classes.to_string(),
                s.mean_nodes().to_string(),
                s.max_nodes.to_string(),
            ];
            for e in &s.edges {
                match e {
                    Some(e) => {
                        row.push(
                            ((e.total as f64 / s.n_graphs as f64).round() as usize).to_string(),
                        );
                        row.push(e.max.to_string());
                    }
                    None => {
                        row.push("-".into());
                        row.push("-".into());
                    }
                }
            }
            row
        })
        .collect();

    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, items: &[&str]| {
        let parts: Vec<String> = items
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| {
                if i < 2 {
                    format!("{c:<w$}")
                } else {
                    format!("{c:>w$}")
                }
            })
            .collect();
        writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
    };
    line(&mut out, &header);
    for row in &cells {
        let refs: Vec<&str> = row.iter().map(String::as_str).collect();
        line(&mut out, &refs);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Address, EdgeRecord, GraphFlags, TransactionGraph};

    fn path_graph(n: usize, label: &str) -> TransactionGraph {
        let addr = |i: usize| Address::new(format!("v{i}")).unwrap();
        let edges = (0..n - 1)
            .map(|i| EdgeRecord::new(i as u64, addr(i), addr(i + 1), 1.0, None))
            .collect();
        TransactionGraph::new(edges, GraphFlags::DIRECTED, addr(0), Some(label.into())).unwrap()
    }

    fn manifest(graphs: Vec<TransactionGraph>) -> DatasetManifest {
        DatasetManifest::new(graphs, "test".into(), EgoForm::Net, AttributeTier::Directed).unwrap()
    }

    #[test]
    fn means_and_maxima() {
        let s =
            dataset_stats(&manifest(vec![path_graph(3, "a"), path_graph(5, "b")]), "t").unwrap();
        assert_eq!(s.mean_nodes(), 4);
        assert_eq!(s.max_nodes, 5);
        assert_eq!(s.mean_edges(), 3);
        assert_eq!(s.max_edges(), 4);
        assert_eq!(s.n_classes, 2);
        assert!(s.edges[2].is_none());
    }

    #[test]
    fn single_graph() {
        let s = dataset_stats(&manifest(vec![path_graph(2, "a")]), "t").unwrap();
        assert_eq!(s.n_largest_class, 1);
        assert_eq!(s.n_graphs, 1);
    }

    #[test]
    fn empty_manifest_errors() {
        let m = DatasetManifest {
            graphs: vec![],
            label_set: Default::default(),
            provenance: String::new(),
            form: EgoForm::Star,
            tier: AttributeTier::Plain,
        };
        assert!(matches!(
            dataset_stats(&m, "x"),
            Err(IngestError::EmptyManifest)
        ));
    }

    #[test]
    fn table_layout() {
        let s = dataset_stats(
            &manifest(vec![path_graph(3, "a"), path_graph(5, "b")]),
            "Demo",
        )
        .unwrap();
        let t = s.to_table();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("Dataset  Type  N_G"));
        assert!(lines[1].starts_with("Demo     Net     2"));
        assert!(lines[1].ends_with("-                -"));
    }
}
