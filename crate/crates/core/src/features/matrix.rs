use std::io::{Read, Write};

use super::{FeatureError, FeatureVector, Pca};

/// Per-graph feature rows with aligned class labels and column names.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    rows: Vec<Vec<f64>>,
    labels: Vec<String>,
    columns: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(
        rows: Vec<Vec<f64>>,
        labels: Vec<String>,
        columns: Vec<String>,
    ) -> Result<Self, FeatureError> {
        if rows.len() != labels.len() {
            return Err(FeatureError::RowMismatch(rows.len(), labels.len()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != columns.len() {
                return Err(FeatureError::RaggedRow {
                    row: i,
                    got: r.len(),
                    expected: columns.len(),
                });
            }
        }
        Ok(FeatureMatrix {
            rows,
            labels,
            columns,
        })
    }

    /// Stacks per-graph vectors; columns are named `<source>.<feature>`
    /// after the first vector's source.
    pub fn from_vectors(
        vectors: &[FeatureVector],
        labels: Vec<String>,
    ) -> Result<Self, FeatureError> {
        let source = vectors
            .first()
            .map(|v| v.source)
            .unwrap_or(super::Source::Tn);
        let rows = vectors.iter().map(|v| v.values.to_vec()).collect();
        Self::new(rows, labels, FeatureVector::column_names(source))
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn select(&self, indices: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            columns: self.columns.clone(),
        }
    }

    /// Row-wise `[self | other]`; labels must agree row by row.
    pub fn concat(&self, other: &FeatureMatrix) -> Result<FeatureMatrix, FeatureError> {
        if self.n_rows() != other.n_rows() {
            return Err(FeatureError::RowMismatch(self.n_rows(), other.n_rows()));
        }
        if let Some(i) = (0..self.n_rows()).find(|&i| self.labels[i] != other.labels[i]) {
            return Err(FeatureError::LabelMismatch(i));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        let columns = self.columns.iter().chain(&other.columns).cloned().collect();
        Ok(FeatureMatrix {
            rows,
            labels: self.labels.clone(),
            columns,
        })
    }

    /// Writes a header of column names plus `label`, then one row per graph.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), FeatureError> {
        let mut out = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| FeatureError::Csv(e.to_string());
        out.write_record(self.columns.iter().map(String::as_str).chain(["label"]))
            .map_err(csv_err)?;
        for (row, label) in self.rows.iter().zip(&self.labels) {
            let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            rec.push(label.clone());
            out.write_record(&rec).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<FeatureMatrix, FeatureError> {
        let csv_err = |e: csv::Error| FeatureError::Csv(e.to_string());
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers().map_err(csv_err)?.clone();
        if header.iter().next_back() != Some("label") {
            return Err(FeatureError::Csv("last column must be 'label'".into()));
        }
        let columns: Vec<String> = header
            .iter()
            .take(header.len() - 1)
            .map(String::from)
            .collect();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(csv_err)?;
            let row = rec
                .iter()
                .take(columns.len())
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| FeatureError::Csv(format!("'{s}': {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
            labels.push(rec.get(columns.len()).unwrap_or_default().to_string());
        }
        Self::new(rows, labels, columns)
    }
}

/// Concatenates TN and TSGN features per graph and projects the result onto
/// its top `target_dim` principal components (default: the TN width).
///
/// The projection is fitted on all rows given. Inside evaluation the fit is
/// done per split on training rows only.
pub fn fuse_and_project(
    tn: &FeatureMatrix,
    tsgn: &FeatureMatrix,
    target_dim: Option<usize>,
) -> Result<FeatureMatrix, FeatureError> {
    let fused = tn.concat(tsgn)?;
    let k = target_dim.unwrap_or(tn.width());
    let pca = Pca::fit(fused.rows(), k)?;
    FeatureMatrix::new(
        pca.transform(fused.rows()),
        fused.labels.clone(),
        (1..=k).map(|i| format!("pc{i}")).collect(),
    )
}
