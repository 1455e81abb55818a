use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{percent_increase, MlError};

/// One evaluated configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub dataset: String,
    pub variant: String,
    pub mean_f1: f64,
    pub std_f1: f64,
    pub n_repeats: usize,
    /// Relative F1 gain over the report's baseline variant on the same dataset.
    pub percent_increase: Option<f64>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub baseline: String,
    #[serde(rename = "record")]
    pub records: Vec<EvalRecord>,
}

impl EvalReport {
    /// Fills `percent_increase` of every record from its dataset's baseline
    /// row; the baseline row itself gets 0.
    pub fn new(baseline: impl Into<String>, mut records: Vec<EvalRecord>) -> Result<Self, MlError> {
        let baseline = baseline.into();
        let bases: Vec<(String, f64)> = records
            .iter()
            .filter(|r| r.variant == baseline)
            .map(|r| (r.dataset.clone(), r.mean_f1))
            .collect();
        for r in &mut records {
            r.percent_increase = match bases.iter().find(|(d, _)| *d == r.dataset) {
                Some((_, base)) => Some(percent_increase(r.mean_f1, *base)?),
                None => None,
            };
        }
        Ok(EvalReport { baseline, records })
    }

    pub fn to_text(&self) -> Result<String, MlError> {
        toml::to_string(self).map_err(|e| MlError::Serialize(e.to_string()))
    }

    pub fn from_text(text: &str) -> Result<Self, MlError> {
        toml::from_str(text).map_err(|e| MlError::Serialize(e.to_string()))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), MlError> {
        let mut out = csv::Writer::from_writer(w);
        let err = |e: csv::Error| MlError::Serialize(e.to_string());
        out.write_record([
            "dataset",
            "variant",
            "mean_f1",
            "std_f1",
            "n_repeats",
            "percent_increase",
            "seed",
        ])
        .map_err(err)?;
        for r in &self.records {
            out.write_record([
                r.dataset.clone(),
                r.variant.clone(),
                format!("{:.6}", r.mean_f1),
                format!("{:.6}", r.std_f1),
                r.n_repeats.to_string(),
                r.percent_increase
                    .map(|p| format!("{p:.4}"))
                    .unwrap_or_default(),
                r.seed.to_string(),
            ])
            .map_err(err)?;
        }
        out.flush()?;
        Ok(())
    }
}
