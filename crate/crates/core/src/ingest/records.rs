//! Edge-list readers and writers (CSV and JSON lines).

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde_json::Value;

use super::IngestError;
use crate::graph::{Address, EdgeRecord};

/// Column (or JSON field) names for the transaction fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub src: String,
    pub dst: String,
    pub amount: String,
    /// Optional; rows without it load with no timestamp.
    pub timestamp: Option<String>,
}

impl Default for Schema {
    fn default() -> Self {
        Schema {
            src: "src".into(),
            dst: "dst".into(),
            amount: "amount".into(),
            timestamp: Some("timestamp".into()),
        }
    }
}

impl Schema {
    /// Field names used by Etherscan `txlist` exports.
    pub fn etherscan() -> Self {
        Schema {
            src: "from".into(),
            dst: "to".into(),
            amount: "value".into(),
            timestamp: Some("timeStamp".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowError {
    /// 1-based line number in the source file.
    pub line: usize,
    pub reason: String,
}

/// Parsed records plus everything that was skipped.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoadReport {
    pub records: Vec<EdgeRecord>,
    pub rejected: Vec<RowError>,
    pub self_loops: usize,
}

impl LoadReport {
    /// Fails if any row was rejected; dropped self-loops are not an error.
    pub fn into_records(self) -> Result<Vec<EdgeRecord>, IngestError> {
        if self.rejected.is_empty() {
            Ok(self.records)
        } else {
            Err(IngestError::Malformed(self.rejected))
        }
    }

    fn push(&mut self, line: usize, parsed: Result<EdgeRecord, String>) {
        match parsed {
            Ok(r) if r.is_self_loop() => {
                log::warn!("line {line}: dropping self-loop transaction on {}", r.src);
                self.self_loops += 1;
            }
            Ok(r) => self.records.push(r),
            Err(reason) => self.rejected.push(RowError { line, reason }),
        }
    }
}

fn parse_amount(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("amount '{s}' is not a decimal number"))?;
    if !v.is_finite() || v < 0.0 {
        return Err(format!("amount {s} must be finite and non-negative"));
    }
    Ok(v)
}

fn parse_timestamp(s: &str) -> Result<Option<i64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| format!("timestamp '{s}' is not an integer"))
}

fn build(
    edge_id: u64,
    src: &str,
    dst: &str,
    amount: &str,
    ts: Option<&str>,
) -> Result<EdgeRecord, String> {
    let src = Address::new(src).map_err(|_| "empty source address".to_string())?;
    let dst = Address::new(dst).map_err(|_| "empty destination address".to_string())?;
    let amount = parse_amount(amount)?;
    let timestamp = match ts {
        Some(t) => parse_timestamp(t)?,
        None => None,
    };
    Ok(EdgeRecord::new(edge_id, src, dst, amount, timestamp))
}

pub fn load_edge_list(path: &Path, schema: &Schema) -> Result<LoadReport, IngestError> {
    let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
    read_edge_list(file, schema)
}

/// Reads a CSV with a header row. Edge ids are the 0-based data-row ordinals.
pub fn read_edge_list<R: Read>(reader: R, schema: &Schema) -> Result<LoadReport, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| IngestError::Csv(e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let src = col(&schema.src).ok_or_else(|| IngestError::MissingColumn(schema.src.clone()))?;
    let dst = col(&schema.dst).ok_or_else(|| IngestError::MissingColumn(schema.dst.clone()))?;
    let amount =
        col(&schema.amount).ok_or_else(|| IngestError::MissingColumn(schema.amount.clone()))?;
    let ts = schema.timestamp.as_deref().and_then(col);

    let mut report = LoadReport::default();
    for (ordinal, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| IngestError::Csv(e.to_string()))?;
        let line = row
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(ordinal + 2);
        let field = |i: usize| row.get(i).unwrap_or("");
        let parsed = build(
            ordinal as u64,
            field(src),
            field(dst),
            field(amount),
            ts.map(field),
        );
        report.push(line, parsed);
    }
    Ok(report)
}

pub fn load_jsonl(path: &Path, schema: &Schema) -> Result<LoadReport, IngestError> {
    let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
    read_jsonl(BufReader::new(file), schema)
}

/// Reads one JSON object per line; numbers may be given as JSON numbers or
/// strings. Blank lines are skipped but still count toward edge ids.
pub fn read_jsonl<R: BufRead>(reader: R, schema: &Schema) -> Result<LoadReport, IngestError> {
    let mut report = LoadReport::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<Value>(&line)
            .map_err(|e| format!("invalid JSON: {e}"))
            .and_then(|v| {
                let text = |name: &str| -> Result<Option<String>, String> {
                    match v.get(name) {
                        None | Some(Value::Null) => Ok(None),
                        Some(Value::String(s)) => Ok(Some(s.clone())),
                        Some(Value::Number(n)) => Ok(Some(n.to_string())),
                        Some(other) => Err(format!("field '{name}' has unsupported value {other}")),
                    }
                };
                let need =
                    |name: &str| text(name)?.ok_or_else(|| format!("missing field '{name}'"));
                let src = need(&schema.src)?;
                let dst = need(&schema.dst)?;
                let amount = need(&schema.amount)?;
                let ts = match &schema.timestamp {
                    Some(name) => text(name)?,
                    None => None,
                };
                build(i as u64, &src, &dst, &amount, ts.as_deref())
            });
        report.push(i + 1, parsed);
    }
    Ok(report)
}

/// Writes `src,dst,amount,timestamp` rows in the given order.
pub fn write_edge_list<W: Write>(writer: W, records: &[EdgeRecord]) -> Result<(), IngestError> {
    let mut out = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| IngestError::Csv(e.to_string());
    out.write_record(["src", "dst", "amount", "timestamp"])
        .map_err(err)?;
    for r in records {
        out.write_record([
            r.src.as_str(),
            r.dst.as_str(),
            &r.amount.to_string(),
            &r.timestamp.map(|t| t.to_string()).unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    out.flush()?;
    Ok(())
}
