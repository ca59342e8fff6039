use std::io::Read;

use crate::error::{PqkError, Result};

/// Numeric CSV whose last column is a `label` of `+1`/`-1`, as written by the
/// encoded-dataset and feature writers.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
}

pub fn read_labeled_csv<R: Read>(reader: R) -> Result<LabeledTable> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.last().map(String::as_str) != Some("label") || header.len() < 2 {
        return Err(PqkError::Data("expected feature columns followed by a `label` column".into()));
    }
    let width = header.len() - 1;
    let (mut rows, mut labels) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| PqkError::Data(format!("row {}: {e}", i + 2)))?;
        if vals.len() != header.len() {
            return Err(PqkError::Data(format!("row {}: {} fields, expected {}", i + 2, vals.len(), header.len())));
        }
        let label = vals[width];
        if label != 1.0 && label != -1.0 {
            return Err(PqkError::Data(format!("row {}: label {label} is not +1/-1", i + 2)));
        }
        labels.push(label);
        rows.push(vals[..width].to_vec());
    }
    Ok(LabeledTable { columns: header[..width].to_vec(), rows, labels })
}
