use std::io::Write;

use serde::{Deserialize, Serialize};

use super::experiment::{EvalReport, Method};
use super::fisher::fisher_exact;
use crate::error::{PqkError, Result};
use crate::motif::AnnotationAxis;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceRow {
    pub position: usize,
    pub axis: AnnotationAxis,
    pub value: String,
    pub original_correct: u64,
    pub original_incorrect: u64,
    pub pqk_correct: u64,
    pub pqk_incorrect: u64,
    pub p_value: f64,
    pub significant: bool,
    /// Method with the higher correct rate, when significant.
    pub better: Option<Method>,
}

/// Fisher test per (position, annotation value) on the 2×2 table
/// method × {correct, incorrect}.
pub fn per_motif_analysis(report: &EvalReport, alpha: f64) -> Result<Vec<SignificanceRow>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(PqkError::Config(format!("alpha {alpha} outside (0, 1)")));
    }
    report
        .counts
        .iter()
        .map(|cell| {
            let (o, q) = (cell.original, cell.pqk);
            if o.total() != q.total() {
                return Err(PqkError::Data(format!(
                    "position {} {} `{}`: methods were scored on different samples",
                    cell.position,
                    cell.axis.name(),
                    cell.value
                )));
            }
            let p_value = fisher_exact([[q.correct, q.incorrect], [o.correct, o.incorrect]]);
            let significant = p_value < alpha;
            // equal totals: compare correct counts directly
            let better = match (significant, q.correct.cmp(&o.correct)) {
                (true, std::cmp::Ordering::Greater) => Some(Method::Pqk),
                (true, std::cmp::Ordering::Less) => Some(Method::Original),
                _ => None,
            };
            Ok(SignificanceRow {
                position: cell.position,
                axis: cell.axis,
                value: cell.value.clone(),
                original_correct: o.correct,
                original_incorrect: o.incorrect,
                pqk_correct: q.correct,
                pqk_incorrect: q.incorrect,
                p_value,
                significant,
                better,
            })
        })
        .collect()
}

/// One row per (position, axis, value, method) with correct/incorrect counts.
pub fn write_count_csv<W: Write>(w: W, report: &EvalReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["position", "axis", "value", "method", "correct", "incorrect"])?;
    for cell in &report.counts {
        for m in [Method::Original, Method::Pqk] {
            let t = cell.tally(m);
            out.write_record([
                cell.position.to_string(),
                cell.axis.name().to_string(),
                cell.value.clone(),
                m.name().to_string(),
                t.correct.to_string(),
                t.incorrect.to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_significance_csv<W: Write>(w: W, rows: &[SignificanceRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "position",
        "axis",
        "value",
        "original_correct",
        "original_incorrect",
        "pqk_correct",
        "pqk_incorrect",
        "p_value",
        "significant",
        "better",
    ])?;
    for r in rows {
        out.write_record([
            r.position.to_string(),
            r.axis.name().to_string(),
            r.value.clone(),
            r.original_correct.to_string(),
            r.original_incorrect.to_string(),
            r.pqk_correct.to_string(),
            r.pqk_incorrect.to_string(),
            format!("{:e}", r.p_value),
            r.significant.to_string(),
            r.better.map_or("", Method::name).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Per-split weighted F1 of both arms.
pub fn write_split_f1_csv<W: Write>(w: W, report: &EvalReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["split", "original_f1", "pqk_f1", "original_test_best_f1", "pqk_test_best_f1"])?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
    for s in &report.splits {
        out.write_record([
            s.index.to_string(),
            s.original.f1.to_string(),
            s.pqk.f1.to_string(),
            opt(s.original.test_best_f1),
            opt(s.pqk.test_best_f1),
        ])?;
    }
    out.flush()?;
    Ok(())
}
