use crate::error::{PqkError, Result};

/// Support-weighted mean of per-label F1 scores. A label whose precision and
/// recall are both zero (or undefined) scores 0.
pub fn weighted_f1<T: PartialOrd + Copy>(y_true: &[T], y_pred: &[T]) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(PqkError::Dimension(format!(
            "{} true labels vs {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(PqkError::Data("weighted F1 of an empty label set".into()));
    }
    let mut labels: Vec<T> = y_true.iter().chain(y_pred).copied().collect();
    labels.sort_by(|a, b| a.partial_cmp(b).expect("labels are comparable"));
    labels.dedup_by(|a, b| a == b);

    let total = y_true.len() as f64;
    let mut score = 0.0;
    for label in labels {
        let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
        for (t, p) in y_true.iter().zip(y_pred) {
            match (*t == label, *p == label) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fn_ += 1,
                _ => {}
            }
        }
        let support = tp + fn_;
        if support == 0 {
            continue;
        }
        let precision = if tp + fp > 0 { tp as f64 / (tp + fp) as f64 } else { 0.0 };
        let recall = tp as f64 / support as f64;
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        score += f1 * support as f64 / total;
    }
    Ok(score)
}
