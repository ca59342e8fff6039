use crate::error::{PqkError, Result};

/// Matthews correlation coefficient of two binary columns. Columns with a
/// degenerate marginal yield `0`.
pub fn matthews_corr(a: &[u8], b: &[u8]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(PqkError::Dimension(format!(
            "MCC columns differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let (mut tp, mut tn, mut fp, mut fn_) = (0f64, 0f64, 0f64, 0f64);
    for (&x, &y) in a.iter().zip(b) {
        match (x != 0, y != 0) {
            (true, true) => tp += 1.0,
            (false, false) => tn += 1.0,
            (false, true) => fp += 1.0,
            (true, false) => fn_ += 1.0,
        }
    }
    let denom = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((tp * tn - fp * fn_) / denom.sqrt())
}

/// Feature order from complete-linkage agglomerative clustering on `1 - MCC`
/// distances. `rows` holds training samples; the result is the dendrogram leaf
/// order (left child = smaller cluster id).
pub fn correlation_order(rows: &[Vec<u8>]) -> Vec<usize> {
    let d = rows.first().map_or(0, Vec::len);
    if d < 2 {
        return (0..d).collect();
    }
    let columns: Vec<Vec<u8>> = (0..d).map(|j| rows.iter().map(|r| r[j]).collect()).collect();

    let mut dist = vec![vec![0.0f64; d]; d];
    for i in 0..d {
        for j in (i + 1)..d {
            let mcc = matthews_corr(&columns[i], &columns[j]).expect("equal column lengths");
            dist[i][j] = 1.0 - mcc;
            dist[j][i] = dist[i][j];
        }
    }

    // cluster ids: leaves 0..d, merge k creates id d + k
    let mut children: Vec<(usize, usize)> = Vec::with_capacity(d - 1);
    let mut active: Vec<usize> = (0..d).collect();
    // distances between active clusters, indexed by position in `active`
    let mut between = dist;

    while active.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..active.len() {
            for b in (a + 1)..active.len() {
                if between[a][b] < best.0 {
                    best = (between[a][b], a, b);
                }
            }
        }
        let (_, a, b) = best;
        let new_id = d + children.len();
        children.push((active[a], active[b]));

        let merged: Vec<f64> = (0..active.len())
            .map(|k| between[a][k].max(between[b][k]))
            .collect();
        // b > a, remove b first
        for row in between.iter_mut() {
            row.remove(b);
        }
        between.remove(b);
        active.remove(b);
        let mut merged = merged;
        merged.remove(b);

        // the merged cluster moves to the end (largest id)
        for row in between.iter_mut() {
            row.remove(a);
        }
        between.remove(a);
        active.remove(a);
        merged.remove(a);

        for (row, &m) in between.iter_mut().zip(&merged) {
            row.push(m);
        }
        merged.push(0.0);
        between.push(merged);
        active.push(new_id);
    }

    let mut order = Vec::with_capacity(d);
    let mut stack = vec![active[0]];
    while let Some(id) = stack.pop() {
        if id < d {
            order.push(id);
        } else {
            let (l, r) = children[id - d];
            stack.push(r);
            stack.push(l);
        }
    }
    order
}

/// Reorders the columns of every row by `perm` (new column `k` = old column `perm[k]`).
pub fn apply_permutation<T: Copy>(rows: &[Vec<T>], perm: &[usize]) -> Vec<Vec<T>> {
    rows.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect()
}
