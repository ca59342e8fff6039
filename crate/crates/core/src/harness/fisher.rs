/// Two-sided Fisher exact test on `[[a, b], [c, d]]`: the total probability of
/// all tables with the observed margins that are no more likely than the
/// observed one.
pub fn fisher_exact(table: [[u64; 2]; 2]) -> f64 {
    let [[a, b], [c, d]] = table;
    let r1 = a + b;
    let r2 = c + d;
    let c1 = a + c;
    let n = r1 + r2;
    if r1 == 0 || r2 == 0 || c1 == 0 || c1 == n {
        return 1.0;
    }
    let lnfact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    let lf = |k: u64| lnfact[k as usize];
    // the four cell terms are summed in sorted order so that mirror-image tables
    // get bit-identical probabilities
    let log_weight = |x: u64| {
        let mut cells = [x, r1 - x, c1 - x, r2 + x - c1];
        cells.sort_unstable();
        -cells.iter().map(|&k| lf(k)).sum::<f64>()
    };
    let lo = c1.saturating_sub(r2);
    let hi = c1.min(r1);
    let observed = log_weight(a);
    let top = (lo..=hi).map(log_weight).fold(f64::NEG_INFINITY, f64::max);
    let (mut total, mut tail) = (0.0, 0.0);
    for x in lo..=hi {
        let lw = log_weight(x);
        let w = (lw - top).exp();
        total += w;
        if lw <= observed + 1e-12 * observed.abs().max(1.0) {
            tail += w;
        }
    }
    (tail / total).min(1.0)
}
