//! Fisher exact tests on method-by-outcome tables.

use pqk::harness::fisher_exact;

fn main() {
    for (name, t) in [
        ("no data", [[0, 0], [0, 0]]),
        ("perfect split", [[5, 0], [0, 5]]),
        ("textbook", [[1, 9], [11, 3]]),
        ("pqk 40/0 vs svm 20/20", [[40, 0], [20, 20]]),
        ("identical", [[12, 8], [12, 8]]),
    ] {
        let p = fisher_exact(t);
        println!("{name:<24} {t:?} p = {p:.6}{}", if p < 0.01 { " *" } else { "" });
    }
}
