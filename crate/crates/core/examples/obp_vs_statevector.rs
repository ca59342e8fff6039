//! Pauli backpropagation against dense simulation, with and without truncation.

use pqk::circuit::{build_zz_feature_map, Entanglement};
use pqk::sim::{backpropagate_observable, obp_expectation, pauli_expectation, statevector_simulate, Basis, ObservableSum};

fn main() -> pqk::Result<()> {
    let x: Vec<f64> = (0..12).map(|i| ((i * 5) % 7) as f64 / 7.0).collect();
    let circuit = build_zz_feature_map(&x, 2, 1.0, Entanglement::Linear)?;
    let state = statevector_simulate(&circuit)?;
    println!("{:>10} {:>14} {:>8}", "threshold", "max |error|", "terms");
    for threshold in [0.0, 0.01, 0.05, 0.1, 0.2] {
        let (mut worst, mut terms) = (0.0f64, 0);
        for q in 0..12 {
            for b in Basis::ALL {
                let back = backpropagate_observable(&circuit, &ObservableSum::single(12, q, b), threshold)?;
                terms = terms.max(back.len());
                worst = worst.max((obp_expectation(&back) - pauli_expectation(&state, q, b)).abs());
            }
        }
        println!("{threshold:>10} {worst:>14.3e} {terms:>8}");
    }
    Ok(())
}
