//! Gate counts and two-qubit depth of both embedding families at full width.

use pqk::circuit::{
    build_heisenberg_embedding, build_zz_feature_map, circuit_stats, Entanglement, HALF_PI_SCALE,
};

fn main() -> pqk::Result<()> {
    let x = vec![0.0; 60];
    println!("{:<22} {:>8} {:>8} {:>8}", "circuit", "gates", "2q", "2q depth");
    for reps in [4, 6, 8, 12] {
        let s = circuit_stats(&build_zz_feature_map(&x, reps, HALF_PI_SCALE, Entanglement::Linear)?);
        println!("{:<22} {:>8} {:>8} {:>8}", format!("E1 n=60 reps={reps}"), s.total_gates, s.two_qubit_gates, s.two_qubit_depth);
    }
    for steps in [4, 6] {
        let s = circuit_stats(&build_heisenberg_embedding(&x, steps, HALF_PI_SCALE, 0)?);
        println!("{:<22} {:>8} {:>8} {:>8}", format!("E2 n=61 steps={steps}"), s.total_gates, s.two_qubit_gates, s.two_qubit_depth);
    }

    let small = build_zz_feature_map(&[1.0, 0.0, 1.0], 1, HALF_PI_SCALE, Entanglement::Linear)?;
    println!("\n{small}");
    Ok(())
}
