use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ir::{Circuit, CircuitMeta};
use crate::error::{PqkError, Result};

pub const PI_SCALE: f64 = PI;
pub const HALF_PI_SCALE: f64 = FRAC_PI_2;

/// Two-qubit interaction pattern of the ZZ feature map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entanglement {
    /// Nearest-neighbour chain, even edges emitted before odd edges.
    #[default]
    Linear,
    /// Every pair `(j, k)`, `j < k`.
    Full,
}

/// Angle rule for the two-qubit ZZ cores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairMap {
    /// `2·scale²·x_j·x_k`; vanishes unless both features are set.
    #[default]
    Product,
    /// `2·(π − scale·x_j)(π − scale·x_k)`.
    Shifted,
}

impl PairMap {
    pub fn angle(self, scale: f64, xj: f64, xk: f64) -> f64 {
        match self {
            PairMap::Product => 2.0 * scale * scale * xj * xk,
            PairMap::Shifted => 2.0 * (PI - scale * xj) * (PI - scale * xk),
        }
    }
}

/// Chain edges `(e, e + 1)` ordered even edges first, then odd edges, so that
/// each parity class forms one parallel layer.
fn brickwork_edges(n: usize) -> impl Iterator<Item = usize> {
    let edges = n.saturating_sub(1);
    (0..edges).step_by(2).chain((1..edges).step_by(2))
}

/// ZZ feature map. Per repetition: `H` on every qubit, `RZ(2·scale·x_j)` on
/// every qubit, then for each entangled pair `CX · RZ(2·scale²·x_j·x_k) · CX`.
pub fn build_zz_feature_map(
    x: &[f64],
    reps: usize,
    scale: f64,
    entanglement: Entanglement,
) -> Result<Circuit> {
    build_zz_feature_map_with(x, reps, scale, entanglement, PairMap::Product)
}

/// ZZ feature map with a chosen pair-angle rule.
pub fn build_zz_feature_map_with(
    x: &[f64],
    reps: usize,
    scale: f64,
    entanglement: Entanglement,
    pair_map: PairMap,
) -> Result<Circuit> {
    let n = x.len();
    if n < 2 {
        return Err(PqkError::Circuit(format!("ZZ feature map needs at least 2 qubits, got {n}")));
    }
    if reps == 0 {
        return Err(PqkError::Circuit("ZZ feature map needs at least one repetition".into()));
    }
    let pairs: Vec<(usize, usize)> = match entanglement {
        Entanglement::Linear => brickwork_edges(n).map(|e| (e, e + 1)).collect(),
        Entanglement::Full => (0..n).flat_map(|j| ((j + 1)..n).map(move |k| (j, k))).collect(),
    };

    let meta = CircuitMeta::ZzFeatureMap {
        reps,
        scale,
        full: entanglement == Entanglement::Full,
        shifted: pair_map == PairMap::Shifted,
    };
    let mut c = Circuit::with_meta(n, meta);
    for _ in 0..reps {
        for q in 0..n {
            c.h(q)?;
        }
        for (q, &xq) in x.iter().enumerate() {
            c.rz(q, 2.0 * scale * xq)?;
        }
        for &(j, k) in &pairs {
            c.cx(j, k)?
                .rz(k, pair_map.angle(scale, x[j], x[k]))?
                .cx(j, k)?;
        }
    }
    Ok(c)
}

/// Trotterized 1D Heisenberg evolution on `x.len() + 1` qubits. Feature `e`
/// sets the coupling of chain edge `(e, e + 1)`; each step applies
/// `RXX · RYY · RZZ` with angle `scale·x_e/steps` on every edge. The initial
/// layer is one seeded `RY(θ)`, `θ ~ U[0, 2π)`, per qubit.
pub fn build_heisenberg_embedding(x: &[f64], steps: usize, scale: f64, seed: u64) -> Result<Circuit> {
    let n = x.len() + 1;
    if n < 2 {
        return Err(PqkError::Circuit("Heisenberg embedding needs at least one feature".into()));
    }
    if steps == 0 {
        return Err(PqkError::Circuit("Heisenberg embedding needs at least one Trotter step".into()));
    }
    let mut c = Circuit::with_meta(n, CircuitMeta::Heisenberg { steps, scale, seed });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for q in 0..n {
        c.ry(q, rng.random_range(0.0..2.0 * PI))?;
    }

    let edges: Vec<usize> = brickwork_edges(n).collect();
    for _ in 0..steps {
        for &e in &edges {
            let (a, b) = (e, e + 1);
            let theta = scale * x[e] / steps as f64;
            // RXX
            c.h(a)?.h(b)?.cx(a, b)?.rz(b, theta)?.cx(a, b)?.h(a)?.h(b)?;
            // RYY
            c.rx(a, FRAC_PI_2)?
                .rx(b, FRAC_PI_2)?
                .cx(a, b)?
                .rz(b, theta)?
                .cx(a, b)?
                .rx(a, -FRAC_PI_2)?
                .rx(b, -FRAC_PI_2)?;
            // RZZ
            c.cx(a, b)?.rz(b, theta)?.cx(a, b)?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_stats, CircuitStats, Gate};

    #[test]
    fn shifted_pair_map_keeps_gate_layout() {
        let x = [1.0, 0.0, 1.0, 1.0];
        let a = build_zz_feature_map(&x, 2, HALF_PI_SCALE, Entanglement::Linear).unwrap();
        let b = build_zz_feature_map_with(&x, 2, HALF_PI_SCALE, Entanglement::Linear, PairMap::Shifted).unwrap();
        assert_eq!(circuit_stats(&a), circuit_stats(&b));
        // first pair core of the first rep is edge (0, 1): (π − π/2)(π − 0)
        let pair_rz = |c: &Circuit| match c.gates()[2 * 4 + 1] {
            Gate::Rz(1, t) => t,
            ref g => panic!("unexpected {g:?}"),
        };
        assert_eq!(pair_rz(&a), 0.0);
        assert!((pair_rz(&b) - 2.0 * FRAC_PI_2 * PI).abs() < 1e-12);
        assert!(b.meta.to_string().ends_with(",map=shifted"));
    }

    fn stats(total: usize, two: usize, depth: usize) -> CircuitStats {
        CircuitStats { total_gates: total, two_qubit_gates: two, two_qubit_depth: depth }
    }

    #[test]
    fn zz_two_qubit_gate_list() {
        let c = build_zz_feature_map(&[1.0, 1.0], 1, HALF_PI_SCALE, Entanglement::Linear).unwrap();
        let names: Vec<_> = c.gates().iter().map(Gate::name).collect();
        assert_eq!(names, ["H", "H", "RZ", "RZ", "CX", "RZ", "CX"]);
        assert_eq!(circuit_stats(&c), stats(7, 2, 2));
        assert_eq!(c.gates()[5], Gate::Rz(1, 2.0 * HALF_PI_SCALE * HALF_PI_SCALE));
    }

    #[test]
    fn zz_table_sizes() {
        let x = vec![0.0; 60];
        for (reps, expected) in [(4, stats(1188, 472, 16)), (8, stats(2376, 944, 32))] {
            let c = build_zz_feature_map(&x, reps, PI_SCALE, Entanglement::Linear).unwrap();
            assert_eq!(circuit_stats(&c), expected);
        }
    }

    #[test]
    fn zz_zero_input_has_zero_angles() {
        let c = build_zz_feature_map(&[0.0; 7], 3, PI_SCALE, Entanglement::Linear).unwrap();
        assert!(c.gates().iter().filter_map(Gate::angle).all(|a| a == 0.0));
    }

    #[test]
    fn zz_rejects_bad_input() {
        assert!(build_zz_feature_map(&[1.0], 1, PI_SCALE, Entanglement::Linear).is_err());
        assert!(build_zz_feature_map(&[1.0, 0.0], 0, PI_SCALE, Entanglement::Linear).is_err());
    }

    #[test]
    fn zz_full_pairs() {
        let c = build_zz_feature_map(&[1.0; 4], 1, PI_SCALE, Entanglement::Full).unwrap();
        assert_eq!(circuit_stats(&c).two_qubit_gates, 2 * 6);
    }

    #[test]
    fn heisenberg_small() {
        let c = build_heisenberg_embedding(&[1.0, 0.0], 1, HALF_PI_SCALE, 3).unwrap();
        assert_eq!(c.n_qubits(), 3);
        assert_eq!(circuit_stats(&c), stats(37, 12, 12));
    }

    #[test]
    fn heisenberg_table_sizes() {
        let x = vec![1.0; 60];
        let c = build_heisenberg_embedding(&x, 4, HALF_PI_SCALE, 11).unwrap();
        assert_eq!(c.n_qubits(), 61);
        assert_eq!(circuit_stats(&c), stats(4141, 1440, 48));
    }

    #[test]
    fn builders_are_deterministic() {
        let x = [1.0, 0.0, 1.0, 1.0];
        assert_eq!(
            build_heisenberg_embedding(&x, 2, 0.7, 5).unwrap(),
            build_heisenberg_embedding(&x, 2, 0.7, 5).unwrap()
        );
        assert_ne!(
            build_heisenberg_embedding(&x, 2, 0.7, 5).unwrap(),
            build_heisenberg_embedding(&x, 2, 0.7, 6).unwrap()
        );
        assert_eq!(
            build_zz_feature_map(&x, 2, 0.7, Entanglement::Linear).unwrap(),
            build_zz_feature_map(&x, 2, 0.7, Entanglement::Linear).unwrap()
        );
    }

    #[test]
    fn heisenberg_initial_layer_in_range() {
        let c = build_heisenberg_embedding(&[1.0; 5], 1, 1.0, 42).unwrap();
        for g in &c.gates()[..6] {
            match *g {
                Gate::Ry(_, a) => assert!((0.0..2.0 * PI).contains(&a)),
                other => panic!("unexpected initial gate {other:?}"),
            }
        }
    }
}
