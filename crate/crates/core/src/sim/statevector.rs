use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use super::Basis;
use crate::circuit::{Circuit, Gate};
use crate::error::{PqkError, Result};

/// Default qubit cap for dense simulation (2^26 amplitudes, 1 GiB).
pub const DEFAULT_MAX_QUBITS: usize = 26;

const PAR_MIN_DIM: usize = 1 << 14;

/// Dense state over `n` qubits; qubit `q` is bit `q` of the amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() {
            return Err(PqkError::Dimension(format!("{dim} amplitudes is not a power of two")));
        }
        let sv = StateVector { n_qubits: dim.trailing_zeros() as usize, amplitudes };
        if (sv.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(PqkError::Numerical(format!("state norm² {} is not 1", sv.norm_sqr())));
        }
        Ok(sv)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let half = 1usize << q;
        let kernel = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = m[0][0] * x + m[0][1] * y;
                *b = m[1][0] * x + m[1][1] * y;
            }
        };
        if self.amplitudes.len() >= PAR_MIN_DIM {
            self.amplitudes.par_chunks_mut(2 * half).for_each(kernel);
        } else {
            self.amplitudes.chunks_mut(2 * half).for_each(kernel);
        }
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let (cb, tb) = (1usize << control, 1usize << target);
        let (lo_bit, hi_bit) = (control.min(target), control.max(target));
        let quarter = self.amplitudes.len() >> 2;
        for k in 0..quarter {
            let base = insert_zero_bit(insert_zero_bit(k, lo_bit), hi_bit);
            let i = base | cb;
            self.amplitudes.swap(i, i | tb);
        }
    }

    pub fn apply(&mut self, gate: &Gate) {
        let zero = Complex64::new(0.0, 0.0);
        match *gate {
            Gate::H(q) => {
                let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_1q(q, [[s, s], [s, -s]]);
            }
            Gate::Rx(q, theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                let c = Complex64::new(c, 0.0);
                let mis = Complex64::new(0.0, -s);
                self.apply_1q(q, [[c, mis], [mis, c]]);
            }
            Gate::Ry(q, theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
                self.apply_1q(q, [[c, -s], [s, c]]);
            }
            Gate::Rz(q, theta) => {
                let phase = Complex64::from_polar(1.0, theta / 2.0);
                self.apply_1q(q, [[phase.conj(), zero], [zero, phase]]);
            }
            Gate::Cx { control, target } => self.apply_cx(control, target),
        }
    }
}

/// Inserts a zero at bit position `bit`, shifting higher bits up.
#[inline]
fn insert_zero_bit(k: usize, bit: usize) -> usize {
    let low = k & ((1 << bit) - 1);
    ((k >> bit) << (bit + 1)) | low
}

/// Dense simulator with a qubit cap.
#[derive(Debug, Clone, Copy)]
pub struct StatevectorSimulator {
    pub max_qubits: usize,
}

impl Default for StatevectorSimulator {
    fn default() -> Self {
        StatevectorSimulator { max_qubits: DEFAULT_MAX_QUBITS }
    }
}

impl StatevectorSimulator {
    pub fn check(&self, n_qubits: usize) -> Result<()> {
        if n_qubits > self.max_qubits {
            return Err(PqkError::BackendInfeasible(format!(
                "{n_qubits} qubits exceeds the statevector cap of {}; use the obp backend",
                self.max_qubits
            )));
        }
        Ok(())
    }

    pub fn run(&self, c: &Circuit) -> Result<StateVector> {
        self.check(c.n_qubits())?;
        let mut sv = StateVector::zero_state(c.n_qubits());
        for g in c.gates() {
            sv.apply(g);
        }
        Ok(sv)
    }
}

/// Applies `c` to `|0…0⟩` with the default qubit cap.
pub fn statevector_simulate(c: &Circuit) -> Result<StateVector> {
    StatevectorSimulator::default().run(c)
}

/// Exact `⟨ψ|P_q|ψ⟩`.
pub fn pauli_expectation(s: &StateVector, q: usize, basis: Basis) -> f64 {
    assert!(q < s.n_qubits, "qubit {q} out of range for {} qubits", s.n_qubits);
    let half = 1usize << q;
    let pair_sum = |chunk: &[Complex64]| -> f64 {
        let (lo, hi) = chunk.split_at(half);
        lo.iter()
            .zip(hi)
            .map(|(a, b)| match basis {
                Basis::X => 2.0 * (a.conj() * b).re,
                Basis::Y => 2.0 * (a.conj() * b).im,
                Basis::Z => a.norm_sqr() - b.norm_sqr(),
            })
            .sum()
    };
    if s.amplitudes.len() >= PAR_MIN_DIM {
        s.amplitudes.par_chunks(2 * half).map(pair_sum).sum()
    } else {
        s.amplitudes.chunks(2 * half).map(pair_sum).sum()
    }
}

/// Empirical mean of `shots` ±1 outcomes with `P(+1) = (1 + ⟨P⟩)/2`.
pub fn sample_expectation(s: &StateVector, q: usize, basis: Basis, shots: u64, seed: u64) -> f64 {
    sample_from_exact(pauli_expectation(s, q, basis), shots, seed)
}

pub(crate) fn sample_from_exact(exact: f64, shots: u64, seed: u64) -> f64 {
    assert!(shots >= 1, "at least one shot is required");
    let p = ((1.0 + exact) / 2.0).clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plus = Binomial::new(shots, p).expect("p in [0, 1]").sample(&mut rng);
    (2.0 * plus as f64 - shots as f64) / shots as f64
}
