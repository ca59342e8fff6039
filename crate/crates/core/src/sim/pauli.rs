use std::collections::HashMap;
use std::fmt;

use super::Basis;
use crate::circuit::{Circuit, Gate};
use crate::error::{PqkError, Result};

/// Widest register a packed Pauli string can address.
pub const MAX_PAULI_QUBITS: usize = 128;

/// Rotation sines/cosines below this are treated as exact zeros, so Clifford
/// angles (multiples of π/2) do not spawn numerically-zero branches.
const SNAP_EPS: f64 = 1e-14;

/// Pauli string packed as X and Z bitmasks; `Y` sets both bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PauliString {
    pub x: u128,
    pub z: u128,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn single(q: usize, basis: Basis) -> Self {
        assert!(q < MAX_PAULI_QUBITS, "qubit {q} exceeds packed width");
        let bit = 1u128 << q;
        match basis {
            Basis::X => PauliString { x: bit, z: 0 },
            Basis::Y => PauliString { x: bit, z: bit },
            Basis::Z => PauliString { x: 0, z: bit },
        }
    }

    pub fn support(&self) -> u128 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    /// Local Pauli on qubit `q`, `None` for identity.
    pub fn local(&self, q: usize) -> Option<Basis> {
        let (x, z) = ((self.x >> q) & 1, (self.z >> q) & 1);
        match (x, z) {
            (0, 0) => None,
            (1, 0) => Some(Basis::X),
            (1, 1) => Some(Basis::Y),
            _ => Some(Basis::Z),
        }
    }

    fn with_local(mut self, q: usize, p: Option<Basis>) -> Self {
        let bit = 1u128 << q;
        self.x &= !bit;
        self.z &= !bit;
        match p {
            None => {}
            Some(Basis::X) => self.x |= bit,
            Some(Basis::Y) => {
                self.x |= bit;
                self.z |= bit
            }
            Some(Basis::Z) => self.z |= bit,
        }
        self
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support() == 0 {
            return write!(f, "I");
        }
        let mut first = true;
        for q in 0..MAX_PAULI_QUBITS {
            if let Some(b) = self.local(q) {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}{q}", b.name())?;
                first = false;
            }
        }
        Ok(())
    }
}

/// `i·A·L = sign·M` for distinct single-qubit Paulis `A` (rotation axis) and `L`.
fn axis_product(axis: Basis, local: Basis) -> (f64, Basis) {
    use Basis::*;
    match (axis, local) {
        (Z, X) => (-1.0, Y),
        (Z, Y) => (1.0, X),
        (X, Y) => (-1.0, Z),
        (X, Z) => (1.0, Y),
        (Y, Z) => (-1.0, X),
        (Y, X) => (1.0, Z),
        _ => unreachable!("axis and local Pauli commute"),
    }
}

/// Sparse real-weighted sum of Pauli strings over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObservableSum {
    n_qubits: usize,
    terms: HashMap<PauliString, f64>,
}

impl ObservableSum {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_PAULI_QUBITS, "{n_qubits} qubits exceeds packed width");
        ObservableSum { n_qubits, terms: HashMap::new() }
    }

    pub fn identity(n_qubits: usize) -> Self {
        let mut o = Self::new(n_qubits);
        o.add(PauliString::IDENTITY, 1.0);
        o
    }

    pub fn single(n_qubits: usize, q: usize, basis: Basis) -> Self {
        let mut o = Self::new(n_qubits);
        o.add(PauliString::single(q, basis), 1.0);
        o
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Adds `coef·p`, merging with an existing term. Zero results are removed.
    pub fn add(&mut self, p: PauliString, coef: f64) {
        debug_assert!(coef.is_finite());
        let entry = self.terms.entry(p).or_insert(0.0);
        *entry += coef;
        if *entry == 0.0 {
            self.terms.remove(&p);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &PauliString) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &f64)> {
        self.terms.iter()
    }

    /// Sum of squared coefficients.
    pub fn norm_sqr(&self) -> f64 {
        let mut sq: Vec<f64> = self.terms.values().map(|c| c * c).collect();
        sq.sort_by(f64::total_cmp);
        sq.iter().sum()
    }

    /// Drops terms with `|c| < threshold`.
    pub fn truncate(&mut self, threshold: f64) {
        if threshold > 0.0 {
            self.terms.retain(|_, c| c.abs() >= threshold);
        }
    }

    fn support(&self) -> u128 {
        self.terms.keys().fold(0, |acc, p| acc | p.support())
    }

    /// Conjugates every term by a Clifford map given as a per-term closure.
    fn map_clifford(&mut self, f: impl Fn(PauliString) -> (PauliString, f64)) {
        let old = std::mem::take(&mut self.terms);
        self.terms.reserve(old.len());
        for (p, c) in old {
            let (p2, sign) = f(p);
            self.terms.insert(p2, sign * c);
        }
    }

    /// `R† O R` for `R = exp(-iθA/2)` on qubit `q`.
    fn conjugate_rotation(&mut self, q: usize, axis: Basis, theta: f64) {
        let (mut s, mut c) = theta.sin_cos();
        if s.abs() < SNAP_EPS {
            s = 0.0;
            c = c.signum();
        } else if c.abs() < SNAP_EPS {
            c = 0.0;
            s = s.signum();
        }
        if s == 0.0 && c == 1.0 {
            return;
        }
        let anticommuting: Vec<(PauliString, f64)> = self
            .terms
            .iter()
            .filter(|(p, _)| matches!(p.local(q), Some(l) if l != axis))
            .map(|(p, c)| (*p, *c))
            .collect();
        for (p, _) in &anticommuting {
            self.terms.remove(p);
        }
        for (p, coef) in anticommuting {
            let local = p.local(q).expect("anticommuting term has support on q");
            if c != 0.0 {
                self.add(p, c * coef);
            }
            if s != 0.0 {
                let (sign, m) = axis_product(axis, local);
                self.add(p.with_local(q, Some(m)), sign * s * coef);
            }
        }
    }

    /// Heisenberg-picture update `G† O G`.
    pub fn conjugate(&mut self, gate: &Gate) {
        match *gate {
            Gate::H(q) => {
                let bit = 1u128 << q;
                self.map_clifford(|p| {
                    let (x, z) = (p.x & bit, p.z & bit);
                    let sign = if x != 0 && z != 0 { -1.0 } else { 1.0 };
                    let swapped = PauliString {
                        x: (p.x & !bit) | if z != 0 { bit } else { 0 },
                        z: (p.z & !bit) | if x != 0 { bit } else { 0 },
                    };
                    (swapped, sign)
                });
            }
            Gate::Cx { control, target } => {
                self.map_clifford(|p| {
                    let xc = (p.x >> control) & 1;
                    let zc = (p.z >> control) & 1;
                    let xt = (p.x >> target) & 1;
                    let zt = (p.z >> target) & 1;
                    let flip = xc & zt & (xt ^ zc ^ 1);
                    let x = p.x ^ (xc << target);
                    let z = p.z ^ (zt << control);
                    (PauliString { x, z }, if flip == 1 { -1.0 } else { 1.0 })
                });
            }
            Gate::Rx(q, theta) => self.conjugate_rotation(q, Basis::X, theta),
            Gate::Ry(q, theta) => self.conjugate_rotation(q, Basis::Y, theta),
            Gate::Rz(q, theta) => self.conjugate_rotation(q, Basis::Z, theta),
        }
    }
}

fn gate_mask(gate: &Gate) -> u128 {
    let (qs, arity) = gate.qubits();
    qs[..arity].iter().fold(0, |m, &q| m | (1u128 << q))
}

/// Evolves `obs` backwards through `c` (last gate first), dropping terms with
/// `|c_i| < threshold` after every gate application.
pub fn backpropagate_observable(c: &Circuit, obs: &ObservableSum, threshold: f64) -> Result<ObservableSum> {
    if c.n_qubits() > MAX_PAULI_QUBITS {
        return Err(PqkError::BackendInfeasible(format!(
            "{} qubits exceeds the {MAX_PAULI_QUBITS}-qubit Pauli packing",
            c.n_qubits()
        )));
    }
    if obs.n_qubits() != c.n_qubits() {
        return Err(PqkError::Dimension(format!(
            "observable on {} qubits, circuit on {}",
            obs.n_qubits(),
            c.n_qubits()
        )));
    }
    if !(threshold >= 0.0) {
        return Err(PqkError::Config(format!("truncation threshold {threshold} must be >= 0")));
    }
    let mut o = obs.clone();
    o.truncate(threshold);
    let mut support = o.support();
    for gate in c.gates().iter().rev() {
        if gate_mask(gate) & support == 0 {
            continue;
        }
        o.conjugate(gate);
        o.truncate(threshold);
        support = o.support();
    }
    Ok(o)
}

/// `⟨0…0|O|0…0⟩`: the summed coefficients of terms built only from `I` and `Z`.
pub fn obp_expectation(obs: &ObservableSum) -> f64 {
    let mut vals: Vec<f64> = obs.terms().filter(|(p, _)| p.x == 0).map(|(_, c)| *c).collect();
    vals.sort_by(f64::total_cmp);
    vals.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(ops: &[(usize, Basis)]) -> PauliString {
        ops.iter().fold(PauliString::IDENTITY, |p, &(q, b)| p.with_local(q, Some(b)))
    }

    fn conj(gate: Gate, n: usize, p: PauliString) -> ObservableSum {
        let mut o = ObservableSum::new(n);
        o.add(p, 1.0);
        o.conjugate(&gate);
        o
    }

    #[test]
    fn hadamard_table() {
        use Basis::*;
        assert_eq!(conj(Gate::H(0), 1, ps(&[(0, Z)])).coefficient(&ps(&[(0, X)])), 1.0);
        assert_eq!(conj(Gate::H(0), 1, ps(&[(0, X)])).coefficient(&ps(&[(0, Z)])), 1.0);
        assert_eq!(conj(Gate::H(0), 1, ps(&[(0, Y)])).coefficient(&ps(&[(0, Y)])), -1.0);
    }

    #[test]
    fn cnot_table() {
        use Basis::*;
        let cx = Gate::Cx { control: 0, target: 1 };
        let cases = [
            (ps(&[(1, Z)]), ps(&[(0, Z), (1, Z)]), 1.0),
            (ps(&[(0, X)]), ps(&[(0, X), (1, X)]), 1.0),
            (ps(&[(1, X)]), ps(&[(1, X)]), 1.0),
            (ps(&[(0, Z)]), ps(&[(0, Z)]), 1.0),
            (ps(&[(0, Y)]), ps(&[(0, Y), (1, X)]), 1.0),
            (ps(&[(1, Y)]), ps(&[(0, Z), (1, Y)]), 1.0),
            (ps(&[(0, X), (1, Z)]), ps(&[(0, Y), (1, Y)]), -1.0),
        ];
        for (input, output, sign) in cases {
            let o = conj(cx, 2, input);
            assert_eq!(o.len(), 1, "{input}");
            assert_eq!(o.coefficient(&output), sign, "{input} -> {output}");
        }
    }

    #[test]
    fn rz_splits_x() {
        let theta = 0.3;
        let o = conj(Gate::Rz(0, theta), 1, PauliString::single(0, Basis::X));
        assert!((o.coefficient(&PauliString::single(0, Basis::X)) - theta.cos()).abs() < 1e-15);
        assert!((o.coefficient(&PauliString::single(0, Basis::Y)) + theta.sin()).abs() < 1e-15);
        let o = conj(Gate::Rz(0, theta), 1, PauliString::single(0, Basis::Z));
        assert_eq!(o.coefficient(&PauliString::single(0, Basis::Z)), 1.0);
    }

    #[test]
    fn clifford_angles_do_not_branch() {
        let o = conj(Gate::Rz(0, std::f64::consts::PI), 1, PauliString::single(0, Basis::X));
        assert_eq!(o.len(), 1);
        assert_eq!(o.coefficient(&PauliString::single(0, Basis::X)), -1.0);
    }

    #[test]
    fn truncation_threshold() {
        use Basis::*;
        let mut o = ObservableSum::new(2);
        o.add(ps(&[(0, X)]), 0.3);
        o.add(ps(&[(0, Z), (1, Z)]), 0.04);
        let out = backpropagate_observable(&Circuit::new(2), &o, 0.05).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out.coefficient(&ps(&[(0, X)])), 0.3);
    }

    #[test]
    fn simple_backprop() {
        let mut c = Circuit::new(2);
        c.h(0).unwrap();
        let o = backpropagate_observable(&c, &ObservableSum::single(2, 0, Basis::Z), 0.0).unwrap();
        assert_eq!(o.coefficient(&PauliString::single(0, Basis::X)), 1.0);

        let mut c = Circuit::new(2);
        c.cx(0, 1).unwrap();
        let o = backpropagate_observable(&c, &ObservableSum::single(2, 1, Basis::Z), 0.0).unwrap();
        assert_eq!(o.coefficient(&ps(&[(0, Basis::Z), (1, Basis::Z)])), 1.0);
    }

    #[test]
    fn expectation_of_zero_state() {
        let mut o = ObservableSum::new(1);
        o.add(PauliString::single(0, Basis::Z), 0.7);
        o.add(PauliString::single(0, Basis::X), 0.2);
        assert_eq!(obp_expectation(&o), 0.7);
        assert_eq!(obp_expectation(&ObservableSum::identity(3)), 1.0);
    }

    #[test]
    fn rejects_mismatch() {
        assert!(backpropagate_observable(&Circuit::new(3), &ObservableSum::identity(2), 0.0).is_err());
        assert!(backpropagate_observable(&Circuit::new(2), &ObservableSum::identity(2), -1.0).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(ps(&[(0, Basis::X), (3, Basis::Y)]).to_string(), "X0 Y3");
        assert_eq!(PauliString::IDENTITY.to_string(), "I");
    }
}
