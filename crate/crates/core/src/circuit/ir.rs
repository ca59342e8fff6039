use serde::{Deserialize, Serialize};

use crate::error::{PqkError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Cx { control: usize, target: usize },
}

impl Gate {
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. })
    }

    pub fn qubits(&self) -> ([usize; 2], usize) {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => ([q, q], 1),
            Gate::Cx { control, target } => ([control, target], 2),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, a) | Gate::Ry(_, a) | Gate::Rz(_, a) => Some(a),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::Rx(..) => "RX",
            Gate::Ry(..) => "RY",
            Gate::Rz(..) => "RZ",
            Gate::Cx { .. } => "CX",
        }
    }
}

/// Which embedding produced a circuit, with its construction parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CircuitMeta {
    Custom,
    ZzFeatureMap {
        reps: usize,
        scale: f64,
        full: bool,
        #[serde(default)]
        shifted: bool,
    },
    Heisenberg {
        steps: usize,
        scale: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    pub meta: CircuitMeta,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            meta: CircuitMeta::Custom,
        }
    }

    pub fn with_meta(n_qubits: usize, meta: CircuitMeta) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            meta,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        let (qs, arity) = gate.qubits();
        if let Some(&q) = qs[..arity].iter().find(|&&q| q >= self.n_qubits) {
            return Err(PqkError::Circuit(format!(
                "{} acts on qubit {q} of a {}-qubit circuit",
                gate.name(),
                self.n_qubits
            )));
        }
        if arity == 2 && qs[0] == qs[1] {
            return Err(PqkError::Circuit(format!("CX control and target are both {}", qs[0])));
        }
        if let Some(a) = gate.angle() {
            if !a.is_finite() {
                return Err(PqkError::Circuit(format!("{} angle {a} is not finite", gate.name())));
            }
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.push(Gate::H(q))
    }

    pub fn rx(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.push(Gate::Rx(q, theta))
    }

    pub fn ry(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.push(Gate::Ry(q, theta))
    }

    pub fn rz(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.push(Gate::Rz(q, theta))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(Gate::Cx { control, target })
    }

    /// Appends `other`'s gates after this circuit's gates.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        for g in other.gates() {
            self.push(*g)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub total_gates: usize,
    pub two_qubit_gates: usize,
    /// Layers of two-qubit gates under as-soon-as-possible scheduling.
    pub two_qubit_depth: usize,
}

pub fn circuit_stats(c: &Circuit) -> CircuitStats {
    let mut frontier = vec![0usize; c.n_qubits()];
    let mut two_qubit_gates = 0;
    let mut depth = 0;
    for g in c.gates() {
        if let Gate::Cx { control, target } = *g {
            two_qubit_gates += 1;
            let layer = frontier[control].max(frontier[target]) + 1;
            frontier[control] = layer;
            frontier[target] = layer;
            depth = depth.max(layer);
        }
    }
    CircuitStats {
        total_gates: c.len(),
        two_qubit_gates,
        two_qubit_depth: depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2);
        assert!(c.h(2).is_err());
        assert!(c.cx(1, 1).is_err());
        assert!(c.rz(0, f64::NAN).is_err());
        assert!(c.cx(0, 1).is_ok());
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn stats_basic() {
        assert_eq!(
            circuit_stats(&Circuit::new(3)),
            CircuitStats { total_gates: 0, two_qubit_gates: 0, two_qubit_depth: 0 }
        );
        let mut c = Circuit::new(4);
        c.cx(0, 1).unwrap().cx(2, 3).unwrap().h(1).unwrap();
        assert_eq!(circuit_stats(&c), CircuitStats { total_gates: 3, two_qubit_gates: 2, two_qubit_depth: 1 });
        c.cx(1, 2).unwrap();
        assert_eq!(circuit_stats(&c).two_qubit_depth, 2);
    }
}
