//! Line-oriented circuit text format.
//!
//! ```text
//! qubits=3 meta=e1,reps=1,scale=1.5707963267948966,ent=linear
//! H 0
//! RZ 1 3.141592653589793
//! CX 0 1
//! ```

use std::fmt;
use std::str::FromStr;

use super::ir::{Circuit, CircuitMeta, Gate};
use crate::error::PqkError;

impl fmt::Display for CircuitMeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitMeta::Custom => write!(f, "custom"),
            CircuitMeta::ZzFeatureMap { reps, scale, full, shifted } => {
                let ent = if *full { "full" } else { "linear" };
                write!(f, "e1,reps={reps},scale={scale:?},ent={ent}")?;
                if *shifted {
                    write!(f, ",map=shifted")?;
                }
                Ok(())
            }
            CircuitMeta::Heisenberg { steps, scale, seed } => {
                write!(f, "e2,steps={steps},scale={scale:?},seed={seed}")
            }
        }
    }
}

impl FromStr for CircuitMeta {
    type Err = PqkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PqkError::Circuit(format!("cannot parse circuit meta `{s}`"));
        let mut parts = s.split(',');
        let tag = parts.next().ok_or_else(bad)?;
        let mut fields = std::collections::HashMap::new();
        for p in parts {
            let (k, v) = p.split_once('=').ok_or_else(bad)?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(bad);
        match tag {
            "custom" => Ok(CircuitMeta::Custom),
            "e1" => Ok(CircuitMeta::ZzFeatureMap {
                reps: get("reps")?.parse().map_err(|_| bad())?,
                scale: get("scale")?.parse().map_err(|_| bad())?,
                full: match get("ent")? {
                    "full" => true,
                    "linear" => false,
                    _ => return Err(bad()),
                },
                shifted: match fields.get("map").copied() {
                    None | Some("product") => false,
                    Some("shifted") => true,
                    Some(_) => return Err(bad()),
                },
            }),
            "e2" => Ok(CircuitMeta::Heisenberg {
                steps: get("steps")?.parse().map_err(|_| bad())?,
                scale: get("scale")?.parse().map_err(|_| bad())?,
                seed: get("seed")?.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits={} meta={}", self.n_qubits(), self.meta)?;
        for g in self.gates() {
            match *g {
                Gate::H(q) => writeln!(f, "H {q}")?,
                Gate::Rx(q, a) | Gate::Ry(q, a) | Gate::Rz(q, a) => {
                    writeln!(f, "{} {q} {a:?}", g.name())?
                }
                Gate::Cx { control, target } => writeln!(f, "CX {control} {target}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = PqkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| PqkError::Circuit("empty circuit text".into()))?;
        let bad_header = || PqkError::Circuit(format!("bad circuit header `{header}`"));
        let mut n_qubits = None;
        let mut meta = CircuitMeta::Custom;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("qubits", v)) => n_qubits = Some(v.parse::<usize>().map_err(|_| bad_header())?),
                Some(("meta", v)) => meta = v.parse()?,
                _ => return Err(bad_header()),
            }
        }
        let mut c = Circuit::with_meta(n_qubits.ok_or_else(bad_header)?, meta);

        for (lineno, line) in lines {
            let bad = |why: &str| PqkError::Circuit(format!("line {}: {why}: `{line}`", lineno + 1));
            let tok: Vec<&str> = line.split_whitespace().collect();
            let q = |i: usize| -> Result<usize, PqkError> {
                tok.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad qubit"))
            };
            let angle = |i: usize| -> Result<f64, PqkError> {
                tok.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad angle"))
            };
            let (gate, arity) = match tok[0] {
                "H" => (Gate::H(q(1)?), 2),
                "RX" => (Gate::Rx(q(1)?, angle(2)?), 3),
                "RY" => (Gate::Ry(q(1)?, angle(2)?), 3),
                "RZ" => (Gate::Rz(q(1)?, angle(2)?), 3),
                "CX" => (Gate::Cx { control: q(1)?, target: q(2)? }, 3),
                _ => return Err(bad("unknown gate")),
            };
            if tok.len() != arity {
                return Err(bad("wrong number of fields"));
            }
            c.push(gate)?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_heisenberg_embedding, build_zz_feature_map, Entanglement};

    #[test]
    fn text_roundtrip() {
        let c = build_zz_feature_map(&[1.0, 0.0, 1.0], 2, 1.234, Entanglement::Full).unwrap();
        assert_eq!(c.to_string().parse::<Circuit>().unwrap(), c);
        let c = build_heisenberg_embedding(&[1.0, 0.0, 1.0], 2, 0.3, 99).unwrap();
        assert_eq!(c.to_string().parse::<Circuit>().unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<Circuit>().is_err());
        assert!("qubits=2\nH 2\n".parse::<Circuit>().is_err());
        assert!("qubits=2\nRZ 0\n".parse::<Circuit>().is_err());
        assert!("qubits=2\nCZ 0 1\n".parse::<Circuit>().is_err());
        assert!("qubits=2\nH 0 1\n".parse::<Circuit>().is_err());
        assert!("qubits=2 meta=e9\n".parse::<Circuit>().is_err());
    }
}
