//! Gate-level circuit representation over flattened qubit/clbit indices.

mod metrics;
mod parser;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::catalog::Gate;
use crate::error::{Error, Result};
use crate::program::ProgramMeta;

pub use metrics::{compute_metrics, CircuitMetrics, EntanglementMethod, METRIC_NAMES};
pub use parser::parse_qasm;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateApplication {
    pub gate: Gate,
    pub operands: Vec<usize>,
    pub params: Vec<f64>,
}

impl GateApplication {
    pub fn new(gate: Gate, operands: impl Into<Vec<usize>>, params: impl Into<Vec<f64>>) -> Self {
        GateApplication {
            gate,
            operands: operands.into(),
            params: params.into(),
        }
    }

    /// Checks arity, parameter count, operand range and operand distinctness.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let entry = self.gate.entry();
        if self.operands.len() != entry.arity {
            return Err(Error::Arity {
                gate: self.gate.name().into(),
                what: "operands",
                expected: entry.arity,
                got: self.operands.len(),
            });
        }
        if self.params.len() != entry.param_count {
            return Err(Error::Arity {
                gate: self.gate.name().into(),
                what: "parameters",
                expected: entry.param_count,
                got: self.params.len(),
            });
        }
        for (i, &q) in self.operands.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::OperandOutOfRange {
                    index: q,
                    width: num_qubits,
                });
            }
            if self.operands[..i].contains(&q) {
                return Err(Error::DuplicateOperand {
                    gate: self.gate.name().into(),
                    qubit: q,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub qubit: usize,
    pub clbit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    pub num_qubits: usize,
    pub num_clbits: usize,
    pub gates: Vec<GateApplication>,
    pub measurements: Vec<Measurement>,
    pub meta: ProgramMeta,
}

impl Circuit {
    pub fn new(name: impl Into<String>, num_qubits: usize, num_clbits: usize) -> Self {
        Circuit {
            name: name.into(),
            num_qubits,
            num_clbits,
            gates: Vec::new(),
            measurements: Vec::new(),
            meta: ProgramMeta::default(),
        }
    }

    pub fn with_meta(mut self, meta: ProgramMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Appends a gate. Panics on an invalid application; builder use only.
    pub fn push(&mut self, gate: Gate, operands: &[usize], params: &[f64]) -> &mut Self {
        let g = GateApplication::new(gate, operands, params);
        g.validate(self.num_qubits)
            .unwrap_or_else(|e| panic!("invalid gate application: {e}"));
        self.gates.push(g);
        self
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> &mut Self {
        assert!(qubit < self.num_qubits && clbit < self.num_clbits);
        self.measurements.push(Measurement { qubit, clbit });
        self
    }

    pub fn measure_all(&mut self) -> &mut Self {
        for q in 0..self.num_qubits.min(self.num_clbits) {
            self.measure(q, q);
        }
        self
    }

    pub fn num_positions(&self) -> usize {
        self.gates.len()
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            g.validate(self.num_qubits)?;
        }
        for m in &self.measurements {
            if m.qubit >= self.num_qubits {
                return Err(Error::OperandOutOfRange {
                    index: m.qubit,
                    width: self.num_qubits,
                });
            }
            if m.clbit >= self.num_clbits {
                return Err(Error::OperandOutOfRange {
                    index: m.clbit,
                    width: self.num_clbits,
                });
            }
        }
        Ok(())
    }

    /// Equality of everything that round-trips through QASM: widths, gates
    /// and measurements. Name and program labels are carried out of band.
    pub fn structurally_eq(&self, other: &Circuit) -> bool {
        self.num_qubits == other.num_qubits
            && self.num_clbits == other.num_clbits
            && self.gates == other.gates
            && self.measurements == other.measurements
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_angle(value: f64) -> String {
    format!("{value:?}")
}

/// Emits OPENQASM 2.0 with one `q` and one `c` register, one statement per
/// line, LF endings.
pub fn serialize_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if c.num_qubits > 0 {
        let _ = writeln!(out, "qreg q[{}];", c.num_qubits);
    }
    if c.num_clbits > 0 {
        let _ = writeln!(out, "creg c[{}];", c.num_clbits);
    }
    for g in &c.gates {
        out.push_str(g.gate.name());
        if !g.params.is_empty() {
            let params: Vec<String> = g.params.iter().map(|p| format_angle(*p)).collect();
            let _ = write!(out, "({})", params.join(","));
        }
        let operands: Vec<String> = g.operands.iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", operands.join(","));
    }
    for m in &c.measurements {
        let _ = writeln!(out, "measure q[{}] -> c[{}];", m.qubit, m.clbit);
    }
    out
}

/// Decile bucket (10..=100) of a position: `ceil(10 * (position + 1) / total) * 10`.
pub fn relative_position_bucket(position: usize, total_positions: usize) -> Result<u32> {
    if position >= total_positions {
        return Err(Error::PositionOutOfRange {
            position,
            total: total_positions,
        });
    }
    let numerator = 10 * (position as u64 + 1);
    let total = total_positions as u64;
    Ok((numerator.div_ceil(total) * 10) as u32)
}
