use serde::{Deserialize, Serialize};

use crate::catalog::SizeClass;
use crate::circuit::Circuit;
use crate::sim;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntanglementMethod {
    /// Reduced single-qubit purity of the simulated pre-measurement state.
    Semantic,
    /// Connected components over multi-qubit gate operands (an estimate).
    Structural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMetrics {
    pub num_qubits: usize,
    pub num_gates: usize,
    pub num_measurements: usize,
    pub depth: usize,
    pub num_single_gates: usize,
    pub num_multi_gates: usize,
    pub num_entangled_qubits: usize,
    pub entanglement_method: EntanglementMethod,
}

pub const METRIC_NAMES: [&str; 7] = [
    "num_qubits",
    "num_gates",
    "num_measurements",
    "depth",
    "num_single_gates",
    "num_multi_gates",
    "num_entangled_qubits",
];

impl CircuitMetrics {
    pub fn get(&self, metric: &str) -> Option<f64> {
        let v = match metric {
            "num_qubits" => self.num_qubits,
            "num_gates" => self.num_gates,
            "num_measurements" => self.num_measurements,
            "depth" => self.depth,
            "num_single_gates" => self.num_single_gates,
            "num_multi_gates" => self.num_multi_gates,
            "num_entangled_qubits" => self.num_entangled_qubits,
            _ => return None,
        };
        Some(v as f64)
    }
}

const PURITY_THRESHOLD: f64 = 1.0 - 1e-9;

fn depth(c: &Circuit) -> usize {
    let mut frontier = vec![0usize; c.num_qubits];
    for g in &c.gates {
        let level = g.operands.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
        for &q in &g.operands {
            frontier[q] = level;
        }
    }
    frontier.into_iter().max().unwrap_or(0)
}

fn structural_entangled(c: &Circuit) -> usize {
    let mut parent: Vec<usize> = (0..c.num_qubits).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in c.gates.iter().filter(|g| g.operands.len() > 1) {
        let root = find(&mut parent, g.operands[0]);
        for &q in &g.operands[1..] {
            let r = find(&mut parent, q);
            parent[r] = root;
        }
    }
    let mut sizes = vec![0usize; c.num_qubits];
    for q in 0..c.num_qubits {
        let r = find(&mut parent, q);
        sizes[r] += 1;
    }
    (0..c.num_qubits)
        .filter(|&q| {
            let r = find(&mut parent, q);
            sizes[r] >= 2
        })
        .count()
}

fn semantic_entangled(c: &Circuit, budget: usize) -> Option<usize> {
    let state = sim::run_statevector_with_budget(c, budget).ok()?;
    Some(
        (0..c.num_qubits)
            .filter(|&q| state.reduced_purity(q) < PURITY_THRESHOLD)
            .count(),
    )
}

/// Computes complexity metrics. Entangled qubits are counted semantically
/// when `num_qubits <= sim_budget`, otherwise structurally.
pub fn compute_metrics(c: &Circuit, sim_budget: usize) -> CircuitMetrics {
    let num_single_gates = c
        .gates
        .iter()
        .filter(|g| g.gate.size_class() == SizeClass::Single)
        .count();
    let (num_entangled_qubits, entanglement_method) = if c.num_qubits <= sim_budget {
        match semantic_entangled(c, sim_budget) {
            Some(n) => (n, EntanglementMethod::Semantic),
            None => (structural_entangled(c), EntanglementMethod::Structural),
        }
    } else {
        (structural_entangled(c), EntanglementMethod::Structural)
    };
    CircuitMetrics {
        num_qubits: c.num_qubits,
        num_gates: c.gates.len(),
        num_measurements: c.measurements.len(),
        depth: depth(c),
        num_single_gates,
        num_multi_gates: c.gates.len() - num_single_gates,
        num_entangled_qubits,
        entanglement_method,
    }
}
