//! Add/Remove/Replace mutant enumeration and application.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::{self, Gate, GateType, SizeClass};
use crate::circuit::{relative_position_bucket, Circuit, GateApplication};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Operator {
    Add,
    Remove,
    Replace,
}

impl Operator {
    pub const ALL: [Operator; 3] = [Operator::Add, Operator::Remove, Operator::Replace];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Add => "Add",
            Operator::Remove => "Remove",
            Operator::Replace => "Replace",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Operator::ALL
            .into_iter()
            .find(|o| o.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown operator `{s}`")))
    }
}

/// How operands are chosen for inserted gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperandStrategy {
    /// Reuse the operands of the gate at the insertion point, extended
    /// cyclically with the next unused qubits.
    #[default]
    Anchor,
    /// Every ordered tuple of distinct qubits.
    Exhaustive,
}

impl FromStr for OperandStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "anchor" => Ok(OperandStrategy::Anchor),
            "exhaustive" => Ok(OperandStrategy::Exhaustive),
            _ => Err(Error::Config(format!("unknown operand strategy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnumerationConfig {
    pub operand_strategy: OperandStrategy,
    pub default_angle: f64,
    pub max_mutants_per_circuit: Option<usize>,
    pub operator_filter: Option<Vec<Operator>>,
    pub gate_filter: Option<Vec<Gate>>,
    pub position_filter: Option<Vec<u32>>,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            operand_strategy: OperandStrategy::Anchor,
            default_angle: std::f64::consts::FRAC_PI_2,
            max_mutants_per_circuit: None,
            operator_filter: None,
            gate_filter: None,
            position_filter: None,
        }
    }
}

impl EnumerationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.default_angle > 0.0 && self.default_angle < std::f64::consts::TAU) {
            return Err(Error::Config("default_angle must lie in (0, 2pi)".into()));
        }
        if self.max_mutants_per_circuit == Some(0) {
            return Err(Error::Config("max_mutants_per_circuit must be at least 1".into()));
        }
        if let Some(gates) = &self.gate_filter {
            if let Some(g) = gates.iter().find(|g| !g.is_mutatable()) {
                return Err(Error::Config(format!("gate `{g}` is not mutatable")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutantSpec {
    pub id: String,
    pub origin: String,
    pub operator: Operator,
    pub position: usize,
    pub gate: Gate,
    pub operands: Vec<usize>,
    pub params: Vec<f64>,
    pub gate_type: GateType,
    pub gate_size: SizeClass,
    pub position_bucket: u32,
}

impl MutantSpec {
    /// Builds a spec with derived labels and id. `total_positions` is the
    /// gate count of the original circuit.
    pub fn new(
        origin: &str,
        operator: Operator,
        position: usize,
        gate: Gate,
        operands: Vec<usize>,
        params: Vec<f64>,
        total_positions: usize,
    ) -> Result<Self> {
        let bucket_position = match operator {
            Operator::Add => position.min(total_positions.saturating_sub(1)),
            _ => position,
        };
        let position_bucket = relative_position_bucket(bucket_position, total_positions)?;
        let id = mutant_id(origin, operator, gate, position, &operands, &params);
        Ok(MutantSpec {
            id,
            origin: origin.to_string(),
            operator,
            position,
            gate,
            gate_type: gate.gate_type(),
            gate_size: gate.size_class(),
            operands,
            params,
            position_bucket,
        })
    }

    pub fn file_stem(&self) -> String {
        file_stem(&self.origin, self.operator, self.gate, self.position, &self.operands)
    }
}

/// `<origin>__<operator>_<gate>_<position>[_<operands>]`; operands are
/// omitted for Remove.
pub fn file_stem(origin: &str, operator: Operator, gate: Gate, position: usize, operands: &[usize]) -> String {
    let mut stem = format!(
        "{origin}__{}_{gate}_{position}",
        operator.name().to_ascii_lowercase()
    );
    if operator != Operator::Remove {
        let ops: Vec<String> = operands.iter().map(usize::to_string).collect();
        stem.push('_');
        stem.push_str(&ops.join("-"));
    }
    stem
}

/// Stable 64-bit hex id over origin, operator, gate, position, operands and params.
pub fn mutant_id(
    origin: &str,
    operator: Operator,
    gate: Gate,
    position: usize,
    operands: &[usize],
    params: &[f64],
) -> String {
    let ops: Vec<String> = operands.iter().map(usize::to_string).collect();
    let ps: Vec<String> = params.iter().map(|p| format!("{p:?}")).collect();
    let canonical = format!(
        "{origin}|{}|{gate}|{position}|{}|{}",
        operator.name(),
        ops.join(","),
        ps.join(",")
    );
    let digest = Sha256::digest(canonical.as_bytes());
    hex::encode(&digest[..8])
}

fn anchor_operands(anchor: &[usize], arity: usize, num_qubits: usize) -> Vec<usize> {
    let mut ops: Vec<usize> = anchor.iter().copied().take(arity).collect();
    let mut next = ops.last().map_or(0, |&q| (q + 1) % num_qubits);
    while ops.len() < arity {
        if !ops.contains(&next) {
            ops.push(next);
        }
        next = (next + 1) % num_qubits;
    }
    ops
}

/// Ordered tuples of distinct qubits in lexicographic order.
fn ordered_tuples(num_qubits: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(arity);
    fn rec(n: usize, arity: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == arity {
            out.push(current.clone());
            return;
        }
        for q in 0..n {
            if !current.contains(&q) {
                current.push(q);
                rec(n, arity, current, out);
                current.pop();
            }
        }
    }
    rec(num_qubits, arity, &mut current, &mut out);
    out
}

fn default_params(gate: Gate, cfg: &EnumerationConfig) -> Vec<f64> {
    vec![cfg.default_angle; gate.param_count()]
}

pub fn enumerate_add(c: &Circuit, cfg: &EnumerationConfig) -> Vec<MutantSpec> {
    let n = c.gates.len();
    if n == 0 {
        return Vec::new();
    }
    let mut specs = Vec::new();
    for position in 0..=n {
        let anchor = &c.gates[position.min(n - 1)].operands;
        for gate in catalog::mutatable_gates() {
            if gate.arity() > c.num_qubits {
                continue;
            }
            let tuples = match cfg.operand_strategy {
                OperandStrategy::Anchor => vec![anchor_operands(anchor, gate.arity(), c.num_qubits)],
                OperandStrategy::Exhaustive => ordered_tuples(c.num_qubits, gate.arity()),
            };
            for operands in tuples {
                specs.push(
                    MutantSpec::new(&c.name, Operator::Add, position, gate, operands, default_params(gate, cfg), n)
                        .expect("position in range"),
                );
            }
        }
    }
    specs
}

pub fn enumerate_remove(c: &Circuit) -> Vec<MutantSpec> {
    let n = c.gates.len();
    c.gates
        .iter()
        .enumerate()
        .filter(|(_, g)| g.gate.is_mutatable())
        .map(|(position, g)| {
            MutantSpec::new(&c.name, Operator::Remove, position, g.gate, g.operands.clone(), g.params.clone(), n)
                .expect("position in range")
        })
        .collect()
}

pub fn enumerate_replace(c: &Circuit, cfg: &EnumerationConfig) -> Vec<MutantSpec> {
    let n = c.gates.len();
    let mut specs = Vec::new();
    for (position, original) in c.gates.iter().enumerate() {
        if !original.gate.is_mutatable() {
            continue;
        }
        for gate in catalog::mutatable_gates() {
            if gate == original.gate || gate.arity() != original.gate.arity() {
                continue;
            }
            let params = match (gate.param_count(), original.params.is_empty()) {
                (0, _) => Vec::new(),
                (_, false) => original.params.clone(),
                (_, true) => default_params(gate, cfg),
            };
            specs.push(
                MutantSpec::new(&c.name, Operator::Replace, position, gate, original.operands.clone(), params, n)
                    .expect("position in range"),
            );
        }
    }
    specs
}

/// All operators, filtered and capped per `cfg`. The cap keeps an evenly
/// strided subsample of the full ordered list.
pub fn enumerate_all(c: &Circuit, cfg: &EnumerationConfig) -> Vec<MutantSpec> {
    let wants = |op: Operator| cfg.operator_filter.as_ref().is_none_or(|f| f.contains(&op));
    let mut specs = Vec::new();
    if wants(Operator::Add) {
        specs.extend(enumerate_add(c, cfg));
    }
    if wants(Operator::Remove) {
        specs.extend(enumerate_remove(c));
    }
    if wants(Operator::Replace) {
        specs.extend(enumerate_replace(c, cfg));
    }
    specs.retain(|s| {
        cfg.gate_filter.as_ref().is_none_or(|f| f.contains(&s.gate))
            && cfg.position_filter.as_ref().is_none_or(|f| f.contains(&s.position_bucket))
    });
    if let Some(cap) = cfg.max_mutants_per_circuit {
        if specs.len() > cap {
            let len = specs.len();
            let keep: Vec<usize> = (0..cap).map(|i| i * len / cap).collect();
            let mut k = 0;
            let mut idx = 0;
            specs.retain(|_| {
                let hit = k < keep.len() && keep[k] == idx;
                if hit {
                    k += 1;
                }
                idx += 1;
                hit
            });
        }
    }
    specs
}

/// Applies `m` to `c`. Errors mean the spec does not fit the circuit; such
/// mutants are classified stillborn upstream.
pub fn apply_mutation(c: &Circuit, m: &MutantSpec) -> Result<Circuit> {
    let n = c.gates.len();
    if !m.gate.is_mutatable() {
        return Err(Error::InconsistentMutant(format!("gate `{}` is not mutatable", m.gate)));
    }
    let mut out = c.clone();
    out.name = m.file_stem();
    match m.operator {
        Operator::Add => {
            if m.position > n {
                return Err(Error::InconsistentMutant(format!(
                    "insertion point {} beyond {n} gates",
                    m.position
                )));
            }
            let g = GateApplication::new(m.gate, m.operands.clone(), m.params.clone());
            g.validate(c.num_qubits)
                .map_err(|e| Error::InconsistentMutant(e.to_string()))?;
            out.gates.insert(m.position, g);
        }
        Operator::Remove | Operator::Replace => {
            let original = c.gates.get(m.position).ok_or_else(|| {
                Error::InconsistentMutant(format!("no gate at position {}", m.position))
            })?;
            if !original.gate.is_mutatable() {
                return Err(Error::InconsistentMutant(format!(
                    "gate `{}` at position {} is not mutatable",
                    original.gate, m.position
                )));
            }
            if m.operator == Operator::Remove {
                if original.gate != m.gate {
                    return Err(Error::InconsistentMutant(format!(
                        "expected `{}` at position {}, found `{}`",
                        m.gate, m.position, original.gate
                    )));
                }
                out.gates.remove(m.position);
            } else {
                if original.gate == m.gate && original.params == m.params {
                    return Err(Error::InconsistentMutant("replacement is identical".into()));
                }
                let g = GateApplication::new(m.gate, m.operands.clone(), m.params.clone());
                g.validate(c.num_qubits)
                    .map_err(|e| Error::InconsistentMutant(e.to_string()))?;
                out.gates[m.position] = g;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim;

    fn bell() -> Circuit {
        let mut c = Circuit::new("bell", 2, 2);
        c.push(Gate::H, &[0], &[]).push(Gate::Cx, &[0, 1], &[]).measure_all();
        c
    }

    /// Independent count: insertion points times gates whose arity fits.
    fn add_count_oracle(c: &Circuit, strategy: OperandStrategy) -> usize {
        let points = c.gates.len() + 1;
        let per_point: usize = catalog::CATALOG
            .iter()
            .filter(|e| e.mutatable && e.arity <= c.num_qubits)
            .map(|e| match strategy {
                OperandStrategy::Anchor => 1,
                OperandStrategy::Exhaustive => (0..e.arity).map(|k| c.num_qubits - k).product(),
            })
            .sum();
        points * per_point
    }

    #[test]
    fn bell_add_anchor_count() {
        let specs = enumerate_add(&bell(), &EnumerationConfig::default());
        assert_eq!(specs.len(), 51);
        assert_eq!(specs.len(), add_count_oracle(&bell(), OperandStrategy::Anchor));
        assert!(specs.iter().all(|s| s.gate != Gate::Ccx && s.gate != Gate::Cswap));
    }

    #[test]
    fn exhaustive_count() {
        let cfg = EnumerationConfig {
            operand_strategy: OperandStrategy::Exhaustive,
            ..Default::default()
        };
        let mut c = Circuit::new("three", 3, 3);
        c.push(Gate::H, &[0], &[]).push(Gate::Cx, &[0, 2], &[]);
        assert_eq!(enumerate_add(&c, &cfg).len(), add_count_oracle(&c, OperandStrategy::Exhaustive));
    }

    #[test]
    fn single_qubit_circuit_keeps_only_single_gates() {
        let mut c = Circuit::new("one", 1, 1);
        c.push(Gate::X, &[0], &[]).measure_all();
        let specs = enumerate_add(&c, &EnumerationConfig::default());
        assert_eq!(specs.len(), 2 * 12);
        assert!(specs.iter().all(|s| s.gate_size == SizeClass::Single));
    }

    #[test]
    fn add_at_end_is_bucket_100() {
        let specs = enumerate_add(&bell(), &EnumerationConfig::default());
        let s = specs.iter().find(|s| s.position == 2 && s.gate == Gate::Id).unwrap();
        assert_eq!(s.position_bucket, 100);
        assert_eq!(s.operands, vec![0]);
    }

    #[test]
    fn anchor_extension_is_cyclic() {
        assert_eq!(anchor_operands(&[2], 3, 3), vec![2, 0, 1]);
        assert_eq!(anchor_operands(&[1, 0], 1, 3), vec![1]);
        assert_eq!(anchor_operands(&[0], 2, 2), vec![0, 1]);
    }

    #[test]
    fn parameterized_adds_use_default_angle() {
        let specs = enumerate_add(&bell(), &EnumerationConfig::default());
        for s in specs.iter().filter(|s| s.gate.param_count() == 1) {
            assert_eq!(s.params, vec![std::f64::consts::FRAC_PI_2]);
        }
    }

    #[test]
    fn remove_examples() {
        let specs = enumerate_remove(&bell());
        assert_eq!(specs.len(), 2);
        assert_eq!((specs[0].gate, specs[0].position), (Gate::H, 0));
        assert_eq!((specs[1].gate, specs[1].position), (Gate::Cx, 1));

        let mut qft = Circuit::new("qft", 3, 3);
        qft.push(Gate::H, &[0], &[])
            .push(Gate::Cp, &[0, 1], &[1.0])
            .push(Gate::Cp, &[0, 2], &[0.5])
            .push(Gate::H, &[1], &[])
            .push(Gate::Cp, &[1, 2], &[1.0]);
        assert_eq!(enumerate_remove(&qft).len(), 2);
        assert!(enumerate_remove(&Circuit::new("e", 1, 1)).is_empty());
        assert!(enumerate_replace(&qft, &EnumerationConfig::default())
            .iter()
            .all(|s| s.position == 0 || s.position == 3));
    }

    #[test]
    fn replace_examples() {
        let specs = enumerate_replace(&bell(), &EnumerationConfig::default());
        let h: Vec<_> = specs.iter().filter(|s| s.position == 0).collect();
        // 12 single-qubit mutatable gates, minus h itself.
        assert_eq!(h.len(), 11);
        let cx: Vec<Gate> = specs.iter().filter(|s| s.position == 1).map(|s| s.gate).collect();
        assert_eq!(cx, vec![Gate::Cz, Gate::Rxx, Gate::Rzz, Gate::Swap]);
        let rx = h.iter().find(|s| s.gate == Gate::Rx).unwrap();
        assert_eq!(rx.params, vec![std::f64::consts::FRAC_PI_2]);
    }

    #[test]
    fn replace_copies_params_between_parameterized_gates() {
        let mut c = Circuit::new("r", 1, 1);
        c.push(Gate::Ry, &[0], &[0.3]);
        let specs = enumerate_replace(&c, &EnumerationConfig::default());
        assert_eq!(specs.iter().find(|s| s.gate == Gate::Rz).unwrap().params, vec![0.3]);
        assert!(specs.iter().find(|s| s.gate == Gate::H).unwrap().params.is_empty());
    }

    #[test]
    fn fig1_style_replace_x_with_h() {
        let mut c = Circuit::new("f", 2, 2);
        for _ in 0..13 {
            c.push(Gate::Id, &[1], &[]);
        }
        c.push(Gate::X, &[0], &[]);
        let specs = enumerate_replace(&c, &EnumerationConfig::default());
        assert!(specs.iter().any(|s| s.position == 13 && s.gate == Gate::H));
    }

    #[test]
    fn apply_semantics() {
        let c = bell();
        let rm = enumerate_remove(&c).remove(0);
        let m = apply_mutation(&c, &rm).unwrap();
        assert_eq!(m.gates, vec![GateApplication::new(Gate::Cx, vec![0, 1], vec![])]);
        let d = sim::sample_shots(&m, 1000, 1).unwrap();
        assert_eq!(d.counts.keys().collect::<Vec<_>>(), vec!["00"]);

        let mut one = Circuit::new("x", 1, 1);
        one.push(Gate::X, &[0], &[]).measure_all();
        let spec = enumerate_replace(&one, &EnumerationConfig::default())
            .into_iter()
            .find(|s| s.gate == Gate::H)
            .unwrap();
        let marg = sim::marginal_probabilities(&apply_mutation(&one, &spec).unwrap(), 16).unwrap();
        assert!((marg.probabilities[&0] - 0.5).abs() < 1e-12);
        assert!((marg.probabilities[&1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_specs_are_rejected() {
        let c = bell();
        let mut bad = enumerate_remove(&c).remove(0);
        bad.position = 5;
        assert!(matches!(apply_mutation(&c, &bad), Err(Error::InconsistentMutant(_))));
        let mut bad = enumerate_add(&c, &EnumerationConfig::default()).remove(0);
        bad.operands = vec![7];
        assert!(matches!(apply_mutation(&c, &bad), Err(Error::InconsistentMutant(_))));
    }

    #[test]
    fn add_id_is_neutral_and_remove_shifts() {
        let c = bell();
        let base = sim::marginal_probabilities(&c, 16).unwrap();
        for s in enumerate_add(&c, &EnumerationConfig::default()).iter().filter(|s| s.gate == Gate::Id) {
            let m = apply_mutation(&c, s).unwrap();
            assert_eq!(m.gates.len(), 3);
            let marg = sim::marginal_probabilities(&m, 16).unwrap();
            for (k, p) in &base.probabilities {
                assert!((marg.probabilities[k] - p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cap_and_filters() {
        let cfg = EnumerationConfig {
            operator_filter: Some(vec![Operator::Remove]),
            ..Default::default()
        };
        assert!(enumerate_all(&bell(), &cfg).iter().all(|s| s.operator == Operator::Remove));
        let cfg = EnumerationConfig {
            max_mutants_per_circuit: Some(7),
            ..Default::default()
        };
        let capped = enumerate_all(&bell(), &cfg);
        assert_eq!(capped.len(), 7);
        assert_eq!(capped, enumerate_all(&bell(), &cfg));
        let total = enumerate_all(&bell(), &EnumerationConfig::default()).len();
        assert_eq!(total, 51 + 2 + 15);
    }

    #[test]
    fn ids_are_unique_and_stable() {
        let specs = enumerate_all(&bell(), &EnumerationConfig::default());
        let mut ids: Vec<_> = specs.iter().map(|s| s.id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), specs.len());
        assert_eq!(
            specs[0].id,
            mutant_id("bell", Operator::Add, specs[0].gate, 0, &specs[0].operands, &specs[0].params)
        );
        assert_eq!(specs[0].file_stem(), "bell__add_cx_0_0-1");
    }
}
