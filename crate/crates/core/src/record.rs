use serde::{Deserialize, Serialize};

use crate::catalog::{Gate, GateType, SizeClass};
use crate::circuit::CircuitMetrics;
use crate::mutation::{self, MutantSpec, Operator};
use crate::oracle::{Verdict, VerdictKind};
use crate::program::{AlgorithmGroup, OutputDominance, ProgramMeta};

/// One executed (or stillborn) mutant with every characteristic label.
/// Field order is the on-disk key order of the record store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutantRecord {
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
    pub verdict: VerdictKind,
    pub p_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub algorithm: String,
    pub algorithm_group: AlgorithmGroup,
    pub output_dominance: OutputDominance,
    pub metrics: CircuitMetrics,
}

impl MutantRecord {
    pub fn new(spec: &MutantSpec, verdict: Verdict, meta: &ProgramMeta, metrics: CircuitMetrics) -> Self {
        MutantRecord {
            id: spec.id.clone(),
            origin: spec.origin.clone(),
            operator: spec.operator,
            position: spec.position,
            gate: spec.gate,
            operands: spec.operands.clone(),
            params: spec.params.clone(),
            gate_type: spec.gate_type,
            gate_size: spec.gate_size,
            position_bucket: spec.position_bucket,
            verdict: verdict.kind,
            p_value: verdict.p_value,
            reason: None,
            algorithm: meta.algorithm.clone(),
            algorithm_group: meta.algorithm_group,
            output_dominance: meta.output_dominance,
            metrics,
        }
    }

    pub fn stillborn(spec: &MutantSpec, reason: String, meta: &ProgramMeta, metrics: CircuitMetrics) -> Self {
        let mut r = MutantRecord::new(spec, Verdict::stillborn(), meta, metrics);
        r.reason = Some(reason);
        r
    }

    pub fn survived(&self) -> bool {
        self.verdict == VerdictKind::Survived
    }

    pub fn is_stillborn(&self) -> bool {
        self.verdict == VerdictKind::Stillborn
    }

    pub fn file_stem(&self) -> String {
        mutation::file_stem(&self.origin, self.operator, self.gate, self.position, &self.operands)
    }
}
