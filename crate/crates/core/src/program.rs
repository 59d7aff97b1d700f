//! Program-level labels: algorithm, algorithm group and output dominance.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmGroup {
    Ae,
    Dj,
    Ghz,
    Graphstate,
    Grover,
    Qaoa,
    Qft,
    Qgan,
    Qpe,
    Qwalk,
    Vqe,
    Wstate,
}

impl AlgorithmGroup {
    pub const ALL: [AlgorithmGroup; 12] = [
        AlgorithmGroup::Ae,
        AlgorithmGroup::Dj,
        AlgorithmGroup::Ghz,
        AlgorithmGroup::Graphstate,
        AlgorithmGroup::Grover,
        AlgorithmGroup::Qaoa,
        AlgorithmGroup::Qft,
        AlgorithmGroup::Qgan,
        AlgorithmGroup::Qpe,
        AlgorithmGroup::Qwalk,
        AlgorithmGroup::Vqe,
        AlgorithmGroup::Wstate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmGroup::Ae => "ae",
            AlgorithmGroup::Dj => "dj",
            AlgorithmGroup::Ghz => "ghz",
            AlgorithmGroup::Graphstate => "graphstate",
            AlgorithmGroup::Grover => "grover",
            AlgorithmGroup::Qaoa => "qaoa",
            AlgorithmGroup::Qft => "qft",
            AlgorithmGroup::Qgan => "qgan",
            AlgorithmGroup::Qpe => "qpe",
            AlgorithmGroup::Qwalk => "qwalk",
            AlgorithmGroup::Vqe => "vqe",
            AlgorithmGroup::Wstate => "wstate",
        }
    }
}

impl fmt::Display for AlgorithmGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgorithmGroup::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm group `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutputDominance {
    #[serde(rename = "dominant")]
    OutputDominant,
    #[serde(rename = "diverse")]
    DiverseOutput,
}

impl OutputDominance {
    pub fn name(self) -> &'static str {
        match self {
            OutputDominance::OutputDominant => "dominant",
            OutputDominance::DiverseOutput => "diverse",
        }
    }
}

impl fmt::Display for OutputDominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OutputDominance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dominant" | "outputdominant" | "output-dominant" => Ok(OutputDominance::OutputDominant),
            "diverse" | "diverseoutput" | "diverse-output" => Ok(OutputDominance::DiverseOutput),
            _ => Err(Error::Config(format!("unknown output dominance `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramMeta {
    pub algorithm: String,
    pub algorithm_group: AlgorithmGroup,
    pub output_dominance: OutputDominance,
}

impl Default for ProgramMeta {
    fn default() -> Self {
        ProgramMeta {
            algorithm: "unknown".to_string(),
            algorithm_group: AlgorithmGroup::Vqe,
            output_dominance: OutputDominance::OutputDominant,
        }
    }
}

use AlgorithmGroup as G;
use OutputDominance::{DiverseOutput as Div, OutputDominant as Dom};

/// Default labels for the 28 MQT Bench algorithm names.
pub static KNOWN_ALGORITHMS: [(&str, AlgorithmGroup, OutputDominance); 28] = [
    ("ae", G::Ae, Div),
    ("dj", G::Dj, Dom),
    ("ghz", G::Ghz, Div),
    ("graphstate", G::Graphstate, Div),
    ("groundstatelarge", G::Vqe, Dom),
    ("groundstatemedium", G::Vqe, Dom),
    ("groundstatesmall", G::Vqe, Dom),
    ("grover-noancilla", G::Grover, Dom),
    ("grover-v-chain", G::Grover, Dom),
    ("portfolioqaoa", G::Qaoa, Dom),
    ("portfoliovqe", G::Vqe, Dom),
    ("pricingcall", G::Ae, Dom),
    ("pricingput", G::Ae, Dom),
    ("qaoa", G::Qaoa, Dom),
    ("qft", G::Qft, Div),
    ("qftentangled", G::Qft, Div),
    ("qgan", G::Qgan, Div),
    ("qpeexact", G::Qpe, Dom),
    ("qpeinexact", G::Qpe, Dom),
    ("qwalk-noancilla", G::Qwalk, Div),
    ("qwalk-v-chain", G::Qwalk, Div),
    ("realamprandom", G::Vqe, Dom),
    ("routing", G::Vqe, Dom),
    ("su2random", G::Vqe, Dom),
    ("tsp", G::Vqe, Dom),
    ("twolocalrandom", G::Vqe, Dom),
    ("vqe", G::Vqe, Dom),
    ("wstate", G::Wstate, Div),
];

pub fn known_algorithm(name: &str) -> Option<ProgramMeta> {
    KNOWN_ALGORITHMS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|&(n, group, dominance)| ProgramMeta {
            algorithm: n.to_string(),
            algorithm_group: group,
            output_dominance: dominance,
        })
}

/// Infers labels from an MQT-style file stem such as `ghz_indep_qiskit_5`.
pub fn infer_from_stem(stem: &str) -> Option<ProgramMeta> {
    let algorithm = stem.split('_').next()?;
    known_algorithm(algorithm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        let diverse = KNOWN_ALGORITHMS.iter().filter(|a| a.2 == Div).count();
        assert_eq!(diverse, 9);
        assert_eq!(KNOWN_ALGORITHMS.len() - diverse, 19);
        for g in AlgorithmGroup::ALL {
            assert!(KNOWN_ALGORITHMS.iter().any(|a| a.1 == g), "{g}");
        }
    }

    #[test]
    fn infers_mqt_stems() {
        let m = infer_from_stem("grover-v-chain_indep_qiskit_4").unwrap();
        assert_eq!(m.algorithm_group, G::Grover);
        assert_eq!(infer_from_stem("ghz_5").unwrap().output_dominance, Div);
        assert!(infer_from_stem("mystery").is_none());
    }
}
