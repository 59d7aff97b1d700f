//! Gate-level mutation analysis for quantum circuits.
//!
//! The pipeline: parse OPENQASM 2.0 circuits ([`circuit`]), enumerate
//! Add/Remove/Replace mutants ([`mutation`]), execute originals and mutants on
//! a seeded state-vector sampler ([`sim`]), judge each mutant with the
//! wrong-output and output-probability oracles ([`oracle`]), then aggregate
//! survival rates ([`analytics`]) and recommend mutant sets ([`recommend`]).
//! [`campaign`] drives the whole thing over a corpus directory.

pub mod analytics;
pub mod campaign;
pub mod catalog;
pub mod circuit;
pub mod corpus;
pub mod error;
pub mod mutation;
pub mod oracle;
pub mod par;
pub mod program;
pub mod recommend;
pub mod record;
pub mod sim;

pub use catalog::{Gate, GateType, SizeClass};
pub use circuit::{parse_qasm, serialize_qasm, Circuit, CircuitMetrics, GateApplication};
pub use error::{Error, Result};
pub use mutation::{MutantSpec, Operator};
pub use oracle::{Verdict, VerdictKind};
pub use program::{AlgorithmGroup, OutputDominance, ProgramMeta};
pub use record::MutantRecord;
pub use sim::OutcomeDistribution;
