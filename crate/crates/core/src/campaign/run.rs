use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::PathBuf;

use crate::circuit::{compute_metrics, serialize_qasm, Circuit};
use crate::corpus::load_corpus;
use crate::error::{Error, Result};
use crate::mutation::{apply_mutation, enumerate_all, MutantSpec, Operator};
use crate::oracle::{judge, VerdictKind};
use crate::par::{self, Execution};
use crate::record::MutantRecord;
use crate::sim::{sample_shots_with_budget, OutcomeDistribution};

use super::{read_jsonl, write_jsonl, CampaignConfig, SeedMode};

#[derive(Debug, Default)]
pub struct GenerateSummary {
    pub circuits: usize,
    pub per_operator: BTreeMap<Operator, usize>,
    /// Input files that failed to parse, with the reason.
    pub failures: Vec<(PathBuf, String)>,
    pub unlabeled: Vec<String>,
}

impl GenerateSummary {
    pub fn total(&self) -> usize {
        self.per_operator.values().sum()
    }
}

impl fmt::Display for GenerateSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "generated {} mutants from {} circuits (", self.total(), self.circuits)?;
        for (i, op) in Operator::ALL.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}={}", op, self.per_operator.get(op).copied().unwrap_or(0))?;
        }
        f.write_str(")")
    }
}

/// Loaded circuits, load failures and unlabeled stems.
type Inputs = (Vec<Circuit>, Vec<(PathBuf, String)>, Vec<String>);

fn load_inputs(cfg: &CampaignConfig) -> Result<Inputs> {
    let loaded = load_corpus(&cfg.inputs)?;
    let failures: Vec<(PathBuf, String)> = loaded
        .failures
        .into_iter()
        .map(|f| (f.path, f.error.to_string()))
        .collect();
    if loaded.circuits.is_empty() {
        let detail = match failures.first() {
            Some((p, e)) => format!("all {} input files failed to load (first: {}: {e})", failures.len(), p.display()),
            None => "no .qasm files found in the inputs".to_string(),
        };
        return Err(Error::NoCircuits(detail));
    }
    for u in &loaded.unlabeled {
        log::warn!("no program labels for `{u}`; using defaults");
    }
    Ok((loaded.circuits, failures, loaded.unlabeled))
}

/// Enumerates mutants for every input circuit and writes the spec store
/// plus one QASM file per mutant.
pub fn generate(cfg: &CampaignConfig) -> Result<GenerateSummary> {
    cfg.validate()?;
    let (circuits, failures, unlabeled) = load_inputs(cfg)?;
    let mut summary = GenerateSummary {
        circuits: circuits.len(),
        failures,
        unlabeled,
        ..Default::default()
    };
    let mutants_dir = cfg.mutants_dir();
    fs::create_dir_all(&mutants_dir).map_err(|e| Error::io(&mutants_dir, e))?;
    let mut all_specs = Vec::new();
    for c in &circuits {
        let specs = enumerate_all(c, &cfg.enumeration);
        for s in &specs {
            let mutant = apply_mutation(c, s)?;
            let path = mutants_dir.join(format!("{}.qasm", mutant.name));
            fs::write(&path, serialize_qasm(&mutant)).map_err(|e| Error::io(&path, e))?;
            *summary.per_operator.entry(s.operator).or_default() += 1;
        }
        all_specs.extend(specs);
    }
    write_jsonl(&cfg.specs_path(), &all_specs)?;
    Ok(summary)
}

/// The sampler seed for one mutant under `mode`.
pub fn mutant_seed(seed: u64, mode: SeedMode, id: &str) -> u64 {
    match mode {
        SeedMode::Shared => seed,
        SeedMode::PerMutant => {
            let prefix = &id[..id.len().min(16)];
            seed ^ u64::from_str_radix(prefix, 16).unwrap_or(0)
        }
    }
}

#[derive(Debug, Default)]
pub struct RunSummary {
    pub executed: usize,
    pub resumed: usize,
    pub verdicts: BTreeMap<VerdictKind, usize>,
    /// Origin circuits that could not be run, with the reason. Their
    /// mutants are left out of the store.
    pub failures: Vec<(String, String)>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = |k| self.verdicts.get(&k).copied().unwrap_or(0);
        write!(
            f,
            "executed {} mutants ({} resumed): survived={}, killed_woo={}, killed_opo={}, stillborn={}",
            self.executed,
            self.resumed,
            n(VerdictKind::Survived),
            n(VerdictKind::KilledWOO),
            n(VerdictKind::KilledOPO),
            n(VerdictKind::Stillborn)
        )?;
        if !self.failures.is_empty() {
            write!(f, "; {} circuits failed", self.failures.len())?;
        }
        Ok(())
    }
}

struct Origin<'a> {
    circuit: &'a Circuit,
    expected: OutcomeDistribution,
    metrics: crate::circuit::CircuitMetrics,
}

fn execute(cfg: &CampaignConfig, origin: &Origin<'_>, spec: &MutantSpec) -> MutantRecord {
    let meta = &origin.circuit.meta;
    let stillborn = |e: Error| MutantRecord::stillborn(spec, e.to_string(), meta, origin.metrics);
    let mutant = match apply_mutation(origin.circuit, spec) {
        Ok(m) => m,
        Err(e) => return stillborn(e),
    };
    let seed = mutant_seed(cfg.seed, cfg.seed_mode, &spec.id);
    let observed = match sample_shots_with_budget(&mutant, cfg.shots, seed, cfg.max_qubits) {
        Ok(d) => d,
        Err(e) => return stillborn(e),
    };
    match judge(&origin.expected, &observed, meta, &cfg.oracle) {
        Ok(v) => MutantRecord::new(spec, v, meta, origin.metrics),
        Err(e) => stillborn(e),
    }
}

/// Executes and judges every spec without a record yet, then rewrites the
/// store sorted by id.
pub fn run(cfg: &CampaignConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let specs_path = cfg.specs_path();
    if !specs_path.exists() {
        return Err(Error::Config(format!(
            "{} not found; run generate first",
            specs_path.display()
        )));
    }
    let specs: Vec<MutantSpec> = read_jsonl(&specs_path)?;
    let records_path = cfg.records_path();
    let mut records: Vec<MutantRecord> = if records_path.exists() {
        read_jsonl(&records_path)?
    } else {
        Vec::new()
    };
    let done: BTreeSet<String> = records.iter().map(|r| r.id.clone()).collect();
    let pending: Vec<&MutantSpec> = specs.iter().filter(|s| !done.contains(&s.id)).collect();
    let mut summary = RunSummary {
        resumed: specs.len() - pending.len(),
        ..Default::default()
    };

    let needed: BTreeSet<&str> = pending.iter().map(|s| s.origin.as_str()).collect();
    let mut origins: BTreeMap<&str, Origin<'_>> = BTreeMap::new();
    let circuits = if needed.is_empty() {
        Vec::new()
    } else {
        load_inputs(cfg)?.0
    };
    for name in &needed {
        let Some(c) = circuits.iter().find(|c| c.name == *name) else {
            summary.failures.push((name.to_string(), "origin circuit not among the inputs".into()));
            continue;
        };
        match sample_shots_with_budget(c, cfg.shots, cfg.seed, cfg.max_qubits) {
            Ok(expected) => {
                let metrics = compute_metrics(c, cfg.max_qubits);
                origins.insert(name, Origin { circuit: c, expected, metrics });
            }
            Err(e) => summary.failures.push((name.to_string(), e.to_string())),
        }
    }

    let jobs: Vec<(&Origin<'_>, &MutantSpec)> = pending
        .iter()
        .filter_map(|s| origins.get(s.origin.as_str()).map(|o| (o, *s)))
        .collect();
    let fresh = par::map(&jobs, |(o, s)| execute(cfg, o, s), Execution::from_threads(cfg.threads));
    summary.executed = fresh.len();
    records.extend(fresh);
    records.sort_by(|a, b| a.id.cmp(&b.id));
    for r in &records {
        *summary.verdicts.entry(r.verdict).or_default() += 1;
    }
    write_jsonl(&records_path, &records)?;
    Ok(summary)
}
