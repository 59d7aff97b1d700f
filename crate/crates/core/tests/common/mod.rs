#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qmut_core::analytics::{Iv, IvValue};
use qmut_core::campaign::{self, AnalyzeOptions, CampaignConfig};
use qmut_core::catalog::{mutatable_gates, Gate};
use qmut_core::circuit::{CircuitMetrics, EntanglementMethod};
use qmut_core::mutation::{MutantSpec, Operator};
use qmut_core::program::{ProgramMeta, KNOWN_ALGORITHMS};
use qmut_core::recommend::{Query, Scope};
use qmut_core::{MutantRecord, Verdict, VerdictKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_config(out: &Path) -> CampaignConfig {
    CampaignConfig {
        inputs: vec![corpus_dir()],
        out_dir: out.to_path_buf(),
        ..Default::default()
    }
}

/// generate, run and analyze with default settings; returns the records.
pub fn run_pipeline(cfg: &CampaignConfig) -> Vec<MutantRecord> {
    campaign::generate(cfg).expect("generate");
    campaign::run(cfg).expect("run");
    let records: Vec<MutantRecord> = campaign::read_jsonl(&cfg.records_path()).expect("store");
    campaign::analyze(&records, &AnalyzeOptions::default(), &cfg.reports_dir()).expect("analyze");
    records
}

/// Every file under `dir`, relative path to contents.
pub fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

pub fn survival(records: &[MutantRecord], f: impl Fn(&MutantRecord) -> bool) -> (u64, u64) {
    let sel: Vec<&MutantRecord> = records.iter().filter(|r| !r.is_stillborn() && f(r)).collect();
    (sel.iter().filter(|r| r.survived()).count() as u64, sel.len() as u64)
}

/// Records with uniformly random labels and verdicts.
pub fn synthetic_records(n: usize, seed: u64) -> Vec<MutantRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gates: Vec<Gate> = mutatable_gates().collect();
    let origins = ["alpha", "beta", "gamma", "delta", "eps"];
    let kinds = [
        VerdictKind::Survived,
        VerdictKind::Survived,
        VerdictKind::KilledWOO,
        VerdictKind::KilledOPO,
        VerdictKind::Stillborn,
    ];
    (0..n)
        .map(|i| {
            let gate = gates[rng.random_range(0..gates.len())];
            let op = Operator::ALL[rng.random_range(0..3)];
            let total = rng.random_range(1..40);
            let position = rng.random_range(0..total);
            let (name, group, dominance) = KNOWN_ALGORITHMS[rng.random_range(0..KNOWN_ALGORITHMS.len())];
            let meta = ProgramMeta {
                algorithm: name.to_string(),
                algorithm_group: group,
                output_dominance: dominance,
            };
            let ops: Vec<usize> = (0..gate.arity()).collect();
            let params = vec![i as f64; gate.param_count()];
            let origin = origins[rng.random_range(0..origins.len())];
            let spec = MutantSpec::new(origin, op, position, gate, ops, params, total).unwrap();
            let q = rng.random_range(2..9);
            let metrics = CircuitMetrics {
                num_qubits: q,
                num_gates: total,
                num_measurements: q,
                depth: total.min(q + 3),
                num_single_gates: total / 2,
                num_multi_gates: total - total / 2,
                num_entangled_qubits: 0,
                entanglement_method: EntanglementMethod::Semantic,
            };
            let kind = kinds[rng.random_range(0..kinds.len())];
            let mut r = MutantRecord::new(&spec, Verdict { kind, p_value: None }, &meta, metrics);
            r.id = format!("r{i:06}");
            r
        })
        .collect()
}

/// Every non-empty subset of `ivs` with at most `k` members.
pub fn subsets(ivs: &[Iv], k: usize) -> Vec<Vec<Iv>> {
    (1u32..(1 << ivs.len()))
        .filter(|m| m.count_ones() as usize <= k)
        .map(|m| (0..ivs.len()).filter(|i| m & (1 << i) != 0).map(|i| ivs[i]).collect())
        .collect()
}

pub fn two_pass_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx.sqrt() * syy.sqrt())
}

fn in_scope(scope: &Scope, r: &MutantRecord) -> bool {
    match scope {
        Scope::All => true,
        Scope::Algorithm(a) => &r.algorithm == a,
        Scope::AlgorithmGroup(g) => r.algorithm_group == *g,
        Scope::OutputDominance(d) => r.output_dominance == *d,
    }
}

fn keep<T: PartialEq>(f: &Option<Vec<T>>, v: &T) -> bool {
    match f {
        None => true,
        Some(list) => list.contains(v),
    }
}

/// Quadratic reference selector: for each candidate, recount every
/// combination's SR by scanning the whole scoped store.
pub fn exhaustive_recommend(store: &[MutantRecord], q: &Query) -> Vec<String> {
    let scoped: Vec<&MutantRecord> = store
        .iter()
        .filter(|r| !r.is_stillborn() && in_scope(&q.scope, r))
        .collect();
    let combos = subsets(&Iv::MUTATION, 3);
    let (lo, hi) = q.target_sr;
    let mid = (lo + hi) / 2.0;
    let mut scored: Vec<(f64, String)> = Vec::new();
    for r in &scoped {
        if !(keep(&q.operators, &r.operator)
            && keep(&q.gates, &r.gate)
            && keep(&q.gate_types, &r.gate_type)
            && keep(&q.gate_sizes, &r.gate_size)
            && keep(&q.position_buckets, &r.position_bucket))
        {
            continue;
        }
        let mut best: Option<f64> = None;
        for combo in &combos {
            let key: Vec<IvValue> = combo.iter().map(|iv| iv.value_of(r)).collect();
            let members: Vec<&&MutantRecord> = scoped
                .iter()
                .filter(|o| combo.iter().map(|iv| iv.value_of(o)).collect::<Vec<_>>() == key)
                .collect();
            let sr = members.iter().filter(|o| o.survived()).count() as f64 / members.len() as f64;
            if lo <= sr && sr <= hi {
                let d = (sr - mid).abs();
                if best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
        if let Some(d) = best {
            scored.push((d, r.id.clone()));
        }
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    scored.truncate(q.max_results);
    scored.into_iter().map(|(_, id)| id).collect()
}
