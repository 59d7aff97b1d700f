//! Acceptance checks, one line per criterion.
//!
//! Exits nonzero when a criterion fails, except for those listed in
//! `KNOWN_UNMET`, which are still evaluated and reported as FAIL.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qmut_core::analytics::{complexity_correlations, pearson, survival_rate, Iv};
use qmut_core::catalog::{Gate, GateType};
use qmut_core::circuit::Circuit;
use qmut_core::corpus;
use qmut_core::mutation::Operator;
use qmut_core::oracle::chi2::chi_square_sf;
use qmut_core::oracle::{judge, OracleConfig};
use qmut_core::program::{known_algorithm, OutputDominance, ProgramMeta};
use qmut_core::recommend::{recommend, Query, Scope};
use qmut_core::sim::{run_statevector, sample_shots};
use qmut_core::{MutantRecord, OutcomeDistribution, VerdictKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use common::*;

/// Criteria evaluated and reported but not enforced on the exit code.
const KNOWN_UNMET: &[u8] = &[8];

const SHOTS: u64 = 100_000;

struct Line {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn check(id: u8, title: &'static str, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (pass, detail) = f();
    Line {
        id,
        title,
        pass,
        detail,
        elapsed: start.elapsed(),
    }
}

fn bell() -> Circuit {
    let mut c = Circuit::new("bell", 2, 2).with_meta(known_algorithm("ghz").unwrap());
    c.push(Gate::H, &[0], &[]).push(Gate::Cx, &[0, 1], &[]).measure_all();
    c
}

fn simulator() -> (bool, String) {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut shape_ok = true;
    for n in 2..=10 {
        let state = run_statevector(&corpus::ghz(n)).unwrap();
        let amps = state.amplitudes();
        let nonzero: Vec<usize> = (0..amps.len()).filter(|&i| amps[i].norm() > 1e-10).collect();
        shape_ok &= nonzero == [0, amps.len() - 1];
        for i in [0, amps.len() - 1] {
            worst = worst.max((amps[i] - std::f64::consts::FRAC_1_SQRT_2).norm());
        }
    }
    let d = sample_shots(&bell(), SHOTS, 7).unwrap();
    let f00 = d.frequency("00");
    let f11 = d.frequency("11");
    let keys_ok = d.counts.keys().all(|k| k == "00" || k == "11");
    let secs = start.elapsed().as_secs_f64();
    let pass = shape_ok && worst <= 1e-10 && keys_ok && (f00 - 0.5).abs() <= 0.01 && (f11 - 0.5).abs() <= 0.01 && secs < 5.0;
    (
        pass,
        format!("GHZ-2..10 max amplitude error {worst:.1e}; Bell 00={f00:.4} 11={f11:.4}; {secs:.2}s"),
    )
}

fn random_distribution(rng: &mut ChaCha8Rng) -> OutcomeDistribution {
    let width = rng.random_range(1..=5);
    let keys = rng.random_range(1..=(1usize << width));
    let counts: Vec<(String, u64)> = (0..keys)
        .map(|_| {
            let v = rng.random_range(0..(1u64 << width));
            (qmut_core::sim::bitstring(v, width), rng.random_range(1..5000))
        })
        .collect();
    let mut merged: BTreeMap<String, u64> = BTreeMap::new();
    for (k, c) in counts {
        *merged.entry(k).or_default() += c;
    }
    OutcomeDistribution::from_counts(width, merged)
}

fn oracle_soundness() -> (bool, String) {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut self_ok = 0;
    for i in 0..100 {
        let d = random_distribution(&mut rng);
        let meta = ProgramMeta {
            output_dominance: if i % 2 == 0 {
                OutputDominance::DiverseOutput
            } else {
                OutputDominance::OutputDominant
            },
            ..Default::default()
        };
        if judge(&d, &d, &meta, &cfg).unwrap().kind == VerdictKind::Survived {
            self_ok += 1;
        }
    }
    let c = bell();
    let expected = sample_shots(&c, SHOTS, 7).unwrap();
    let mut killed = 0;
    for seed in 1000..1200 {
        let observed = sample_shots(&c, SHOTS, seed).unwrap();
        if judge(&expected, &observed, &c.meta, &cfg).unwrap().kind != VerdictKind::Survived {
            killed += 1;
        }
    }
    let rate = f64::from(killed) / 200.0;
    let secs = start.elapsed().as_secs_f64();
    (
        self_ok == 100 && rate <= 0.03 && secs < 60.0,
        format!("self-judge survived {self_ok}/100; Bell re-execution false kills {killed}/200 ({:.1}%); {secs:.1}s", rate * 100.0),
    )
}

fn chi_square_numeric() -> (bool, String) {
    let mut pairs = vec![(6.635, 1usize)];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    while pairs.len() < 50 {
        let df = rng.random_range(1..=60);
        let stat = rng.random_range(0.0..3.0) * df as f64 + rng.random_range(0.01..5.0);
        pairs.push((stat, df));
    }
    let mut worst: f64 = 0.0;
    for &(stat, df) in &pairs {
        let reference = ChiSquared::new(df as f64).unwrap().sf(stat);
        worst = worst.max((chi_square_sf(stat, df) - reference).abs());
    }
    let p = chi_square_sf(6.635, 1);
    (
        worst <= 1e-8 && (p - 0.01).abs() <= 1e-4,
        format!("max |p - reference| {worst:.1e} over {} pairs; p(6.635, 1) = {p:.6}", pairs.len()),
    )
}

fn id_neutrality(records: &[MutantRecord]) -> (bool, String) {
    let dominant: std::collections::BTreeSet<&str> = records
        .iter()
        .filter(|r| r.output_dominance == OutputDominance::OutputDominant)
        .map(|r| r.origin.as_str())
        .collect();
    let (s, t) = survival(records, |r| {
        r.output_dominance == OutputDominance::OutputDominant && r.operator == Operator::Add && r.gate == Gate::Id
    });
    (
        dominant.len() >= 5 && t > 0 && s == t,
        format!("{} dominant-output circuits; Add-id survived {s}/{t}", dominant.len()),
    )
}

fn ghz_direction(records: &[MutantRecord]) -> (bool, String) {
    let is_ghz = |r: &MutantRecord| r.algorithm == "ghz" && (3..=8).contains(&r.metrics.num_qubits);
    let (cz_s, cz_t) = survival(records, |r| is_ghz(r) && r.operator == Operator::Add && r.gate == Gate::Cz);
    let (cx_s, cx_t) = survival(records, |r| is_ghz(r) && r.operator == Operator::Add && r.gate == Gate::Cx);
    let cx_sr = cx_s as f64 / cx_t as f64;
    (
        cz_t > 0 && cz_s == cz_t && cx_t > 0 && cx_sr <= 0.20,
        format!("GHZ-3..8 Add-cz {cz_s}/{cz_t}; Add-cx {cx_s}/{cx_t} = {:.1}%", cx_sr * 100.0),
    )
}

fn hadamard_vs_t(records: &[MutantRecord]) -> (bool, String) {
    let (hs, ht) = survival(records, |r| r.gate_type == GateType::Hadamard);
    let (ts, tt) = survival(records, |r| r.gate_type == GateType::T);
    let h = hs as f64 / ht as f64;
    let t = ts as f64 / tt as f64;
    (h < t, format!("SR(Hadamard) = {h:.4} ({hs}/{ht}); SR(T) = {t:.4} ({ts}/{tt})"))
}

fn analytics_exactness() -> (bool, String) {
    let records = synthetic_records(10_000, 7);
    let groupings = subsets(&Iv::ALL, 3);
    let mut mismatches = 0;
    for g in &groupings {
        let table = survival_rate(&records, g);
        let mut brute: HashMap<Vec<String>, (u64, u64)> = HashMap::new();
        for r in records.iter().filter(|r| r.verdict != VerdictKind::Stillborn) {
            let key = g.iter().map(|iv| iv.value_of(r).to_string()).collect();
            let e = brute.entry(key).or_default();
            e.1 += 1;
            if r.verdict == VerdictKind::Survived {
                e.0 += 1;
            }
        }
        let ours: HashMap<Vec<String>, (u64, u64)> = table
            .cells
            .iter()
            .map(|(k, c)| (k.iter().map(ToString::to_string).collect(), (c.survivors, c.total)))
            .collect();
        if ours != brute {
            mismatches += 1;
        }
        for i in 0..g.len() {
            if g.len() < 2 {
                break;
            }
            let mut keep = g.clone();
            keep.remove(i);
            if table.collapse(&keep) != survival_rate(&records, &keep) {
                mismatches += 1;
            }
        }
    }
    (
        mismatches == 0,
        format!("{} groupings over 10000 records; {mismatches} mismatches", groupings.len()),
    )
}

fn pearson_check(records: &[MutantRecord]) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.random_range(3..=1000);
        let offset = rng.random_range(-1e3..1e3);
        let x: Vec<f64> = (0..n).map(|_| offset + rng.random_range(-10.0..10.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.3 * v + rng.random_range(-5.0..5.0)).collect();
        worst = worst.max((pearson(&x, &y).unwrap() - two_pass_pearson(&x, &y)).abs());
    }
    let corr = complexity_correlations(records);
    let mut rq3 = true;
    let mut parts = Vec::new();
    for (name, r) in &corr {
        match r {
            Ok(v) => {
                rq3 &= v.abs() < 0.3;
                parts.push(format!("{name}={v:+.3}"));
            }
            Err(e) => {
                rq3 = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    (
        worst <= 1e-12 && rq3,
        format!("max |r - two-pass| {worst:.1e} on 20 vectors; |r| < 0.3: {} ({})", if rq3 { "yes" } else { "no" }, parts.join(", ")),
    )
}

fn recommender_check() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut cases = 0;
    let mut failures = 0;
    for round in 0..12 {
        let store = synthetic_records(rng.random_range(50..=1000), 100 + round);
        let scope = match round % 4 {
            0 => Scope::All,
            1 => Scope::OutputDominance(OutputDominance::DiverseOutput),
            2 => Scope::AlgorithmGroup(store[0].algorithm_group),
            _ => Scope::Algorithm(store[1].algorithm.clone()),
        };
        let lo = rng.random_range(0.0..0.8);
        let hi = (lo + rng.random_range(0.0..0.4f64)).min(1.0);
        let q = Query {
            scope,
            operators: (round % 3 == 0).then(|| vec![Operator::Add, Operator::Replace]),
            gates: (round % 5 == 1).then(|| vec![Gate::H, Gate::Cx, Gate::T, Gate::Rz]),
            gate_types: None,
            gate_sizes: None,
            position_buckets: (round % 4 == 2).then(|| vec![10, 50, 100]),
            target_sr: (lo, hi),
            max_results: rng.random_range(1..=40),
        };
        let a = recommend(&store, &q).unwrap();
        let b = recommend(&store, &q).unwrap();
        let ids: Vec<String> = a.items.iter().map(|i| i.record.id.clone()).collect();
        let filters_ok = a.items.iter().all(|i| {
            let r = &i.record;
            q.passes_filters(r) && q.scope.contains(r) && lo <= i.combination_sr && i.combination_sr <= hi
        });
        cases += 1;
        if ids != exhaustive_recommend(&store, &q) || !filters_ok || a.items != b.items || ids.len() > q.max_results {
            failures += 1;
        }
    }
    (failures == 0, format!("{cases} random stores and queries; {failures} disagreements with the exhaustive selector"))
}

fn main() -> ExitCode {
    let mut lines = vec![
        check(1, "simulator correctness", simulator),
        check(2, "oracle soundness", oracle_soundness),
        check(3, "chi-square numerics", chi_square_numeric),
    ];

    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let records = run_pipeline(&corpus_config(first.path()));
    let once = start.elapsed();
    run_pipeline(&corpus_config(second.path()));
    let twice = start.elapsed();

    lines.push(check(4, "Add-id neutrality on dominant-output programs", || id_neutrality(&records)));
    lines.push(check(5, "GHZ cz vs cx insertion direction", || ghz_direction(&records)));
    lines.push(check(6, "Hadamard vs T direction", || hadamard_vs_t(&records)));
    lines.push(check(7, "analytics exactness", analytics_exactness));
    lines.push(check(8, "Pearson accuracy and complexity correlations", || pearson_check(&records)));
    lines.push(check(9, "recommender equivalence", recommender_check));
    lines.push(check(10, "end-to-end determinism", || {
        let a = snapshot(first.path());
        let b = snapshot(second.path());
        let secs = twice.as_secs_f64();
        (
            a == b && secs < 600.0,
            format!(
                "{} artifacts, {} mutants; byte-identical: {}; two pipelines {secs:.1}s (one {:.1}s)",
                a.len(),
                records.len(),
                a == b,
                once.as_secs_f64()
            ),
        )
    }));

    let mut blocking = 0;
    for l in &lines {
        let status = match (l.pass, KNOWN_UNMET.contains(&l.id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                blocking += 1;
                "FAIL"
            }
        };
        println!("[{status}] criterion {:>2}: {}: {} [{:.2}s]", l.id, l.title, l.detail, l.elapsed.as_secs_f64());
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    println!("acceptance: {passed}/{} criteria pass", lines.len());
    if blocking > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
