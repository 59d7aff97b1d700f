//! Corpus loading and the built-in desk corpus.
//!
//! A corpus directory holds `.qasm` files plus an optional `corpus.toml`
//! sidecar mapping file stems to program labels:
//!
//! ```toml
//! [programs.ghz_3]
//! algorithm = "ghz"
//! algorithm_group = "ghz"
//! output_dominance = "diverse"
//! ```
//!
//! Stems missing from the sidecar fall back to the MQT Bench naming
//! convention (`<algorithm>_...`).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::Gate;
use crate::circuit::{parse_qasm, serialize_qasm, Circuit};
use crate::error::{Error, Result};
use crate::program::{infer_from_stem, known_algorithm, ProgramMeta};

pub const SIDECAR: &str = "corpus.toml";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(default)]
    pub programs: BTreeMap<String, ProgramMeta>,
}

impl Sidecar {
    pub fn load(dir: &Path) -> Result<Option<Sidecar>> {
        let path = dir.join(SIDECAR);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        toml::from_str(&text)
            .map(Some)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sidecar serializes")
    }
}

/// Resolves program labels for a stem: sidecar first, then the MQT name
/// table, then the default labels.
pub fn resolve_meta(stem: &str, sidecar: Option<&Sidecar>) -> (ProgramMeta, bool) {
    if let Some(m) = sidecar.and_then(|s| s.programs.get(stem)) {
        return (m.clone(), true);
    }
    match infer_from_stem(stem) {
        Some(m) => (m, true),
        None => (ProgramMeta::default(), false),
    }
}

/// One input file that failed to load.
#[derive(Debug)]
pub struct LoadFailure {
    pub path: PathBuf,
    pub error: Error,
}

#[derive(Debug, Default)]
pub struct LoadedCorpus {
    /// Sorted by circuit name.
    pub circuits: Vec<Circuit>,
    pub failures: Vec<LoadFailure>,
    /// Stems whose labels fell back to the defaults.
    pub unlabeled: Vec<String>,
}

/// Expands input paths: directories contribute their `.qasm` files,
/// anything containing glob metacharacters is expanded, plain files are
/// taken as-is. The result is sorted and deduplicated.
pub fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        let text = input.to_string_lossy();
        if text.contains(['*', '?', '[']) {
            let paths = glob::glob(&text).map_err(|e| Error::Config(format!("bad glob `{text}`: {e}")))?;
            for p in paths {
                let p = p.map_err(|e| Error::io(e.path(), std::io::Error::other(e.to_string())))?;
                if p.is_file() {
                    files.push(p);
                }
            }
        } else if input.is_dir() {
            let entries = fs::read_dir(input).map_err(|e| Error::io(input, e))?;
            for entry in entries {
                let p = entry.map_err(|e| Error::io(input, e))?.path();
                if p.is_file() && p.extension().is_some_and(|x| x == "qasm") {
                    files.push(p);
                }
            }
        } else if input.is_file() {
            files.push(input.clone());
        } else {
            return Err(Error::io(input, std::io::Error::from(std::io::ErrorKind::NotFound)));
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

pub fn load_circuit(path: &Path, sidecar: Option<&Sidecar>) -> Result<(Circuit, bool)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut c = parse_qasm(&text)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let (meta, known) = resolve_meta(&stem, sidecar);
    c.name = stem;
    c.meta = meta;
    Ok((c, known))
}

/// Loads every input. Per-file failures are collected rather than fatal;
/// duplicate circuit names are an error.
pub fn load_corpus(inputs: &[PathBuf]) -> Result<LoadedCorpus> {
    let files = expand_inputs(inputs)?;
    let mut sidecars: BTreeMap<PathBuf, Option<Sidecar>> = BTreeMap::new();
    let mut out = LoadedCorpus::default();
    for path in files {
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        if !sidecars.contains_key(&dir) {
            sidecars.insert(dir.clone(), Sidecar::load(&dir)?);
        }
        match load_circuit(&path, sidecars[&dir].as_ref()) {
            Ok((c, known)) => {
                if !known {
                    out.unlabeled.push(c.name.clone());
                }
                out.circuits.push(c);
            }
            Err(error) => out.failures.push(LoadFailure { path, error }),
        }
    }
    out.circuits.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(w) = out.circuits.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(Error::Config(format!("duplicate circuit name `{}`", w[0].name)));
    }
    Ok(out)
}

/// Writes circuits as `<name>.qasm` plus a sidecar with their labels.
pub fn export(circuits: &[Circuit], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut sidecar = Sidecar::default();
    for c in circuits {
        let path = dir.join(format!("{}.qasm", c.name));
        fs::write(&path, serialize_qasm(c)).map_err(|e| Error::io(&path, e))?;
        sidecar.programs.insert(c.name.clone(), c.meta.clone());
    }
    let path = dir.join(SIDECAR);
    fs::write(&path, sidecar.to_toml()).map_err(|e| Error::io(&path, e))
}

fn labeled(algorithm: &str, n: usize, num_qubits: usize, num_clbits: usize) -> Circuit {
    let meta = known_algorithm(algorithm).unwrap_or_else(|| panic!("unknown algorithm {algorithm}"));
    Circuit::new(format!("{algorithm}_{n}"), num_qubits, num_clbits).with_meta(meta)
}

fn angles(tag: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(tag);
    (0..count).map(|_| rng.random_range(0.0..2.0 * PI)).collect()
}

pub fn ghz(n: usize) -> Circuit {
    let mut c = labeled("ghz", n, n, n);
    c.push(Gate::H, &[0], &[]);
    for q in 0..n - 1 {
        c.push(Gate::Cx, &[q, q + 1], &[]);
    }
    c.measure_all();
    c
}

/// Deutsch-Jozsa over `n - 1` inputs with a balanced oracle; the inputs
/// read out all ones.
pub fn dj(n: usize) -> Circuit {
    let inputs = n - 1;
    let anc = inputs;
    let mut c = labeled("dj", n, n, inputs);
    c.push(Gate::X, &[anc], &[]);
    for q in 0..n {
        c.push(Gate::H, &[q], &[]);
    }
    for q in (1..inputs).step_by(2) {
        c.push(Gate::X, &[q], &[]);
    }
    for q in 0..inputs {
        c.push(Gate::Cx, &[q, anc], &[]);
    }
    for q in (1..inputs).step_by(2) {
        c.push(Gate::X, &[q], &[]);
    }
    for q in 0..inputs {
        c.push(Gate::H, &[q], &[]);
    }
    for q in 0..inputs {
        c.measure(q, q);
    }
    c
}

pub fn graphstate(n: usize) -> Circuit {
    let mut c = labeled("graphstate", n, n, n);
    for q in 0..n {
        c.push(Gate::H, &[q], &[]);
    }
    for q in 0..n {
        c.push(Gate::Cz, &[q, (q + 1) % n], &[]);
    }
    c.measure_all();
    c
}

fn push_qft(c: &mut Circuit, qubits: &[usize]) {
    let m = qubits.len();
    for j in (0..m).rev() {
        c.push(Gate::H, &[qubits[j]], &[]);
        for k in (0..j).rev() {
            let angle = PI / f64::from(1u32 << (j - k));
            c.push(Gate::Cp, &[qubits[k], qubits[j]], &[angle]);
        }
    }
    for i in 0..m / 2 {
        c.push(Gate::Swap, &[qubits[i], qubits[m - 1 - i]], &[]);
    }
}

fn push_inverse_qft(c: &mut Circuit, qubits: &[usize]) {
    let m = qubits.len();
    for i in 0..m / 2 {
        c.push(Gate::Swap, &[qubits[i], qubits[m - 1 - i]], &[]);
    }
    for j in 0..m {
        for k in 0..j {
            let angle = -PI / f64::from(1u32 << (j - k));
            c.push(Gate::Cp, &[qubits[k], qubits[j]], &[angle]);
        }
        c.push(Gate::H, &[qubits[j]], &[]);
    }
}

pub fn qft(n: usize) -> Circuit {
    let mut c = labeled("qft", n, n, n);
    let qs: Vec<usize> = (0..n).collect();
    c.push(Gate::X, &[0], &[]);
    push_qft(&mut c, &qs);
    c.measure_all();
    c
}

pub fn qftentangled(n: usize) -> Circuit {
    let mut c = labeled("qftentangled", n, n, n);
    c.push(Gate::H, &[n - 1], &[]);
    for q in (1..n).rev() {
        c.push(Gate::Cx, &[q, q - 1], &[]);
    }
    let qs: Vec<usize> = (0..n).collect();
    push_qft(&mut c, &qs);
    c.measure_all();
    c
}

/// Phase estimation of `p(2*pi*phase)` on an eigenstate, with `n - 1`
/// counting qubits.
fn qpe(algorithm: &str, n: usize, phase: f64) -> Circuit {
    let m = n - 1;
    let target = m;
    let mut c = labeled(algorithm, n, n, m);
    c.push(Gate::X, &[target], &[]);
    for q in 0..m {
        c.push(Gate::H, &[q], &[]);
    }
    for q in 0..m {
        let angle = 2.0 * PI * phase * f64::from(1u32 << q);
        c.push(Gate::Cp, &[q, target], &[angle.rem_euclid(2.0 * PI)]);
    }
    let counting: Vec<usize> = (0..m).collect();
    push_inverse_qft(&mut c, &counting);
    for q in 0..m {
        c.measure(q, q);
    }
    c
}

/// The phase is an exact `(n - 1)`-bit fraction, so one outcome has
/// probability one.
pub fn qpeexact(n: usize) -> Circuit {
    let m = n - 1;
    let k = (1u32 << m) / 3 + 1;
    qpe("qpeexact", n, f64::from(k) / f64::from(1u32 << m))
}

pub fn qpeinexact(n: usize) -> Circuit {
    qpe("qpeinexact", n, 1.0 / 3.0)
}

fn push_ccz(c: &mut Circuit, a: usize, b: usize, t: usize) {
    c.push(Gate::H, &[t], &[]);
    c.push(Gate::Ccx, &[a, b, t], &[]);
    c.push(Gate::H, &[t], &[]);
}

/// Grover search on 2 or 3 qubits for the all-ones item.
pub fn grover(n: usize) -> Circuit {
    assert!(n == 2 || n == 3, "grover builder supports 2 or 3 qubits");
    let mut c = labeled("grover-noancilla", n, n, n);
    let iterations = if n == 2 { 1 } else { 2 };
    let mark = |c: &mut Circuit| {
        if n == 2 {
            c.push(Gate::Cz, &[0, 1], &[]);
        } else {
            push_ccz(c, 0, 1, 2);
        }
    };
    for q in 0..n {
        c.push(Gate::H, &[q], &[]);
    }
    for _ in 0..iterations {
        mark(&mut c);
        for q in 0..n {
            c.push(Gate::H, &[q], &[]);
            c.push(Gate::X, &[q], &[]);
        }
        mark(&mut c);
        for q in 0..n {
            c.push(Gate::X, &[q], &[]);
            c.push(Gate::H, &[q], &[]);
        }
    }
    c.measure_all();
    c
}

/// One-layer MaxCut QAOA on a ring.
pub fn qaoa(n: usize) -> Circuit {
    let mut c = labeled("qaoa", n, n, n);
    let (gamma, beta) = (0.9, 0.35);
    for q in 0..n {
        c.push(Gate::H, &[q], &[]);
    }
    for q in 0..n {
        c.push(Gate::Rzz, &[q, (q + 1) % n], &[2.0 * gamma]);
    }
    for q in 0..n {
        c.push(Gate::Rx, &[q], &[2.0 * beta]);
    }
    c.measure_all();
    c
}

pub fn realamprandom(n: usize) -> Circuit {
    let reps = 2;
    let mut c = labeled("realamprandom", n, n, n);
    let theta = angles(0x5EA1 + n as u64, n * (reps + 1));
    let mut t = theta.iter();
    for layer in 0..=reps {
        for q in 0..n {
            c.push(Gate::Ry, &[q], &[*t.next().unwrap()]);
        }
        if layer < reps {
            for q in (0..n - 1).rev() {
                c.push(Gate::Cx, &[q, q + 1], &[]);
            }
        }
    }
    c.measure_all();
    c
}

pub fn su2random(n: usize) -> Circuit {
    let reps = 2;
    let mut c = labeled("su2random", n, n, n);
    let theta = angles(0x5D2 + n as u64, 2 * n * (reps + 1));
    let mut t = theta.iter();
    for layer in 0..=reps {
        for q in 0..n {
            c.push(Gate::Ry, &[q], &[*t.next().unwrap()]);
        }
        for q in 0..n {
            c.push(Gate::Rz, &[q], &[*t.next().unwrap()]);
        }
        if layer < reps {
            for q in 0..n - 1 {
                c.push(Gate::Cx, &[q, q + 1], &[]);
            }
        }
    }
    c.measure_all();
    c
}

pub fn twolocalrandom(n: usize) -> Circuit {
    let reps = 2;
    let mut c = labeled("twolocalrandom", n, n, n);
    let theta = angles(0x2C + n as u64, n * (reps + 1));
    let mut t = theta.iter();
    for layer in 0..=reps {
        for q in 0..n {
            c.push(Gate::Ry, &[q], &[*t.next().unwrap()]);
        }
        if layer < reps {
            for a in 0..n {
                for b in a + 1..n {
                    c.push(Gate::Cz, &[a, b], &[]);
                }
            }
        }
    }
    c.measure_all();
    c
}

/// W state: the excitation starts on qubit 0 and each step keeps a
/// `1/(n - i)` share of it, passing the rest on with a controlled `ry`.
pub fn wstate(n: usize) -> Circuit {
    let mut c = labeled("wstate", n, n, n);
    c.push(Gate::X, &[0], &[]);
    for i in 0..n - 1 {
        let theta = 2.0 * (1.0 / (n - i) as f64).sqrt().acos();
        c.push(Gate::Ry, &[i + 1], &[theta / 2.0]);
        c.push(Gate::Cx, &[i, i + 1], &[]);
        c.push(Gate::Ry, &[i + 1], &[-theta / 2.0]);
        c.push(Gate::Cx, &[i, i + 1], &[]);
        c.push(Gate::Cx, &[i + 1, i], &[]);
    }
    c.measure_all();
    c
}

fn push_cry(c: &mut Circuit, control: usize, target: usize, angle: f64) {
    c.push(Gate::Ry, &[target], &[angle / 2.0]);
    c.push(Gate::Cx, &[control, target], &[]);
    c.push(Gate::Ry, &[target], &[-angle / 2.0]);
    c.push(Gate::Cx, &[control, target], &[]);
}

/// Canonical amplitude estimation of `p = 0.2` with `n - 1` evaluation
/// qubits; the Grover operator of a one-qubit `A = ry(2 theta)` is
/// `ry(4 theta)`.
pub fn ae(n: usize) -> Circuit {
    let m = n - 1;
    let obj = m;
    let theta = 0.2f64.sqrt().asin();
    let mut c = labeled("ae", n, n, m);
    c.push(Gate::Ry, &[obj], &[2.0 * theta]);
    for q in 0..m {
        c.push(Gate::H, &[q], &[]);
    }
    for q in 0..m {
        let angle = (4.0 * theta * f64::from(1u32 << q)).rem_euclid(4.0 * PI);
        push_cry(&mut c, q, obj, angle);
    }
    let eval: Vec<usize> = (0..m).collect();
    push_inverse_qft(&mut c, &eval);
    for q in 0..m {
        c.measure(q, q);
    }
    c
}

/// Three steps of a coined walk on a 4-cycle: coin qubit 0, position
/// qubits 1 (low) and 2 (high).
pub fn qwalk(steps: usize) -> Circuit {
    let (coin, lo, hi) = (0, 1, 2);
    let mut c = Circuit::new("qwalk-noancilla_3", 3, 3)
        .with_meta(known_algorithm("qwalk-noancilla").expect("known algorithm"));
    for _ in 0..steps {
        c.push(Gate::H, &[coin], &[]);
        c.push(Gate::Ccx, &[coin, lo, hi], &[]);
        c.push(Gate::Cx, &[coin, lo], &[]);
        c.push(Gate::X, &[coin], &[]);
        c.push(Gate::X, &[lo], &[]);
        c.push(Gate::Ccx, &[coin, lo, hi], &[]);
        c.push(Gate::X, &[lo], &[]);
        c.push(Gate::Cx, &[coin, lo], &[]);
        c.push(Gate::X, &[coin], &[]);
    }
    c.measure_all();
    c
}

/// A trained-generator-shaped ansatz: `ry` layers joined by `cz` chains.
pub fn qgan(n: usize) -> Circuit {
    let mut c = labeled("qgan", n, n, n);
    let theta = angles(0x6A2 + n as u64, 2 * n);
    for q in 0..n {
        c.push(Gate::H, &[q], &[]);
    }
    for (q, &t) in theta.iter().take(n).enumerate() {
        c.push(Gate::Ry, &[q], &[t]);
    }
    for q in 0..n - 1 {
        c.push(Gate::Cz, &[q, q + 1], &[]);
    }
    for q in 0..n {
        c.push(Gate::Ry, &[q], &[theta[n + q]]);
    }
    c.measure_all();
    c
}

/// The shipped desk corpus, sorted by name. Every circuit has 2 to 8
/// qubits.
pub fn desk_corpus() -> Vec<Circuit> {
    let mut cs = Vec::new();
    cs.extend([3, 4, 5].map(ae));
    cs.push(qwalk(3));
    cs.extend((3..=8).map(ghz));
    cs.extend([3, 5, 7].map(dj));
    cs.extend([4, 6].map(graphstate));
    cs.extend([3, 5].map(qft));
    cs.extend([3, 5].map(qftentangled));
    cs.extend([4, 6].map(qpeexact));
    cs.extend([4, 5].map(qpeinexact));
    cs.extend([2, 3].map(grover));
    cs.extend([4, 6].map(qaoa));
    cs.extend([3, 5].map(realamprandom));
    cs.extend([4].map(su2random));
    cs.extend([4].map(twolocalrandom));
    cs.extend([3, 5].map(wstate));
    cs.extend([4].map(qgan));
    cs.sort_by(|a, b| a.name.cmp(&b.name));
    cs
}
