//! Ideal state-vector simulation and seeded shot sampling.
//!
//! Basis index bit `q` is the state of qubit `q`. Sampling draws from the
//! marginal over measured qubits of the final state (all measurements are
//! terminal). The sampler is ChaCha8 seeded via `seed_from_u64`, with one
//! uniform draw per shot mapped through the cumulative marginal in ascending
//! outcome order.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::circuit::{Circuit, GateApplication};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_QUBITS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0...0>
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        StateVector {
            num_qubits,
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `U ⊗ I` in place, where bit `k` of the local index of `U`
    /// addresses `g.operands[k]`.
    pub fn apply(&mut self, g: &GateApplication) -> Result<()> {
        g.validate(self.num_qubits)?;
        let u = catalog::unitary(g.gate, &g.params);
        let dim = u.len();
        let offsets: Vec<usize> = (0..dim)
            .map(|local| {
                g.operands
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| local >> k & 1 == 1)
                    .map(|(_, &q)| 1usize << q)
                    .sum()
            })
            .collect();
        let mask: usize = g.operands.iter().map(|&q| 1usize << q).sum();
        let mut gathered = vec![Complex64::new(0.0, 0.0); dim];
        for base in 0..self.amplitudes.len() {
            if base & mask != 0 {
                continue;
            }
            for (slot, off) in gathered.iter_mut().zip(&offsets) {
                *slot = self.amplitudes[base | off];
            }
            for (row, off) in u.iter().zip(&offsets) {
                self.amplitudes[base | off] = row
                    .iter()
                    .zip(&gathered)
                    .fold(Complex64::new(0.0, 0.0), |acc, (m, a)| acc + m * a);
            }
        }
        Ok(())
    }

    /// Purity `tr(rho_q^2)` of the reduced state of qubit `q`.
    pub fn reduced_purity(&self, q: usize) -> f64 {
        let bit = 1usize << q;
        let (mut p0, mut p1) = (0.0, 0.0);
        let mut coherence = Complex64::new(0.0, 0.0);
        for i in (0..self.amplitudes.len()).filter(|i| i & bit == 0) {
            let (a, b) = (self.amplitudes[i], self.amplitudes[i | bit]);
            p0 += a.norm_sqr();
            p1 += b.norm_sqr();
            coherence += a * b.conj();
        }
        p0 * p0 + p1 * p1 + 2.0 * coherence.norm_sqr()
    }
}

pub fn apply_gate(mut state: StateVector, g: &GateApplication) -> Result<StateVector> {
    state.apply(g)?;
    Ok(state)
}

pub fn run_statevector(c: &Circuit) -> Result<StateVector> {
    run_statevector_with_budget(c, DEFAULT_MAX_QUBITS)
}

pub fn run_statevector_with_budget(c: &Circuit, max_qubits: usize) -> Result<StateVector> {
    if c.num_qubits > max_qubits {
        return Err(Error::QubitBudget {
            qubits: c.num_qubits,
            budget: max_qubits,
        });
    }
    let mut state = StateVector::zero(c.num_qubits);
    for g in &c.gates {
        state.apply(g)?;
    }
    Ok(state)
}

/// Outcome probabilities keyed by the classical register value (bit `k` is
/// clbit `k`). Zero-probability outcomes are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub width: usize,
    pub probabilities: BTreeMap<u64, f64>,
}

impl Marginal {
    pub fn of_state(state: &StateVector, c: &Circuit) -> Result<Self> {
        if c.measurements.is_empty() {
            return Err(Error::NoMeasurements);
        }
        if c.num_clbits > 64 {
            return Err(Error::Config(format!(
                "classical width {} exceeds 64 bits",
                c.num_clbits
            )));
        }
        let mut probabilities = BTreeMap::new();
        for (index, amp) in state.amplitudes().iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut outcome = 0u64;
            for m in &c.measurements {
                let bit = 1u64 << m.clbit;
                if index >> m.qubit & 1 == 1 {
                    outcome |= bit;
                } else {
                    outcome &= !bit;
                }
            }
            *probabilities.entry(outcome).or_insert(0.0) += p;
        }
        Ok(Marginal {
            width: c.num_clbits,
            probabilities,
        })
    }

    pub fn keyed(&self) -> BTreeMap<String, f64> {
        self.probabilities
            .iter()
            .map(|(&k, &p)| (bitstring(k, self.width), p))
            .collect()
    }

    pub fn sample(&self, shots: u64, seed: u64) -> OutcomeDistribution {
        let outcomes: Vec<u64> = self.probabilities.keys().copied().collect();
        let mut cumulative = Vec::with_capacity(outcomes.len());
        let mut running = 0.0;
        for p in self.probabilities.values() {
            running += p;
            cumulative.push(running);
        }
        let total = running;
        let mut hits = vec![0u64; outcomes.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * total;
            let slot = cumulative.partition_point(|&c| c <= u).min(outcomes.len() - 1);
            hits[slot] += 1;
        }
        let counts = outcomes
            .iter()
            .zip(hits)
            .filter(|(_, n)| *n > 0)
            .map(|(&k, n)| (bitstring(k, self.width), n))
            .collect();
        OutcomeDistribution {
            width: self.width,
            shots,
            counts,
        }
    }
}

/// Clbit 0 is the rightmost character.
pub fn bitstring(value: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|k| if value >> k & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub width: usize,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl OutcomeDistribution {
    pub fn from_counts<I, S>(width: usize, counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let counts: BTreeMap<String, u64> = counts
            .into_iter()
            .map(|(k, v)| (k.into(), v))
            .filter(|(_, v)| *v > 0)
            .collect();
        OutcomeDistribution {
            width,
            shots: counts.values().sum(),
            counts,
        }
    }

    pub fn probabilities(&self) -> BTreeMap<String, f64> {
        self.counts
            .iter()
            .map(|(k, &n)| (k.clone(), n as f64 / self.shots as f64))
            .collect()
    }

    pub fn frequency(&self, key: &str) -> f64 {
        self.counts.get(key).copied().unwrap_or(0) as f64 / self.shots as f64
    }
}

pub fn marginal_probabilities(c: &Circuit, max_qubits: usize) -> Result<Marginal> {
    let state = run_statevector_with_budget(c, max_qubits)?;
    Marginal::of_state(&state, c)
}

pub fn sample_shots(c: &Circuit, shots: u64, seed: u64) -> Result<OutcomeDistribution> {
    sample_shots_with_budget(c, shots, seed, DEFAULT_MAX_QUBITS)
}

pub fn sample_shots_with_budget(
    c: &Circuit,
    shots: u64,
    seed: u64,
    max_qubits: usize,
) -> Result<OutcomeDistribution> {
    if c.measurements.is_empty() {
        return Err(Error::NoMeasurements);
    }
    if shots == 0 {
        return Err(Error::Config("shots must be at least 1".into()));
    }
    Ok(marginal_probabilities(c, max_qubits)?.sample(shots, seed))
}
