//! Picks mutants whose characteristic combinations have a survival rate in
//! a requested band.
//!
//! Within the query scope, SR is computed for every 1-, 2- and 3-way
//! combination of the mutation characteristics. A record qualifies when at
//! least one of its combinations falls inside `[lo, hi]`; it is scored by the
//! combination closest to the band midpoint.

use serde::{Deserialize, Serialize};

use crate::analytics::{survival_rate, Iv, IvValue, SurvivalTable};
use crate::catalog::{Gate, GateType, SizeClass};
use crate::error::{Error, Result};
use crate::mutation::Operator;
use crate::program::{AlgorithmGroup, OutputDominance};
use crate::record::MutantRecord;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    #[default]
    All,
    Algorithm(String),
    AlgorithmGroup(AlgorithmGroup),
    OutputDominance(OutputDominance),
}

impl Scope {
    pub fn contains(&self, r: &MutantRecord) -> bool {
        match self {
            Scope::All => true,
            Scope::Algorithm(a) => &r.algorithm == a,
            Scope::AlgorithmGroup(g) => r.algorithm_group == *g,
            Scope::OutputDominance(d) => r.output_dominance == *d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub scope: Scope,
    pub operators: Option<Vec<Operator>>,
    pub gates: Option<Vec<Gate>>,
    pub gate_types: Option<Vec<GateType>>,
    pub gate_sizes: Option<Vec<SizeClass>>,
    pub position_buckets: Option<Vec<u32>>,
    pub target_sr: (f64, f64),
    pub max_results: usize,
}

impl Default for Query {
    fn default() -> Self {
        Query {
            scope: Scope::All,
            operators: None,
            gates: None,
            gate_types: None,
            gate_sizes: None,
            position_buckets: None,
            target_sr: (0.0, 1.0),
            max_results: 10,
        }
    }
}

fn allowed<T: PartialEq>(filter: &Option<Vec<T>>, value: &T) -> bool {
    filter.as_ref().is_none_or(|f| f.contains(value))
}

impl Query {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.target_sr;
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::Config(format!("target SR band [{lo}, {hi}] must satisfy 0 <= lo <= hi <= 1")));
        }
        if self.max_results == 0 {
            return Err(Error::Config("max_results must be at least 1".into()));
        }
        Ok(())
    }

    pub fn passes_filters(&self, r: &MutantRecord) -> bool {
        allowed(&self.operators, &r.operator)
            && allowed(&self.gates, &r.gate)
            && allowed(&self.gate_types, &r.gate_type)
            && allowed(&self.gate_sizes, &r.gate_size)
            && allowed(&self.position_buckets, &r.position_bucket)
    }

    fn midpoint(&self) -> f64 {
        (self.target_sr.0 + self.target_sr.1) / 2.0
    }

    fn in_band(&self, sr: f64) -> bool {
        self.target_sr.0 <= sr && sr <= self.target_sr.1
    }
}

/// Every 1-, 2- and 3-element subset of the mutation characteristics, in
/// lexicographic index order.
pub fn combination_groupings() -> Vec<Vec<Iv>> {
    let ivs = Iv::MUTATION;
    let n = ivs.len();
    let mut out = Vec::new();
    for size in 1..=3 {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| ivs[i]).collect());
            let mut k = size;
            while k > 0 && idx[k - 1] == n - size + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommended {
    pub record: MutantRecord,
    /// The best-scoring qualifying combination, as (variable, value) pairs.
    pub combination: Vec<(Iv, IvValue)>,
    pub combination_sr: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Recommendation {
    pub items: Vec<Recommended>,
    /// SR of the returned set itself.
    pub set_sr: Option<f64>,
    pub warning: Option<String>,
}

pub fn recommend(store: &[MutantRecord], q: &Query) -> Result<Recommendation> {
    q.validate()?;
    let scoped: Vec<&MutantRecord> = store
        .iter()
        .filter(|r| !r.is_stillborn() && q.scope.contains(r))
        .collect();
    let tables: Vec<SurvivalTable> = combination_groupings()
        .iter()
        .map(|g| survival_rate(scoped.iter().copied(), g))
        .collect();
    let mid = q.midpoint();

    let mut items: Vec<Recommended> = scoped
        .iter()
        .filter(|r| q.passes_filters(r))
        .filter_map(|r| {
            let mut best: Option<(f64, f64, &SurvivalTable, Vec<IvValue>)> = None;
            for t in &tables {
                let key: Vec<IvValue> = t.grouping.iter().map(|iv| iv.value_of(r)).collect();
                let sr = t.get(&key).expect("record counted in its own cell").sr();
                if !q.in_band(sr) {
                    continue;
                }
                let d = (sr - mid).abs();
                if best.as_ref().is_none_or(|b| d < b.0) {
                    best = Some((d, sr, t, key));
                }
            }
            best.map(|(distance, sr, t, key)| Recommended {
                record: (*r).clone(),
                combination: t.grouping.iter().copied().zip(key).collect(),
                combination_sr: sr,
                distance,
            })
        })
        .collect();
    items.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| a.record.id.cmp(&b.record.id)));
    items.truncate(q.max_results);

    let set_sr = (!items.is_empty())
        .then(|| items.iter().filter(|i| i.record.survived()).count() as f64 / items.len() as f64);
    let warning = items
        .is_empty()
        .then(|| "no mutants match the query and target survival band".to_string());
    Ok(Recommendation { items, set_sr, warning })
}
