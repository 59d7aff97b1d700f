//! Survival-rate tables over any grouping of independent variables, top-k
//! interaction rankings, and complexity correlations.
//!
//! SR = survivors / executed mutants in a cell. Stillborn records count in
//! neither numerator nor denominator, and empty cells are never emitted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::METRIC_NAMES;
use crate::error::{Error, Result};
use crate::record::MutantRecord;

/// Independent variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Iv {
    Operator,
    Gate,
    GateType,
    GateSize,
    PositionBucket,
    Algorithm,
    AlgorithmGroup,
    OutputDominance,
}

impl Iv {
    pub const ALL: [Iv; 8] = [
        Iv::Operator,
        Iv::Gate,
        Iv::GateType,
        Iv::GateSize,
        Iv::PositionBucket,
        Iv::Algorithm,
        Iv::AlgorithmGroup,
        Iv::OutputDominance,
    ];

    /// Characteristics of the mutation itself (as opposed to the program).
    pub const MUTATION: [Iv; 5] = [Iv::Operator, Iv::Gate, Iv::GateType, Iv::GateSize, Iv::PositionBucket];

    pub fn name(self) -> &'static str {
        match self {
            Iv::Operator => "operator",
            Iv::Gate => "gate",
            Iv::GateType => "gate_type",
            Iv::GateSize => "gate_size",
            Iv::PositionBucket => "position_bucket",
            Iv::Algorithm => "algorithm",
            Iv::AlgorithmGroup => "algorithm_group",
            Iv::OutputDominance => "output_dominance",
        }
    }

    pub fn value_of(self, r: &MutantRecord) -> IvValue {
        match self {
            Iv::Operator => IvValue::Text(r.operator.name().into()),
            Iv::Gate => IvValue::Text(r.gate.name().into()),
            Iv::GateType => IvValue::Text(r.gate_type.name().into()),
            Iv::GateSize => IvValue::Text(r.gate_size.name().into()),
            Iv::PositionBucket => IvValue::Num(r.position_bucket),
            Iv::Algorithm => IvValue::Text(r.algorithm.clone()),
            Iv::AlgorithmGroup => IvValue::Text(r.algorithm_group.name().into()),
            Iv::OutputDominance => IvValue::Text(r.output_dominance.name().into()),
        }
    }

    /// Parses a comma-separated list such as `operator,gate,position`.
    pub fn parse_list(s: &str) -> Result<Vec<Iv>> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Iv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Iv {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let iv = match s.to_ascii_lowercase().as_str() {
            "operator" => Iv::Operator,
            "gate" => Iv::Gate,
            "gate_type" | "gatetype" => Iv::GateType,
            "gate_size" | "gatesize" => Iv::GateSize,
            "position_bucket" | "position" => Iv::PositionBucket,
            "algorithm" => Iv::Algorithm,
            "algorithm_group" | "group" => Iv::AlgorithmGroup,
            "output_dominance" | "dominance" => Iv::OutputDominance,
            _ => return Err(Error::UnknownVariable(s.to_string())),
        };
        Ok(iv)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IvValue {
    Num(u32),
    Text(String),
}

impl fmt::Display for IvValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IvValue::Num(n) => write!(f, "{n}"),
            IvValue::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Cell {
    pub survivors: u64,
    pub total: u64,
}

impl Cell {
    pub fn sr(&self) -> f64 {
        self.survivors as f64 / self.total as f64
    }

    /// Exact comparison of survival rates by cross-multiplication.
    pub fn cmp_sr(&self, other: &Cell) -> std::cmp::Ordering {
        (self.survivors as u128 * other.total as u128).cmp(&(other.survivors as u128 * self.total as u128))
    }
}

pub type CellKey = Vec<IvValue>;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurvivalTable {
    pub grouping: Vec<Iv>,
    pub cells: BTreeMap<CellKey, Cell>,
}

impl SurvivalTable {
    pub fn new(grouping: &[Iv]) -> Self {
        SurvivalTable {
            grouping: grouping.to_vec(),
            cells: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, r: &MutantRecord) {
        if r.is_stillborn() {
            return;
        }
        let key = self.grouping.iter().map(|iv| iv.value_of(r)).collect();
        let cell = self.cells.entry(key).or_default();
        cell.total += 1;
        if r.survived() {
            cell.survivors += 1;
        }
    }

    /// Merges a table built over a disjoint shard of records.
    pub fn merge(&mut self, other: &SurvivalTable) {
        assert_eq!(self.grouping, other.grouping, "grouping mismatch");
        for (k, c) in &other.cells {
            let cell = self.cells.entry(k.clone()).or_default();
            cell.survivors += c.survivors;
            cell.total += c.total;
        }
    }

    /// Sums cells over every IV not in `keep`.
    pub fn collapse(&self, keep: &[Iv]) -> SurvivalTable {
        let idx: Vec<usize> = keep
            .iter()
            .map(|iv| self.grouping.iter().position(|g| g == iv).expect("iv in grouping"))
            .collect();
        let mut out = SurvivalTable::new(keep);
        for (k, c) in &self.cells {
            let key = idx.iter().map(|&i| k[i].clone()).collect();
            let cell = out.cells.entry(key).or_default();
            cell.survivors += c.survivors;
            cell.total += c.total;
        }
        out
    }

    pub fn get(&self, key: &[IvValue]) -> Option<&Cell> {
        self.cells.get(key)
    }

    pub fn label(&self) -> String {
        let names: Vec<&str> = self.grouping.iter().map(|iv| iv.name()).collect();
        if names.is_empty() {
            "overall".into()
        } else {
            names.join("_")
        }
    }

    /// RFC-4180 CSV: one row per cell with IV values, survivors, total, sr.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = self.grouping.iter().map(|iv| iv.name().to_string()).collect();
        header.extend(["survivors", "total", "sr"].map(String::from));
        w.write_record(&header).map_err(csv_err)?;
        for (k, c) in &self.cells {
            let mut row: Vec<String> = k.iter().map(ToString::to_string).collect();
            row.push(c.survivors.to_string());
            row.push(c.total.to_string());
            row.push(format!("{:?}", c.sr()));
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}

/// SR per cell of `grouping`. Any number of IVs is accepted here; an empty
/// grouping yields a single overall cell.
pub fn survival_rate<'a, I>(records: I, grouping: &[Iv]) -> SurvivalTable
where
    I: IntoIterator<Item = &'a MutantRecord>,
{
    let mut t = SurvivalTable::new(grouping);
    for r in records {
        t.add(r);
    }
    t
}

/// Cells sorted by SR descending, then total descending, then key
/// ascending; the first `k` are returned.
pub fn rank_interactions(t: &SurvivalTable, k: usize) -> Vec<(CellKey, Cell)> {
    let mut cells: Vec<(CellKey, Cell)> = t.cells.iter().map(|(k, c)| (k.clone(), *c)).collect();
    cells.sort_by(|(ka, a), (kb, b)| {
        b.cmp_sr(a)
            .then_with(|| b.total.cmp(&a.total))
            .then_with(|| ka.cmp(kb))
    });
    cells.truncate(k);
    cells
}

/// Sample Pearson correlation, accumulated in one pass over co-moments.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::UndefinedCorrelation(format!(
            "length mismatch {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two points".into()));
    }
    let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        let n = (i + 1) as f64;
        let dx = x - mx;
        let dy = y - my;
        mx += dx / n;
        my += dy / n;
        sxx += dx * (x - mx);
        syy += dy * (y - my);
        sxy += dx * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Per-circuit SR paired with the circuit's value of each complexity metric.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSurvival {
    pub origin: String,
    pub survivors: u64,
    pub total: u64,
    pub metrics: crate::circuit::CircuitMetrics,
}

pub fn per_circuit_survival(records: &[MutantRecord]) -> Vec<CircuitSurvival> {
    let mut by_origin: BTreeMap<&str, CircuitSurvival> = BTreeMap::new();
    for r in records.iter().filter(|r| !r.is_stillborn()) {
        let entry = by_origin.entry(&r.origin).or_insert_with(|| CircuitSurvival {
            origin: r.origin.clone(),
            survivors: 0,
            total: 0,
            metrics: r.metrics,
        });
        entry.total += 1;
        if r.survived() {
            entry.survivors += 1;
        }
    }
    by_origin.into_values().collect()
}

/// Pearson r between per-circuit SR and each of the seven metrics, in
/// [`METRIC_NAMES`] order.
pub fn complexity_correlations(records: &[MutantRecord]) -> Vec<(&'static str, Result<f64>)> {
    let circuits = per_circuit_survival(records);
    let srs: Vec<f64> = circuits.iter().map(|c| c.survivors as f64 / c.total as f64).collect();
    METRIC_NAMES
        .iter()
        .map(|&name| {
            let result = if circuits.len() < 2 {
                Err(Error::UndefinedCorrelation("fewer than two circuits".into()))
            } else {
                let xs: Vec<f64> = circuits
                    .iter()
                    .map(|c| c.metrics.get(name).expect("known metric"))
                    .collect();
                pearson(&xs, &srs)
            };
            (name, result)
        })
        .collect()
}

/// Grid of SR over two IVs; `None` marks combinations with no mutants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Heatmap {
    pub rows_variable: Iv,
    pub columns_variable: Iv,
    pub rows: Vec<IvValue>,
    pub columns: Vec<IvValue>,
    pub sr: Vec<Vec<Option<f64>>>,
    pub total: Vec<Vec<u64>>,
}

pub fn heatmap(records: &[MutantRecord], rows: Iv, columns: Iv) -> Heatmap {
    let table = survival_rate(records, &[rows, columns]);
    let row_values: BTreeSet<IvValue> = records.iter().filter(|r| !r.is_stillborn()).map(|r| rows.value_of(r)).collect();
    let col_values: BTreeSet<IvValue> = records
        .iter()
        .filter(|r| !r.is_stillborn())
        .map(|r| columns.value_of(r))
        .collect();
    let mut sr = Vec::new();
    let mut total = Vec::new();
    for rv in &row_values {
        let mut sr_row = Vec::new();
        let mut total_row = Vec::new();
        for cv in &col_values {
            let cell = table.get(&[rv.clone(), cv.clone()]);
            sr_row.push(cell.map(Cell::sr));
            total_row.push(cell.map_or(0, |c| c.total));
        }
        sr.push(sr_row);
        total.push(total_row);
    }
    Heatmap {
        rows_variable: rows,
        columns_variable: columns,
        rows: row_values.into_iter().collect(),
        columns: col_values.into_iter().collect(),
        sr,
        total,
    }
}
