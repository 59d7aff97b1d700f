use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytics::{complexity_correlations, heatmap, rank_interactions, survival_rate, Iv, IvValue};
use crate::error::{Error, Result};
use crate::recommend::{self, Query};
use crate::record::MutantRecord;

use super::write_atomic;

/// The three Table-3 style combinations of operator, a gate
/// characteristic and position.
pub const TABLE3_GROUPINGS: [[Iv; 3]; 3] = [
    [Iv::Operator, Iv::Gate, Iv::PositionBucket],
    [Iv::Operator, Iv::GateType, Iv::PositionBucket],
    [Iv::Operator, Iv::GateSize, Iv::PositionBucket],
];

/// Position against every mutation characteristic, operator against the
/// rest, and each program label against every mutation characteristic.
pub const DEFAULT_HEATMAPS: [(Iv, Iv); 22] = [
    (Iv::PositionBucket, Iv::Operator),
    (Iv::PositionBucket, Iv::Gate),
    (Iv::PositionBucket, Iv::GateType),
    (Iv::PositionBucket, Iv::GateSize),
    (Iv::Operator, Iv::Gate),
    (Iv::Operator, Iv::GateType),
    (Iv::Operator, Iv::GateSize),
    (Iv::Gate, Iv::GateSize),
    (Iv::Algorithm, Iv::Operator),
    (Iv::Algorithm, Iv::Gate),
    (Iv::Algorithm, Iv::GateType),
    (Iv::Algorithm, Iv::GateSize),
    (Iv::Algorithm, Iv::PositionBucket),
    (Iv::AlgorithmGroup, Iv::Operator),
    (Iv::AlgorithmGroup, Iv::Gate),
    (Iv::AlgorithmGroup, Iv::GateType),
    (Iv::AlgorithmGroup, Iv::GateSize),
    (Iv::AlgorithmGroup, Iv::PositionBucket),
    (Iv::OutputDominance, Iv::Operator),
    (Iv::OutputDominance, Iv::Gate),
    (Iv::OutputDominance, Iv::GateType),
    (Iv::OutputDominance, Iv::PositionBucket),
];

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOptions {
    /// Each grouping produces one SR table; at most three IVs each.
    pub groupings: Vec<Vec<Iv>>,
    /// Cells per row of the top-interaction report; 0 disables it.
    pub top: usize,
    pub heatmaps: Vec<(Iv, Iv)>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            groupings: Iv::ALL.iter().map(|&iv| vec![iv]).collect(),
            top: 5,
            heatmaps: DEFAULT_HEATMAPS.to_vec(),
        }
    }
}

#[derive(Debug, Default)]
pub struct AnalyzeSummary {
    pub records: usize,
    pub stillborn: usize,
    pub overall_sr: Option<f64>,
    pub files: Vec<PathBuf>,
}

impl std::fmt::Display for AnalyzeSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "analyzed {} records ({} stillborn)", self.records, self.stillborn)?;
        if let Some(sr) = self.overall_sr {
            write!(f, ", overall SR {sr:.4}")?;
        }
        write!(f, "; wrote {} reports", self.files.len())
    }
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Config(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))
}

/// Per-metric Pearson r between per-circuit SR and circuit complexity as
/// CSV with columns `metric,coefficient,error`.
pub fn correlations(records: &[MutantRecord]) -> Result<Vec<u8>> {
    let rows: Vec<Vec<String>> = complexity_correlations(records)
        .into_iter()
        .map(|(name, r)| match r {
            Ok(v) => vec![name.to_string(), format!("{v:?}"), String::new()],
            Err(e) => vec![name.to_string(), String::new(), e.to_string()],
        })
        .collect();
    csv_bytes(&["metric", "coefficient", "error"].map(String::from), &rows)
}

fn top_label(key: &[IvValue], sr: f64) -> String {
    let parts: Vec<String> = key.iter().map(ToString::to_string).collect();
    format!("{}{{{sr:.2}}}", parts.join("_"))
}

/// Writes SR tables, the top-interaction report, correlations and heatmap
/// data under `dir`.
pub fn analyze(records: &[MutantRecord], opts: &AnalyzeOptions, dir: &Path) -> Result<AnalyzeSummary> {
    if let Some(g) = opts.groupings.iter().find(|g| g.len() > 3) {
        return Err(Error::Config(format!("grouping of {} variables exceeds the limit of 3", g.len())));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut summary = AnalyzeSummary {
        records: records.len(),
        stillborn: records.iter().filter(|r| r.is_stillborn()).count(),
        ..Default::default()
    };
    let mut emit = |name: String, bytes: &[u8]| -> Result<()> {
        let path = dir.join(name);
        write_atomic(&path, bytes)?;
        summary.files.push(path);
        Ok(())
    };

    let overall = survival_rate(records, &[]);
    let overall_sr = overall.cells.values().next().map(|c| c.sr());
    let mut groupings: Vec<Vec<Iv>> = vec![Vec::new()];
    groupings.extend(opts.groupings.iter().cloned());
    for g in &groupings {
        let t = survival_rate(records, g);
        let mut buf = Vec::new();
        t.write_csv(&mut buf)?;
        emit(format!("sr_{}.csv", t.label()), &buf)?;
    }

    if opts.top > 0 {
        let mut combos: Vec<Vec<Iv>> = TABLE3_GROUPINGS.iter().map(|g| g.to_vec()).collect();
        for g in &opts.groupings {
            if g.len() >= 2 && !combos.contains(g) {
                combos.push(g.clone());
            }
        }
        let mut header = vec!["combination".to_string()];
        header.extend((1..=opts.top).map(|i| format!("top_{i}")));
        let rows: Vec<Vec<String>> = combos
            .iter()
            .map(|g| {
                let t = survival_rate(records, g);
                let mut row = vec![t.label()];
                row.extend(rank_interactions(&t, opts.top).iter().map(|(k, c)| top_label(k, c.sr())));
                row.resize(opts.top + 1, String::new());
                row
            })
            .collect();
        emit("top_interactions.csv".into(), &csv_bytes(&header, &rows)?)?;
    }

    emit("correlations.csv".into(), &correlations(records)?)?;

    let maps: Vec<_> = opts.heatmaps.iter().map(|&(r, c)| heatmap(records, r, c)).collect();
    let mut json = serde_json::to_vec_pretty(&maps)?;
    json.push(b'\n');
    emit("heatmaps.json".into(), &json)?;

    summary.overall_sr = overall_sr;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinationValue {
    pub variable: Iv,
    pub value: IvValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub origin: String,
    /// Mutant QASM file, relative to the campaign output directory.
    pub path: String,
    pub combination: Vec<CombinationValue>,
    pub combination_sr: f64,
    pub distance: f64,
    pub survived: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub set_sr: Option<f64>,
    pub warning: Option<String>,
    pub items: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RecommendOptions {
    pub query: Query,
    /// Where to copy the selected mutant files, if anywhere.
    pub copy_to: Option<PathBuf>,
}

/// Selects mutants per the query, writes `manifest` and optionally copies
/// the selected QASM files from `out_dir/mutants`.
pub fn recommend(
    store: &[MutantRecord],
    opts: &RecommendOptions,
    out_dir: &Path,
    manifest: &Path,
) -> Result<Manifest> {
    if store.is_empty() {
        return Err(Error::Config("record store is empty".into()));
    }
    let rec = recommend::recommend(store, &opts.query)?;
    let items: Vec<ManifestEntry> = rec
        .items
        .iter()
        .map(|i| ManifestEntry {
            id: i.record.id.clone(),
            origin: i.record.origin.clone(),
            path: format!("mutants/{}.qasm", i.record.file_stem()),
            combination: i
                .combination
                .iter()
                .map(|(variable, value)| CombinationValue {
                    variable: *variable,
                    value: value.clone(),
                })
                .collect(),
            combination_sr: i.combination_sr,
            distance: i.distance,
            survived: i.record.survived(),
        })
        .collect();
    if let Some(dest) = &opts.copy_to {
        fs::create_dir_all(dest).map_err(|e| Error::io(dest, e))?;
        for item in &items {
            let from = out_dir.join(&item.path);
            let to = dest.join(from.file_name().expect("file name"));
            fs::copy(&from, &to).map_err(|e| Error::io(&from, e))?;
        }
    }
    let m = Manifest {
        set_sr: rec.set_sr,
        warning: rec.warning,
        items,
    };
    let mut json = serde_json::to_vec_pretty(&m)?;
    json.push(b'\n');
    write_atomic(manifest, &json)?;
    Ok(m)
}
