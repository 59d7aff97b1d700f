//! End-to-end campaign driver: configuration, the on-disk layout and the
//! four commands.
//!
//! Output directory layout:
//!
//! ```text
//! <out_dir>/specs.jsonl        one MutantSpec per line
//! <out_dir>/mutants/*.qasm     one file per mutant, named by file stem
//! <out_dir>/records.jsonl      one MutantRecord per line, sorted by id
//! <out_dir>/reports/           CSV and JSON reports
//! ```

mod report;
mod run;

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mutation::EnumerationConfig;
use crate::oracle::OracleConfig;
use crate::sim::DEFAULT_MAX_QUBITS;

pub use report::{
    analyze, correlations, recommend, AnalyzeOptions, AnalyzeSummary, ManifestEntry, Manifest,
    RecommendOptions, DEFAULT_HEATMAPS, TABLE3_GROUPINGS,
};
pub use run::{generate, mutant_seed, run, GenerateSummary, RunSummary};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SHOTS: u64 = 100_000;

/// How each execution's sampler is seeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedMode {
    /// Original and every mutant sample with the campaign seed.
    #[default]
    Shared,
    /// Mutants sample with `seed ^ id`, the original with `seed`.
    PerMutant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    /// Files, directories or glob patterns.
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
    pub shots: u64,
    pub seed: u64,
    pub seed_mode: SeedMode,
    pub max_qubits: usize,
    /// Worker threads; unset uses every core, 1 runs sequentially.
    pub threads: Option<usize>,
    pub enumeration: EnumerationConfig,
    pub oracle: OracleConfig,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            inputs: Vec::new(),
            out_dir: PathBuf::from("qmut-out"),
            shots: DEFAULT_SHOTS,
            seed: DEFAULT_SEED,
            seed_mode: SeedMode::Shared,
            max_qubits: DEFAULT_MAX_QUBITS,
            threads: None,
            enumeration: EnumerationConfig::default(),
            oracle: OracleConfig::default(),
        }
    }
}

impl CampaignConfig {
    /// Parses a TOML config. Relative paths inside it are resolved against
    /// `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: CampaignConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for p in &mut cfg.inputs {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if cfg.out_dir.is_relative() {
            cfg.out_dir = base.join(&cfg.out_dir);
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::from_toml(&text, base)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if self.max_qubits == 0 || self.max_qubits > 30 {
            return Err(Error::Config("max_qubits must lie in 1..=30".into()));
        }
        self.enumeration.validate()?;
        self.oracle.validate()
    }

    pub fn specs_path(&self) -> PathBuf {
        self.out_dir.join("specs.jsonl")
    }

    pub fn mutants_dir(&self) -> PathBuf {
        self.out_dir.join("mutants")
    }

    pub fn records_path(&self) -> PathBuf {
        self.out_dir.join("records.jsonl")
    }

    pub fn reports_dir(&self) -> PathBuf {
        self.out_dir.join("reports")
    }
}

/// Reads a JSONL file; blank lines are ignored.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line)
            .map_err(|e| Error::Config(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(item);
    }
    Ok(out)
}

/// Writes one JSON object per line through a temporary file, so readers
/// never observe a partial store.
pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    for item in items {
        serde_json::to_writer(&mut buf, item)?;
        buf.push(b'\n');
    }
    write_atomic(path, &buf)
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
