//! Test oracles comparing a mutant execution against the original.
//!
//! The wrong-output oracle (WOO) kills on a changed dominant output for
//! output-dominant programs, or on any newly observed output for
//! diverse-output programs. The output-probability oracle (OPO) runs only for
//! diverse-output programs that passed WOO and kills when a chi-square
//! goodness-of-fit test rejects the expected probabilities at `alpha`.

pub mod chi2;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::program::{OutputDominance, ProgramMeta};
use crate::sim::OutcomeDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VerdictKind {
    Survived,
    KilledWOO,
    KilledOPO,
    Stillborn,
}

impl VerdictKind {
    pub fn name(self) -> &'static str {
        match self {
            VerdictKind::Survived => "Survived",
            VerdictKind::KilledWOO => "KilledWOO",
            VerdictKind::KilledOPO => "KilledOPO",
            VerdictKind::Stillborn => "Stillborn",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Present iff OPO was evaluated.
    pub p_value: Option<f64>,
}

impl Verdict {
    pub fn stillborn() -> Self {
        Verdict {
            kind: VerdictKind::Stillborn,
            p_value: None,
        }
    }

    pub fn survived(&self) -> bool {
        self.kind == VerdictKind::Survived
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Among outputs sharing the maximum count, the lexicographically smallest.
    #[default]
    LexicographicSmallest,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    pub alpha: f64,
    pub dominance_tiebreak: TieBreak,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            alpha: 0.01,
            dominance_tiebreak: TieBreak::LexicographicSmallest,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha > 0.0 && self.alpha < 1.0 {
            Ok(())
        } else {
            Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)))
        }
    }
}

pub fn dominant_output(d: &OutcomeDistribution) -> Result<&str> {
    // BTreeMap iterates ascending, so keeping the first maximum breaks ties
    // toward the smallest key.
    let mut best: Option<(&str, u64)> = None;
    for (k, &n) in &d.counts {
        if n > 0 && best.is_none_or(|(_, b)| n > b) {
            best = Some((k, n));
        }
    }
    best.map(|(k, _)| k).ok_or(Error::EmptyDistribution)
}

fn check_widths(expected: &OutcomeDistribution, observed: &OutcomeDistribution) -> Result<()> {
    if expected.counts.is_empty() || observed.counts.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if expected.width != observed.width {
        return Err(Error::WidthMismatch {
            expected: expected.width,
            observed: observed.width,
        });
    }
    Ok(())
}

/// Returns `true` when the wrong-output oracle kills the mutant.
pub fn woo_verdict(
    expected: &OutcomeDistribution,
    observed: &OutcomeDistribution,
    meta: &ProgramMeta,
) -> Result<bool> {
    check_widths(expected, observed)?;
    match meta.output_dominance {
        OutputDominance::OutputDominant => Ok(dominant_output(observed)? != dominant_output(expected)?),
        OutputDominance::DiverseOutput => Ok(observed
            .counts
            .iter()
            .any(|(k, &n)| n > 0 && expected.counts.get(k).copied().unwrap_or(0) == 0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Pearson goodness-of-fit of `observed` against `expected_probs`, summing
/// over every expected key (unobserved keys contribute their full expected
/// count). `df = #keys - 1`; a single-key distribution yields `p = 1`.
pub fn chi_square_test(
    expected_probs: &BTreeMap<String, f64>,
    observed: &OutcomeDistribution,
) -> Result<ChiSquare> {
    if expected_probs.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if let Some((k, _)) = expected_probs.iter().find(|(_, &p)| p.is_nan() || p <= 0.0) {
        return Err(Error::Config(format!("expected probability of `{k}` must be positive")));
    }
    if let Some(k) = observed
        .counts
        .iter()
        .find(|(k, &n)| n > 0 && !expected_probs.contains_key(*k))
        .map(|(k, _)| k)
    {
        return Err(Error::UnexpectedOutcome(k.clone()));
    }
    let norm: f64 = expected_probs.values().sum();
    let shots = observed.shots as f64;
    let statistic = expected_probs
        .iter()
        .map(|(k, p)| {
            let e = shots * p / norm;
            let o = observed.counts.get(k).copied().unwrap_or(0) as f64;
            (o - e) * (o - e) / e
        })
        .sum();
    let df = expected_probs.len() - 1;
    Ok(ChiSquare {
        statistic,
        df,
        p_value: chi2::chi_square_sf(statistic, df),
    })
}

pub fn chi_square_pvalue(
    expected_probs: &BTreeMap<String, f64>,
    observed: &OutcomeDistribution,
) -> Result<f64> {
    chi_square_test(expected_probs, observed).map(|t| t.p_value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpoOutcome {
    pub killed: bool,
    pub p_value: f64,
}

pub fn opo_verdict(
    expected: &OutcomeDistribution,
    observed: &OutcomeDistribution,
    cfg: &OracleConfig,
) -> Result<OpoOutcome> {
    check_widths(expected, observed)?;
    let p_value = chi_square_pvalue(&expected.probabilities(), observed)?;
    Ok(OpoOutcome {
        killed: p_value < cfg.alpha,
        p_value,
    })
}

/// WOO first; OPO only for diverse-output programs that survive WOO.
pub fn judge(
    expected: &OutcomeDistribution,
    observed: &OutcomeDistribution,
    meta: &ProgramMeta,
    cfg: &OracleConfig,
) -> Result<Verdict> {
    if woo_verdict(expected, observed, meta)? {
        return Ok(Verdict {
            kind: VerdictKind::KilledWOO,
            p_value: None,
        });
    }
    if meta.output_dominance == OutputDominance::OutputDominant {
        return Ok(Verdict {
            kind: VerdictKind::Survived,
            p_value: None,
        });
    }
    let opo = opo_verdict(expected, observed, cfg)?;
    Ok(Verdict {
        kind: if opo.killed {
            VerdictKind::KilledOPO
        } else {
            VerdictKind::Survived
        },
        p_value: Some(opo.p_value),
    })
}
