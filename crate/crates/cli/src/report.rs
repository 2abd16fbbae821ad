//! The JSON report written by `run`.

use std::fs;
use std::path::{Path, PathBuf};

use ppc_core::correlation::PairCorrResult;
use ppc_core::discrepancy::DiscrepancyResult;
use ppc_core::kernels::ParsevalReport;
use ppc_core::spectrum::{BoundCertificate, ScanEntry};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{io_error, Result};

pub const TOOL_NAME: &str = "ppc";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    /// The configuration with all defaults resolved.
    pub config: ExperimentConfig,
    /// One entry per seed, or a single entry for an unrepeated experiment.
    pub runs: Vec<RunReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub points: PointsSummary,
    pub analyses: Vec<AnalysisRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointsSummary {
    pub family: String,
    pub dim: usize,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    /// Position in the configured analysis list.
    pub index: usize,
    pub wall_clock_seconds: f64,
    pub output: AnalysisOutput,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalysisOutput {
    Paircorr { results: Vec<PairCorrResult> },
    Certify { certificates: Vec<BoundCertificate> },
    Spectrum(SpectrumSummary),
    Parseval(ParsevalReport),
    Discrepancy(DiscrepancyResult),
}

/// Condensed Weyl scan: the full map is `O(lmax^d)` entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub lmax: f64,
    pub n: usize,
    pub terms: usize,
    /// Largest `|S_N(l)| / N`.
    pub max: f64,
    pub argmax: Vec<i64>,
    /// `sum |S_N(l)|^2 / (terms * N)`; close to 1 for i.i.d. points.
    pub mean_square: f64,
    /// The largest entries, in decreasing magnitude.
    pub top: Vec<ScanEntry>,
}

impl Report {
    /// Copy with every wall-clock field zeroed, for comparing runs.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for run in &mut r.runs {
            for rec in &mut run.analyses {
                rec.wall_clock_seconds = 0.0;
            }
        }
        r
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()? + "\n").map_err(io_error(path))
    }

    /// Writes `(s, normalized, target)` and `(t, functional, bound)` tables,
    /// one CSV per analysis and run. Returns the files written.
    pub fn write_curves(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(io_error(dir))?;
        let mut written = Vec::new();
        for run in &self.runs {
            let suffix = run.seed.map(|s| format!("_seed{s}")).unwrap_or_default();
            for rec in &run.analyses {
                let (name, body) = match &rec.output {
                    AnalysisOutput::Paircorr { results } => (
                        format!("paircorr_{}{suffix}.csv", rec.index),
                        csv_table(
                            "s,normalized,target",
                            results.iter().map(|r| [r.s, r.normalized, r.target]),
                        ),
                    ),
                    AnalysisOutput::Certify { certificates } => (
                        format!("certify_{}{suffix}.csv", rec.index),
                        csv_table(
                            "t,functional,bound",
                            certificates.iter().map(|c| [c.t, c.functional, c.bound]),
                        ),
                    ),
                    _ => continue,
                };
                let path = dir.join(name);
                fs::write(&path, body).map_err(io_error(&path))?;
                written.push(path);
            }
        }
        Ok(written)
    }
}

fn csv_table(header: &str, rows: impl Iterator<Item = [f64; 3]>) -> String {
    let mut out = format!("{header}\n");
    for [a, b, c] in rows {
        out.push_str(&format!("{a},{b},{c}\n"));
    }
    out
}
