//! Experiment configuration, read from TOML.
//!
//! ```toml
//! output = "report.json"
//! seeds = [1, 2, 3]
//!
//! [generator]
//! family = "random"
//! dim = 1
//! count = 10000
//! seed = 1
//!
//! [[analyses]]
//! kind = "paircorr"
//! s = [0.5, 1.0, 2.0]
//!
//! [[analyses]]
//! kind = "certify"
//! t = [1.0, 2.0, 4.0]
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use ppc_core::correlation::Algorithm;
use ppc_core::generators::GeneratorSpec;
use ppc_core::spectrum::{DEFAULT_MULTIPLIER_THRESHOLD, DEFAULT_WEAK_CONSTANT};
use ppc_core::NormKind;
use serde::{Deserialize, Serialize};

use crate::error::{io_error, ExperimentError, Result};

/// Parseval truncation radius when neither `tol` nor `l_trunc` is given:
/// the spectral side costs about `N * L^d` Weyl-sum terms.
pub fn default_parseval_radius(dim: usize) -> f64 {
    match dim {
        1 => 4096.0,
        2 => 96.0,
        _ => 24.0,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Where `run` writes the JSON report; stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Repeat the experiment once per seed (seeded families only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    pub generator: GeneratorSpec,
    pub analyses: Vec<AnalysisSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnalysisSpec {
    /// Pair-correlation statistic over a grid of scales; `alpha < 1` selects
    /// the weak statistic.
    Paircorr {
        s: Vec<f64>,
        #[serde(default = "euclidean")]
        norm: NormKind,
        #[serde(default = "one")]
        alpha: f64,
        #[serde(default)]
        algorithm: Algorithm,
    },
    /// Exponential-sum certificates over a grid of `t`.
    Certify {
        t: Vec<f64>,
        #[serde(default = "one")]
        alpha: f64,
        /// Multiplier threshold for the `d >= 2` constant.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c2: Option<f64>,
        /// Ceiling for the weak functional.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c_alpha: Option<f64>,
    },
    /// Normalized Weyl sums over the lattice ball of radius `lmax`.
    Spectrum { lmax: f64 },
    /// Kernel identity check at width `delta`, truncated either where the
    /// tail bound drops below `tol` or at the radius `l_trunc`.
    Parseval {
        delta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        l_trunc: Option<f64>,
    },
    /// Star discrepancy: exact in d = 1 unless a grid `resolution` is given.
    Discrepancy {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<usize>,
    },
}

fn euclidean() -> NormKind {
    NormKind::Euclidean
}

fn one() -> f64 {
    1.0
}

/// Grid resolution used for the bracketed discrepancy when none is given:
/// about a million corners, at most 256 per axis.
pub fn default_resolution(dim: usize) -> usize {
    let per_axis = (2f64.powi(20)).powf(1.0 / dim.max(1) as f64).floor() as usize;
    per_axis.saturating_sub(1).clamp(2, 256)
}

impl AnalysisSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            AnalysisSpec::Paircorr { .. } => "paircorr",
            AnalysisSpec::Certify { .. } => "certify",
            AnalysisSpec::Spectrum { .. } => "spectrum",
            AnalysisSpec::Parseval { .. } => "parseval",
            AnalysisSpec::Discrepancy { .. } => "discrepancy",
        }
    }

    /// Compact JSON of the parameters, for error messages.
    pub fn params(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }

    /// Spec with defaults that depend on the point set filled in.
    pub fn resolved(&self, dim: usize) -> Self {
        let mut spec = self.clone();
        match &mut spec {
            AnalysisSpec::Certify {
                alpha, c2, c_alpha, ..
            } => {
                if *alpha < 1.0 {
                    c_alpha.get_or_insert(DEFAULT_WEAK_CONSTANT);
                } else if dim >= 2 {
                    c2.get_or_insert(DEFAULT_MULTIPLIER_THRESHOLD);
                }
            }
            AnalysisSpec::Parseval {
                tol: None, l_trunc, ..
            } => {
                l_trunc.get_or_insert(default_parseval_radius(dim));
            }
            AnalysisSpec::Discrepancy { resolution } if dim >= 2 => {
                resolution.get_or_insert(default_resolution(dim));
            }
            _ => {}
        }
        spec
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(io_error(path))?;
        Self::from_toml(&text)
    }

    /// Structural checks; parameter ranges are enforced by the analyses.
    pub fn validate(&self) -> Result<()> {
        if self.analyses.is_empty() {
            return Err(ExperimentError::Config(
                "at least one analysis is required".into(),
            ));
        }
        if !self.seeds.is_empty() && self.generator.seed().is_none() {
            return Err(ExperimentError::Config(format!(
                "seeds are listed but the {} family takes no seed",
                self.generator.family_name()
            )));
        }
        for (index, analysis) in self.analyses.iter().enumerate() {
            if let AnalysisSpec::Parseval {
                tol: Some(_),
                l_trunc: Some(_),
                ..
            } = analysis
            {
                return Err(ExperimentError::Config(format!(
                    "analysis #{index} (parseval) takes tol or l_trunc, not both"
                )));
            }
            let empty = match analysis {
                AnalysisSpec::Paircorr { s, .. } => s.is_empty(),
                AnalysisSpec::Certify { t, .. } => t.is_empty(),
                _ => false,
            };
            if empty {
                return Err(ExperimentError::Config(format!(
                    "analysis #{index} ({}) has an empty parameter grid",
                    analysis.kind()
                )));
            }
        }
        Ok(())
    }

    /// Config with every default written out, as echoed into reports.
    pub fn resolved(&self) -> Self {
        let dim = self.generator.dim();
        ExperimentConfig {
            output: self.output.clone(),
            seeds: self.seeds.clone(),
            generator: self.generator.resolved(),
            analyses: self.analyses.iter().map(|a| a.resolved(dim)).collect(),
        }
    }
}
