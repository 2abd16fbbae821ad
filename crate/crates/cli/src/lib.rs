//! Reproducible experiments over `ppc-core`: TOML configs in, JSON reports
//! out.

pub mod config;
mod error;
pub mod report;

use std::time::Instant;

use ppc_core::correlation::{ppc_statistic_with, s_grid_gap_ratio, weak_ppc_statistic_with};
use ppc_core::discrepancy::{star_discrepancy_1d, star_discrepancy_box};
use ppc_core::generators::{generate, GeneratorSpec};
use ppc_core::kernels::{parseval_check, parseval_check_truncated, KernelParams};
use ppc_core::spectrum::{
    ppc_functional_with, weak_functional_with, weyl_criterion_scan, DEFAULT_MULTIPLIER_THRESHOLD,
    DEFAULT_WEAK_CONSTANT,
};
use ppc_core::PointSet;
use rayon::prelude::*;

pub use config::{AnalysisSpec, ExperimentConfig};
pub use error::{ExperimentError, Result};
pub use report::{
    AnalysisOutput, AnalysisRecord, PointsSummary, Report, RunReport, SpectrumSummary,
};

/// Number of entries kept in a spectrum summary.
const SPECTRUM_TOP: usize = 10;

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Evaluate the analyses of a run concurrently. Results keep config order.
    pub parallel: bool,
}

/// Generates the points (once per seed) and runs every analysis in order.
/// The first failure aborts the experiment.
pub fn run_experiment(cfg: &ExperimentConfig, opts: RunOptions) -> Result<Report> {
    cfg.validate()?;
    let resolved = cfg.resolved();
    let specs: Vec<(Option<u64>, GeneratorSpec)> = if resolved.seeds.is_empty() {
        vec![(resolved.generator.seed(), resolved.generator.clone())]
    } else {
        resolved
            .seeds
            .iter()
            .map(|&s| {
                (
                    Some(s),
                    resolved
                        .generator
                        .with_seed(s)
                        .expect("seeded family checked"),
                )
            })
            .collect()
    };

    let mut runs = Vec::with_capacity(specs.len());
    for (seed, spec) in specs {
        let ps = generate(&spec).map_err(|source| ExperimentError::Generator {
            family: spec.family_name().to_string(),
            source,
        })?;
        let analyses = run_analyses(&ps, &resolved.analyses, opts)?;
        runs.push(RunReport {
            seed,
            points: PointsSummary {
                family: spec.family_name().to_string(),
                dim: ps.dim(),
                n: ps.len(),
            },
            analyses,
        });
    }
    Ok(Report {
        tool: report::TOOL_NAME.to_string(),
        version: report::TOOL_VERSION.to_string(),
        config: resolved,
        runs,
    })
}

/// Runs analyses on a fixed point set, e.g. one read from a points file.
pub fn run_analyses(
    ps: &PointSet,
    analyses: &[AnalysisSpec],
    opts: RunOptions,
) -> Result<Vec<AnalysisRecord>> {
    let timed = |(index, spec): (usize, &AnalysisSpec)| {
        let start = Instant::now();
        let output = run_analysis(ps, spec).map_err(|source| ExperimentError::Analysis {
            index,
            kind: spec.kind(),
            params: spec.params(),
            source,
        })?;
        Ok(AnalysisRecord {
            index,
            wall_clock_seconds: start.elapsed().as_secs_f64(),
            output,
        })
    };
    let results: Vec<Result<AnalysisRecord>> = if opts.parallel {
        analyses.par_iter().enumerate().map(timed).collect()
    } else {
        analyses.iter().enumerate().map(timed).collect()
    };
    // The lowest failing index wins, whatever finished first.
    results.into_iter().collect()
}

pub fn run_analysis(ps: &PointSet, spec: &AnalysisSpec) -> ppc_core::Result<AnalysisOutput> {
    let spec = spec.resolved(ps.dim());
    Ok(match spec {
        AnalysisSpec::Paircorr {
            s,
            norm,
            alpha,
            algorithm,
        } => {
            if s.len() >= 2 {
                // Rejects unsorted or nonpositive grids up front.
                s_grid_gap_ratio(&s)?;
            }
            let results = s
                .iter()
                .map(|&s| {
                    if alpha == 1.0 {
                        ppc_statistic_with(ps, s, norm, algorithm)
                    } else {
                        weak_ppc_statistic_with(ps, s, alpha, algorithm)
                    }
                })
                .collect::<ppc_core::Result<_>>()?;
            AnalysisOutput::Paircorr { results }
        }
        AnalysisSpec::Certify {
            t,
            alpha,
            c2,
            c_alpha,
        } => {
            let certificates = t
                .iter()
                .map(|&t| {
                    if alpha == 1.0 {
                        ppc_functional_with(ps, t, c2.unwrap_or(DEFAULT_MULTIPLIER_THRESHOLD))
                    } else {
                        weak_functional_with(ps, t, alpha, c_alpha.unwrap_or(DEFAULT_WEAK_CONSTANT))
                    }
                })
                .collect::<ppc_core::Result<_>>()?;
            AnalysisOutput::Certify { certificates }
        }
        AnalysisSpec::Spectrum { lmax } => AnalysisOutput::Spectrum(spectrum_summary(ps, lmax)?),
        AnalysisSpec::Parseval {
            delta,
            tol,
            l_trunc,
        } => {
            let kp = KernelParams::new(ps.dim(), delta)?;
            AnalysisOutput::Parseval(match (tol, l_trunc) {
                (Some(tol), _) => parseval_check(ps, &kp, tol)?,
                (None, l) => parseval_check_truncated(ps, &kp, l.expect("resolved above"))?,
            })
        }
        AnalysisSpec::Discrepancy { resolution } => AnalysisOutput::Discrepancy(match resolution {
            Some(m) => star_discrepancy_box(ps, m)?,
            None => star_discrepancy_1d(ps)?,
        }),
    })
}

pub fn spectrum_summary(ps: &PointSet, lmax: f64) -> ppc_core::Result<SpectrumSummary> {
    let scan = weyl_criterion_scan(ps, lmax)?;
    let terms = scan.entries.len();
    let energy: f64 = scan.entries.iter().map(|e| e.magnitude * e.magnitude).sum();
    let nf = ps.len() as f64;
    let mut top = scan.entries.clone();
    // Stable sort keeps lattice order among equal magnitudes.
    top.sort_by(|a, b| b.magnitude.total_cmp(&a.magnitude));
    top.truncate(SPECTRUM_TOP);
    Ok(SpectrumSummary {
        lmax,
        n: scan.n,
        terms,
        max: scan.max,
        argmax: scan.argmax,
        mean_square: if terms == 0 {
            0.0
        } else {
            energy * nf / terms as f64
        },
        top,
    })
}
