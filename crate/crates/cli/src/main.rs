use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ppc_cli::config::default_resolution;
use ppc_cli::report::{TOOL_NAME, TOOL_VERSION};
use ppc_cli::{
    run_analysis, run_experiment, AnalysisOutput, AnalysisSpec, ExperimentConfig, ExperimentError,
    RunOptions,
};
use ppc_core::correlation::Algorithm;
use ppc_core::generators::{generate, GeneratorSpec};
use ppc_core::kernels::{
    box_fourier_coeff, box_kernel_eval, multiplier_radius, triangle_kernel_eval, KernelParams,
};
use ppc_core::points_file::{read_points_file, write_points, write_points_file};
use ppc_core::{NormKind, PointSet};

#[derive(Parser)]
#[command(
    name = "ppc",
    version,
    about = "Pair-correlation diagnostics for point sequences on the torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set and write it as a points file.
    Generate(GenerateArgs),
    /// Pair-correlation statistic over a grid of scales.
    Paircorr(PaircorrArgs),
    /// Normalized Weyl sums over a lattice ball.
    Spectrum(SpectrumArgs),
    /// Exponential-sum functional against its theoretical bound.
    Certify(CertifyArgs),
    /// Check the kernel pair-sum identity with a rigorous tail bound.
    Parseval(ParsevalArgs),
    /// Star discrepancy (exact in one dimension).
    Discrepancy(DiscrepancyArgs),
    /// Print kernel and Fourier multiplier values.
    Kernel(KernelArgs),
    /// Run an experiment described by a TOML config.
    Run(RunArgs),
    /// Print the tool version.
    Version,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    Kronecker,
    Quadratic,
    Grid,
    Halton,
    Clustered,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    dim: usize,
    /// Number of points.
    #[arg(long = "n")]
    count: usize,
    /// Required for random and clustered.
    #[arg(long)]
    seed: Option<u64>,
    /// Frequencies (kronecker: one per axis; quadratic: one value).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    /// Halton bases, one per axis.
    #[arg(long, value_delimiter = ',')]
    bases: Option<Vec<u64>>,
    /// Number of cluster centers.
    #[arg(long)]
    clusters: Option<usize>,
    /// Points file to write; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PaircorrArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<f64>,
    /// Scaling exponent; values below 1 give the weak statistic (d = 1).
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value = "l2")]
    norm: NormKind,
    #[arg(long, default_value = "cells")]
    algorithm: Algorithm,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Directory for an (s, normalized, target) CSV table.
    #[arg(long)]
    emit_curves: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    lmax: f64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
    /// Values below 1 select the weak functional (d = 1).
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Directory for a (t, functional, bound) CSV table.
    #[arg(long)]
    emit_curves: Option<PathBuf>,
}

#[derive(Args)]
struct ParsevalArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    delta: f64,
    /// Bound on the truncated spectral tail; a fixed per-dimension
    /// truncation radius is used when absent.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct DiscrepancyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Grid points per axis; d = 1 is exact when omitted.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    delta: f64,
    /// Integer frequency vector.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    ell: Vec<i64>,
    /// Evaluation point for g and f (origin when absent).
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<f64>>,
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment config.
    config: PathBuf,
    /// Report path, overriding `output` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the analyses of each point set concurrently.
    #[arg(long)]
    parallel: bool,
    /// Directory for CSV curve tables.
    #[arg(long)]
    emit_curves: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Core(#[from] ppc_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

type CliResult<T = ()> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// `PPC_THREADS` caps the worker pool.
fn configure_threads() -> CliResult {
    let Ok(value) = std::env::var("PPC_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "PPC_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Paircorr(args) => cmd_paircorr(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Parseval(args) => cmd_parseval(args),
        Command::Discrepancy(args) => cmd_discrepancy(args),
        Command::Kernel(args) => cmd_kernel(args),
        Command::Run(args) => cmd_run(args),
        Command::Version => {
            println!("{TOOL_NAME} {TOOL_VERSION}");
            Ok(())
        }
    }
}

fn generator_spec(args: &GenerateArgs) -> CliResult<GeneratorSpec> {
    let (dim, count) = (args.dim, args.count);
    let need_seed = || {
        args.seed
            .ok_or_else(|| CliError::Usage("--seed is required for this family".into()))
    };
    Ok(match args.family {
        Family::Random => GeneratorSpec::Random {
            dim,
            count,
            seed: need_seed()?,
        },
        Family::Kronecker => GeneratorSpec::Kronecker {
            dim,
            count,
            alpha: args.alpha.clone(),
        },
        Family::Quadratic => {
            let alpha = match args.alpha.as_deref() {
                None => None,
                Some([a]) => Some(*a),
                Some(_) => return Err(CliError::Usage("quadratic takes a single --alpha".into())),
            };
            GeneratorSpec::Quadratic { dim, count, alpha }
        }
        Family::Grid => GeneratorSpec::Grid { dim, count },
        Family::Halton => GeneratorSpec::Halton {
            dim,
            count,
            bases: args.bases.clone(),
        },
        Family::Clustered => GeneratorSpec::Clustered {
            dim,
            count,
            seed: need_seed()?,
            clusters: args
                .clusters
                .ok_or_else(|| CliError::Usage("--clusters is required for clustered".into()))?,
        },
    })
}

fn cmd_generate(args: GenerateArgs) -> CliResult {
    let spec = generator_spec(&args)?;
    let ps = generate(&spec)?;
    match &args.out {
        Some(path) => write_points_file(&ps, path)?,
        None => write_points(&ps, io::stdout().lock())?,
    }
    Ok(())
}

fn load(path: &Path) -> CliResult<PointSet> {
    Ok(read_points_file(path)?)
}

fn write_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(ExperimentError::from)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn write_curve(dir: &Path, name: &str, header: &str, rows: &[[f64; 3]]) -> CliResult {
    std::fs::create_dir_all(dir)?;
    let mut body = format!("{header}\n");
    for [a, b, c] in rows {
        body.push_str(&format!("{a},{b},{c}\n"));
    }
    std::fs::write(dir.join(name), body)?;
    Ok(())
}

fn analyse(ps: &PointSet, spec: AnalysisSpec) -> CliResult<AnalysisOutput> {
    Ok(run_analysis(ps, &spec)?)
}

fn cmd_paircorr(args: PaircorrArgs) -> CliResult {
    let ps = load(&args.input)?;
    let spec = AnalysisSpec::Paircorr {
        s: args.s,
        norm: args.norm,
        alpha: args.alpha,
        algorithm: args.algorithm,
    };
    let AnalysisOutput::Paircorr { results } = analyse(&ps, spec)? else {
        unreachable!("paircorr analysis yields pair-correlation results")
    };
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:>10} {:>14} {:>14} {:>10}",
        "s", "count", "normalized", "target"
    )?;
    for r in &results {
        writeln!(
            out,
            "{:>10} {:>14} {:>14.6} {:>10.6}",
            r.s, r.count, r.normalized, r.target
        )?;
    }
    if let Some(path) = &args.json {
        write_json(&results, path)?;
    }
    if let Some(dir) = &args.emit_curves {
        let rows: Vec<[f64; 3]> = results
            .iter()
            .map(|r| [r.s, r.normalized, r.target])
            .collect();
        write_curve(dir, "paircorr.csv", "s,normalized,target", &rows)?;
    }
    Ok(())
}

fn cmd_spectrum(args: SpectrumArgs) -> CliResult {
    let ps = load(&args.input)?;
    let summary = ppc_cli::spectrum_summary(&ps, args.lmax)?;
    let mut out = io::stdout().lock();
    writeln!(out, "frequencies  {}", summary.terms)?;
    writeln!(
        out,
        "max |S|/N    {:.6e} at {:?}",
        summary.max, summary.argmax
    )?;
    writeln!(out, "mean |S|^2/N {:.6}", summary.mean_square)?;
    if let Some(path) = &args.json {
        write_json(&summary, path)?;
    }
    Ok(())
}

fn cmd_certify(args: CertifyArgs) -> CliResult {
    let ps = load(&args.input)?;
    let spec = AnalysisSpec::Certify {
        t: args.t,
        alpha: args.alpha,
        c2: None,
        c_alpha: None,
    };
    let AnalysisOutput::Certify { certificates } = analyse(&ps, spec)? else {
        unreachable!("certify analysis yields certificates")
    };
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:>8} {:>10} {:>14} {:>12} {:>12}  verdict",
        "t", "cutoff", "functional", "bound", "iid"
    )?;
    for c in &certificates {
        let iid = c
            .iid_reference
            .map_or("-".to_string(), |v| format!("{v:.6}"));
        let verdict = serde_json::to_value(c.verdict).map_err(ExperimentError::from)?;
        writeln!(
            out,
            "{:>8} {:>10.2} {:>14.6} {:>12.6} {:>12}  {}",
            c.t,
            c.cutoff_used,
            c.functional,
            c.bound,
            iid,
            verdict.as_str().unwrap_or_default()
        )?;
    }
    if let Some(path) = &args.json {
        write_json(&certificates, path)?;
    }
    if let Some(dir) = &args.emit_curves {
        let rows: Vec<[f64; 3]> = certificates
            .iter()
            .map(|c| [c.t, c.functional, c.bound])
            .collect();
        write_curve(dir, "certify.csv", "t,functional,bound", &rows)?;
    }
    Ok(())
}

fn cmd_parseval(args: ParsevalArgs) -> CliResult {
    let ps = load(&args.input)?;
    let spec = AnalysisSpec::Parseval {
        delta: args.delta,
        tol: args.tol,
        l_trunc: None,
    };
    let AnalysisOutput::Parseval(r) = analyse(&ps, spec)? else {
        unreachable!("parseval analysis yields a Parseval report")
    };
    let mut out = io::stdout().lock();
    writeln!(out, "L_trunc     {}", r.l_trunc)?;
    writeln!(out, "lhs         {:.12e}", r.lhs)?;
    writeln!(out, "rhs         {:.12e}", r.rhs)?;
    writeln!(out, "gap         {:.3e}", r.gap)?;
    writeln!(out, "tail bound  {:.3e}", r.tail_bound)?;
    writeln!(out, "holds       {}", r.holds(1e-8))?;
    if let Some(path) = &args.json {
        write_json(&r, path)?;
    }
    Ok(())
}

fn cmd_discrepancy(args: DiscrepancyArgs) -> CliResult {
    let ps = load(&args.input)?;
    let resolution = args
        .resolution
        .or_else(|| (ps.dim() >= 2).then(|| default_resolution(ps.dim())));
    let AnalysisOutput::Discrepancy(r) = analyse(&ps, AnalysisSpec::Discrepancy { resolution })?
    else {
        unreachable!("discrepancy analysis yields a discrepancy result")
    };
    if r.exact {
        println!("D* = {:.12e}", r.upper);
    } else {
        println!(
            "{:.6e} <= D* <= {:.6e}  (m = {})",
            r.lower,
            r.upper,
            r.resolution.unwrap_or(0)
        );
    }
    if let Some(path) = &args.json {
        write_json(&r, path)?;
    }
    Ok(())
}

fn cmd_kernel(args: KernelArgs) -> CliResult {
    let kp = KernelParams::new(args.dim, args.delta)?;
    if args.ell.len() != args.dim {
        return Err(CliError::Usage(format!(
            "--ell needs {} components",
            args.dim
        )));
    }
    let x = args.x.unwrap_or_else(|| vec![0.0; args.dim]);
    let g_hat = box_fourier_coeff(&kp, &args.ell)?;
    let mut out = io::stdout().lock();
    writeln!(out, "g(x)          {:.12e}", box_kernel_eval(&kp, &x)?)?;
    writeln!(out, "f(x)          {:.12e}", triangle_kernel_eval(&kp, &x)?)?;
    writeln!(out, "g_hat(l)      {g_hat:.12e}")?;
    writeln!(out, "f_hat(l)      {:.12e}", g_hat * g_hat)?;
    writeln!(out, "L (c2 = 1/2)  {:.12e}", multiplier_radius(&kp, 0.5)?)?;
    Ok(())
}

fn cmd_run(args: RunArgs) -> CliResult {
    let cfg = ExperimentConfig::load(&args.config)?;
    let report = run_experiment(
        &cfg,
        RunOptions {
            parallel: args.parallel,
        },
    )?;
    match args.out.as_ref().or(cfg.output.as_ref()) {
        Some(path) => report.write(path)?,
        None => println!("{}", report.to_json()?),
    }
    if let Some(dir) = &args.emit_curves {
        report.write_curves(dir)?;
    }
    Ok(())
}
