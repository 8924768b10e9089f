//! Command-line front end for the Oldroyd-B solver: single runs, the
//! decay/continuity/jump studies, checkpoint analysis, linear spectra, and
//! report summaries.
//!
//! Exit codes: `0` — execution succeeded and every gated criterion passed;
//! `1` — execution succeeded but a criterion failed; `2` — execution error
//! (bad config, unreadable file, solver failure).
//!
//! Set `OLDROYD_THREADS` to cap the worker thread count; runs are
//! bit-identical regardless of its value.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use oldroyd_core::config::{self, RunConfig};
use oldroyd_core::diagnostics::{self, FitResult, TimeSeriesRecord};
use oldroyd_core::experiments::{self, ExperimentName, ExperimentReport, Scenario};
use oldroyd_core::integrator::SimState;
use oldroyd_core::io;
use oldroyd_core::linear::ModeMatrix;
use oldroyd_core::lp::DyadicPartition;
use oldroyd_core::rhs::ModelParams;
use oldroyd_core::{initial_data, Error, Grid, Result, SpectralField};

#[derive(Parser)]
#[command(
    name = "oldroyd",
    version,
    about = "Pseudospectral Oldroyd-B solver and decay-rate experiment harness",
    after_help = "Set OLDROYD_THREADS to cap the worker thread count; results \
                  are bit-identical regardless of its value."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation from a config file into a fresh run directory.
    Run(RunArgs),
    /// Run the verification studies (decay, continuity, jump, sweep).
    Experiment {
        #[command(subcommand)]
        action: ExperimentCmd,
    },
    /// Dyadic-block breakdown of a checkpointed field, one CSV row per block.
    Analyze(AnalyzeArgs),
    /// Per-mode linear spectra: slowest eigenvalue versus |xi| and k.
    Spectrum(SpectrumArgs),
    /// Summarize experiment reports; exit 1 if any gated criterion failed.
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Run one named study and write its report.
    Run(ExperimentRunArgs),
    /// List the available studies.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Config file (sections [grid], [model], [stepper], [data],
    /// [diagnostics], [run]; `key = value`; `#` comments).
    #[arg(long)]
    config: PathBuf,
    /// Base directory for the run directory (overrides the config's output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run directory name (default: the config file stem).
    #[arg(long)]
    name: Option<String>,
    /// Checkpoint to continue from; grid and parameters must match.
    #[arg(long)]
    resume: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentRunArgs {
    /// Study name: small_k_decay, k_continuity, k_to_zero_jump, or k_sweep.
    name: String,
    /// Optional config file overriding the study's built-in scenario.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base directory for the run directory.
    #[arg(long, default_value = "runs")]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Checkpoint file to analyze.
    #[arg(long)]
    checkpoint: PathBuf,
    /// Which field to decompose: u (velocity) or tau (stress).
    #[arg(long, default_value = "tau")]
    field: String,
    /// Smoothness weight: each block norm is scaled by 2^(j s).
    #[arg(long, default_value_t = 0.0)]
    s: f64,
    /// Lebesgue exponent of the block norms; a number >= 1 or "inf".
    #[arg(long, default_value = "inf")]
    p: String,
    /// Output CSV path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Spatial dimension, 2 or 3.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Scan all lattice frequencies with 0 < |xi| <= xi-max.
    #[arg(long, default_value_t = 8)]
    xi_max: i64,
    /// Coupling strengths, comma-separated.
    #[arg(long, default_value = "0.05,0.5,5", value_delimiter = ',')]
    ks: Vec<f64>,
    /// Bilinear-form parameter b.
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// Velocity dissipation nu.
    #[arg(long, default_value_t = 0.0)]
    nu: f64,
    /// Stress diffusion eta.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Stress damping mu.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Stress source strength alpha.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Output CSV path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Report files, or run directories containing a report.json.
    #[arg(required = true)]
    paths: Vec<PathBuf>,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<u8> {
    init_thread_pool()?;
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Experiment { action } => match action {
            ExperimentCmd::Run(args) => cmd_experiment_run(args),
            ExperimentCmd::List => cmd_experiment_list(),
        },
        Command::Analyze(args) => cmd_analyze(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Report(args) => cmd_report(args),
    }
}

/// Applies the `OLDROYD_THREADS` override to the global worker pool. Unset
/// means the library default (one worker per logical CPU).
fn init_thread_pool() -> Result<()> {
    let text = match std::env::var("OLDROYD_THREADS") {
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => return Err(Error::Param(format!("OLDROYD_THREADS: {e}"))),
        Ok(text) => text,
    };
    let n: usize = text.trim().parse().map_err(|_| {
        Error::Param(format!(
            "OLDROYD_THREADS must be a positive integer, got '{text}'"
        ))
    })?;
    if n == 0 {
        return Err(Error::Param(
            "OLDROYD_THREADS must be a positive integer, got '0'".into(),
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Param(format!("thread pool setup failed: {e}")))
}

// ------------------------------------------------------------------
// run
// ------------------------------------------------------------------

/// Post-run fit summary written next to the series file.
#[derive(Debug, Serialize, Deserialize)]
struct RunSummary {
    n_records: usize,
    t_final: f64,
    steps: u64,
    l2_u_final: f64,
    l2_tau_final: f64,
    energy_final: f64,
    max_abs_budget_residual: f64,
    /// Late-window fits of the damped quantity `‖∇u‖ + k‖τ‖`; absent when
    /// the window is degenerate or the quantity hits zero.
    exponential_fit: Option<FitResult>,
    polynomial_fit: Option<FitResult>,
}

fn summarize(records: &[TimeSeriesRecord], state: &SimState, k: f64) -> RunSummary {
    let last = records.last().expect("a run always records its first state");
    let samples = experiments::damped_quantity(records, k);
    let window = experiments::late_window(records, 0.6).ok();
    let exponential_fit =
        window.and_then(|w| diagnostics::fit_exponential_rate(&samples, w).ok());
    let polynomial_fit =
        window.and_then(|w| diagnostics::fit_polynomial_rate(&samples, w).ok());
    RunSummary {
        n_records: records.len(),
        t_final: last.t,
        steps: state.step_count,
        l2_u_final: last.l2_u,
        l2_tau_final: last.l2_tau,
        energy_final: last.energy,
        max_abs_budget_residual: records
            .iter()
            .map(|r| r.budget_residual.abs())
            .fold(0.0, f64::max),
        exponential_fit,
        polynomial_fit,
    }
}

fn cmd_run(args: &RunArgs) -> Result<u8> {
    let cfg = RunConfig::load(&args.config)?;
    let grid = Grid::new(cfg.grid_dim, cfg.grid_n)?;
    let base = args
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("runs"));
    let name = match &args.name {
        Some(n) => n.clone(),
        None => args
            .config
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("run")
            .to_string(),
    };
    let dir = io::create_run_dir(&base, &name)?;
    io::write_json(&dir.join("config.json"), &cfg)?;

    let mut state = match &args.resume {
        Some(path) => {
            let ck = io::resume_checkpoint(path, grid)?;
            if ck.params != cfg.params {
                return Err(Error::Param(
                    "checkpoint parameters differ from the config; refusing to resume".into(),
                ));
            }
            println!("resuming from {} at t = {}", path.display(), ck.state.t);
            ck.state
        }
        None => {
            let (u, tau) = initial_data::build(grid, &cfg.data)?;
            SimState::new(0.0, u, tau)?
        }
    };

    let latest = dir.join("latest.ckpt");
    let records = experiments::continue_with(
        &mut state,
        &cfg.params,
        &cfg.stepper,
        &cfg.diagnostics,
        cfg.t_end,
        cfg.snapshot_every,
        |s, _| io::write_checkpoint(&latest, s, &cfg.params),
    )?;
    io::emit_series(&dir.join("series.csv"), &records)?;
    io::write_checkpoint(&dir.join("final.ckpt"), &state, &cfg.params)?;
    let summary = summarize(&records, &state, cfg.params.k);
    io::write_json(&dir.join("summary.json"), &summary)?;

    println!("run directory: {}", dir.display());
    println!(
        "  {} records to t = {:.6} in {} steps",
        summary.n_records, summary.t_final, summary.steps
    );
    println!(
        "  final: ‖u‖ = {:.6e}, ‖τ‖ = {:.6e}, energy = {:.6e}",
        summary.l2_u_final, summary.l2_tau_final, summary.energy_final
    );
    println!(
        "  max |energy-budget residual| = {:.3e}",
        summary.max_abs_budget_residual
    );
    if let Some(f) = &summary.exponential_fit {
        println!(
            "  exponential fit of ‖∇u‖ + k‖τ‖: rate {:.6e} (r² = {:.4})",
            f.rate, f.r_squared
        );
    }
    if let Some(f) = &summary.polynomial_fit {
        println!(
            "  polynomial fit of ‖∇u‖ + k‖τ‖: exponent {:.6e} (r² = {:.4})",
            f.rate, f.r_squared
        );
    }
    Ok(0)
}

// ------------------------------------------------------------------
// experiment
// ------------------------------------------------------------------

fn cmd_experiment_list() -> Result<u8> {
    for name in ExperimentName::ALL {
        println!("{}", name.as_str());
    }
    Ok(0)
}

fn cmd_experiment_run(args: &ExperimentRunArgs) -> Result<u8> {
    let name: ExperimentName = args.name.parse()?;
    let scenario = match &args.config {
        Some(path) => config::scenario_from_text(name, &fs::read_to_string(path)?)?,
        None => Scenario::for_name(name),
    };
    let dir = io::create_run_dir(&args.out, name.as_str())?;
    io::write_json(&dir.join("scenario.json"), &scenario)?;
    println!(
        "study {} on a {}D n = {} grid, output in {}",
        name.as_str(),
        scenario.grid_dim,
        scenario.grid_n,
        dir.display()
    );
    let report = experiments::run_scenario(&scenario)?;
    io::write_json(&dir.join("report.json"), &report)?;
    print_report(&report);
    Ok(if report.passed() { 0 } else { 1 })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn print_report(report: &ExperimentReport) {
    match report {
        ExperimentReport::SmallKDecay(r) => {
            for e in &r.entries {
                println!(
                    "  k = {:<7} rate = {:.5e} (floor {:.2e}, k/4 = {:.2e}, k/2 = {:.2e}, \
                     oracle = {:.5e}), r² = {:.4}, monotone = {} -> {}",
                    e.k,
                    e.fitted_rate,
                    e.rate_floor,
                    e.quarter_k,
                    e.half_k,
                    e.oracle_rate,
                    e.r_squared,
                    e.monotone_decreasing,
                    verdict(e.pass)
                );
            }
            println!(
                "  rates monotone in k: {}",
                verdict(r.rates_monotone_in_k)
            );
            println!("small_k_decay: {}", verdict(r.pass));
        }
        ExperimentReport::KContinuity(r) => {
            for e in &r.entries {
                println!("  δ = {:<7} sup-gap = {:.6e}", e.delta, e.sup_gap);
            }
            println!(
                "  halving ratios: {:?} in band: {}",
                r.ratios
                    .iter()
                    .map(|x| format!("{x:.3}"))
                    .collect::<Vec<_>>(),
                verdict(r.ratios_in_band)
            );
            println!(
                "  strictly decreasing: {}, δ = 0 gap = {:.1e}",
                verdict(r.strictly_decreasing),
                r.zero_delta_gap
            );
            println!("k_continuity: {}", verdict(r.pass));
        }
        ExperimentReport::KToZeroJump(r) => {
            for e in &r.entries {
                match e.t_star {
                    Some(t) => println!(
                        "  k = {:<7} ({}D) t* = {:.3} (predicted {:.3}), gap = {:.5e} \
                         (floor {:.5e}), Euler drift = {:.2e} -> {}",
                        e.k,
                        e.grid_dim,
                        t,
                        e.t_star_predicted,
                        e.gap,
                        e.gap_floor,
                        e.euler_drift,
                        verdict(e.pass)
                    ),
                    None => println!(
                        "  k = {:<7} ({}D) no half-norm crossing before the horizon -> {}",
                        e.k,
                        e.grid_dim,
                        verdict(e.pass)
                    ),
                }
            }
            println!("k_to_zero_jump: {}", verdict(r.pass));
        }
        ExperimentReport::KSweep(r) => {
            for e in &r.entries {
                println!(
                    "  k = {:<10.4e} exp rate = {:+.4e} (r² {:.4}) | poly exponent = {:+.4e} \
                     (r² {:.4}) | prefers {} | max ‖∇u‖ = {:.3e}",
                    e.k,
                    e.exp_rate,
                    e.exp_r_squared,
                    e.poly_exponent,
                    e.poly_r_squared,
                    if e.exponential_preferred {
                        "exponential"
                    } else {
                        "polynomial"
                    },
                    e.max_h1_u
                );
            }
            println!(
                "  k = 0 rate = {:.2e} ({}), positive-k rates positive: {}, jump ratio = {:.2e}",
                r.k_zero_rate,
                verdict(r.k_zero_ok),
                verdict(r.rates_positive),
                r.jump_ratio
            );
            println!("k_sweep: {}", verdict(r.pass));
        }
    }
}

// ------------------------------------------------------------------
// analyze
// ------------------------------------------------------------------

/// Parses an extended Lebesgue exponent: a number `>= 1` or `inf`.
fn parse_exponent(text: &str) -> Result<f64> {
    if text.trim() == "inf" {
        return Ok(f64::INFINITY);
    }
    let p: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::Param(format!("exponent must be a number or 'inf', got '{text}'")))?;
    if p >= 1.0 {
        Ok(p)
    } else {
        Err(Error::Param(format!("exponent must be >= 1, got {p}")))
    }
}

/// One CSV row per dyadic block: `j, 2^{js} ‖Δⱼf‖_p`. Block −1 is the
/// low-frequency block.
fn block_rows(field: &SpectralField, s: f64, p: f64) -> Result<Vec<(i32, f64)>> {
    let partition = DyadicPartition::new(field.grid())?;
    let mut rows = Vec::new();
    for j in -1..=partition.j_max() {
        let block = partition.block_project(field, j)?;
        let lp = if p == 2.0 {
            block.l2_norm()
        } else {
            block.to_physical().lp_norm(p)
        };
        rows.push((j, (2.0f64).powi(j).powf(s) * lp));
    }
    Ok(rows)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<u8> {
    let p = parse_exponent(&args.p)?;
    let ck = io::read_checkpoint(&args.checkpoint)?;
    let field = match args.field.as_str() {
        "u" => &ck.state.u,
        "tau" => &ck.state.tau,
        other => {
            return Err(Error::Param(format!(
                "field must be 'u' or 'tau', got '{other}'"
            )))
        }
    };
    let rows = block_rows(field, args.s, p)?;
    let mut text = String::from("j,weighted_block_norm\n");
    for (j, norm) in &rows {
        text.push_str(&format!("{j},{norm:.16e}\n"));
    }
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

// ------------------------------------------------------------------
// spectrum
// ------------------------------------------------------------------

/// One lattice representative per distinct `|ξ|²` with `0 < |ξ| <= xi_max`;
/// the linear generator depends on `ξ` only through `|ξ|²`.
fn mode_representatives(dim: usize, xi_max: i64) -> Result<Vec<(f64, [i64; 3])>> {
    if dim != 2 && dim != 3 {
        return Err(Error::Param(format!("dimension must be 2 or 3, got {dim}")));
    }
    if xi_max < 1 {
        return Err(Error::Param(format!("xi-max must be >= 1, got {xi_max}")));
    }
    let zmax = if dim == 3 { xi_max } else { 0 };
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for i in 0..=xi_max {
        for j in 0..=xi_max {
            for l in 0..=zmax {
                let sq = i * i + j * j + l * l;
                if sq == 0 || sq > xi_max * xi_max {
                    continue;
                }
                if seen.insert(sq) {
                    reps.push(((sq as f64).sqrt(), [i, j, l]));
                }
            }
        }
    }
    reps.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(reps)
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<u8> {
    let reps = mode_representatives(args.dim, args.xi_max)?;
    let mut text = String::from("xi_abs,k,slowest_re,slowest_im\n");
    for &k in &args.ks {
        let params = ModelParams {
            k,
            b: args.b,
            nu: args.nu,
            eta: args.eta,
            mu: args.mu,
            alpha: args.alpha,
        };
        params.validate()?;
        for &(r, xi) in &reps {
            let spectrum = ModeMatrix::transverse(args.dim, &params, xi)?.spectrum();
            // Sorted by (re, im): the last entry is the slowest eigenvalue,
            // the +im member of its conjugate pair.
            let slowest = spectrum.last().copied().expect("spectrum is nonempty");
            text.push_str(&format!(
                "{r:.16e},{k:.16e},{:.16e},{:.16e}\n",
                slowest.re, slowest.im
            ));
        }
    }
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

// ------------------------------------------------------------------
// report
// ------------------------------------------------------------------

fn cmd_report(args: &ReportArgs) -> Result<u8> {
    let mut all_passed = true;
    for path in &args.paths {
        let file = if path.is_dir() {
            path.join("report.json")
        } else {
            path.clone()
        };
        let report: ExperimentReport = io::read_json(&file)?;
        let name = match &report {
            ExperimentReport::SmallKDecay(_) => ExperimentName::SmallKDecay,
            ExperimentReport::KContinuity(_) => ExperimentName::KContinuity,
            ExperimentReport::KToZeroJump(_) => ExperimentName::KToZeroJump,
            ExperimentReport::KSweep(_) => ExperimentName::KSweep,
        };
        println!(
            "{}: {} ({})",
            file.display(),
            verdict(report.passed()),
            name.as_str()
        );
        all_passed &= report.passed();
    }
    Ok(if all_passed { 0 } else { 1 })
}
