//! Experiment harness: the four numbered studies behind the decay claims.
//!
//! * [`run_small_k_decay`] — small coupling `k`: the damped quantity
//!   `q(t) = ‖∇u‖ + k‖τ‖` must decay exponentially at a late-window rate
//!   of at least `k/8`, with rates increasing in `k`;
//! * [`run_k_continuity`] — solutions depend continuously on `k` over a
//!   fixed horizon: the sup-over-time state gap `G(δ)` between couplings
//!   `k` and `k + δ` shrinks first-order in `δ`;
//! * [`run_k_to_zero_jump`] — the `k → 0` limit is singular on long
//!   horizons: by the time the coupled run has lost half its velocity
//!   norm, the (conservative) Euler run from the same data is a state-gap
//!   of order `½‖u₀‖` away;
//! * [`run_k_sweep`] — a survey across `k ∈ {0} ∪ [0.01, 10]` tabulating
//!   fitted exponential rates, polynomial exponents, and which law fits
//!   better.
//!
//! Every study is described by a [`Scenario`] (numerical setup plus the
//! thresholds its report is judged against) and returns a serializable
//! report whose `pass` field is the machine-checkable verdict. Runs are
//! deterministic; independent runs within a study execute in parallel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{self, DiagnosticsConfig, TimeSeriesRecord};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::initial_data::{self, DataSpec};
use crate::integrator::{self, SimState, StepperConfig};
use crate::linear;
use crate::rhs::ModelParams;

/// The four studies the harness knows how to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentName {
    SmallKDecay,
    KContinuity,
    KToZeroJump,
    KSweep,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 4] = [
        ExperimentName::SmallKDecay,
        ExperimentName::KContinuity,
        ExperimentName::KToZeroJump,
        ExperimentName::KSweep,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentName::SmallKDecay => "small_k_decay",
            ExperimentName::KContinuity => "k_continuity",
            ExperimentName::KToZeroJump => "k_to_zero_jump",
            ExperimentName::KSweep => "k_sweep",
        }
    }
}

impl std::str::FromStr for ExperimentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| {
                Error::Experiment(format!(
                    "unknown experiment '{s}'; expected one of small_k_decay, \
                     k_continuity, k_to_zero_jump, k_sweep"
                ))
            })
    }
}

/// Pass/fail thresholds a scenario's report is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Fitted decay rate must reach this fraction of `k`.
    pub rate_floor_fraction: f64,
    /// Minimum `r²` of the exponential fit.
    pub r2_min: f64,
    /// Accepted band for `G(δ)/G(δ/2)` in the continuity study.
    pub ratio_band: (f64, f64),
    /// The Euler-vs-coupled gap must reach this fraction of `½‖u₀‖`.
    pub gap_fraction: f64,
    /// Maximum relative drift of the Euler kinetic norm.
    pub euler_drift_max: f64,
    /// Fits use the trailing fraction of the run.
    pub window_fraction: f64,
    /// Maximum |fitted rate| accepted as "no decay" at `k = 0`.
    pub k_zero_rate_max: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            rate_floor_fraction: 0.125,
            r2_min: 0.98,
            ratio_band: (1.6, 2.4),
            gap_fraction: 0.95,
            euler_drift_max: 1e-6,
            window_fraction: 0.6,
            k_zero_rate_max: 1e-4,
        }
    }
}

/// Complete, reproducible description of one study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: ExperimentName,
    pub grid_dim: usize,
    pub grid_n: usize,
    /// Shared model parameters; each run overrides `k`.
    pub base: ModelParams,
    pub stepper: StepperConfig,
    pub data: DataSpec,
    pub diagnostics: DiagnosticsConfig,
    pub snapshot_every: f64,
    /// Time horizon; studies with `k`-dependent horizons treat it as a cap.
    pub horizon: f64,
    /// Couplings to run (study-specific meaning; unused by `k_continuity`).
    pub ks: Vec<f64>,
    /// Coupling increments for `k_continuity`, largest first.
    pub deltas: Vec<f64>,
    pub thresholds: Thresholds,
}

impl Scenario {
    /// Small-`k` exponential decay at desk scale.
    pub fn small_k_decay() -> Self {
        Self {
            name: ExperimentName::SmallKDecay,
            grid_dim: 2,
            grid_n: 128,
            base: ModelParams::new(0.1, 0.0).expect("default parameters are valid"),
            stepper: StepperConfig {
                dt_init: 0.2,
                ..StepperConfig::default()
            },
            data: DataSpec::RandomDivfree {
                amplitude_u: 1e-3,
                amplitude_tau: 1e-3,
                seed: 2024,
                spectrum_slope: 2.5,
            },
            diagnostics: DiagnosticsConfig::default(),
            snapshot_every: 0.2,
            horizon: 400.0,
            ks: vec![0.02, 0.05, 0.1],
            deltas: Vec::new(),
            thresholds: Thresholds::default(),
        }
    }

    /// Continuity in the coupling at a fixed base `k = 0.5`.
    pub fn k_continuity() -> Self {
        Self {
            name: ExperimentName::KContinuity,
            grid_dim: 2,
            grid_n: 128,
            base: ModelParams::new(0.5, 0.0).expect("default parameters are valid"),
            stepper: StepperConfig {
                dt_init: 0.2,
                ..StepperConfig::default()
            },
            data: DataSpec::RandomDivfree {
                amplitude_u: 0.1,
                amplitude_tau: 0.1,
                seed: 7,
                spectrum_slope: 2.5,
            },
            diagnostics: DiagnosticsConfig::default(),
            snapshot_every: 1.0,
            horizon: 20.0,
            ks: Vec::new(),
            deltas: vec![0.2, 0.1, 0.05, 0.025],
            thresholds: Thresholds::default(),
        }
    }

    /// The singular `k → 0` limit against paired Euler runs.
    pub fn k_to_zero_jump() -> Self {
        Self {
            name: ExperimentName::KToZeroJump,
            grid_dim: 2,
            grid_n: 128,
            base: ModelParams::new(0.1, 0.0).expect("default parameters are valid"),
            stepper: StepperConfig {
                dt_init: 0.25,
                ..StepperConfig::default()
            },
            data: DataSpec::AxisymmetricScaled { k: 0.1, eps0: 0.05 },
            diagnostics: DiagnosticsConfig::default(),
            snapshot_every: 0.5,
            horizon: 400.0,
            ks: vec![0.1, 0.05, 0.025],
            deltas: Vec::new(),
            thresholds: Thresholds::default(),
        }
    }

    /// Decay-law survey over `k ∈ {0} ∪ [0.01, 10]`.
    pub fn k_sweep() -> Self {
        let mut ks = vec![0.0];
        // Twelve logarithmically spaced couplings.
        for i in 0..12 {
            let e = -2.0 + 3.0 * i as f64 / 11.0;
            ks.push(10f64.powf(e));
        }
        Self {
            name: ExperimentName::KSweep,
            grid_dim: 2,
            grid_n: 64,
            base: ModelParams::new(0.1, 0.0).expect("default parameters are valid"),
            stepper: StepperConfig {
                dt_init: 0.2,
                ..StepperConfig::default()
            },
            data: DataSpec::RandomDivfree {
                amplitude_u: 5e-3,
                amplitude_tau: 5e-3,
                seed: 11,
                spectrum_slope: 2.5,
            },
            diagnostics: DiagnosticsConfig::default(),
            snapshot_every: 0.25,
            horizon: 30.0,
            ks,
            deltas: Vec::new(),
            thresholds: Thresholds::default(),
        }
    }

    pub fn for_name(name: ExperimentName) -> Self {
        match name {
            ExperimentName::SmallKDecay => Self::small_k_decay(),
            ExperimentName::KContinuity => Self::k_continuity(),
            ExperimentName::KToZeroJump => Self::k_to_zero_jump(),
            ExperimentName::KSweep => Self::k_sweep(),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid_dim, self.grid_n)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.base.validate()?;
        self.stepper.validate()?;
        if !(self.snapshot_every > 0.0 && self.snapshot_every.is_finite()) {
            return Err(Error::Experiment(format!(
                "snapshot cadence must be positive, got {}",
                self.snapshot_every
            )));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Experiment(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        let th = &self.thresholds;
        if !(th.window_fraction > 0.0 && th.window_fraction < 1.0) {
            return Err(Error::Experiment(format!(
                "window fraction must lie in (0, 1), got {}",
                th.window_fraction
            )));
        }
        if th.ratio_band.0 >= th.ratio_band.1 {
            return Err(Error::Experiment(format!(
                "empty continuity ratio band [{}, {}]",
                th.ratio_band.0, th.ratio_band.1
            )));
        }
        Ok(())
    }
}

/// Energy fraction carried by the top third of the retained frequency
/// band (`|ξ|_∞ > n/6`, against the dealiasing cut `n/3`). Values above a
/// percent flag an under-resolved run.
pub fn top_shell_fraction(f: &SpectralField) -> f64 {
    let grid = f.grid();
    let cut = grid.n() as f64 / 6.0;
    let mut top = 0.0f64;
    let mut total = 0.0f64;
    for c in 0..f.rank().components(grid.dim()) {
        let comp = f.comp(c);
        grid.for_each_mode(|m, xi| {
            let e = comp[m].norm_sqr();
            total += e;
            let linf = xi.iter().map(|x| x.abs()).max().unwrap_or(0) as f64;
            if linf > cut {
                top += e;
            }
        });
    }
    if total == 0.0 {
        0.0
    } else {
        top / total
    }
}

/// Runs one simulation from a data spec, collecting a diagnostic record at
/// every snapshot boundary (including `t = 0` and the final time) and
/// passing each live state to `on_snapshot` before it is discarded.
pub fn run_with<F>(
    grid: Grid,
    params: &ModelParams,
    stepper: &StepperConfig,
    data: &DataSpec,
    diag: &DiagnosticsConfig,
    t_end: f64,
    cadence: f64,
    on_snapshot: F,
) -> Result<(Vec<TimeSeriesRecord>, SimState)>
where
    F: FnMut(&SimState, &TimeSeriesRecord) -> Result<()>,
{
    let (u, tau) = initial_data::build(grid, data)?;
    let mut state = SimState::new(0.0, u, tau)?;
    let records = continue_with(&mut state, params, stepper, diag, t_end, cadence, on_snapshot)?;
    Ok((records, state))
}

/// The collection loop of [`run_with`] on an already-built state, so a
/// reloaded checkpoint continues with the same record bookkeeping.
pub fn continue_with<F>(
    state: &mut SimState,
    params: &ModelParams,
    stepper: &StepperConfig,
    diag: &DiagnosticsConfig,
    t_end: f64,
    cadence: f64,
    mut on_snapshot: F,
) -> Result<Vec<TimeSeriesRecord>>
where
    F: FnMut(&SimState, &TimeSeriesRecord) -> Result<()>,
{
    let mut records: Vec<TimeSeriesRecord> = Vec::new();
    let mut prev: Option<(TimeSeriesRecord, f64)> = None;
    integrator::run_until(state, params, stepper, t_end, Some(cadence), |s| {
        let mut rec = diagnostics::snapshot(s, params, diag)?;
        if let Some((prev_rec, prev_diss)) = &prev {
            rec.budget_residual =
                diagnostics::budget_residual(prev_rec, &rec, s.dissipation_integral - prev_diss);
        }
        prev = Some((rec, s.dissipation_integral));
        on_snapshot(s, &rec)?;
        records.push(rec);
        Ok(())
    })?;
    Ok(records)
}

/// Trailing fraction of the records' time span, the default fitting window.
pub fn late_window(records: &[TimeSeriesRecord], fraction: f64) -> Result<(f64, f64)> {
    let first = records
        .first()
        .ok_or_else(|| Error::Experiment("run produced no records".into()))?;
    let last = records[records.len() - 1];
    if last.t <= first.t {
        return Err(Error::Experiment(format!(
            "degenerate record span [{}, {}]",
            first.t, last.t
        )));
    }
    Ok((last.t - fraction * (last.t - first.t), last.t))
}

/// The damped quantity `q(t) = ‖∇u‖ + k‖τ‖`, as a fit-ready series. For
/// divergence-free fields `‖∇u‖_{L²} = ‖ω‖_{L²}`, so this is also the
/// vorticity-based quantity.
pub fn damped_quantity(records: &[TimeSeriesRecord], k: f64) -> Vec<(f64, f64)> {
    records.iter().map(|r| (r.t, r.h1_u + k * r.l2_tau)).collect()
}

/// True when the series is strictly decreasing on the window, up to a
/// relative slack of a few ulps.
fn strictly_decreasing_on(samples: &[(f64, f64)], window: (f64, f64)) -> bool {
    let mut prev: Option<f64> = None;
    for &(t, y) in samples {
        if t < window.0 || t > window.1 {
            continue;
        }
        if let Some(p) = prev {
            if y >= p * (1.0 + 1e-12) {
                return false;
            }
        }
        prev = Some(y);
    }
    true
}

// ------------------------------------------------------------------
// Small-k exponential decay
// ------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallKEntry {
    pub k: f64,
    pub t_end: f64,
    pub window: (f64, f64),
    pub fitted_rate: f64,
    pub r_squared: f64,
    /// Reference slopes the fitted rate is tabulated against.
    pub quarter_k: f64,
    pub half_k: f64,
    /// Slowest decay rate of the per-mode linear system.
    pub oracle_rate: f64,
    /// The gate: `rate_floor_fraction · k`.
    pub rate_floor: f64,
    pub monotone_decreasing: bool,
    pub initial_h1_u: f64,
    pub initial_l2_tau: f64,
    pub max_h1_u: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallKDecayReport {
    pub entries: Vec<SmallKEntry>,
    /// Fitted rates increase with `k`.
    pub rates_monotone_in_k: bool,
    pub pass: bool,
}

/// For each small coupling, fits the late-window exponential rate of
/// `q(t) = ‖∇u‖ + k‖τ‖` over a horizon of `min(8/k, horizon)` and gates it
/// against `rate_floor_fraction · k`, the fit quality, and monotone decay.
pub fn run_small_k_decay(sc: &Scenario) -> Result<SmallKDecayReport> {
    sc.validate()?;
    let grid = sc.grid()?;
    if sc.ks.is_empty() {
        return Err(Error::Experiment("small_k_decay needs a nonempty k list".into()));
    }
    let mut entries: Vec<SmallKEntry> = sc
        .ks
        .par_iter()
        .map(|&k| -> Result<SmallKEntry> {
            let params = ModelParams { k, ..sc.base };
            params.validate()?;
            let t_end = (8.0 / k).min(sc.horizon);
            let (records, _) = run_with(
                grid,
                &params,
                &sc.stepper,
                &sc.data,
                &sc.diagnostics,
                t_end,
                sc.snapshot_every,
                |_, _| Ok(()),
            )?;
            let q = damped_quantity(&records, k);
            let window = late_window(&records, sc.thresholds.window_fraction)?;
            let fit = diagnostics::fit_exponential_rate(&q, window)?;
            let monotone = strictly_decreasing_on(&q, window);
            let oracle_rate = linear::slowest_decay_rate(grid.dim(), &params, 4)?;
            let rate_floor = sc.thresholds.rate_floor_fraction * k;
            let max_h1_u = records.iter().fold(0.0f64, |m, r| m.max(r.h1_u));
            let pass = fit.rate >= rate_floor
                && fit.r_squared >= sc.thresholds.r2_min
                && monotone;
            Ok(SmallKEntry {
                k,
                t_end,
                window,
                fitted_rate: fit.rate,
                r_squared: fit.r_squared,
                quarter_k: k / 4.0,
                half_k: k / 2.0,
                oracle_rate,
                rate_floor,
                monotone_decreasing: monotone,
                initial_h1_u: records[0].h1_u,
                initial_l2_tau: records[0].l2_tau,
                max_h1_u,
                pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.k.total_cmp(&b.k));
    let rates_monotone_in_k = entries
        .windows(2)
        .all(|w| w[0].fitted_rate < w[1].fitted_rate);
    let pass = rates_monotone_in_k && entries.iter().all(|e| e.pass);
    Ok(SmallKDecayReport {
        entries,
        rates_monotone_in_k,
        pass,
    })
}

// ------------------------------------------------------------------
// Continuity in the coupling
// ------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityEntry {
    pub delta: f64,
    /// `sup_t (‖u_{k+δ} - u_k‖ + ‖τ_{k+δ} - τ_k‖)` over the snapshots.
    pub sup_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KContinuityReport {
    pub k_base: f64,
    /// Largest `δ` first.
    pub entries: Vec<ContinuityEntry>,
    /// `G(δ_i) / G(δ_{i+1})` for consecutive entries.
    pub ratios: Vec<f64>,
    pub strictly_decreasing: bool,
    pub ratios_in_band: bool,
    /// Gap of a re-run at `δ = 0`; determinism makes it exactly zero.
    pub zero_delta_gap: f64,
    pub pass: bool,
}

/// Runs the base coupling once, storing states at every snapshot, then
/// each perturbed coupling against it. The sup-over-time state gap must
/// shrink roughly linearly in `δ`, and a `δ = 0` re-run must reproduce
/// the base run bit-for-bit.
pub fn run_k_continuity(sc: &Scenario) -> Result<KContinuityReport> {
    sc.validate()?;
    let grid = sc.grid()?;
    if sc.deltas.is_empty() {
        return Err(Error::Experiment("k_continuity needs a nonempty delta list".into()));
    }
    let mut deltas = sc.deltas.clone();
    deltas.sort_by(|a, b| b.total_cmp(a));
    if deltas.last().copied().unwrap_or(0.0) <= 0.0 {
        return Err(Error::Experiment("continuity deltas must be positive".into()));
    }
    let mut base_states: Vec<(f64, SpectralField, SpectralField)> = Vec::new();
    run_with(
        grid,
        &sc.base,
        &sc.stepper,
        &sc.data,
        &sc.diagnostics,
        sc.horizon,
        sc.snapshot_every,
        |s, _| {
            base_states.push((s.t, s.u.clone(), s.tau.clone()));
            Ok(())
        },
    )?;

    let sup_gap_vs_base = |delta: f64| -> Result<f64> {
        let params = ModelParams {
            k: sc.base.k + delta,
            ..sc.base
        };
        params.validate()?;
        let mut idx = 0usize;
        let mut sup = 0.0f64;
        run_with(
            grid,
            &params,
            &sc.stepper,
            &sc.data,
            &sc.diagnostics,
            sc.horizon,
            sc.snapshot_every,
            |s, _| {
                let (tb, ub, taub) = base_states.get(idx).ok_or_else(|| {
                    Error::Experiment(format!(
                        "perturbed run produced an extra snapshot at t = {}",
                        s.t
                    ))
                })?;
                // Both runs compute boundaries as t0 + j·cadence, so the
                // times agree bitwise.
                if s.t != *tb {
                    return Err(Error::Experiment(format!(
                        "snapshot misalignment: {} vs {}",
                        s.t, tb
                    )));
                }
                sup = sup.max(s.u.l2_distance(ub) + s.tau.l2_distance(taub));
                idx += 1;
                Ok(())
            },
        )?;
        if idx != base_states.len() {
            return Err(Error::Experiment(format!(
                "perturbed run stopped after {idx} of {} snapshots",
                base_states.len()
            )));
        }
        Ok(sup)
    };

    let mut jobs: Vec<f64> = deltas.clone();
    jobs.push(0.0);
    let gaps: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&d| sup_gap_vs_base(d).map(|g| (d, g)))
        .collect::<Result<Vec<_>>>()?;
    let zero_delta_gap = gaps
        .iter()
        .find(|(d, _)| *d == 0.0)
        .map(|(_, g)| *g)
        .expect("zero-delta job was queued");
    let entries: Vec<ContinuityEntry> = deltas
        .iter()
        .map(|&d| ContinuityEntry {
            delta: d,
            sup_gap: gaps
                .iter()
                .find(|(gd, _)| *gd == d)
                .map(|(_, g)| *g)
                .expect("every delta was run"),
        })
        .collect();
    let ratios: Vec<f64> = entries
        .windows(2)
        .map(|w| w[0].sup_gap / w[1].sup_gap)
        .collect();
    let strictly_decreasing = entries.windows(2).all(|w| w[0].sup_gap > w[1].sup_gap);
    let (lo, hi) = sc.thresholds.ratio_band;
    let ratios_in_band = ratios.iter().all(|r| *r >= lo && *r <= hi);
    let pass = strictly_decreasing && ratios_in_band && zero_delta_gap == 0.0;
    Ok(KContinuityReport {
        k_base: sc.base.k,
        entries,
        ratios,
        strictly_decreasing,
        ratios_in_band,
        zero_delta_gap,
        pass,
    })
}

// ------------------------------------------------------------------
// The singular k -> 0 limit
// ------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEntry {
    pub k: f64,
    pub grid_dim: usize,
    pub eps0: f64,
    /// Effective width of the initial bump.
    pub data_width: f64,
    /// First time the coupled run's `‖u‖` reaches `½‖u₀‖` (interpolated
    /// between snapshots); absent if it never crossed before the horizon.
    pub t_star: Option<f64>,
    /// `ln 2` over the linear oracle's slowest rate, for comparison.
    pub t_star_predicted: f64,
    /// `‖u^k(t*)‖`, from the interpolated state.
    pub coupled_norm_at_star: f64,
    /// `|‖u⁰(t*)‖ - ‖u₀‖| / ‖u₀‖` for the paired Euler run.
    pub euler_drift: f64,
    /// Energy fraction in the top frequency shell of the Euler state.
    pub euler_top_shell: f64,
    /// `‖u⁰(t*) - u^k(t*)‖`.
    pub gap: f64,
    /// The gate: `gap_fraction · ½‖u₀‖`.
    pub gap_floor: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KToZeroJumpReport {
    pub entries: Vec<JumpEntry>,
    pub pass: bool,
}

/// For each coupling, runs the coupled system until its velocity norm has
/// halved, then runs the decoupled Euler system from the same data to that
/// time. Euler conserves its norm, so the two states must be at least
/// `≈ ½‖u₀‖` apart — the energy jump of the `k → 0` limit.
pub fn run_k_to_zero_jump(sc: &Scenario) -> Result<KToZeroJumpReport> {
    sc.validate()?;
    let grid = sc.grid()?;
    if sc.ks.is_empty() {
        return Err(Error::Experiment("k_to_zero_jump needs a nonempty k list".into()));
    }
    let entries: Vec<JumpEntry> = sc
        .ks
        .par_iter()
        .map(|&k| jump_pair(sc, grid, k))
        .collect::<Result<Vec<_>>>()?;
    let pass = entries.iter().all(|e| e.pass);
    Ok(KToZeroJumpReport { entries, pass })
}

/// One coupled-vs-Euler pair of the jump study.
fn jump_pair(sc: &Scenario, grid: Grid, k: f64) -> Result<JumpEntry> {
    // The data family is k-dependent; carry the configured eps0 over.
    let (data, eps0) = match &sc.data {
        DataSpec::AxisymmetricScaled { eps0, .. } => {
            (DataSpec::AxisymmetricScaled { k, eps0: *eps0 }, *eps0)
        }
        other => {
            let (u, _) = initial_data::build(grid, other)?;
            (other.clone(), u.l2_norm())
        }
    };
    let params = ModelParams { k, ..sc.base };
    params.validate()?;
    let (u0, tau0) = initial_data::build(grid, &data)?;
    let mut state = SimState::new(0.0, u0.clone(), tau0)?;
    let u0_norm = state.u.l2_norm();
    let target = 0.5 * u0_norm;

    // March the coupled run one snapshot interval at a time, keeping the
    // latest state pair so the crossing can be interpolated.
    let mut prev: (f64, SpectralField, f64) = (0.0, state.u.clone(), u0_norm);
    let mut crossing: Option<((f64, SpectralField, f64), (f64, SpectralField, f64))> = None;
    while crossing.is_none() && state.t < sc.horizon * (1.0 - 1e-12) {
        let seg_end = (state.t + sc.snapshot_every).min(sc.horizon);
        integrator::run_until(&mut state, &params, &sc.stepper, seg_end, None, |_| Ok(()))?;
        let norm = state.u.l2_norm();
        if norm <= target {
            crossing = Some((prev.clone(), (state.t, state.u.clone(), norm)));
        } else {
            prev = (state.t, state.u.clone(), norm);
        }
    }
    let oracle_rate = linear::slowest_decay_rate(grid.dim(), &params, 4)?;
    let t_star_predicted = std::f64::consts::LN_2 / oracle_rate;
    let gap_floor = sc.thresholds.gap_fraction * target;

    let Some(((t0, u_before, n0), (t1, u_after, n1))) = crossing else {
        // Never halved before the horizon: report the failure faithfully.
        return Ok(JumpEntry {
            k,
            grid_dim: grid.dim(),
            eps0,
            data_width: initial_data::axisymmetric_width(grid, k),
            t_star: None,
            t_star_predicted,
            coupled_norm_at_star: f64::NAN,
            euler_drift: f64::NAN,
            euler_top_shell: f64::NAN,
            gap: f64::NAN,
            gap_floor,
            pass: false,
        });
    };

    // t* from linear interpolation of the norm between the bracketing
    // snapshots; the state at t* from the matching state interpolation.
    let theta = if n0 == n1 { 1.0 } else { (n0 - target) / (n0 - n1) };
    let t_star = t0 + theta * (t1 - t0);
    let series = vec![(t0, u_before), (t1, u_after)];
    let u_coupled = diagnostics::interpolate_state(&series, t_star)?;
    let coupled_norm_at_star = u_coupled.l2_norm();

    // Euler twin from the identical data, run to exactly t*.
    let euler = ModelParams { k: 0.0, ..sc.base };
    let (eu0, etau0) = initial_data::build(grid, &data)?;
    let mut euler_state = SimState::new(0.0, eu0, etau0)?;
    integrator::run_until(&mut euler_state, &euler, &sc.stepper, t_star, None, |_| Ok(()))?;
    let euler_norm = euler_state.u.l2_norm();
    let euler_drift = (euler_norm - u0_norm).abs() / u0_norm;
    let euler_top_shell = top_shell_fraction(&euler_state.u);
    let gap = euler_state.u.l2_distance(&u_coupled);

    let pass = gap >= gap_floor
        && euler_drift <= sc.thresholds.euler_drift_max
        && coupled_norm_at_star <= target * (1.0 + 1e-6);
    Ok(JumpEntry {
        k,
        grid_dim: grid.dim(),
        eps0,
        data_width: initial_data::axisymmetric_width(grid, k),
        t_star: Some(t_star),
        t_star_predicted,
        coupled_norm_at_star,
        euler_drift,
        euler_top_shell,
        gap,
        gap_floor,
        pass,
    })
}

// ------------------------------------------------------------------
// Coupling sweep
// ------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub k: f64,
    pub exp_rate: f64,
    pub exp_r_squared: f64,
    pub poly_exponent: f64,
    pub poly_r_squared: f64,
    /// True when the exponential law fits at least as well.
    pub exponential_preferred: bool,
    pub oracle_rate: f64,
    pub final_energy: f64,
    pub final_l2_u: f64,
    pub max_h1_u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSweepReport {
    pub entries: Vec<SweepEntry>,
    /// `|fitted rate|` at `k = 0` stays below the no-decay threshold.
    pub k_zero_rate: f64,
    pub k_zero_ok: bool,
    /// Every positive coupling shows a positive fitted rate.
    pub rates_positive: bool,
    /// Smallest positive-k rate over the `k = 0` threshold: large values
    /// mean the observed rate does not continue to the decoupled limit.
    pub jump_ratio: f64,
    pub pass: bool,
}

/// Fits both decay laws for every coupling in the sweep and tabulates the
/// results; the gates are "no decay at `k = 0`" and "decay whenever
/// `k > 0`".
pub fn run_k_sweep(sc: &Scenario) -> Result<KSweepReport> {
    sc.validate()?;
    let grid = sc.grid()?;
    if sc.ks.is_empty() {
        return Err(Error::Experiment("k_sweep needs a nonempty k list".into()));
    }
    let mut entries: Vec<SweepEntry> = sc
        .ks
        .par_iter()
        .map(|&k| -> Result<SweepEntry> {
            let params = ModelParams { k, ..sc.base };
            params.validate()?;
            let (records, _) = run_with(
                grid,
                &params,
                &sc.stepper,
                &sc.data,
                &sc.diagnostics,
                sc.horizon,
                sc.snapshot_every,
                |_, _| Ok(()),
            )?;
            let q = damped_quantity(&records, k);
            let window = late_window(&records, sc.thresholds.window_fraction)?;
            let exp_fit = diagnostics::fit_exponential_rate(&q, window)?;
            let poly_fit = diagnostics::fit_polynomial_rate(&q, window)?;
            let oracle_rate = if k > 0.0 {
                linear::slowest_decay_rate(grid.dim(), &params, 4)?
            } else {
                0.0
            };
            let last = records[records.len() - 1];
            Ok(SweepEntry {
                k,
                exp_rate: exp_fit.rate,
                exp_r_squared: exp_fit.r_squared,
                poly_exponent: poly_fit.rate,
                poly_r_squared: poly_fit.r_squared,
                exponential_preferred: exp_fit.r_squared >= poly_fit.r_squared,
                oracle_rate,
                final_energy: last.energy,
                final_l2_u: last.l2_u,
                max_h1_u: records.iter().fold(0.0f64, |m, r| m.max(r.h1_u)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.k.total_cmp(&b.k));
    let k_zero_rate = entries
        .iter()
        .find(|e| e.k == 0.0)
        .map(|e| e.exp_rate)
        .unwrap_or(0.0);
    let k_zero_ok = k_zero_rate.abs() <= sc.thresholds.k_zero_rate_max;
    let positive: Vec<&SweepEntry> = entries.iter().filter(|e| e.k > 0.0).collect();
    let rates_positive = positive.iter().all(|e| e.exp_rate > 0.0);
    let min_positive_rate = positive
        .iter()
        .map(|e| e.exp_rate)
        .fold(f64::INFINITY, f64::min);
    let jump_ratio = min_positive_rate / sc.thresholds.k_zero_rate_max.max(k_zero_rate.abs());
    let pass = k_zero_ok && rates_positive;
    Ok(KSweepReport {
        entries,
        k_zero_rate,
        k_zero_ok,
        rates_positive,
        jump_ratio,
        pass,
    })
}

// ------------------------------------------------------------------
// Dispatch
// ------------------------------------------------------------------

/// A study's report, tagged by which study produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum ExperimentReport {
    SmallKDecay(SmallKDecayReport),
    KContinuity(KContinuityReport),
    KToZeroJump(KToZeroJumpReport),
    KSweep(KSweepReport),
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        match self {
            ExperimentReport::SmallKDecay(r) => r.pass,
            ExperimentReport::KContinuity(r) => r.pass,
            ExperimentReport::KToZeroJump(r) => r.pass,
            ExperimentReport::KSweep(r) => r.pass,
        }
    }
}

/// Runs whichever study the scenario names.
pub fn run_scenario(sc: &Scenario) -> Result<ExperimentReport> {
    match sc.name {
        ExperimentName::SmallKDecay => Ok(ExperimentReport::SmallKDecay(run_small_k_decay(sc)?)),
        ExperimentName::KContinuity => Ok(ExperimentReport::KContinuity(run_k_continuity(sc)?)),
        ExperimentName::KToZeroJump => Ok(ExperimentReport::KToZeroJump(run_k_to_zero_jump(sc)?)),
        ExperimentName::KSweep => Ok(ExperimentReport::KSweep(run_k_sweep(sc)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::field::Rank;

    #[test]
    fn small_k_decay_passes_at_reduced_scale() {
        let mut sc = Scenario::small_k_decay();
        sc.grid_n = 32;
        sc.ks = vec![0.2];
        sc.horizon = 40.0;
        sc.snapshot_every = 0.5;
        let report = run_small_k_decay(&sc).unwrap();
        assert!(report.pass, "{report:?}");
        let e = &report.entries[0];
        assert!((e.t_end - 40.0).abs() < 1e-12, "horizon 8/k");
        // At this amplitude the nonlinear rate tracks the linear oracle.
        assert!(
            (e.fitted_rate - e.oracle_rate).abs() <= 0.2 * e.oracle_rate,
            "fitted {} vs oracle {}",
            e.fitted_rate,
            e.oracle_rate
        );
        assert!(e.fitted_rate >= e.rate_floor);
        assert!(e.r_squared >= 0.98);
    }

    #[test]
    fn continuity_gap_shrinks_linearly_and_zero_delta_is_exact() {
        let mut sc = Scenario::k_continuity();
        sc.grid_n = 32;
        sc.deltas = vec![0.2, 0.1];
        sc.horizon = 5.0;
        sc.snapshot_every = 0.5;
        let report = run_k_continuity(&sc).unwrap();
        assert_eq!(report.zero_delta_gap, 0.0, "determinism makes the re-run exact");
        assert!(report.strictly_decreasing, "{report:?}");
        assert_eq!(report.ratios.len(), 1);
        assert!(
            report.ratios[0] > 1.3 && report.ratios[0] < 3.0,
            "halving ratio {}",
            report.ratios[0]
        );
        assert!(report.entries[0].sup_gap > 0.0);
    }

    #[test]
    fn jump_study_finds_the_half_norm_gap() {
        let mut sc = Scenario::k_to_zero_jump();
        sc.grid_n = 32;
        sc.ks = vec![0.5];
        sc.horizon = 30.0;
        let report = run_k_to_zero_jump(&sc).unwrap();
        assert!(report.pass, "{report:?}");
        let e = &report.entries[0];
        let t_star = e.t_star.expect("the coupled run halves its norm");
        // Crossing time in the ballpark of the linear prediction.
        assert!(
            t_star > 0.5 * e.t_star_predicted && t_star < 2.0 * e.t_star_predicted,
            "t* {} vs predicted {}",
            t_star,
            e.t_star_predicted
        );
        assert!(e.euler_drift <= 1e-6, "Euler drift {}", e.euler_drift);
        assert!(e.gap >= e.gap_floor);
        assert!(e.euler_top_shell < 0.01, "resolved run");
    }

    #[test]
    fn sweep_separates_zero_from_positive_couplings() {
        let mut sc = Scenario::k_sweep();
        sc.grid_n = 32;
        sc.ks = vec![0.0, 0.5, 5.0];
        sc.horizon = 10.0;
        sc.snapshot_every = 0.5;
        let report = run_k_sweep(&sc).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.k_zero_rate.abs() <= 1e-4);
        assert!(report.rates_positive);
        assert!(report.jump_ratio > 10.0, "jump ratio {}", report.jump_ratio);
        // Entries come back sorted by k.
        let ks: Vec<f64> = report.entries.iter().map(|e| e.k).collect();
        assert_eq!(ks, vec![0.0, 0.5, 5.0]);
    }

    #[test]
    fn scenarios_validate_and_round_trip_through_json() {
        for name in ExperimentName::ALL {
            let sc = Scenario::for_name(name);
            sc.validate().unwrap();
            assert_eq!(sc.name, name);
            let json = serde_json::to_string(&sc).unwrap();
            let back: Scenario = serde_json::from_str(&json).unwrap();
            assert_eq!(back, sc);
        }
        assert_eq!(
            "small_k_decay".parse::<ExperimentName>().unwrap(),
            ExperimentName::SmallKDecay
        );
        assert!("bogus".parse::<ExperimentName>().is_err());
        let mut bad = Scenario::small_k_decay();
        bad.snapshot_every = 0.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn top_shell_fraction_splits_low_from_high_modes() {
        let grid = Grid::new(2, 32).unwrap();
        let mut low = SpectralField::zeros(grid, Rank::Vector);
        low.set_conjugate_pair(0, [0, 2, 0], Complex64::new(1.0, 0.0));
        assert_eq!(top_shell_fraction(&low), 0.0);
        let mut high = SpectralField::zeros(grid, Rank::Vector);
        high.set_conjugate_pair(0, [0, 9, 0], Complex64::new(1.0, 0.0));
        assert_eq!(top_shell_fraction(&high), 1.0);
        let mut mixed = SpectralField::zeros(grid, Rank::Vector);
        mixed.set_conjugate_pair(0, [0, 2, 0], Complex64::new(1.0, 0.0));
        mixed.set_conjugate_pair(1, [9, 0, 0], Complex64::new(1.0, 0.0));
        let frac = top_shell_fraction(&mixed);
        assert!((frac - 0.5).abs() <= 1e-12);
        assert_eq!(top_shell_fraction(&SpectralField::zeros(grid, Rank::Vector)), 0.0);
    }
}
