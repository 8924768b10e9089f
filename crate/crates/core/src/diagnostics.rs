//! Per-snapshot norm records, energy-budget residuals, decay-rate fitting,
//! and state-difference evaluation between runs.
//!
//! A [`TimeSeriesRecord`] is one row of a run's time series: the standard
//! Sobolev/Besov norms of the state, the damped quantity `Γ`, the coupled
//! energy, and the energy-budget residual over the preceding interval. Rate
//! fitting is plain least squares on `log y` against `t` (exponential) or
//! `log(1+t)` (polynomial); both report `r²` so callers can use the better
//! fit as a discriminator rather than trusting either blindly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::integrator::SimState;
use crate::lp::DyadicPartition;
use crate::rhs::{self, ModelParams};

/// Which configurable norms a snapshot computes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsConfig {
    /// Exponent of the inhomogeneous `H^s` norm recorded for the stress.
    pub hs_exponent: f64,
    /// Smoothness index of the recorded Besov norm `B^s_{p,1}` of `u`.
    pub besov_s: f64,
    /// Integrability index of that Besov norm (`∞` allowed, spelled
    /// `"inf"` in serialized form — JSON has no infinity).
    #[serde(with = "extended_real")]
    pub besov_p: f64,
}

/// Serializes a possibly-infinite index as a number or the string `"inf"`.
mod extended_real {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Text(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got \"{s}\""
            ))),
        }
    }
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            hs_exponent: 2.0,
            besov_s: 0.0,
            besov_p: f64::INFINITY,
        }
    }
}

/// One row of a run's diagnostic time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesRecord {
    pub t: f64,
    pub l2_u: f64,
    pub h1_u: f64,
    pub hm1_u: f64,
    pub l2_tau: f64,
    pub h1_tau: f64,
    pub hs_tau: f64,
    pub l2_gamma: f64,
    pub besov_u: f64,
    pub energy: f64,
    /// Energy-budget residual over the interval ending at `t` (0 on the
    /// first record); see [`budget_residual`].
    pub budget_residual: f64,
}

impl TimeSeriesRecord {
    /// CSV column names, in field order.
    pub const CSV_HEADER: &'static str =
        "t,l2_u,h1_u,hm1_u,l2_tau,h1_tau,hs_tau,l2_gamma,besov_u,energy,budget_residual";

    /// One CSV row at full round-trip precision (17 significant digits).
    pub fn csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.t,
            self.l2_u,
            self.h1_u,
            self.hm1_u,
            self.l2_tau,
            self.h1_tau,
            self.hs_tau,
            self.l2_gamma,
            self.besov_u,
            self.energy,
            self.budget_residual
        )
    }

    pub fn is_finite(&self) -> bool {
        [
            self.t,
            self.l2_u,
            self.h1_u,
            self.hm1_u,
            self.l2_tau,
            self.h1_tau,
            self.hs_tau,
            self.l2_gamma,
            self.besov_u,
            self.energy,
            self.budget_residual,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Computes every norm of one state. All `L²`-based norms are spectral
/// (Parseval); the `p = ∞` Besov blocks go through collocation values. The
/// `budget_residual` field is left at zero — it belongs to an interval, not
/// a point, and is filled by the caller from [`budget_residual`].
pub fn snapshot(
    state: &SimState,
    params: &ModelParams,
    cfg: &DiagnosticsConfig,
) -> Result<TimeSeriesRecord> {
    let gamma = rhs::gamma_quantity(&state.u, &state.tau, params.k)?;
    let partition = DyadicPartition::new(state.u.grid())?;
    let besov_u = partition.besov_norm(&state.u, cfg.besov_s, cfg.besov_p, 1.0)?;
    let record = TimeSeriesRecord {
        t: state.t,
        l2_u: state.u.l2_norm(),
        h1_u: state.u.h1_norm(),
        hm1_u: state.u.hm1_norm(),
        l2_tau: state.tau.l2_norm(),
        h1_tau: state.tau.h1_norm(),
        hs_tau: state.tau.hs_norm(cfg.hs_exponent),
        l2_gamma: gamma.l2_norm(),
        besov_u,
        energy: state.energy(params),
        budget_residual: 0.0,
    };
    if !record.is_finite() {
        return Err(Error::Data(format!(
            "non-finite diagnostic at t = {}",
            state.t
        )));
    }
    Ok(record)
}

/// Signed energy-budget residual `ΔE + ∫dissipation` over one interval.
/// The integral is supplied by the caller — the integrator's running
/// quadrature gives scheme-order accuracy. Zero (to integrator tolerance)
/// certifies the discrete energy identity of the corotational system; at
/// `k = ν = 0` it reduces to conservation of `½‖u‖²`.
pub fn budget_residual(
    prev: &TimeSeriesRecord,
    next: &TimeSeriesRecord,
    dissipation_integral: f64,
) -> f64 {
    next.energy - prev.energy + dissipation_integral
}

/// A fitted decay law over a time window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Decay rate (exponential fit) or decay exponent (polynomial fit);
    /// positive means decay.
    pub rate: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

/// Least squares of `z` on `x`; returns `(slope, r²)`. A series with no
/// `z`-variance fits perfectly by convention.
fn least_squares(xs: &[f64], zs: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let zm = zs.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxz = 0.0;
    let mut szz = 0.0;
    for (x, z) in xs.iter().zip(zs.iter()) {
        sxx += (x - xm) * (x - xm);
        sxz += (x - xm) * (z - zm);
        szz += (z - zm) * (z - zm);
    }
    if sxx <= 0.0 {
        return Err(Error::Fit("window has no spread in the time variable".into()));
    }
    let slope = sxz / sxx;
    let ss_res = szz - slope * sxz;
    let r2 = if szz <= 1e-300 {
        1.0
    } else {
        1.0 - (ss_res / szz).max(0.0)
    };
    Ok((slope, r2))
}

fn windowed_log_samples(
    samples: &[(f64, f64)],
    window: (f64, f64),
) -> Result<(Vec<f64>, Vec<f64>)> {
    if window.1 <= window.0 {
        return Err(Error::Fit(format!(
            "empty fit window [{}, {}]",
            window.0, window.1
        )));
    }
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    for &(t, y) in samples {
        if t < window.0 || t > window.1 {
            continue;
        }
        if !(y > 0.0) {
            return Err(Error::Fit(format!(
                "non-positive sample y = {y} at t = {t}; log fit undefined"
            )));
        }
        xs.push(t);
        zs.push(y.ln());
    }
    if xs.len() < 8 {
        return Err(Error::Fit(format!(
            "need at least 8 samples in the window, found {}",
            xs.len()
        )));
    }
    Ok((xs, zs))
}

/// Fits `y ≈ C e^{-rate·t}` on the window by least squares of `log y` on
/// `t`. Requires at least 8 strictly positive samples inside the window.
pub fn fit_exponential_rate(samples: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let (xs, zs) = windowed_log_samples(samples, window)?;
    let (slope, r2) = least_squares(&xs, &zs)?;
    Ok(FitResult {
        rate: -slope,
        r_squared: r2,
        window,
        n_points: xs.len(),
    })
}

/// Fits `y ≈ C (1+t)^{-rate}` on the window by least squares of `log y` on
/// `log(1+t)`. Same sample requirements as the exponential fit.
pub fn fit_polynomial_rate(samples: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let (ts, zs) = windowed_log_samples(samples, window)?;
    for &t in &ts {
        if t <= -1.0 {
            return Err(Error::Fit(format!("t = {t} breaks the log(1+t) axis")));
        }
    }
    let xs: Vec<f64> = ts.iter().map(|t| (1.0 + t).ln()).collect();
    let (slope, r2) = least_squares(&xs, &zs)?;
    Ok(FitResult {
        rate: -slope,
        r_squared: r2,
        window,
        n_points: xs.len(),
    })
}

/// Linear interpolation of a stored state series at time `t`. The series
/// must be sorted by time and bracket `t`; an exact sample is returned
/// as-is.
pub fn interpolate_state(series: &[(f64, SpectralField)], t: f64) -> Result<SpectralField> {
    if series.is_empty() {
        return Err(Error::Data("cannot interpolate an empty state series".into()));
    }
    for pair in series.windows(2) {
        if pair[1].0 <= pair[0].0 {
            return Err(Error::Data(format!(
                "state series times must increase: {} then {}",
                pair[0].0, pair[1].0
            )));
        }
    }
    let (t_first, t_last) = (series[0].0, series[series.len() - 1].0);
    if t < t_first || t > t_last {
        return Err(Error::Data(format!(
            "t = {t} outside the stored range [{t_first}, {t_last}]"
        )));
    }
    for (tk, f) in series {
        if *tk == t {
            return Ok(f.clone());
        }
    }
    let hi = series.iter().position(|(tk, _)| *tk > t).expect("bracketed above");
    let (t0, f0) = &series[hi - 1];
    let (t1, f1) = &series[hi];
    let theta = (t - t0) / (t1 - t0);
    let mut out = f0.clone();
    out.scale(1.0 - theta);
    out.axpy(theta, f1);
    Ok(out)
}

/// `L²` distance between two runs' states at a common time, both linearly
/// interpolated from their stored snapshots. This is a true state-space
/// distance, not a difference of norms.
pub fn l2_gap(
    a: &[(f64, SpectralField)],
    b: &[(f64, SpectralField)],
    t: f64,
) -> Result<f64> {
    let fa = interpolate_state(a, t)?;
    let fb = interpolate_state(b, t)?;
    Ok(fa.l2_distance(&fb))
}
