//! Run configuration files.
//!
//! A small INI-style format: `[section]` headers, `key = value` pairs,
//! full-line `#` comments, blank lines. Parsing collects *every* problem it
//! finds — syntax errors, unknown keys, out-of-range values — each with its
//! 1-based line number, and reports them together as [`Error::Config`].
//!
//! ```text
//! [grid]
//! dim = 2
//! n = 128
//!
//! [model]
//! k = 0.5
//! b = 0.0
//!
//! [stepper]
//! scheme = rk4_if
//! dt_init = 0.2
//!
//! [data]
//! family = random_divfree
//! amplitude_u = 0.1
//! amplitude_tau = 0.1
//! seed = 7
//! spectrum_slope = 2.5
//!
//! [run]
//! t_end = 20
//! snapshot_every = 0.5
//! output = runs/demo
//! ```
//!
//! [`RunConfig::from_str`] reads a plain-simulation config (sections `grid`,
//! `model`, `stepper`, `data`, `diagnostics`, `run`; every key optional with
//! documented defaults). [`scenario_from_text`] starts from a named study's
//! defaults and applies overrides (the same sections, plus `experiment` and
//! `thresholds`).

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticsConfig;
use crate::error::{ConfigError, Error, Result};
use crate::experiments::{ExperimentName, Scenario};
use crate::grid::Grid;
use crate::initial_data::DataSpec;
use crate::integrator::{Scheme, StepperConfig};
use crate::rhs::ModelParams;

/// A fully resolved single-run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub grid_dim: usize,
    pub grid_n: usize,
    pub params: ModelParams,
    pub stepper: StepperConfig,
    pub data: DataSpec,
    pub diagnostics: DiagnosticsConfig,
    pub t_end: f64,
    pub snapshot_every: f64,
    /// Run directory; `None` keeps results in memory / on stdout.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid_dim: 2,
            grid_n: 64,
            params: ModelParams::new(1.0, 0.0).expect("default parameters are valid"),
            stepper: StepperConfig::default(),
            data: DataSpec::RandomDivfree {
                amplitude_u: 0.1,
                amplitude_tau: 0.1,
                seed: 1,
                spectrum_slope: 2.5,
            },
            diagnostics: DiagnosticsConfig::default(),
            t_end: 10.0,
            snapshot_every: 0.5,
            output: None,
        }
    }
}

impl RunConfig {
    /// Parses a config text, collecting all errors.
    pub fn from_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let (items, mut errors) = tokenize(text);
        let mut data_section = DataSection::default();
        for item in &items {
            let handled = match item.section.as_str() {
                "grid" => apply_grid(&mut cfg.grid_dim, &mut cfg.grid_n, item, &mut errors),
                "model" => apply_model(&mut cfg.params, item, &mut errors),
                "stepper" => apply_stepper(&mut cfg.stepper, item, &mut errors),
                "data" => data_section.collect(item, &mut errors),
                "diagnostics" => apply_diagnostics(&mut cfg.diagnostics, item, &mut errors),
                "run" => match item.key.as_str() {
                    "t_end" => {
                        set_f64(&mut cfg.t_end, item, &mut errors, |v| v > 0.0, "t_end > 0");
                        true
                    }
                    "snapshot_every" => {
                        set_f64(
                            &mut cfg.snapshot_every,
                            item,
                            &mut errors,
                            |v| v > 0.0,
                            "snapshot_every > 0",
                        );
                        true
                    }
                    "output" => {
                        cfg.output = Some(PathBuf::from(item.value.clone()));
                        true
                    }
                    _ => false,
                },
                _ => {
                    errors.push(ConfigError {
                        line: item.line,
                        message: format!("unknown section [{}]", item.section),
                    });
                    true
                }
            };
            if !handled {
                errors.push(unknown_key(item));
            }
        }
        if let Some(data) = data_section.resolve(&mut errors) {
            cfg.data = data;
        }
        if let Err(e) = Grid::new(cfg.grid_dim, cfg.grid_n) {
            errors.push(ConfigError { line: 0, message: e.to_string() });
        }
        if errors.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errors))
        }
    }

    /// Reads and parses a config file.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_str(&std::fs::read_to_string(path)?)
    }
}

/// Builds a study scenario: the named study's defaults with the config
/// text's overrides applied.
pub fn scenario_from_text(name: ExperimentName, text: &str) -> Result<Scenario> {
    let mut sc = Scenario::for_name(name);
    let (items, mut errors) = tokenize(text);
    let mut data_section = DataSection::default();
    for item in &items {
        let handled = match item.section.as_str() {
            "grid" => apply_grid(&mut sc.grid_dim, &mut sc.grid_n, item, &mut errors),
            "model" => apply_model(&mut sc.base, item, &mut errors),
            "stepper" => apply_stepper(&mut sc.stepper, item, &mut errors),
            "data" => data_section.collect(item, &mut errors),
            "diagnostics" => apply_diagnostics(&mut sc.diagnostics, item, &mut errors),
            "experiment" => match item.key.as_str() {
                "horizon" => {
                    set_f64(&mut sc.horizon, item, &mut errors, |v| v > 0.0, "horizon > 0");
                    true
                }
                "snapshot_every" => {
                    set_f64(
                        &mut sc.snapshot_every,
                        item,
                        &mut errors,
                        |v| v > 0.0,
                        "snapshot_every > 0",
                    );
                    true
                }
                "ks" => {
                    if let Some(v) = parse_f64_list(item, &mut errors) {
                        sc.ks = v;
                    }
                    true
                }
                "deltas" => {
                    if let Some(v) = parse_f64_list(item, &mut errors) {
                        sc.deltas = v;
                    }
                    true
                }
                _ => false,
            },
            "thresholds" => apply_thresholds(&mut sc.thresholds, item, &mut errors),
            _ => {
                errors.push(ConfigError {
                    line: item.line,
                    message: format!("unknown section [{}]", item.section),
                });
                true
            }
        };
        if !handled {
            errors.push(unknown_key(item));
        }
    }
    if let Some(data) = data_section.resolve(&mut errors) {
        sc.data = data;
    }
    if let Err(e) = sc.validate() {
        errors.push(ConfigError { line: 0, message: e.to_string() });
    }
    if errors.is_empty() {
        Ok(sc)
    } else {
        Err(Error::Config(errors))
    }
}

// ------------------------------------------------------------------
// Tokenizer
// ------------------------------------------------------------------

#[derive(Debug, Clone)]
struct RawItem {
    line: usize,
    section: String,
    key: String,
    value: String,
}

/// Splits the text into `(section, key, value)` items, reporting syntax
/// problems (bad headers, lines without `=`, keys before any section,
/// duplicate keys within a section).
fn tokenize(text: &str) -> (Vec<RawItem>, Vec<ConfigError>) {
    let mut items: Vec<RawItem> = Vec::new();
    let mut errors: Vec<ConfigError> = Vec::new();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            match rest.strip_suffix(']') {
                Some(name) if !name.trim().is_empty() => {
                    section = Some(name.trim().to_string());
                }
                _ => errors.push(ConfigError {
                    line,
                    message: format!("malformed section header '{trimmed}'"),
                }),
            }
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            errors.push(ConfigError {
                line,
                message: format!("expected 'key = value', got '{trimmed}'"),
            });
            continue;
        };
        let Some(section) = section.clone() else {
            errors.push(ConfigError {
                line,
                message: "key appears before any [section] header".into(),
            });
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            errors.push(ConfigError {
                line,
                message: format!("empty key or value in '{trimmed}'"),
            });
            continue;
        }
        if let Some(first) = items.iter().find(|i| i.section == section && i.key == key) {
            errors.push(ConfigError {
                line,
                message: format!(
                    "duplicate key '{key}' in [{section}] (first set on line {})",
                    first.line
                ),
            });
            continue;
        }
        items.push(RawItem { line, section, key, value });
    }
    (items, errors)
}

fn unknown_key(item: &RawItem) -> ConfigError {
    ConfigError {
        line: item.line,
        message: format!("unknown key '{}' in section [{}]", item.key, item.section),
    }
}

// ------------------------------------------------------------------
// Typed value parsing
// ------------------------------------------------------------------

fn parse_f64(item: &RawItem, errors: &mut Vec<ConfigError>) -> Option<f64> {
    match item.value.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(v),
        _ => {
            errors.push(ConfigError {
                line: item.line,
                message: format!("'{}' must be a finite number, got '{}'", item.key, item.value),
            });
            None
        }
    }
}

fn set_f64(
    slot: &mut f64,
    item: &RawItem,
    errors: &mut Vec<ConfigError>,
    ok: impl Fn(f64) -> bool,
    requirement: &str,
) {
    if let Some(v) = parse_f64(item, errors) {
        if ok(v) {
            *slot = v;
        } else {
            errors.push(ConfigError {
                line: item.line,
                message: format!("'{}' requires {requirement}, got {v}", item.key),
            });
        }
    }
}

fn parse_u64(item: &RawItem, errors: &mut Vec<ConfigError>) -> Option<u64> {
    match item.value.parse::<u64>() {
        Ok(v) => Some(v),
        Err(_) => {
            errors.push(ConfigError {
                line: item.line,
                message: format!(
                    "'{}' must be a nonnegative integer, got '{}'",
                    item.key, item.value
                ),
            });
            None
        }
    }
}

fn parse_f64_list(item: &RawItem, errors: &mut Vec<ConfigError>) -> Option<Vec<f64>> {
    let mut out = Vec::new();
    for tok in item.value.split_whitespace() {
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ => {
                errors.push(ConfigError {
                    line: item.line,
                    message: format!("'{}' has a non-numeric entry '{tok}'", item.key),
                });
                return None;
            }
        }
    }
    if out.is_empty() {
        errors.push(ConfigError {
            line: item.line,
            message: format!("'{}' must list at least one number", item.key),
        });
        return None;
    }
    Some(out)
}

// ------------------------------------------------------------------
// Section appliers (shared between RunConfig and Scenario parsing)
// ------------------------------------------------------------------

fn apply_grid(
    dim: &mut usize,
    n: &mut usize,
    item: &RawItem,
    errors: &mut Vec<ConfigError>,
) -> bool {
    match item.key.as_str() {
        "dim" => {
            match item.value.parse::<usize>() {
                Ok(v @ (2 | 3)) => *dim = v,
                _ => errors.push(ConfigError {
                    line: item.line,
                    message: format!("'dim' must be 2 or 3, got '{}'", item.value),
                }),
            }
            true
        }
        "n" => {
            match item.value.parse::<usize>() {
                Ok(v) => *n = v,
                Err(_) => errors.push(ConfigError {
                    line: item.line,
                    message: format!("'n' must be a positive integer, got '{}'", item.value),
                }),
            }
            true
        }
        _ => false,
    }
}

fn apply_model(params: &mut ModelParams, item: &RawItem, errors: &mut Vec<ConfigError>) -> bool {
    match item.key.as_str() {
        "k" => set_f64(&mut params.k, item, errors, |v| (0.0..=10.0).contains(&v), "k in [0, 10]"),
        "b" => set_f64(&mut params.b, item, errors, |v| (-1.0..=1.0).contains(&v), "b in [-1, 1]"),
        "nu" => set_f64(&mut params.nu, item, errors, |v| v >= 0.0, "nu >= 0"),
        "eta" => set_f64(
            &mut params.eta,
            item,
            errors,
            |v| v > 0.0,
            "eta > 0 (the model needs genuine stress diffusion)",
        ),
        "mu" => set_f64(&mut params.mu, item, errors, |v| v >= 0.0, "mu >= 0"),
        "alpha" => set_f64(&mut params.alpha, item, errors, |v| v > 0.0, "alpha > 0"),
        _ => return false,
    }
    true
}

fn apply_stepper(
    stepper: &mut StepperConfig,
    item: &RawItem,
    errors: &mut Vec<ConfigError>,
) -> bool {
    match item.key.as_str() {
        "scheme" => {
            match item.value.as_str() {
                "rk4_if" => stepper.scheme = Scheme::Rk4If,
                "rk2_if" => stepper.scheme = Scheme::Rk2If,
                other => errors.push(ConfigError {
                    line: item.line,
                    message: format!("'scheme' must be rk4_if or rk2_if, got '{other}'"),
                }),
            }
            true
        }
        "dt_init" => {
            set_f64(&mut stepper.dt_init, item, errors, |v| v > 0.0, "dt_init > 0");
            true
        }
        "cfl_safety" => {
            set_f64(
                &mut stepper.cfl_safety,
                item,
                errors,
                |v| v > 0.0 && v <= 1.0,
                "cfl_safety in (0, 1]",
            );
            true
        }
        "dt_fixed" => {
            let mut v = 0.0;
            set_f64(&mut v, item, errors, |v| v > 0.0, "dt_fixed > 0");
            if v > 0.0 {
                stepper.dt_fixed = Some(v);
            }
            true
        }
        "max_steps" => {
            if let Some(v) = parse_u64(item, errors) {
                stepper.max_steps = v;
            }
            true
        }
        _ => false,
    }
}

fn apply_diagnostics(
    diag: &mut DiagnosticsConfig,
    item: &RawItem,
    errors: &mut Vec<ConfigError>,
) -> bool {
    match item.key.as_str() {
        "hs_exponent" => {
            set_f64(&mut diag.hs_exponent, item, errors, |_| true, "a number");
            true
        }
        "besov_s" => {
            set_f64(&mut diag.besov_s, item, errors, |_| true, "a number");
            true
        }
        "besov_p" => {
            if item.value == "inf" {
                diag.besov_p = f64::INFINITY;
            } else {
                set_f64(&mut diag.besov_p, item, errors, |v| v >= 1.0, "p >= 1 (or 'inf')");
            }
            true
        }
        _ => false,
    }
}

fn apply_thresholds(
    th: &mut crate::experiments::Thresholds,
    item: &RawItem,
    errors: &mut Vec<ConfigError>,
) -> bool {
    match item.key.as_str() {
        "rate_floor_fraction" => {
            set_f64(&mut th.rate_floor_fraction, item, errors, |v| v > 0.0, "a positive number")
        }
        "r2_min" => set_f64(&mut th.r2_min, item, errors, |v| (0.0..=1.0).contains(&v), "in [0, 1]"),
        "ratio_lo" => set_f64(&mut th.ratio_band.0, item, errors, |v| v > 0.0, "a positive number"),
        "ratio_hi" => set_f64(&mut th.ratio_band.1, item, errors, |v| v > 0.0, "a positive number"),
        "gap_fraction" => {
            set_f64(&mut th.gap_fraction, item, errors, |v| (0.0..=1.0).contains(&v), "in [0, 1]")
        }
        "euler_drift_max" => {
            set_f64(&mut th.euler_drift_max, item, errors, |v| v > 0.0, "a positive number")
        }
        "window_fraction" => set_f64(
            &mut th.window_fraction,
            item,
            errors,
            |v| v > 0.0 && v < 1.0,
            "in (0, 1)",
        ),
        "k_zero_rate_max" => {
            set_f64(&mut th.k_zero_rate_max, item, errors, |v| v > 0.0, "a positive number")
        }
        _ => return false,
    }
    true
}

// ------------------------------------------------------------------
// The [data] section: family first, then family-specific keys
// ------------------------------------------------------------------

#[derive(Default)]
struct DataSection {
    items: Vec<RawItem>,
}

impl DataSection {
    fn collect(&mut self, item: &RawItem, _errors: &mut Vec<ConfigError>) -> bool {
        self.items.push(item.clone());
        true
    }

    /// Resolves the collected `[data]` keys into a spec. Returns `None`
    /// when the section is absent (keep the default) or broken.
    fn resolve(self, errors: &mut Vec<ConfigError>) -> Option<DataSpec> {
        if self.items.is_empty() {
            return None;
        }
        let Some(family_item) = self.items.iter().find(|i| i.key == "family") else {
            errors.push(ConfigError {
                line: self.items[0].line,
                message: "[data] section needs a 'family' key".into(),
            });
            return None;
        };
        let mut spec = match family_item.value.as_str() {
            "random_divfree" => DataSpec::RandomDivfree {
                amplitude_u: 0.1,
                amplitude_tau: 0.1,
                seed: 1,
                spectrum_slope: 2.5,
            },
            "frequency_bump" => DataSpec::FrequencyBump { shell: 3, amplitude: 1.0 },
            "axisymmetric_scaled" => DataSpec::AxisymmetricScaled { k: 0.1, eps0: 0.05 },
            "single_mode" => DataSpec::SingleMode { xi: [0, 1, 0], amplitude: 1e-6 },
            other => {
                errors.push(ConfigError {
                    line: family_item.line,
                    message: format!(
                        "unknown data family '{other}'; expected random_divfree, \
                         frequency_bump, axisymmetric_scaled, or single_mode"
                    ),
                });
                return None;
            }
        };
        let before = errors.len();
        for item in self.items.iter().filter(|i| i.key != "family") {
            let handled = match &mut spec {
                DataSpec::RandomDivfree {
                    amplitude_u,
                    amplitude_tau,
                    seed,
                    spectrum_slope,
                } => match item.key.as_str() {
                    "amplitude_u" => {
                        set_f64(amplitude_u, item, errors, |v| v >= 0.0, "amplitude_u >= 0");
                        true
                    }
                    "amplitude_tau" => {
                        set_f64(amplitude_tau, item, errors, |v| v >= 0.0, "amplitude_tau >= 0");
                        true
                    }
                    "seed" => {
                        if let Some(v) = parse_u64(item, errors) {
                            *seed = v;
                        }
                        true
                    }
                    "spectrum_slope" => {
                        set_f64(spectrum_slope, item, errors, |_| true, "a number");
                        true
                    }
                    _ => false,
                },
                DataSpec::FrequencyBump { shell, amplitude } => match item.key.as_str() {
                    "shell" => {
                        if let Some(v) = parse_u64(item, errors) {
                            *shell = v as u32;
                        }
                        true
                    }
                    "amplitude" => {
                        set_f64(amplitude, item, errors, |v| v > 0.0, "amplitude > 0");
                        true
                    }
                    _ => false,
                },
                DataSpec::AxisymmetricScaled { k, eps0 } => match item.key.as_str() {
                    "k" => {
                        set_f64(k, item, errors, |v| v > 0.0 && v <= 1.0, "k in (0, 1]");
                        true
                    }
                    "eps0" => {
                        set_f64(eps0, item, errors, |v| v > 0.0, "eps0 > 0");
                        true
                    }
                    _ => false,
                },
                DataSpec::SingleMode { xi, amplitude } => match item.key.as_str() {
                    "xi" => {
                        let parts: Vec<i64> = item
                            .value
                            .split_whitespace()
                            .filter_map(|t| t.parse::<i64>().ok())
                            .collect();
                        let n_tokens = item.value.split_whitespace().count();
                        if parts.len() == n_tokens && (parts.len() == 2 || parts.len() == 3) {
                            *xi = [parts[0], parts[1], *parts.get(2).unwrap_or(&0)];
                        } else {
                            errors.push(ConfigError {
                                line: item.line,
                                message: format!(
                                    "'xi' must be 2 or 3 integers, got '{}'",
                                    item.value
                                ),
                            });
                        }
                        true
                    }
                    "amplitude" => {
                        set_f64(amplitude, item, errors, |v| v > 0.0, "amplitude > 0");
                        true
                    }
                    _ => false,
                },
            };
            if !handled {
                errors.push(ConfigError {
                    line: item.line,
                    message: format!(
                        "key '{}' does not apply to data family '{}'",
                        item.key, family_item.value
                    ),
                });
            }
        }
        if errors.len() > before {
            return None;
        }
        Some(spec)
    }
}
