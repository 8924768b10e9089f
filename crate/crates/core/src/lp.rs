//! Littlewood-Paley decomposition: dyadic frequency blocks, Besov norms,
//! and Bernstein-quotient checks.
//!
//! The low block multiplier `χ` is a radial `C^∞` cutoff with `χ = 1` for
//! `|ξ| ≤ 1` and `χ = 0` for `|ξ| ≥ 4/3`; the annular profile is the
//! telescoping difference `φ(ξ) = χ(ξ/2) - χ(ξ)`, supported in
//! `3/4 ≤ |ξ| ≤ 8/3` (actually in `[1, 8/3]`) and identically 1 on
//! `[4/3, 2]`. Because dividing by powers of two is exact in binary floating
//! point, the partition identity
//!
//! ```text
//!   χ(ξ) + Σ_{j=0}^{j_max} φ(2^{-j} ξ) = 1
//! ```
//!
//! telescopes to `χ(2^{-(j_max+1)} ξ)` with *exact* cancellation, and
//! `j_max` is chosen as the smallest index for which that final term is 1 on
//! every grid frequency (so blocks with `j > j_max` are identically zero on
//! the grid and reconstruction is exact for arbitrary fields).

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::ops;

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`, `C^∞` monotone in between.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Radial low-pass profile: 1 on `r ≤ 1`, 0 on `r ≥ 4/3`.
fn chi(r: f64) -> f64 {
    1.0 - smooth_step((r - 1.0) * 3.0)
}

/// Annular profile `φ(r) = χ(r/2) - χ(r)`.
fn phi(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// Dyadic partition of the grid frequencies into blocks `j = -1, 0, …,
/// j_max`.
#[derive(Debug, Clone, Copy)]
pub struct DyadicPartition {
    grid: Grid,
    j_max: i32,
}

impl DyadicPartition {
    /// Builds the partition for `grid`. `j_max` is the largest block index
    /// with any grid frequency in its support; every grid frequency
    /// (including the corner `|ξ| = √d·n/2`) is covered, so the partition
    /// of unity and block reconstruction are exact.
    pub fn new(grid: Grid) -> Result<Self> {
        if grid.n() < 8 {
            return Err(Error::Block(format!(
                "grid with n = {} is too small for any dyadic shell",
                grid.n()
            )));
        }
        let max_xi = (grid.dim() as f64).sqrt() * (grid.n() as f64 / 2.0);
        // Smallest J with max_xi <= 2^{J+1}.
        let mut j_max = 0i32;
        while max_xi > (2.0f64).powi(j_max + 1) {
            j_max += 1;
        }
        Ok(Self { grid, j_max })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Largest block index with nonempty support on the grid.
    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// Multiplier of block `j` at radius `r = |ξ|`.
    fn filter(&self, j: i32, r: f64) -> f64 {
        if j == -1 {
            chi(r)
        } else {
            // r·2^{-j} with exact power-of-two scaling.
            phi(r * (2.0f64).powi(-j))
        }
    }

    /// Frequency projection `Δ_j f`. Block `-1` is the low-pass `χ` block;
    /// blocks with `j > j_max` have no grid support and return zeros.
    pub fn block_project(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        if j < -1 {
            return Err(Error::Block(format!("block index {j} below -1")));
        }
        if f.grid() != self.grid {
            return Err(Error::Shape("field grid does not match partition".into()));
        }
        let mut out = f.clone();
        if j > self.j_max {
            out.scale(0.0);
            return Ok(out);
        }
        let grid = self.grid;
        for c in 0..out.n_comps() {
            let comp = out.comp_mut(c);
            grid.for_each_mode(|m, xi| {
                let r = ((xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64).sqrt();
                comp[m] *= self.filter(j, r);
            });
        }
        Ok(out)
    }

    /// Besov norm `‖ (2^{js} ‖Δ_j f‖_{L^p})_{j ≥ -1} ‖_{ℓ^r}`; `p` and `r`
    /// may be `f64::INFINITY`.
    pub fn besov_norm(&self, f: &SpectralField, s: f64, p: f64, r: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::Param(format!("Besov p must be >= 1, got {p}")));
        }
        if !(r >= 1.0) {
            return Err(Error::Param(format!("Besov r must be >= 1, got {r}")));
        }
        let mut terms = Vec::with_capacity((self.j_max + 2) as usize);
        for j in -1..=self.j_max {
            let block = self.block_project(f, j)?;
            let lp = if p == 2.0 {
                // Parseval shortcut: the quadrature L² equals the spectral
                // L², no inverse transform needed.
                block.l2_norm()
            } else {
                block.to_physical().lp_norm(p)
            };
            terms.push((2.0f64).powi(j).powf(s) * lp);
        }
        let norm = if r.is_infinite() {
            terms.iter().cloned().fold(0.0, f64::max)
        } else if r == 1.0 {
            terms.iter().sum()
        } else {
            terms.iter().map(|t| t.powf(r)).sum::<f64>().powf(1.0 / r)
        };
        Ok(norm)
    }

    /// Bernstein quotient `‖∇f‖_{L^p} / ‖f‖_{L^p}` for a field supported in
    /// shell `j`. Errors if `f` has relative content above `1e-12` outside
    /// the shell's frequency support, or if `f` is numerically zero.
    pub fn bernstein_ratio(&self, f: &SpectralField, j: i32, p: f64) -> Result<f64> {
        if j < -1 || j > self.j_max {
            return Err(Error::Block(format!(
                "shell index {j} outside [-1, {}]",
                self.j_max
            )));
        }
        let grid = self.grid;
        // Support check: coefficients must vanish where the shell multiplier
        // does.
        let mut peak = 0.0f64;
        let mut leak = 0.0f64;
        for c in 0..f.n_comps() {
            let comp = f.comp(c);
            grid.for_each_mode(|m, xi| {
                let r = ((xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64).sqrt();
                let mag = comp[m].norm();
                peak = peak.max(mag);
                if self.filter(j, r) == 0.0 {
                    leak = leak.max(mag);
                }
            });
        }
        if peak == 0.0 {
            return Err(Error::Block("bernstein_ratio of a zero field".into()));
        }
        if leak > 1e-12 * peak {
            return Err(Error::Block(format!(
                "field is not localized in shell {j}: relative leakage {:e}",
                leak / peak
            )));
        }
        let grad = ops::gradient(f)?;
        let denom = if p == 2.0 {
            f.l2_norm()
        } else {
            f.to_physical().lp_norm(p)
        };
        let numer = if p == 2.0 {
            grad.l2_norm()
        } else {
            grad.to_physical().lp_norm(p)
        };
        Ok(numer / denom)
    }
}
