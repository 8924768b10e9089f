//! Model parameters and spatial right-hand sides of the coupled system
//!
//! ```text
//!   ∂t u = -P[(u·∇)u] + k P[div τ] + ν Δu,
//!   ∂t τ = -(u·∇)τ + η Δτ - μ τ - Q(∇u, τ) + α D(u),
//! ```
//!
//! where `P` is the Leray projection, `D(u) = (∇u + ∇uᵀ)/2`,
//! `Ω(u) = (∇u - ∇uᵀ)/2`, and `Q(∇u, τ) = τΩ - Ωτ + b(Dτ + τD)`.
//!
//! Quadratic terms are evaluated pointwise in physical space and dealiased
//! by the 2/3 rule after the forward transform. The stiff stress part
//! `η Δτ - μ τ` is *not* included in [`stress_rhs_explicit`]; the
//! integrator applies it exactly through an integrating factor.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{PhysicalField, Rank, SpectralField};
use crate::ops;

/// Physical parameters of the coupled system.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModelParams {
    /// Coupling strength multiplying `div τ` in the momentum equation.
    pub k: f64,
    /// Weight of the symmetric part of the stretching term in `Q`
    /// (`b = 0` is the corotational case).
    pub b: f64,
    /// Kinematic viscosity of the velocity equation.
    pub nu: f64,
    /// Stress diffusivity.
    pub eta: f64,
    /// Stress damping rate.
    pub mu: f64,
    /// Strength of the `D(u)` source in the stress equation.
    pub alpha: f64,
}

impl ModelParams {
    /// Parameters with the default unit coefficients `ν = 0`,
    /// `η = μ = α = 1`.
    pub fn new(k: f64, b: f64) -> Result<Self> {
        let p = Self {
            k,
            b,
            nu: 0.0,
            eta: 1.0,
            mu: 1.0,
            alpha: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks the admissible ranges. The diffusionless limit `η = 0` is
    /// rejected: the solver integrates the stress diffusion exactly and is
    /// not designed for the hyperbolic regime.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(0.0..=10.0).contains(&self.k) || !self.k.is_finite() {
            problems.push(format!("k must lie in [0, 10], got {}", self.k));
        }
        if !(-1.0..=1.0).contains(&self.b) || !self.b.is_finite() {
            problems.push(format!("b must lie in [-1, 1], got {}", self.b));
        }
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            problems.push(format!("nu must be >= 0, got {}", self.nu));
        }
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            problems.push(format!("eta must be > 0, got {}", self.eta));
        }
        if !(self.mu >= 0.0) || !self.mu.is_finite() {
            problems.push(format!("mu must be >= 0, got {}", self.mu));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            problems.push(format!("alpha must be > 0, got {}", self.alpha));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Param(problems.join("; ")))
        }
    }
}

/// Symmetric gradient `D(u)`, assembled spectrally:
/// `D̂_{ij} = (i/2)(ξ_j û_i + ξ_i û_j)`.
pub fn deformation(u: &SpectralField) -> Result<SpectralField> {
    if u.rank() != Rank::Vector {
        return Err(Error::Shape("deformation expects a velocity vector".into()));
    }
    let grid = u.grid();
    let mut out = SpectralField::zeros(grid, Rank::SymTensor);
    for (c, &(i, j)) in grid.sym_pairs().iter().enumerate() {
        let ui = u.comp(i).to_vec();
        let uj = u.comp(j).to_vec();
        let dst = out.comp_mut(c);
        grid.for_each_mode_deriv(|m, xi| {
            let half_i = Complex64::new(0.0, 0.5);
            dst[m] = half_i * (xi[j] as f64 * ui[m] + xi[i] as f64 * uj[m]);
        });
    }
    Ok(out)
}

/// Antisymmetric gradient `Ω(u) = (∇u - ∇uᵀ)/2`, returned as a full tensor.
pub fn rotation(u: &SpectralField) -> Result<SpectralField> {
    if u.rank() != Rank::Vector {
        return Err(Error::Shape("rotation expects a velocity vector".into()));
    }
    let grid = u.grid();
    let dim = grid.dim();
    let g = ops::gradient(u)?;
    let mut out = SpectralField::zeros(grid, Rank::Tensor);
    for i in 0..dim {
        for j in 0..dim {
            let gij = g.comp(i * dim + j);
            let gji = g.comp(j * dim + i);
            let dst = out.comp_mut(i * dim + j);
            for (o, (a, b)) in dst.iter_mut().zip(gij.iter().zip(gji.iter())) {
                *o = 0.5 * (a - b);
            }
        }
    }
    Ok(out)
}

/// Inverse-transforms every component of `f` into plain real arrays.
fn physical_comps(f: &SpectralField) -> Vec<Vec<f64>> {
    (0..f.n_comps())
        .into_par_iter()
        .map(|c| {
            let mut single = SpectralField::zeros(f.grid(), Rank::Scalar);
            single.comp_mut(0).copy_from_slice(f.comp(c));
            single.to_physical().comp(0).to_vec()
        })
        .collect()
}

/// Physical-space partial derivatives `∂_a f_c`, indexed `[c * dim + a]`.
fn physical_partials(f: &SpectralField) -> Vec<Vec<f64>> {
    let grid = f.grid();
    let dim = grid.dim();
    let jobs: Vec<(usize, usize)> = (0..f.n_comps())
        .flat_map(|c| (0..dim).map(move |a| (c, a)))
        .collect();
    jobs.into_par_iter()
        .map(|(c, a)| {
            let mut single = SpectralField::zeros(grid, Rank::Scalar);
            *single.comp_mut(0) = ops::partial(&grid, f.comp(c), a);
            single.to_physical().comp(0).to_vec()
        })
        .collect()
}

/// Forward-transforms real component arrays into a spectral field of the
/// given rank, dealiasing the result.
fn spectral_from_comps(
    grid: crate::grid::Grid,
    rank: Rank,
    comps: Vec<Vec<f64>>,
) -> SpectralField {
    let hats: Vec<Vec<Complex64>> = comps
        .into_par_iter()
        .map(|vals| {
            let mut phys = PhysicalField::zeros(grid, Rank::Scalar);
            phys.comp_mut(0).copy_from_slice(&vals);
            phys.to_spectral().comp(0).to_vec()
        })
        .collect();
    let mut out = SpectralField::zeros(grid, rank);
    for (c, hat) in hats.into_iter().enumerate() {
        *out.comp_mut(c) = hat;
    }
    out.dealias();
    out
}

/// Pseudospectral advection `(v·∇)f` for `f` of any rank: derivatives taken
/// spectrally, products formed pointwise, single forward transform of the
/// result, then dealiasing.
pub fn advect(v: &SpectralField, f: &SpectralField) -> Result<SpectralField> {
    if v.rank() != Rank::Vector {
        return Err(Error::Shape("advect expects a vector velocity".into()));
    }
    if v.grid() != f.grid() {
        return Err(Error::Shape("advect requires matching grids".into()));
    }
    let grid = v.grid();
    let dim = grid.dim();
    let v_phys = physical_comps(v);
    let df = physical_partials(f);
    let total = grid.total();
    let products: Vec<Vec<f64>> = (0..f.n_comps())
        .map(|c| {
            let mut acc = vec![0.0f64; total];
            for a in 0..dim {
                let d = &df[c * dim + a];
                let va = &v_phys[a];
                for m in 0..total {
                    acc[m] += va[m] * d[m];
                }
            }
            acc
        })
        .collect();
    Ok(spectral_from_comps(grid, f.rank(), products))
}

/// The bilinear stress term `Q(∇u, τ) = τΩ - Ωτ + b(Dτ + τD)`, evaluated
/// pointwise with full matrices and returned in symmetric storage (the
/// commutator of a symmetric with an antisymmetric matrix plus the
/// anticommutator of two symmetric matrices is symmetric; see
/// [`q_bilinear_full`] for the unreduced product used to verify that).
pub fn q_bilinear(u: &SpectralField, tau: &SpectralField, b: f64) -> Result<SpectralField> {
    let full = q_bilinear_full(u, tau, b)?;
    let grid = u.grid();
    let dim = grid.dim();
    let mut out = SpectralField::zeros(grid, Rank::SymTensor);
    for (c, &(i, j)) in grid.sym_pairs().iter().enumerate() {
        out.comp_mut(c).copy_from_slice(full.comp(i * dim + j));
    }
    Ok(out)
}

/// As [`q_bilinear`] but returning the full (unsymmetrized) matrix product,
/// so tests can measure the symmetry defect directly.
pub fn q_bilinear_full(u: &SpectralField, tau: &SpectralField, b: f64) -> Result<SpectralField> {
    if u.rank() != Rank::Vector || tau.rank() != Rank::SymTensor {
        return Err(Error::Shape(
            "q_bilinear expects (vector u, symmetric tau)".into(),
        ));
    }
    if u.grid() != tau.grid() {
        return Err(Error::Shape("q_bilinear requires matching grids".into()));
    }
    let grid = u.grid();
    let dim = grid.dim();
    let total = grid.total();
    let gu = physical_comps(&ops::gradient(u)?);
    let tp = physical_comps(tau);

    let mut prods: Vec<Vec<f64>> = vec![vec![0.0f64; total]; dim * dim];
    let mut g = [[0.0f64; 3]; 3];
    let mut t = [[0.0f64; 3]; 3];
    for m in 0..total {
        for i in 0..dim {
            for j in 0..dim {
                g[i][j] = gu[i * dim + j][m];
            }
        }
        for (c, &(i, j)) in grid.sym_pairs().iter().enumerate() {
            t[i][j] = tp[c][m];
            t[j][i] = tp[c][m];
        }
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = 0.0;
                for l in 0..dim {
                    let d_il = 0.5 * (g[i][l] + g[l][i]);
                    let d_lj = 0.5 * (g[l][j] + g[j][l]);
                    let om_il = 0.5 * (g[i][l] - g[l][i]);
                    let om_lj = 0.5 * (g[l][j] - g[j][l]);
                    // (τΩ - Ωτ + b(Dτ + τD))_{ij}
                    acc += t[i][l] * om_lj - om_il * t[l][j] + b * (d_il * t[l][j] + t[i][l] * d_lj);
                }
                prods[i * dim + j][m] = acc;
            }
        }
    }
    Ok(spectral_from_comps(grid, Rank::Tensor, prods))
}

/// Momentum right-hand side: the dealiased Leray projection of
/// `-(u·∇)u + k div τ + ν Δu`.
pub fn momentum_rhs(
    u: &SpectralField,
    tau: &SpectralField,
    params: &ModelParams,
) -> Result<SpectralField> {
    let mut rhs = advect(u, u)?;
    rhs.scale(-1.0);
    let div = ops::divergence_tensor(tau)?;
    rhs.axpy(params.k, &div);
    if params.nu != 0.0 {
        rhs.axpy(params.nu, &ops::laplacian(u));
    }
    ops::leray_project(&mut rhs)?;
    rhs.dealias();
    Ok(rhs)
}

/// Non-stiff part of the stress right-hand side:
/// `-(u·∇)τ - Q(∇u, τ) + α D(u)`, dealiased. The stiff `η Δτ - μ τ` part
/// is applied exactly by the integrator.
pub fn stress_rhs_explicit(
    u: &SpectralField,
    tau: &SpectralField,
    params: &ModelParams,
) -> Result<SpectralField> {
    let mut rhs = advect(u, tau)?;
    rhs.scale(-1.0);
    let q = q_bilinear(u, tau, params.b)?;
    rhs.axpy(-1.0, &q);
    rhs.axpy(params.alpha, &deformation(u)?);
    rhs.dealias();
    Ok(rhs)
}

/// The damped auxiliary quantity `Γ = curl u - k R̃ τ` (scalar in 2D,
/// vector in 3D), mean-free by convention.
pub fn gamma_quantity(u: &SpectralField, tau: &SpectralField, k: f64) -> Result<SpectralField> {
    let mut gamma = ops::curl(u)?;
    gamma.axpy(-k, &ops::riesz_tilde(tau)?);
    gamma.zero_mean();
    Ok(gamma)
}
