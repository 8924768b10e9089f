//! Spectral calculus operators: derivatives, divergence, curl, Leray
//! projection, and the stress-to-vorticity operator `R̃`.
//!
//! All first-order operators multiply by `i·ξ` with the Nyquist frequency
//! zeroed (see [`Grid::deriv_wavenumber`]); the Laplacian keeps the full
//! `-|ξ|²` multiplier. The Leray projection and `R̃` use the same
//! Nyquist-free frequencies, which makes `div ∘ leray_project = 0` and the
//! cancellation identities used by the stress–vorticity bookkeeping exact in
//! floating point, not just up to truncation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Rank, SpectralField};
use crate::grid::Grid;

/// `∂_axis` of one raw coefficient array.
pub(crate) fn partial(grid: &Grid, data: &[Complex64], axis: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); data.len()];
    grid.for_each_mode_deriv(|m, xi| {
        out[m] = Complex64::new(0.0, xi[axis] as f64) * data[m];
    });
    out
}

/// Gradient. Scalar → vector (`(∇f)_i = ∂_i f`) and vector → full tensor
/// (`(∇u)_{ij} = ∂_j u_i`, row-major storage).
pub fn gradient(f: &SpectralField) -> Result<SpectralField> {
    let grid = f.grid();
    let dim = grid.dim();
    match f.rank() {
        Rank::Scalar => {
            let mut out = SpectralField::zeros(grid, Rank::Vector);
            for a in 0..dim {
                *out.comp_mut(a) = partial(&grid, f.comp(0), a);
            }
            Ok(out)
        }
        Rank::Vector => {
            let mut out = SpectralField::zeros(grid, Rank::Tensor);
            for i in 0..dim {
                for j in 0..dim {
                    *out.comp_mut(i * dim + j) = partial(&grid, f.comp(i), j);
                }
            }
            Ok(out)
        }
        other => Err(Error::Shape(format!(
            "gradient expects a scalar or vector field, got {other:?}"
        ))),
    }
}

/// Divergence of a vector field, `Σ_i ∂_i v_i`.
pub fn divergence_vector(v: &SpectralField) -> Result<SpectralField> {
    if v.rank() != Rank::Vector {
        return Err(Error::Shape("divergence_vector expects a vector".into()));
    }
    let grid = v.grid();
    let mut out = SpectralField::zeros(grid, Rank::Scalar);
    for a in 0..grid.dim() {
        let d = partial(&grid, v.comp(a), a);
        for (o, x) in out.comp_mut(0).iter_mut().zip(d.iter()) {
            *o += x;
        }
    }
    Ok(out)
}

/// Row-wise divergence of a symmetric tensor, `(div τ)_i = Σ_j ∂_j τ_{ij}`.
pub fn divergence_tensor(tau: &SpectralField) -> Result<SpectralField> {
    if tau.rank() != Rank::SymTensor {
        return Err(Error::Shape(
            "divergence_tensor expects a symmetric tensor".into(),
        ));
    }
    let grid = tau.grid();
    let dim = grid.dim();
    let mut out = SpectralField::zeros(grid, Rank::Vector);
    for i in 0..dim {
        let acc = out.comp_mut(i);
        for j in 0..dim {
            let c = grid.sym_index(i, j);
            let d = partial(&grid, tau.comp(c), j);
            for (o, x) in acc.iter_mut().zip(d.iter()) {
                *o += x;
            }
        }
    }
    Ok(out)
}

/// Curl of a vector field: the scalar `∂_0 v_1 - ∂_1 v_0` in 2D, the usual
/// vector curl in 3D.
pub fn curl(v: &SpectralField) -> Result<SpectralField> {
    if v.rank() != Rank::Vector {
        return Err(Error::Shape("curl expects a vector".into()));
    }
    let grid = v.grid();
    if grid.dim() == 2 {
        let mut out = SpectralField::zeros(grid, Rank::Scalar);
        let d0v1 = partial(&grid, v.comp(1), 0);
        let d1v0 = partial(&grid, v.comp(0), 1);
        for (o, (a, b)) in out.comp_mut(0).iter_mut().zip(d0v1.iter().zip(d1v0.iter())) {
            *o = a - b;
        }
        Ok(out)
    } else {
        let mut out = SpectralField::zeros(grid, Rank::Vector);
        for i in 0..3 {
            let j = (i + 1) % 3;
            let l = (i + 2) % 3;
            let djl = partial(&grid, v.comp(l), j);
            let dlj = partial(&grid, v.comp(j), l);
            for (o, (a, b)) in out.comp_mut(i).iter_mut().zip(djl.iter().zip(dlj.iter())) {
                *o = a - b;
            }
        }
        Ok(out)
    }
}

/// Laplacian, multiplier `-|ξ|²` with the full (Nyquist-bearing)
/// frequencies.
pub fn laplacian(f: &SpectralField) -> SpectralField {
    let grid = f.grid();
    let mut out = f.clone();
    for c in 0..out.n_comps() {
        let comp = out.comp_mut(c);
        grid.for_each_mode(|m, xi| {
            let s = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64;
            comp[m] *= -s;
        });
    }
    out
}

/// Leray projection onto divergence-free fields: per mode
/// `v̂ ← (I - ξξᵀ/|ξ|²) v̂`. The zero mode (mean flow) passes through
/// untouched. Uses the derivative frequencies, so the projected field has
/// exactly zero discrete divergence.
pub fn leray_project(v: &mut SpectralField) -> Result<()> {
    if v.rank() != Rank::Vector {
        return Err(Error::Shape("leray_project expects a vector".into()));
    }
    let grid = v.grid();
    let dim = grid.dim();
    // Gather per-mode dot products first, then update each component, to
    // keep the borrow of the component arrays simple.
    let total = grid.total();
    let mut dot = vec![Complex64::default(); total];
    let mut inv_s = vec![0.0f64; total];
    let mut xi_store = vec![[0i64; 3]; total];
    grid.for_each_mode_deriv(|m, xi| {
        xi_store[m] = xi;
        let s = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64;
        inv_s[m] = if s == 0.0 { 0.0 } else { 1.0 / s };
    });
    for a in 0..dim {
        let comp = v.comp(a);
        for m in 0..total {
            dot[m] += comp[m] * xi_store[m][a] as f64;
        }
    }
    for a in 0..dim {
        let comp = v.comp_mut(a);
        for m in 0..total {
            comp[m] -= dot[m] * (xi_store[m][a] as f64 * inv_s[m]);
        }
    }
    Ok(())
}

/// The operator `R̃ = -(-Δ)⁻¹ curl div` applied to a symmetric tensor:
/// scalar-valued in 2D, vector-valued in 3D. The zero mode of the output is
/// zero by construction (the inverse Laplacian drops it).
pub fn riesz_tilde(tau: &SpectralField) -> Result<SpectralField> {
    if tau.rank() != Rank::SymTensor {
        return Err(Error::Shape("riesz_tilde expects a symmetric tensor".into()));
    }
    let grid = tau.grid();
    let w = divergence_tensor(tau)?;
    let mut out = curl(&w)?;
    for c in 0..out.n_comps() {
        let comp = out.comp_mut(c);
        grid.for_each_mode_deriv(|m, xi| {
            let s = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64;
            comp[m] = if s == 0.0 {
                Complex64::default()
            } else {
                -comp[m] / s
            };
        });
    }
    Ok(out)
}
