//! Exact solution of the linearized system, mode by mode.
//!
//! Dropping the quadratic terms (advection and `Q`) about the zero state
//! leaves, for each Fourier mode `ξ`, a small linear ODE system on the
//! stacked coefficients `(û, τ̂)`:
//!
//! ```text
//!   dû/dt = -ν|ξ|² û + i k P(ξ) (τ̂ ξ),
//!   dτ̂/dt = -(η|ξ|² + μ) τ̂ + (iα/2)(ξ ⊗ û + û ⊗ ξ).
//! ```
//!
//! [`evolve_exact`] applies the matrix exponential of this generator to
//! every mode of a spectral state, giving a machine-precision reference
//! solution for integrator verification. [`ModeMatrix`] exposes the
//! generator itself and its spectrum; [`slowest_decay_rate`] scans modes for
//! the spectral abscissa that governs the long-time decay of
//! divergence-free data.
//!
//! The generator couples `û` and `τ̂` through purely imaginary entries, so
//! conjugating by `diag(I, iI)` produces a real matrix with the same
//! spectrum; eigenvalues are then obtained from a real Schur decomposition
//! rather than a hand-rolled complex eigensolver.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Rank, SpectralField};
use crate::grid::Grid;
use crate::rhs::ModelParams;

fn sym_pairs(dim: usize) -> &'static [(usize, usize)] {
    if dim == 2 {
        &crate::grid::SYM_PAIRS_2D
    } else {
        &crate::grid::SYM_PAIRS_3D
    }
}

/// Builds the stacked generator for one mode. `xi` enters the derivative
/// couplings and the projection; `lap` is the (possibly different)
/// Laplacian symbol `|ξ|²`, kept separate because the solver zeroes the
/// Nyquist frequency in derivatives but not in the Laplacian.
fn assemble(dim: usize, params: &ModelParams, xi: [f64; 3], lap: f64) -> DMatrix<Complex64> {
    let pairs = sym_pairs(dim);
    let nsym = pairs.len();
    let size = dim + nsym;
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    let s: f64 = xi.iter().map(|x| x * x).sum();

    // Velocity rows: -ν|ξ|² û + i k P(ξ)(τ̂ ξ). Assemble the contraction
    // columns first, then project. P(0) is the identity by convention.
    for i in 0..dim {
        m[(i, i)] = Complex64::new(-params.nu * lap, 0.0);
    }
    let ik = Complex64::new(0.0, params.k);
    let mut contraction = vec![vec![0.0f64; nsym]; dim];
    for (c, &(l, q)) in pairs.iter().enumerate() {
        contraction[l][c] += xi[q];
        if l != q {
            contraction[q][c] += xi[l];
        }
    }
    for i in 0..dim {
        for c in 0..nsym {
            let mut proj = contraction[i][c];
            if s > 0.0 {
                for j in 0..dim {
                    proj -= xi[i] * xi[j] * contraction[j][c] / s;
                }
            }
            m[(i, dim + c)] = ik * proj;
        }
    }

    // Stress rows: -(η|ξ|² + μ) τ̂ + (iα/2)(ξ_q û_l + ξ_l û_q).
    let decay = Complex64::new(-(params.eta * lap + params.mu), 0.0);
    let half_ia = Complex64::new(0.0, 0.5 * params.alpha);
    for (c, &(l, q)) in pairs.iter().enumerate() {
        m[(dim + c, dim + c)] = decay;
        for j in 0..dim {
            let mut coef = 0.0;
            if j == l {
                coef += xi[q];
            }
            if j == q {
                coef += xi[l];
            }
            m[(dim + c, j)] = half_ia * coef;
        }
    }
    m
}

/// Orthonormal basis of the plane orthogonal to `xi` (one vector in 2D,
/// two in 3D).
pub(crate) fn transverse_basis(dim: usize, xi: [f64; 3]) -> Vec<[f64; 3]> {
    let norm: f64 = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm > 0.0, "transverse basis needs a nonzero frequency");
    if dim == 2 {
        return vec![[-xi[1] / norm, xi[0] / norm, 0.0]];
    }
    // Start from the axis least aligned with xi and Gram-Schmidt it.
    let a0 = (0..3).min_by(|&a, &b| xi[a].abs().partial_cmp(&xi[b].abs()).unwrap()).unwrap();
    let mut v = [0.0f64; 3];
    v[a0] = 1.0;
    for a in 0..3 {
        v[a] -= xi[a0] * xi[a] / (norm * norm);
    }
    let vn: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let t1 = [v[0] / vn, v[1] / vn, v[2] / vn];
    let t2 = [
        (xi[1] * t1[2] - xi[2] * t1[1]) / norm,
        (xi[2] * t1[0] - xi[0] * t1[2]) / norm,
        (xi[0] * t1[1] - xi[1] * t1[0]) / norm,
    ];
    vec![t1, t2]
}

/// Generator of one Fourier mode of the linearized system, either on the
/// full stacked space or restricted to divergence-free velocities.
pub struct ModeMatrix {
    mat: DMatrix<Complex64>,
    u_rows: usize,
}

impl ModeMatrix {
    /// Full generator on `(û, τ̂)`, size `dim + dim(dim+1)/2`.
    pub fn full(dim: usize, params: &ModelParams, xi: [i64; 3]) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Param(format!("dimension must be 2 or 3, got {dim}")));
        }
        params.validate()?;
        let xif = [xi[0] as f64, xi[1] as f64, xi[2] as f64];
        let lap: f64 = xif.iter().map(|x| x * x).sum();
        Ok(Self {
            mat: assemble(dim, params, xif, lap),
            u_rows: dim,
        })
    }

    /// Generator restricted to the invariant subspace `û ⊥ ξ`, size
    /// `(dim - 1) + dim(dim+1)/2`. The longitudinal direction carries a
    /// structural zero eigenvalue (the projection annihilates it) that says
    /// nothing about the decay of divergence-free data, so rate scans use
    /// this reduction.
    pub fn transverse(dim: usize, params: &ModelParams, xi: [i64; 3]) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Param(format!("dimension must be 2 or 3, got {dim}")));
        }
        params.validate()?;
        if xi.iter().all(|&x| x == 0) {
            return Err(Error::Param("transverse generator needs ξ ≠ 0".into()));
        }
        let xif = [xi[0] as f64, xi[1] as f64, xi[2] as f64];
        let lap: f64 = xif.iter().map(|x| x * x).sum();
        let pairs = sym_pairs(dim);
        let nsym = pairs.len();
        let basis = transverse_basis(dim, xif);
        let nb = basis.len();
        let size = nb + nsym;
        let mut m = DMatrix::<Complex64>::zeros(size, size);
        let ik = Complex64::new(0.0, params.k);
        let half_ia = Complex64::new(0.0, 0.5 * params.alpha);
        for a in 0..nb {
            m[(a, a)] = Complex64::new(-params.nu * lap, 0.0);
            for (c, &(l, q)) in pairs.iter().enumerate() {
                // t_aᵀ (τ̂ ξ): the projection is the identity on t_a ⊥ ξ.
                let mut coef = basis[a][l] * xif[q];
                if l != q {
                    coef += basis[a][q] * xif[l];
                }
                m[(a, nb + c)] = ik * coef;
            }
        }
        let decay = Complex64::new(-(params.eta * lap + params.mu), 0.0);
        for (c, &(l, q)) in pairs.iter().enumerate() {
            m[(nb + c, nb + c)] = decay;
            for a in 0..nb {
                m[(nb + c, a)] = half_ia * (xif[q] * basis[a][l] + xif[l] * basis[a][q]);
            }
        }
        Ok(Self { mat: m, u_rows: nb })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// All eigenvalues, sorted by real part then imaginary part. Computed
    /// from the real similarity transform described in the module docs.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let n = self.mat.nrows();
        let mut real = DMatrix::<f64>::zeros(n, n);
        let scale = self.mat.camax().max(1.0);
        for r in 0..n {
            for c in 0..n {
                // diag(1, i)-similarity: multiply by i per stress column,
                // divide by i per stress row.
                let mut v = self.mat[(r, c)];
                if c >= self.u_rows {
                    v *= Complex64::new(0.0, 1.0);
                }
                if r >= self.u_rows {
                    v *= Complex64::new(0.0, -1.0);
                }
                debug_assert!(
                    v.im.abs() <= 1e-12 * scale,
                    "generator entry ({r},{c}) is not imaginary-coupled: {v}"
                );
                real[(r, c)] = v.re;
            }
        }
        let mut eig: Vec<Complex64> = real.complex_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        eig
    }

    /// Decay rate of the slowest eigenmode: `-max Re λ`.
    pub fn slowest_rate(&self) -> f64 {
        -self
            .spectrum()
            .iter()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Sharp exponential decay rate of the linearized semigroup on
/// divergence-free data, minimized over all lattice modes `0 < |ξ|_∞ ≤
/// xi_max`. The spectrum depends on `ξ` only through `|ξ|²`, so one
/// representative per distinct `|ξ|²` is scanned.
pub fn slowest_decay_rate(dim: usize, params: &ModelParams, xi_max: i64) -> Result<f64> {
    if xi_max < 1 {
        return Err(Error::Param(format!("xi_max must be >= 1, got {xi_max}")));
    }
    let mut reps: Vec<(i64, [i64; 3])> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let zmax = if dim == 3 { xi_max } else { 0 };
    for x in 0..=xi_max {
        for y in 0..=xi_max {
            for z in 0..=zmax {
                let s = x * x + y * y + z * z;
                if s > 0 && seen.insert(s) {
                    reps.push((s, [x, y, z]));
                }
            }
        }
    }
    let rates = reps
        .par_iter()
        .map(|&(_, xi)| ModeMatrix::transverse(dim, params, xi).map(|m| m.slowest_rate()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(rates.into_iter().fold(f64::INFINITY, f64::min))
}

/// Evolves `(u, τ)` under the exact linearized flow for time `t` by
/// exponentiating the generator of every mode. Derivative couplings use the
/// Nyquist-zeroed frequencies and the dissipation uses the full `|ξ|²`,
/// matching the discrete nonlinear operators exactly.
pub fn evolve_exact(
    u: &SpectralField,
    tau: &SpectralField,
    params: &ModelParams,
    t: f64,
) -> Result<(SpectralField, SpectralField)> {
    params.validate()?;
    if u.rank() != Rank::Vector || tau.rank() != Rank::SymTensor {
        return Err(Error::Shape("evolve_exact expects (vector u, symmetric τ)".into()));
    }
    if u.grid() != tau.grid() {
        return Err(Error::Shape("evolve_exact requires matching grids".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::Param(format!("evolution time must be >= 0, got {t}")));
    }
    let grid: Grid = u.grid();
    let dim = grid.dim();
    let nsym = grid.n_sym();
    let size = dim + nsym;
    let evolved: Vec<Vec<Complex64>> = (0..grid.total())
        .into_par_iter()
        .map(|m| {
            let idx = grid.decompose(m);
            let mut xi = [0.0f64; 3];
            let mut lap = 0.0f64;
            for a in 0..dim {
                let full = grid.wavenumber(idx[a]) as f64;
                xi[a] = grid.deriv_wavenumber(idx[a]) as f64;
                lap += full * full;
            }
            let gen = assemble(dim, params, xi, lap);
            let propagator = (gen * Complex64::new(t, 0.0)).exp();
            let mut v = DVector::<Complex64>::zeros(size);
            for i in 0..dim {
                v[i] = u.comp(i)[m];
            }
            for c in 0..nsym {
                v[dim + c] = tau.comp(c)[m];
            }
            let w = propagator * v;
            w.iter().copied().collect()
        })
        .collect();
    let mut u_out = SpectralField::zeros(grid, Rank::Vector);
    let mut tau_out = SpectralField::zeros(grid, Rank::SymTensor);
    for (m, w) in evolved.iter().enumerate() {
        for i in 0..dim {
            u_out.comp_mut(i)[m] = w[i];
        }
        for c in 0..nsym {
            tau_out.comp_mut(c)[m] = w[dim + c];
        }
    }
    Ok((u_out, tau_out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PhysicalField;
    use crate::ops;
    use crate::rhs;

    fn unit_params(k: f64) -> ModelParams {
        ModelParams::new(k, 0.0).unwrap()
    }

    /// Taylor-series reference for the matrix exponential, accurate for
    /// matrices of modest norm.
    fn expm_series(m: &DMatrix<Complex64>, terms: usize) -> DMatrix<Complex64> {
        let n = m.nrows();
        let mut sum = DMatrix::<Complex64>::identity(n, n);
        let mut term = DMatrix::<Complex64>::identity(n, n);
        for j in 1..=terms {
            term = (&term * m) / Complex64::new(j as f64, 0.0);
            sum += &term;
        }
        sum
    }

    #[test]
    fn library_exponential_matches_taylor_series() {
        // Entries from a fixed low-discrepancy sequence, scaled to norm ~1.
        let n = 4;
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        let mut x = 0.17f64;
        for r in 0..n {
            for c in 0..n {
                x = (x * 9.73 + 0.31).fract();
                let y = (x * 7.19 + 0.57).fract();
                m[(r, c)] = Complex64::new(x - 0.5, y - 0.5);
            }
        }
        let series = expm_series(&m, 60);
        let pade = m.exp();
        let err = (&series - &pade).camax();
        assert!(err <= 1e-13, "series vs library exp: {err}");
        // Rotation generator: exp([[0, -θ], [θ, 0]]) is a rotation matrix.
        let theta = 0.83f64;
        let rot = DMatrix::<Complex64>::from_row_slice(
            2,
            2,
            &[
                Complex64::default(),
                Complex64::new(-theta, 0.0),
                Complex64::new(theta, 0.0),
                Complex64::default(),
            ],
        )
        .exp();
        assert!((rot[(0, 0)].re - theta.cos()).abs() <= 1e-14);
        assert!((rot[(1, 0)].re - theta.sin()).abs() <= 1e-14);
    }

    #[test]
    fn transverse_spectrum_matches_quadratic_formula() {
        // For each mode the coupled pair solves
        //   λ² + (η|ξ|² + μ) λ + (kα/2)|ξ|² = 0,
        // and the remaining stress directions decay at η|ξ|² + μ.
        let params = unit_params(1.0);
        let m = ModeMatrix::transverse(2, &params, [1, 0, 0]).unwrap();
        let spec = m.spectrum();
        assert_eq!(spec.len(), 4);
        let a = 2.0f64; // η + μ at |ξ|² = 1
        let disc = (a * a - 4.0 * 0.5f64).sqrt();
        let slow = (-a + disc) / 2.0;
        let fast = (-a - disc) / 2.0;
        // Sorted ascending: the uncoupled stress directions at -a come
        // first (fast > -a whenever k > 0).
        let expected = [-a, -a, fast, slow];
        for (got, want) in spec.iter().zip(expected.iter()) {
            assert!(
                (got.re - want).abs() <= 1e-12 && got.im.abs() <= 1e-12,
                "eigenvalue {got} vs {want}"
            );
        }
        // Above the critical coupling the pair goes complex with real part
        // -a/2; spectral abscissa is exactly a/2.
        let strong = unit_params(4.0);
        let m = ModeMatrix::transverse(2, &strong, [1, 0, 0]).unwrap();
        assert!((m.slowest_rate() - a / 2.0).abs() <= 1e-12);
        let spec = m.spectrum();
        let pair: Vec<_> = spec.iter().filter(|l| l.im.abs() > 1e-9).collect();
        assert_eq!(pair.len(), 2, "complex pair expected: {spec:?}");
    }

    #[test]
    fn full_spectrum_is_transverse_plus_structural_zero() {
        for dim in [2usize, 3] {
            let params = unit_params(0.7);
            let xi = [2, 1, if dim == 3 { -1 } else { 0 }];
            let full = ModeMatrix::full(dim, &params, xi).unwrap().spectrum();
            let reduced = ModeMatrix::transverse(dim, &params, xi).unwrap().spectrum();
            assert_eq!(full.len(), reduced.len() + 1);
            // The extra eigenvalue is the structural zero of the projected
            // longitudinal direction.
            let mut residual = full.clone();
            let zi = residual
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
                .map(|(i, _)| i)
                .unwrap();
            assert!(residual[zi].norm() <= 1e-12, "no structural zero in {full:?}");
            residual.remove(zi);
            for (got, want) in residual.iter().zip(reduced.iter()) {
                assert!(
                    (got - want).norm() <= 1e-10 * (1.0 + want.norm()),
                    "dim={dim}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn uncoupled_spectrum_is_pure_stress_decay() {
        let params = unit_params(0.0);
        let m = ModeMatrix::full(2, &params, [2, 1, 0]).unwrap();
        let spec = m.spectrum();
        // k = ν = 0 freezes u (two zero eigenvalues); stress decays at
        // η|ξ|² + μ = 6 in every component.
        for l in &spec[..3] {
            assert!((l.re + 6.0).abs() <= 1e-12 && l.im.abs() <= 1e-12, "{spec:?}");
        }
        for l in &spec[3..] {
            assert!(l.norm() <= 1e-12, "{spec:?}");
        }
    }

    #[test]
    fn mode_matrix_matches_nonlinear_rhs_on_a_single_mode() {
        // A single conjugate-pair mode cannot feed itself through the
        // quadratic terms (ξ + ξ and ξ - ξ both miss ξ), so at that mode the
        // full nonlinear right-hand side IS the linear generator, to
        // rounding. This pins the generator to the production operators.
        for dim in [2usize, 3] {
            let grid = Grid::new(dim, 16).unwrap();
            let params = ModelParams {
                k: 0.9,
                b: 0.0,
                nu: 0.2,
                eta: 1.1,
                mu: 0.6,
                alpha: 1.4,
            };
            let xi = [2i64, 1, if dim == 3 { -1 } else { 0 }];
            let xif = [xi[0] as f64, xi[1] as f64, xi[2] as f64];
            let basis = transverse_basis(dim, xif);
            let mut u = SpectralField::zeros(grid, Rank::Vector);
            for i in 0..dim {
                let mut v = Complex64::default();
                for (a, t) in basis.iter().enumerate() {
                    v += Complex64::new(0.3 + 0.2 * a as f64, 0.7 - 0.4 * a as f64)
                        * Complex64::new(t[i], 0.0);
                }
                u.set_conjugate_pair(i, xi, v);
            }
            let mut tau = SpectralField::zeros(grid, Rank::SymTensor);
            for c in 0..grid.n_sym() {
                tau.set_conjugate_pair(
                    c,
                    xi,
                    Complex64::new(0.1 * c as f64 - 0.25, 0.45 - 0.15 * c as f64),
                );
            }
            let du = rhs::momentum_rhs(&u, &tau, &params).unwrap();
            let mut dtau = rhs::stress_rhs_explicit(&u, &tau, &params).unwrap();
            let mut stiff = ops::laplacian(&tau);
            stiff.scale(params.eta);
            stiff.axpy(-params.mu, &tau);
            dtau.axpy(1.0, &stiff);

            let gen = ModeMatrix::full(dim, &params, xi).unwrap();
            let mut v = DVector::<Complex64>::zeros(dim + grid.n_sym());
            let m = u.mode_index(xi);
            for i in 0..dim {
                v[i] = u.comp(i)[m];
            }
            for c in 0..grid.n_sym() {
                v[dim + c] = tau.comp(c)[m];
            }
            let w = gen.matrix() * v;
            let scale = w.camax().max(1.0);
            for i in 0..dim {
                let got = du.comp(i)[m];
                assert!(
                    (got - w[i]).norm() <= 1e-12 * scale,
                    "dim={dim} u[{i}]: rhs {got} vs generator {}",
                    w[i]
                );
            }
            for c in 0..grid.n_sym() {
                let got = dtau.comp(c)[m];
                assert!(
                    (got - w[dim + c]).norm() <= 1e-12 * scale,
                    "dim={dim} tau[{c}]: rhs {got} vs generator {}",
                    w[dim + c]
                );
            }
        }
    }

    #[test]
    fn evolve_exact_matches_closed_form_when_uncoupled() {
        // At k = ν = 0: u is frozen and each stress mode solves a scalar
        // linear ODE with constant forcing α D̂(u):
        //   τ̂(t) = e^{-at} τ̂(0) + α (1 - e^{-at})/a · D̂(u),  a = η|ξ|² + μ.
        let grid = Grid::new(2, 16).unwrap();
        let mut u = PhysicalField::from_fn(grid, Rank::Vector, |c, x| {
            (x[0] + 0.3 * c as f64).sin() + (2.0 * x[1] - 0.2).cos()
        })
        .to_spectral();
        u.dealias();
        ops::leray_project(&mut u).unwrap();
        let mut tau = PhysicalField::from_fn(grid, Rank::SymTensor, |c, x| {
            (x[1] + 0.5 * c as f64).cos() + (x[0] - 0.1).sin()
        })
        .to_spectral();
        tau.dealias();
        let params = ModelParams {
            k: 0.0,
            b: 0.0,
            nu: 0.0,
            eta: 1.3,
            mu: 0.4,
            alpha: 1.7,
        };
        let t = 0.9;
        let (u1, tau1) = evolve_exact(&u, &tau, &params, t).unwrap();
        assert!(u1.l2_distance(&u) <= 1e-13 * u.l2_norm(), "u must be frozen at k = ν = 0");
        let d = rhs::deformation(&u).unwrap();
        let mut expect = SpectralField::zeros(grid, Rank::SymTensor);
        for c in 0..grid.n_sym() {
            let tc = tau.comp(c).to_vec();
            let dc = d.comp(c).to_vec();
            let dst = expect.comp_mut(c);
            grid.for_each_mode(|m, xi| {
                let s = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64;
                let a = params.eta * s + params.mu;
                let decay = (-a * t).exp();
                dst[m] = decay * tc[m] + params.alpha * (1.0 - decay) / a * dc[m];
            });
        }
        let err = tau1.l2_distance(&expect);
        assert!(err <= 1e-12 * expect.l2_norm(), "closed form mismatch {err}");
    }

    #[test]
    fn evolve_exact_dissipates_the_coupled_energy() {
        let grid = Grid::new(2, 16).unwrap();
        let mut u = PhysicalField::from_fn(grid, Rank::Vector, |c, x| {
            (x[0] + 0.4 * c as f64).sin() * (2.0 * x[1]).cos() + 0.5 * (x[1] + 0.2).cos()
        })
        .to_spectral();
        u.dealias();
        ops::leray_project(&mut u).unwrap();
        let mut tau = PhysicalField::from_fn(grid, Rank::SymTensor, |c, x| {
            0.4 * (x[0] - 0.3 * c as f64).cos() + 0.2 * (x[1] + 0.15).sin()
        })
        .to_spectral();
        tau.dealias();
        let params = unit_params(2.5);
        let energy = |u: &SpectralField, tau: &SpectralField| {
            0.5 * u.l2_norm().powi(2) + 0.5 * params.k * tau.l2_norm().powi(2)
        };
        let mut last = energy(&u, &tau);
        for &t in &[0.2, 0.5, 1.0, 2.0, 4.0] {
            let (ut, taut) = evolve_exact(&u, &tau, &params, t).unwrap();
            let e = energy(&ut, &taut);
            assert!(e <= last * (1.0 + 1e-13), "energy rose: {last} -> {e} at t={t}");
            last = e;
        }
    }

    #[test]
    fn slowest_rate_tracks_the_quarter_coupling_law() {
        // Small k: the slow root of λ² + (s+1)λ + (k/2)s at s = |ξ|² = 1 is
        // -(1 - sqrt(1 - k/2)) ≈ -k/4, and larger s only decays faster.
        for dim in [2usize, 3] {
            let k = 0.01;
            let params = unit_params(k);
            let rate = slowest_decay_rate(dim, &params, 4).unwrap();
            let exact = 1.0 - (1.0f64 - k / 2.0).sqrt();
            assert!(
                (rate - exact).abs() <= 1e-12,
                "dim={dim}: rate {rate} vs closed form {exact}"
            );
            assert!((rate - k / 4.0).abs() <= 0.01 * (k / 4.0));
        }
        // The minimum sits at |ξ|² = 1, so widening the scan changes nothing.
        let params = unit_params(0.3);
        let narrow = slowest_decay_rate(2, &params, 2).unwrap();
        let wide = slowest_decay_rate(2, &params, 8).unwrap();
        assert!((narrow - wide).abs() <= 1e-13);
    }

    #[test]
    fn slowest_rate_degenerates_without_coupling() {
        // k = ν = 0: transverse velocity is frozen; no decay.
        let params = unit_params(0.0);
        let rate = slowest_decay_rate(2, &params, 4).unwrap();
        assert!(rate.abs() <= 1e-13, "expected zero rate, got {rate}");
        // Pure viscosity: rate is ν at |ξ|² = 1.
        let mut viscous = unit_params(0.0);
        viscous.nu = 0.3;
        let rate = slowest_decay_rate(2, &viscous, 4).unwrap();
        assert!((rate - 0.3).abs() <= 1e-12, "viscous rate {rate}");
    }

    #[test]
    fn invalid_requests_are_rejected() {
        let params = unit_params(1.0);
        assert!(ModeMatrix::full(4, &params, [1, 0, 0]).is_err());
        assert!(ModeMatrix::transverse(2, &params, [0, 0, 0]).is_err());
        assert!(slowest_decay_rate(2, &params, 0).is_err());
        let grid = Grid::new(2, 16).unwrap();
        let u = SpectralField::zeros(grid, Rank::Vector);
        let tau = SpectralField::zeros(grid, Rank::SymTensor);
        assert!(evolve_exact(&u, &tau, &params, -1.0).is_err());
    }
}
