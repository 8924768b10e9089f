//! Reproducible initial-data families.
//!
//! Four generators, all returning a `(u₀, τ₀)` pair of spectral fields
//! ready for [`crate::integrator::SimState::new`]:
//!
//! * [`make_frequency_bump`] — stress concentrated on a single dyadic
//!   frequency shell, the family whose `B^{3/2}_{2,1} / B⁰_{∞,1}` ratio
//!   grows geometrically with the shell index;
//! * [`make_axisymmetric_scaled`] — a wide, low-gradient velocity bump
//!   whose width grows as the coupling `k` shrinks, with `τ₀ = 0`;
//! * [`make_random_divfree`] — seeded Gaussian fields with a power-law
//!   spectrum, bit-reproducible and exactly linear in amplitude;
//! * [`make_single_mode`] — one transverse cosine mode, the probe used to
//!   compare the nonlinear solver against the per-mode linear propagator.
//!
//! Every generator produces mean-free data; velocities are exactly
//! divergence-free in the discrete sense (built from spectral curls or
//! explicitly projected).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{PhysicalField, Rank, SpectralField};
use crate::grid::Grid;
use crate::linear::transverse_basis;
use crate::ops;

/// Declarative description of an initial-data choice, as it appears in run
/// configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DataSpec {
    /// Stress on dyadic shell `shell`, velocity a fixed low mode; both
    /// scaled by `amplitude / shell`.
    FrequencyBump { shell: u32, amplitude: f64 },
    /// Wide axisymmetric velocity bump for coupling `k`, renormalized so
    /// `‖u₀‖_{L²} = eps0`; `τ₀ = 0`.
    AxisymmetricScaled { k: f64, eps0: f64 },
    /// Seeded Gaussian fields shaped like `|ξ|^{-spectrum_slope}`, with
    /// `‖u₀‖_{L²} = amplitude_u` and `‖τ₀‖_{L²} = amplitude_tau`.
    RandomDivfree {
        amplitude_u: f64,
        amplitude_tau: f64,
        seed: u64,
        spectrum_slope: f64,
    },
    /// `u₀ = amplitude · cos(ξ·x) · t̂` for a transverse unit vector `t̂`,
    /// `τ₀ = 0`.
    SingleMode { xi: [i64; 3], amplitude: f64 },
}

/// Builds the `(u₀, τ₀)` pair a spec describes.
pub fn build(grid: Grid, spec: &DataSpec) -> Result<(SpectralField, SpectralField)> {
    match spec {
        DataSpec::FrequencyBump { shell, amplitude } => {
            make_frequency_bump(grid, *shell, *amplitude)
        }
        DataSpec::AxisymmetricScaled { k, eps0 } => make_axisymmetric_scaled(grid, *k, *eps0),
        DataSpec::RandomDivfree {
            amplitude_u,
            amplitude_tau,
            seed,
            spectrum_slope,
        } => make_random_divfree(grid, *amplitude_u, *amplitude_tau, *seed, *spectrum_slope),
        DataSpec::SingleMode { xi, amplitude } => make_single_mode(grid, *xi, *amplitude),
    }
}

/// Stress concentrated at the single frequency pair `±2^N·(1,…,1)`, which
/// sits inside the flat region of dyadic shell `N` (its modulus is
/// `√d·2^N ∈ [4/3, 2]·2^N` for `d ∈ {2,3}`), so the shell-`N` projection
/// reproduces `τ₀` exactly and every other shell vanishes. The velocity is
/// a fixed smooth divergence-free low mode. Both fields carry the
/// `amplitude / N` scaling of the family.
///
/// Requires `N ≥ 1` and the bump frequency to be representable on the
/// grid (`2^N ≤ n/2 - 1`).
pub fn make_frequency_bump(
    grid: Grid,
    shell: u32,
    amplitude: f64,
) -> Result<(SpectralField, SpectralField)> {
    if shell == 0 {
        return Err(Error::Data("frequency bump needs shell >= 1".into()));
    }
    if !(amplitude.is_finite() && amplitude > 0.0) {
        return Err(Error::Data(format!(
            "frequency bump amplitude must be positive and finite, got {amplitude}"
        )));
    }
    let freq = 1i64 << shell;
    let max_rep = (grid.n() as i64) / 2 - 1;
    if freq > max_rep {
        return Err(Error::Data(format!(
            "shell {shell} puts the bump at frequency {freq}, beyond the \
             largest representable wavenumber {max_rep} of an n = {} grid",
            grid.n()
        )));
    }
    // Raw spectral coefficients are unnormalized; this factor makes
    // `amplitude` the pointwise amplitude of each cosine.
    let scale = 0.5 * (amplitude / shell as f64) * grid.total() as f64;
    let mut xi = [0i64; 3];
    for axis in 0..grid.dim() {
        xi[axis] = freq;
    }
    let mut tau = SpectralField::zeros(grid, Rank::SymTensor);
    for c in 0..grid.n_sym() {
        // Real coefficients with distinct magnitudes: the components stay
        // distinguishable, while every cosine peaks at the same grid point
        // (the origin), so collocation sup norms are exact and identical
        // across shells.
        let v = Complex64::new(scale / (1.0 + 0.3 * c as f64), 0.0);
        tau.set_conjugate_pair(c, xi, v);
    }
    let mut u = SpectralField::zeros(grid, Rank::Vector);
    // cos(x₁)·e₂ is divergence-free in both dimensions.
    u.set_conjugate_pair(1, [1, 0, 0], Complex64::new(scale, 0.0));
    Ok((u, tau))
}

/// Effective Gaussian width of the [`make_axisymmetric_scaled`] family:
/// `min(0.5, 2.5Δx / k⁴)`. The width grows as the coupling shrinks — wide,
/// low-gradient data — until it saturates at a box-scale cap that keeps
/// the bump numerically periodic (the Gaussian tail at distance π is below
/// `3e-9` of the peak); the floor `2.5Δx` (attained near `k = 1`) keeps it
/// resolved. On grids too coarse to fit both, resolution wins.
pub fn axisymmetric_width(grid: Grid, k: f64) -> f64 {
    let floor = 2.5 * grid.dx();
    (floor / k.powi(4)).min(0.5f64.max(floor))
}

/// Axisymmetric, swirl-free velocity bump with `τ₀ = 0`, renormalized so
/// `‖u₀‖_{L²} = eps0` exactly. In 2D the velocity is the perpendicular
/// gradient of a radial Gaussian stream function; in 3D it is the curl of
/// an azimuthal vector potential (a vortex ring about the `x₃` axis
/// through the box center), so it is exactly divergence-free either way.
/// Requires `0 < k ≤ 1` and `eps0 > 0`.
pub fn make_axisymmetric_scaled(
    grid: Grid,
    k: f64,
    eps0: f64,
) -> Result<(SpectralField, SpectralField)> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::Data(format!(
            "axisymmetric family needs coupling in (0, 1], got {k}"
        )));
    }
    if !(eps0.is_finite() && eps0 > 0.0) {
        return Err(Error::Data(format!(
            "axisymmetric family needs a positive target norm, got {eps0}"
        )));
    }
    let sigma = axisymmetric_width(grid, k);
    let gauss = move |x: [f64; 3], dim: usize| -> f64 {
        let mut r2 = 0.0;
        for coord in x.iter().take(dim) {
            let d = coord - std::f64::consts::PI;
            r2 += d * d;
        }
        (-r2 / (2.0 * sigma * sigma)).exp()
    };
    let mut u = if grid.dim() == 2 {
        // u = ∇⊥ψ = (-∂₂ψ, ∂₁ψ) with ψ a radial Gaussian.
        let psi = PhysicalField::from_fn(grid, Rank::Scalar, |_, x| gauss(x, 2)).to_spectral();
        let grad = ops::gradient(&psi)?;
        let mut u = SpectralField::zeros(grid, Rank::Vector);
        for m in 0..grid.total() {
            u.comp_mut(0)[m] = -grad.comp(1)[m];
            u.comp_mut(1)[m] = grad.comp(0)[m];
        }
        u
    } else {
        // u = curl A with A = ρ g e_φ: poloidal (swirl-free) vortex ring.
        let a = PhysicalField::from_fn(grid, Rank::Vector, |c, x| {
            let g = gauss(x, 3);
            match c {
                0 => -(x[1] - std::f64::consts::PI) * g,
                1 => (x[0] - std::f64::consts::PI) * g,
                _ => 0.0,
            }
        })
        .to_spectral();
        ops::curl(&a)?
    };
    u.dealias();
    let norm = u.l2_norm();
    assert!(
        norm > 0.0,
        "axisymmetric bump must not vanish (width {sigma}, n = {})",
        grid.n()
    );
    u.scale(eps0 / norm);
    Ok((u, SpectralField::zeros(grid, Rank::SymTensor)))
}

/// Seeded Gaussian data: every retained Fourier coefficient is an
/// independent complex normal shaped by `|ξ|^{-spectrum_slope}`, then
/// Hermitian-symmetrized (real fields), dealiased, mean-freed, the
/// velocity Leray-projected, and each field renormalized to its requested
/// `L²` amplitude. The construction is sequential in a fixed order, so a
/// seed reproduces the data bit-for-bit; rescaling the amplitude rescales
/// every coefficient by the same real factor.
pub fn make_random_divfree(
    grid: Grid,
    amplitude_u: f64,
    amplitude_tau: f64,
    seed: u64,
    spectrum_slope: f64,
) -> Result<(SpectralField, SpectralField)> {
    for (name, a) in [("amplitude_u", amplitude_u), ("amplitude_tau", amplitude_tau)] {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::Data(format!(
                "{name} must be finite and nonnegative, got {a}"
            )));
        }
    }
    if !spectrum_slope.is_finite() {
        return Err(Error::Data("spectrum slope must be finite".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |field: &mut SpectralField| {
        for c in 0..field.rank().components(grid.dim()) {
            let comp = field.comp_mut(c);
            for v in comp.iter_mut() {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                *v = Complex64::new(re, im);
            }
        }
    };
    let mut u = SpectralField::zeros(grid, Rank::Vector);
    let mut tau = SpectralField::zeros(grid, Rank::SymTensor);
    draw(&mut u);
    draw(&mut tau);
    for (field, amplitude) in [(&mut u, amplitude_u), (&mut tau, amplitude_tau)] {
        if amplitude == 0.0 {
            *field = SpectralField::zeros(grid, field.rank());
            continue;
        }
        shape_and_symmetrize(field, spectrum_slope);
        field.dealias();
        field.zero_mean();
        if field.rank() == Rank::Vector {
            ops::leray_project(field)?;
        }
        let norm = field.l2_norm();
        assert!(norm > 0.0, "random field collapsed to zero before renormalization");
        field.scale(amplitude / norm);
    }
    Ok((u, tau))
}

/// Multiplies each coefficient by the isotropic power-law weight and
/// averages with its reflected conjugate, making the physical field real.
/// The weight is radial, so it commutes with the symmetrization.
fn shape_and_symmetrize(field: &mut SpectralField, slope: f64) {
    let grid = field.grid();
    let n = grid.n();
    let mut weights = vec![0.0f64; grid.total()];
    grid.for_each_mode(|m, xi| {
        let q = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64;
        weights[m] = if q == 0.0 { 0.0 } else { q.sqrt().powf(-slope) };
    });
    for c in 0..field.rank().components(grid.dim()) {
        let comp = field.comp_mut(c);
        let shaped: Vec<Complex64> = comp
            .iter()
            .zip(weights.iter())
            .map(|(v, w)| v * *w)
            .collect();
        for m in 0..shaped.len() {
            let idx = grid.decompose(m);
            let mut reflected = [0usize; 3];
            for axis in 0..3 {
                reflected[axis] = (n - idx[axis]) % n;
            }
            let r = grid.flat(&reflected[..grid.dim()]);
            comp[m] = 0.5 * (shaped[m] + shaped[r].conj());
        }
    }
}

/// One transverse cosine mode: `u₀ = amplitude · cos(ξ·x) · t̂` with `t̂`
/// the first unit vector orthogonal to `ξ`, and `τ₀ = 0`. The frequency
/// must be nonzero and survive dealiasing, so the probe is not erased on
/// entry to a simulation.
pub fn make_single_mode(
    grid: Grid,
    xi: [i64; 3],
    amplitude: f64,
) -> Result<(SpectralField, SpectralField)> {
    if xi == [0, 0, 0] {
        return Err(Error::Data("single-mode data needs a nonzero frequency".into()));
    }
    if grid.dim() == 2 && xi[2] != 0 {
        return Err(Error::Data(format!(
            "frequency {xi:?} has a third component on a 2D grid"
        )));
    }
    if !(amplitude.is_finite() && amplitude > 0.0) {
        return Err(Error::Data(format!(
            "single-mode amplitude must be positive and finite, got {amplitude}"
        )));
    }
    let cut = grid.n() as f64 / 3.0;
    for &x in xi.iter().take(grid.dim()) {
        if (x.unsigned_abs() as f64) > cut {
            return Err(Error::Data(format!(
                "frequency {xi:?} would be removed by dealiasing on an n = {} grid",
                grid.n()
            )));
        }
    }
    let xif = [xi[0] as f64, xi[1] as f64, xi[2] as f64];
    let t_hat = transverse_basis(grid.dim(), xif)[0];
    // Unnormalized coefficients: this factor makes `amplitude` pointwise.
    let scale = 0.5 * amplitude * grid.total() as f64;
    let mut u = SpectralField::zeros(grid, Rank::Vector);
    for c in 0..grid.dim() {
        if t_hat[c] != 0.0 {
            u.set_conjugate_pair(c, xi, Complex64::new(scale * t_hat[c], 0.0));
        }
    }
    Ok((u, SpectralField::zeros(grid, Rank::SymTensor)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::SimState;
    use crate::lp::DyadicPartition;

    fn div_norm(u: &SpectralField) -> f64 {
        ops::divergence_vector(u).unwrap().l2_norm()
    }

    #[test]
    fn frequency_bump_lives_on_exactly_one_shell() {
        let grid = Grid::new(2, 64).unwrap();
        let (_, tau) = make_frequency_bump(grid, 4, 1.0).unwrap();
        let lp = DyadicPartition::new(grid).unwrap();
        let own = lp.block_project(&tau, 4).unwrap();
        assert!(own.l2_distance(&tau) <= 1e-10 * tau.l2_norm());
        for j in [-1i32, 0, 1, 2, 3, 5, 6] {
            let other = lp.block_project(&tau, j).unwrap();
            assert!(
                other.l2_norm() <= 1e-12 * tau.l2_norm(),
                "shell {j} should be empty"
            );
        }
    }

    #[test]
    fn frequency_bump_besov_ratio_grows_geometrically() {
        // One shell means B^s_{2,1} = 2^{sN}·L² while B⁰_{∞,1} is the
        // amplitude-proportional sup; their ratio must grow by 2^{3/2} per
        // shell, comfortably above the factor-2 requirement.
        let grid = Grid::new(2, 64).unwrap();
        let lp = DyadicPartition::new(grid).unwrap();
        let ratio = |shell: u32| -> f64 {
            let (_, tau) = make_frequency_bump(grid, shell, 1.0).unwrap();
            let smooth = lp.besov_norm(&tau, 1.5, 2.0, 1.0).unwrap();
            let flat = lp.besov_norm(&tau, 0.0, f64::INFINITY, 1.0).unwrap();
            smooth / flat
        };
        let growth = ratio(4) / ratio(3);
        assert!(
            (growth - 2.0f64.powf(1.5)).abs() <= 1e-6 * growth,
            "growth per shell {growth}"
        );
    }

    #[test]
    fn frequency_bump_scales_and_validates() {
        let grid = Grid::new(2, 64).unwrap();
        let (u1, t1) = make_frequency_bump(grid, 3, 1.0).unwrap();
        let (u2, t2) = make_frequency_bump(grid, 3, 2.0).unwrap();
        assert!((u2.l2_norm() - 2.0 * u1.l2_norm()).abs() <= 1e-14);
        assert!((t2.l2_norm() - 2.0 * t1.l2_norm()).abs() <= 1e-13 * t1.l2_norm());
        let (u4, _) = make_frequency_bump(grid, 4, 1.0).unwrap();
        // amplitude/N scaling: shell 4 velocity is 3/4 of shell 3.
        assert!((u4.l2_norm() - 0.75 * u1.l2_norm()).abs() <= 1e-14);
        assert!(div_norm(&u1) <= 1e-12);
        // Largest representable wavenumber on n = 64 is 31, so shell 5
        // (frequency 32) needs the next grid size up.
        assert!(make_frequency_bump(grid, 5, 1.0).is_err());
        assert!(make_frequency_bump(Grid::new(2, 128).unwrap(), 5, 1.0).is_ok());
        assert!(make_frequency_bump(grid, 0, 1.0).is_err());
    }

    #[test]
    fn axisymmetric_bump_hits_its_norm_and_is_divergence_free() {
        for dim in [2usize, 3] {
            let n = if dim == 2 { 64 } else { 32 };
            let grid = Grid::new(dim, n).unwrap();
            let (u, tau) = make_axisymmetric_scaled(grid, 0.1, 0.05).unwrap();
            assert!((u.l2_norm() - 0.05).abs() <= 1e-12 * 0.05, "dim {dim}");
            assert!(div_norm(&u) <= 1e-12, "dim {dim}");
            assert_eq!(tau.l2_norm(), 0.0);
            for c in 0..dim {
                assert!(u.comp(c)[0].norm() <= 1e-14, "mean-free in component {c}");
            }
        }
    }

    #[test]
    fn axisymmetric_width_grows_as_coupling_shrinks() {
        let grid = Grid::new(2, 128).unwrap();
        let w1 = axisymmetric_width(grid, 1.0);
        let w05 = axisymmetric_width(grid, 0.5);
        let w01 = axisymmetric_width(grid, 0.1);
        assert!(w1 < w05, "width must grow as k shrinks: {w1} vs {w05}");
        assert!(w05 <= w01);
        assert!((w1 - 2.5 * grid.dx()).abs() <= 1e-14, "floor at k = 1");
        assert!(w01 <= 0.5 + 1e-14, "cap keeps the bump inside the box");
        assert!(make_axisymmetric_scaled(grid, 0.0, 1.0).is_err());
        assert!(make_axisymmetric_scaled(grid, 1.5, 1.0).is_err());
        assert!(make_axisymmetric_scaled(grid, 0.5, -1.0).is_err());
    }

    #[test]
    fn axisymmetric_3d_ring_has_no_swirl() {
        let grid = Grid::new(3, 64).unwrap();
        let (u, _) = make_axisymmetric_scaled(grid, 0.2, 1.0).unwrap();
        let phys: Vec<PhysicalField> = (0..3)
            .map(|c| {
                let mut single = SpectralField::zeros(grid, Rank::Scalar);
                single.comp_mut(0).copy_from_slice(u.comp(c));
                single.to_physical()
            })
            .collect();
        let max_u = (0..3).map(|c| phys[c].max_norm()).fold(0.0f64, f64::max);
        let mut max_swirl = 0.0f64;
        for m in 0..grid.total() {
            let x = grid.point(m);
            let dx0 = x[0] - std::f64::consts::PI;
            let dx1 = x[1] - std::f64::consts::PI;
            let rho = (dx0 * dx0 + dx1 * dx1).sqrt();
            if rho < 0.3 {
                continue; // e_φ is ill-defined on the axis
            }
            let swirl = (-dx1 * phys[0].comp(0)[m] + dx0 * phys[1].comp(0)[m]) / rho;
            max_swirl = max_swirl.max(swirl.abs());
        }
        assert!(
            max_swirl <= 1e-6 * max_u,
            "azimuthal velocity {max_swirl:.3e} vs peak {max_u:.3e}"
        );
    }

    #[test]
    fn random_data_is_bit_reproducible_and_seed_sensitive() {
        let grid = Grid::new(2, 32).unwrap();
        let a = make_random_divfree(grid, 0.3, 0.2, 42, 2.5).unwrap();
        let b = make_random_divfree(grid, 0.3, 0.2, 42, 2.5).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        let c = make_random_divfree(grid, 0.3, 0.2, 43, 2.5).unwrap();
        assert!(a.0.l2_distance(&c.0) > 1e-3);
    }

    #[test]
    fn random_data_hits_amplitudes_scales_linearly_and_is_real() {
        let grid = Grid::new(2, 32).unwrap();
        let (u, tau) = make_random_divfree(grid, 0.3, 0.2, 7, 2.0).unwrap();
        assert!((u.l2_norm() - 0.3).abs() <= 1e-13);
        assert!((tau.l2_norm() - 0.2).abs() <= 1e-13);
        assert!(div_norm(&u) <= 1e-12);
        // Doubling both amplitudes doubles every coefficient exactly.
        let (u2, tau2) = make_random_divfree(grid, 0.6, 0.4, 7, 2.0).unwrap();
        let mut u_scaled = u.clone();
        u_scaled.scale(2.0);
        let mut tau_scaled = tau.clone();
        tau_scaled.scale(2.0);
        assert_eq!(u2, u_scaled);
        assert_eq!(tau2, tau_scaled);
        // Hermitian symmetry: the physical field is real.
        let (_, imag) = u.to_physical_with_imag();
        assert!(imag <= 1e-12, "imaginary residue {imag:.3e}");
        // Zero amplitude produces the zero field.
        let (u0, tau0) = make_random_divfree(grid, 0.0, 0.1, 7, 2.0).unwrap();
        assert_eq!(u0.l2_norm(), 0.0);
        assert!(tau0.l2_norm() > 0.0);
    }

    #[test]
    fn spectrum_slope_steers_energy_toward_low_frequencies() {
        let grid = Grid::new(2, 32).unwrap();
        let rough = make_random_divfree(grid, 1.0, 0.0, 11, 0.5).unwrap().0;
        let smooth = make_random_divfree(grid, 1.0, 0.0, 11, 4.0).unwrap().0;
        // Same L² norm by construction; the steeper slope must carry much
        // less H¹ content.
        assert!(smooth.h1_norm() < 0.5 * rough.h1_norm());
    }

    #[test]
    fn single_mode_is_a_pure_transverse_pair() {
        let grid = Grid::new(2, 16).unwrap();
        let (u, tau) = make_single_mode(grid, [0, 1, 0], 1e-6).unwrap();
        assert_eq!(tau.l2_norm(), 0.0);
        assert!(div_norm(&u) <= 1e-18);
        // Pointwise amplitude: max |u| = amplitude.
        let phys = u.to_physical();
        let peak = (0..2).map(|c| {
            phys.comp(c).iter().fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .fold(0.0f64, f64::max);
        assert!((peak - 1e-6).abs() <= 1e-18);
        // Survives a dealias pass.
        let mut copy = u.clone();
        copy.dealias();
        assert_eq!(copy, u);
        assert!(make_single_mode(grid, [0, 0, 0], 1.0).is_err());
        assert!(make_single_mode(grid, [0, 7, 0], 1.0).is_err(), "beyond the dealias cut");
        assert!(make_single_mode(grid, [0, 1, 1], 1.0).is_err(), "3D frequency on a 2D grid");
    }

    #[test]
    fn all_families_produce_valid_simulation_states() {
        for dim in [2usize, 3] {
            let n = if dim == 2 { 32 } else { 16 };
            let grid = Grid::new(dim, n).unwrap();
            let specs = [
                DataSpec::FrequencyBump { shell: 2, amplitude: 0.5 },
                DataSpec::AxisymmetricScaled { k: 0.3, eps0: 0.1 },
                DataSpec::RandomDivfree {
                    amplitude_u: 0.2,
                    amplitude_tau: 0.1,
                    seed: 1,
                    spectrum_slope: 2.0,
                },
                DataSpec::SingleMode { xi: [1, 2, 0], amplitude: 0.05 },
            ];
            for spec in &specs {
                let (u, tau) = build(grid, spec).unwrap();
                let state = SimState::new(0.0, u, tau);
                assert!(state.is_ok(), "{spec:?} in dim {dim}");
            }
        }
    }
}
