//! Spectral and physical field containers for scalar, vector, and tensor
//! quantities on the periodic grid.
//!
//! A [`SpectralField`] stores one complex coefficient array per component in
//! the unnormalized forward-DFT convention of [`crate::fft`]. A
//! [`PhysicalField`] stores real point values. Symmetric tensors keep only
//! the upper triangle; every norm and inner product below weights those
//! components with their full-tensor multiplicity, so `|τ|` always means the
//! Frobenius magnitude of the full matrix.
//!
//! Norms carry the physical volume factor of the `2π` box:
//! `‖f‖_{L²}² = (2π)^d · mean(|f|²)`, which makes the quadrature and
//! Parseval evaluations of the same norm agree to rounding.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::Grid;

/// Tensorial rank of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Scalar,
    Vector,
    /// Symmetric rank-2 tensor, upper triangle stored.
    SymTensor,
    /// Full rank-2 tensor (e.g. a velocity gradient), row-major components.
    Tensor,
}

impl Rank {
    /// Number of stored components at spatial dimension `dim`.
    pub fn components(&self, dim: usize) -> usize {
        match self {
            Rank::Scalar => 1,
            Rank::Vector => dim,
            Rank::SymTensor => dim * (dim + 1) / 2,
            Rank::Tensor => dim * dim,
        }
    }
}

/// Field of Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    rank: Rank,
    comps: Vec<Vec<Complex64>>,
}

/// Field of real point values.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: Grid,
    rank: Rank,
    comps: Vec<Vec<f64>>,
}

impl SpectralField {
    pub fn zeros(grid: Grid, rank: Rank) -> Self {
        let nc = rank.components(grid.dim());
        Self {
            grid,
            rank,
            comps: vec![vec![Complex64::default(); grid.total()]; nc],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn n_comps(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn comp_mut(&mut self, c: usize) -> &mut Vec<Complex64> {
        &mut self.comps[c]
    }

    /// Full-tensor multiplicity of stored component `c` in norms and inner
    /// products (2 for off-diagonal symmetric entries, 1 otherwise).
    pub fn comp_weight(&self, c: usize) -> f64 {
        match self.rank {
            Rank::SymTensor => self.grid.sym_weight(c),
            _ => 1.0,
        }
    }

    /// Flat index of the coefficient at integer frequency `xi`.
    pub fn mode_index(&self, xi: [i64; 3]) -> usize {
        let n = self.grid.n() as i64;
        let mut idx = [0usize; 3];
        for a in 0..self.grid.dim() {
            idx[a] = ((xi[a] % n + n) % n) as usize;
        }
        self.grid.flat(&idx[..self.grid.dim()])
    }

    /// Sets the pair `f̂(ξ) = v`, `f̂(-ξ) = conj(v)` so the physical field
    /// stays real. With the `1/n^dim` backward normalization this adds
    /// `2·Re(v e^{iξ·x}) / n^dim` to the physical component.
    pub fn set_conjugate_pair(&mut self, c: usize, xi: [i64; 3], v: Complex64) {
        let plus = self.mode_index(xi);
        let minus = self.mode_index([-xi[0], -xi[1], -xi[2]]);
        self.comps[c][plus] = v;
        self.comps[c][minus] = v.conj();
    }

    /// Inverse transform. The imaginary residue of the inverse DFT is
    /// dropped; callers that need to check conjugate symmetry can use
    /// [`SpectralField::to_physical_with_imag`].
    pub fn to_physical(&self) -> PhysicalField {
        self.to_physical_with_imag().0
    }

    /// Inverse transform, also returning the largest absolute imaginary part
    /// encountered (≈ 0 for conjugate-symmetric coefficients).
    pub fn to_physical_with_imag(&self) -> (PhysicalField, f64) {
        let mut out = PhysicalField::zeros(self.grid, self.rank);
        let mut worst: f64 = 0.0;
        for (c, comp) in self.comps.iter().enumerate() {
            let mut buf = comp.clone();
            fft::backward_nd(&self.grid, &mut buf);
            let dst = &mut out.comps[c];
            for (d, v) in dst.iter_mut().zip(buf.iter()) {
                *d = v.re;
                worst = worst.max(v.im.abs());
            }
        }
        (out, worst)
    }

    /// Zeroes every coefficient with any `|ξ_i| > n/3` (2/3-rule dealiasing).
    pub fn dealias(&mut self) {
        let cut = self.grid.n() as f64 / 3.0;
        let grid = self.grid;
        for comp in self.comps.iter_mut() {
            grid.for_each_mode(|m, xi| {
                let out = (0..grid.dim()).any(|a| (xi[a] as f64).abs() > cut);
                if out {
                    comp[m] = Complex64::default();
                }
            });
        }
    }

    /// Zeroes the mean (ξ = 0) coefficient of every component.
    pub fn zero_mean(&mut self) {
        for comp in self.comps.iter_mut() {
            comp[0] = Complex64::default();
        }
    }

    /// `L²` norm by Parseval, including the `(2π)^{d/2}` volume factor.
    pub fn l2_norm(&self) -> f64 {
        self.weighted_norm(|_| 1.0)
    }

    /// Homogeneous `Ḣ¹` norm, multiplier `|ξ|²`.
    pub fn h1_norm(&self) -> f64 {
        self.weighted_norm(|s| s)
    }

    /// Homogeneous `Ḣ⁻¹` norm, multiplier `1/|ξ|²`; the zero mode is skipped.
    pub fn hm1_norm(&self) -> f64 {
        self.weighted_norm(|s| if s == 0.0 { 0.0 } else { 1.0 / s })
    }

    /// Nonhomogeneous `H^s` norm, multiplier `(1 + |ξ|²)^s`.
    pub fn hs_norm(&self, s: f64) -> f64 {
        self.weighted_norm(|q| (1.0 + q).powf(s))
    }

    /// `sqrt(vol/N² Σ_ξ w(|ξ|²) Σ_c w_c |f̂_c(ξ)|²)` with a fixed summation
    /// order, so the value does not depend on thread count.
    fn weighted_norm(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let mut acc = 0.0f64;
        let grid = self.grid;
        for (c, comp) in self.comps.iter().enumerate() {
            let wc = self.comp_weight(c);
            let mut part = 0.0f64;
            grid.for_each_mode(|m, xi| {
                let s = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64;
                part += weight(s) * comp[m].norm_sqr();
            });
            acc += wc * part;
        }
        let nn = grid.total() as f64;
        (grid.volume() * acc / (nn * nn)).sqrt()
    }

    /// `L²` inner product `⟨f, g⟩ = ∫ f·g dx` of two real fields via
    /// Parseval (real part of the coefficient pairing).
    pub fn inner_l2(&self, other: &SpectralField) -> Result<f64> {
        if self.grid != other.grid || self.rank != other.rank {
            return Err(Error::Shape(
                "inner product requires matching grid and rank".into(),
            ));
        }
        let mut acc = 0.0f64;
        for (c, (a, b)) in self.comps.iter().zip(other.comps.iter()).enumerate() {
            let wc = self.comp_weight(c);
            let mut part = 0.0f64;
            for (x, y) in a.iter().zip(b.iter()) {
                part += (x * y.conj()).re;
            }
            acc += wc * part;
        }
        let nn = self.grid.total() as f64;
        Ok(self.grid.volume() * acc / (nn * nn))
    }

    /// True if any coefficient is NaN or infinite.
    pub fn has_non_finite(&self) -> bool {
        self.comps
            .iter()
            .any(|c| c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()))
    }

    /// In-place linear update `self += scale · other`.
    pub fn axpy(&mut self, scale: f64, other: &SpectralField) {
        debug_assert_eq!(self.rank, other.rank);
        debug_assert_eq!(self.grid, other.grid);
        for (a, b) in self.comps.iter_mut().zip(other.comps.iter()) {
            for (x, y) in a.iter_mut().zip(b.iter()) {
                *x += scale * y;
            }
        }
    }

    /// In-place scaling `self *= scale`.
    pub fn scale(&mut self, scale: f64) {
        for comp in self.comps.iter_mut() {
            for v in comp.iter_mut() {
                *v *= scale;
            }
        }
    }

    /// `L²` norm of `self - other`.
    pub fn l2_distance(&self, other: &SpectralField) -> f64 {
        debug_assert_eq!(self.rank, other.rank);
        let mut diff = self.clone();
        diff.axpy(-1.0, other);
        diff.l2_norm()
    }
}

impl PhysicalField {
    pub fn zeros(grid: Grid, rank: Rank) -> Self {
        let nc = rank.components(grid.dim());
        Self {
            grid,
            rank,
            comps: vec![vec![0.0; grid.total()]; nc],
        }
    }

    /// Builds a field by evaluating `f(component, point)` at every grid
    /// point.
    pub fn from_fn(grid: Grid, rank: Rank, mut f: impl FnMut(usize, [f64; 3]) -> f64) -> Self {
        let mut out = Self::zeros(grid, rank);
        for c in 0..out.comps.len() {
            for m in 0..grid.total() {
                out.comps[c][m] = f(c, grid.point(m));
            }
        }
        out
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn n_comps(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    pub fn comp_mut(&mut self, c: usize) -> &mut Vec<f64> {
        &mut self.comps[c]
    }

    pub fn comp_weight(&self, c: usize) -> f64 {
        match self.rank {
            Rank::SymTensor => self.grid.sym_weight(c),
            _ => 1.0,
        }
    }

    /// Forward transform to Fourier coefficients.
    pub fn to_spectral(&self) -> SpectralField {
        let mut out = SpectralField::zeros(self.grid, self.rank);
        for (c, comp) in self.comps.iter().enumerate() {
            let mut buf: Vec<Complex64> =
                comp.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            fft::forward_nd(&self.grid, &mut buf);
            out.comps[c] = buf;
        }
        out
    }

    /// Pointwise Frobenius magnitude `|f(x)|`, with symmetric off-diagonal
    /// components counted twice.
    pub fn magnitude_at(&self, m: usize) -> f64 {
        let mut s = 0.0;
        for (c, comp) in self.comps.iter().enumerate() {
            s += self.comp_weight(c) * comp[m] * comp[m];
        }
        s.sqrt()
    }

    /// `L^p` norm by quadrature: `((2π)^d · mean |f|^p)^{1/p}`, or the
    /// pointwise maximum for `p = ∞`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let total = self.grid.total();
        if p.is_infinite() {
            let mut worst = 0.0f64;
            for m in 0..total {
                worst = worst.max(self.magnitude_at(m));
            }
            return worst;
        }
        assert!(p >= 1.0, "L^p norms need p >= 1, got {p}");
        let mut acc = 0.0f64;
        for m in 0..total {
            acc += self.magnitude_at(m).powf(p);
        }
        (self.grid.volume() * acc / total as f64).powf(1.0 / p)
    }

    /// `L²` norm by quadrature (agrees with the spectral Parseval value).
    pub fn l2_norm(&self) -> f64 {
        let mut acc = 0.0f64;
        for (c, comp) in self.comps.iter().enumerate() {
            let wc = self.comp_weight(c);
            for &v in comp.iter() {
                acc += wc * v * v;
            }
        }
        (self.grid.volume() * acc / self.grid.total() as f64).sqrt()
    }

    /// Pointwise maximum of `|f|` (same as `lp_norm(∞)`).
    pub fn max_norm(&self) -> f64 {
        self.lp_norm(f64::INFINITY)
    }
}
