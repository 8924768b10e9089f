//! Uniform periodic grid on the torus `[0, 2π)^d` and its integer frequencies.
//!
//! Conventions used everywhere in this crate:
//!
//! * the box has side length `2π`, so wavenumbers per axis are the integers
//!   in `[-n/2, n/2)` (the Nyquist index `n/2` maps to `-n/2`);
//! * storage is row-major with axis 0 slowest;
//! * odd-order derivative operators use [`Grid::deriv_wavenumber`], which
//!   zeroes the Nyquist frequency so real fields stay real under
//!   differentiation.

use crate::error::{Error, Result};

/// Grid descriptor: `dim ∈ {2, 3}` axes with `n` points each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    dim: usize,
    n: usize,
}

/// Index pairs `(i, j)` with `i ≤ j` for the stored components of a symmetric
/// tensor, in storage order.
pub const SYM_PAIRS_2D: [(usize, usize); 3] = [(0, 0), (0, 1), (1, 1)];
pub const SYM_PAIRS_3D: [(usize, usize); 6] =
    [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

impl Grid {
    /// Creates a grid. `dim` must be 2 or 3 and `n` a power of two with
    /// `n ≥ 8` so at least one dyadic shell and the dealiased band exist.
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Grid(format!("dim must be 2 or 3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Grid(format!(
                "n must be a power of two with n >= 8, got {n}"
            )));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of grid points / retained modes, `n^dim`.
    pub fn total(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Grid spacing `2π / n`.
    pub fn dx(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n as f64
    }

    /// Volume of the box, `(2π)^dim`.
    pub fn volume(&self) -> f64 {
        (2.0 * std::f64::consts::PI).powi(self.dim as i32)
    }

    /// Number of stored components of a symmetric tensor field.
    pub fn n_sym(&self) -> usize {
        self.dim * (self.dim + 1) / 2
    }

    /// Stored component pairs of a symmetric tensor, `(i, j)` with `i ≤ j`.
    pub fn sym_pairs(&self) -> &'static [(usize, usize)] {
        if self.dim == 2 {
            &SYM_PAIRS_2D
        } else {
            &SYM_PAIRS_3D
        }
    }

    /// Component slot of symmetric entry `(i, j)` (either order).
    pub fn sym_index(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.sym_pairs()
            .iter()
            .position(|&p| p == (a, b))
            .expect("valid symmetric index")
    }

    /// Multiplicity of a stored symmetric component in full-tensor sums
    /// (1 on the diagonal, 2 off it).
    pub fn sym_weight(&self, comp: usize) -> f64 {
        let (i, j) = self.sym_pairs()[comp];
        if i == j {
            1.0
        } else {
            2.0
        }
    }

    /// Integer wavenumber of axis index `i`, in `[-n/2, n/2)`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Wavenumber used by odd-order derivative operators: as
    /// [`Grid::wavenumber`] but with the Nyquist frequency `-n/2` zeroed.
    #[inline]
    pub fn deriv_wavenumber(&self, i: usize) -> i64 {
        let k = self.wavenumber(i);
        if k == -(self.n as i64) / 2 {
            0
        } else {
            k
        }
    }

    /// Flat index of the mode/point with per-axis indices `idx[..dim]`.
    #[inline]
    pub fn flat(&self, idx: &[usize]) -> usize {
        let mut f = 0;
        for a in 0..self.dim {
            f = f * self.n + idx[a];
        }
        f
    }

    /// Largest per-axis frequency kept by the 2/3-rule dealias mask,
    /// `floor(n/3)`.
    pub fn dealias_cut(&self) -> i64 {
        (self.n / 3) as i64
    }

    /// Calls `f(flat, xi)` for every mode, where `xi[..dim]` holds the true
    /// integer wavenumbers (`xi[2] = 0` in 2D). Iteration order is the flat
    /// storage order, so results are independent of thread count as long as
    /// `f` writes only to slot `flat`.
    #[inline]
    pub fn for_each_mode(&self, mut f: impl FnMut(usize, [i64; 3])) {
        let n = self.n;
        if self.dim == 2 {
            let mut flat = 0;
            for i0 in 0..n {
                let k0 = self.wavenumber(i0);
                for i1 in 0..n {
                    f(flat, [k0, self.wavenumber(i1), 0]);
                    flat += 1;
                }
            }
        } else {
            let mut flat = 0;
            for i0 in 0..n {
                let k0 = self.wavenumber(i0);
                for i1 in 0..n {
                    let k1 = self.wavenumber(i1);
                    for i2 in 0..n {
                        f(flat, [k0, k1, self.wavenumber(i2)]);
                        flat += 1;
                    }
                }
            }
        }
    }

    /// As [`Grid::for_each_mode`] but passing the derivative wavenumbers
    /// (Nyquist zeroed).
    #[inline]
    pub fn for_each_mode_deriv(&self, mut f: impl FnMut(usize, [i64; 3])) {
        let nyq = -(self.n as i64) / 2;
        self.for_each_mode(|flat, xi| {
            let mut d = xi;
            for v in d.iter_mut() {
                if *v == nyq {
                    *v = 0;
                }
            }
            f(flat, d);
        });
    }

    /// Per-axis indices of flat index `m` (slowest axis first; unused third
    /// entry is 0 in 2D).
    #[inline]
    pub fn decompose(&self, m: usize) -> [usize; 3] {
        let n = self.n;
        if self.dim == 2 {
            [m / n, m % n, 0]
        } else {
            [m / (n * n), (m / n) % n, m % n]
        }
    }

    /// Physical coordinates of grid point with flat index `m`.
    pub fn point(&self, m: usize) -> [f64; 3] {
        let idx = self.decompose(m);
        let dx = self.dx();
        [idx[0] as f64 * dx, idx[1] as f64 * dx, idx[2] as f64 * dx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_cover_half_open_band() {
        let g = Grid::new(2, 8).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        // Nyquist -4 is zeroed for derivatives, all others kept.
        let ds: Vec<i64> = (0..8).map(|i| g.deriv_wavenumber(i)).collect();
        assert_eq!(ds, vec![0, 1, 2, 3, 0, -3, -2, -1]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Grid::new(1, 16).is_err());
        assert!(Grid::new(4, 16).is_err());
        assert!(Grid::new(2, 12).is_err());
        assert!(Grid::new(2, 4).is_err());
    }

    #[test]
    fn sym_tables_round_trip() {
        for dim in [2usize, 3] {
            let g = Grid::new(dim, 8).unwrap();
            for c in 0..g.n_sym() {
                let (i, j) = g.sym_pairs()[c];
                assert_eq!(g.sym_index(i, j), c);
                assert_eq!(g.sym_index(j, i), c);
            }
            // Weights reconstruct the full-tensor component count dim^2.
            let total: f64 = (0..g.n_sym()).map(|c| g.sym_weight(c)).sum();
            assert_eq!(total, (dim * dim) as f64);
        }
    }

    #[test]
    fn flat_and_decompose_agree() {
        for (dim, n) in [(2usize, 8usize), (3, 8)] {
            let g = Grid::new(dim, n).unwrap();
            for m in (0..g.total()).step_by(17) {
                let idx = g.decompose(m);
                assert_eq!(g.flat(&idx[..dim]), m);
            }
        }
    }

    #[test]
    fn mode_iteration_matches_decompose() {
        let g = Grid::new(3, 8).unwrap();
        let mut count = 0;
        g.for_each_mode(|flat, xi| {
            let idx = g.decompose(flat);
            for a in 0..3 {
                assert_eq!(xi[a], g.wavenumber(idx[a]));
            }
            count += 1;
        });
        assert_eq!(count, g.total());
    }
}
