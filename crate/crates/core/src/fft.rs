//! Multidimensional FFT driver built on `rustfft`'s 1-D transforms.
//!
//! Forward transforms are unnormalized sums `Σ f(x) e^{-iξ·x}`; backward
//! transforms carry the full `1/n^dim` factor, so
//! `backward(forward(f)) = f`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::Grid;

type Plan = Arc<dyn Fft<f64>>;

fn plan(n: usize, forward: bool) -> Plan {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Plan>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().expect("fft plan cache poisoned");
    cache
        .entry((n, forward))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if forward {
                planner.plan_fft_forward(n)
            } else {
                planner.plan_fft_inverse(n)
            }
        })
        .clone()
}

/// Transforms `data` (row-major, axis 0 slowest) along every axis.
fn transform_nd(grid: &Grid, data: &mut [Complex64], forward: bool) {
    let n = grid.n();
    let dim = grid.dim();
    debug_assert_eq!(data.len(), grid.total());
    let fft = plan(n, forward);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // Last axis: lines are contiguous; rustfft processes all of them in one
    // call by chunking the buffer.
    fft.process_with_scratch(data, &mut scratch);

    // Remaining axes: gather each strided line, transform, scatter back.
    let mut line = vec![Complex64::default(); n];
    for axis in (0..dim - 1).rev() {
        // stride between consecutive elements along `axis`
        let stride = n.pow((dim - 1 - axis) as u32);
        let block = stride * n; // span of one full line group
        let groups = data.len() / block;
        for g in 0..groups {
            let base_group = g * block;
            for off in 0..stride {
                let base = base_group + off;
                for t in 0..n {
                    line[t] = data[base + t * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for t in 0..n {
                    data[base + t * stride] = line[t];
                }
            }
        }
    }

    if !forward {
        let scale = 1.0 / grid.total() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Unnormalized forward DFT over all axes.
pub(crate) fn forward_nd(grid: &Grid, data: &mut [Complex64]) {
    transform_nd(grid, data, true);
}

/// Backward DFT over all axes, scaled by `1/n^dim`.
pub(crate) fn backward_nd(grid: &Grid, data: &mut [Complex64]) {
    transform_nd(grid, data, false);
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force DFT sum, the oracle for the fast transform:
    /// `F(ξ) = Σ_x f(x) e^{-iξ·x}` over all grid points.
    fn dft_oracle(grid: &Grid, data: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); grid.total()];
        grid.for_each_mode(|fm, xi| {
            let mut acc = Complex64::default();
            for (pm, &val) in data.iter().enumerate() {
                let x = grid.point(pm);
                let phase = -(xi[0] as f64 * x[0] + xi[1] as f64 * x[1] + xi[2] as f64 * x[2]);
                acc += val * Complex64::from_polar(1.0, phase);
            }
            out[fm] = acc;
        });
        out
    }

    fn pseudo_random_field(grid: &Grid) -> Vec<Complex64> {
        // Deterministic, structureless values; no RNG needed at this size.
        (0..grid.total())
            .map(|m| {
                let a = (m as f64 * 0.7391 + 0.37).sin() * 1.3;
                let b = (m as f64 * 1.1173 - 0.11).cos() * 0.7;
                Complex64::new(a, b)
            })
            .collect()
    }

    #[test]
    fn forward_matches_brute_force_sum_2d_and_3d() {
        for (dim, n) in [(2usize, 8usize), (3, 8)] {
            let grid = Grid::new(dim, n).unwrap();
            let field = pseudo_random_field(&grid);
            let mut fast = field.clone();
            forward_nd(&grid, &mut fast);
            let slow = dft_oracle(&grid, &field);
            let scale: f64 = slow.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (a, b) in fast.iter().zip(slow.iter()) {
                assert!(
                    (a - b).norm() <= 1e-12 * scale,
                    "dim={dim}: fast {a} vs oracle {b}"
                );
            }
        }
    }

    #[test]
    fn backward_inverts_forward() {
        for (dim, n) in [(2usize, 16usize), (3, 8)] {
            let grid = Grid::new(dim, n).unwrap();
            let field = pseudo_random_field(&grid);
            let mut work = field.clone();
            forward_nd(&grid, &mut work);
            backward_nd(&grid, &mut work);
            let scale: f64 = field.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (a, b) in work.iter().zip(field.iter()) {
                assert!((a - b).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn cosine_lands_on_two_modes_with_weight_half_total() {
        // f(x) = cos(x_0) has exactly two nonzero coefficients, at ±e_0,
        // each equal to n^dim / 2 under the unnormalized forward sum.
        let grid = Grid::new(2, 16).unwrap();
        let mut data: Vec<Complex64> = (0..grid.total())
            .map(|m| Complex64::new(grid.point(m)[0].cos(), 0.0))
            .collect();
        forward_nd(&grid, &mut data);
        let expect = grid.total() as f64 / 2.0;
        grid.for_each_mode(|m, xi| {
            let target = if xi == [1, 0, 0] || xi == [-1, 0, 0] {
                expect
            } else {
                0.0
            };
            assert!(
                (data[m] - Complex64::new(target, 0.0)).norm() <= 1e-9,
                "mode {xi:?} = {}",
                data[m]
            );
        });
    }

    #[test]
    fn constant_field_is_pure_zero_mode() {
        let grid = Grid::new(3, 8).unwrap();
        let c = 2.25;
        let mut data = vec![Complex64::new(c, 0.0); grid.total()];
        forward_nd(&grid, &mut data);
        assert!((data[0] - Complex64::new(c * grid.total() as f64, 0.0)).norm() <= 1e-10);
        let rest: f64 = data[1..].iter().map(|v| v.norm()).sum();
        assert!(rest <= 1e-9);
    }
}
