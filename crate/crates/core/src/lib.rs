//! Pseudospectral solver and experiment harness for the incompressible
//! Oldroyd-B system with stress diffusion and damping on the torus
//! `[0, 2π)^d`, `d ∈ {2, 3}`:
//!
//! ```text
//!   ∂t u + (u·∇)u + ∇p = k div τ + ν Δu,   div u = 0,
//!   ∂t τ + (u·∇)τ - η Δτ + μ τ + Q(∇u, τ) = α D(u),
//! ```
//!
//! with `D(u) = (∇u + ∇uᵀ)/2`, `Ω(u) = (∇u - ∇uᵀ)/2` and
//! `Q(∇u, τ) = τΩ - Ωτ + b(Dτ + τD)`.
//!
//! The crate provides:
//!
//! * Fourier fields and calculus operators ([`field`], [`ops`], [`grid`]);
//! * a Littlewood-Paley decomposition with Besov norms ([`lp`]);
//! * the model right-hand sides ([`rhs`]) and an integrating-factor
//!   Runge-Kutta stepper ([`integrator`]);
//! * an exact per-mode linear oracle ([`linear`]);
//! * time-series diagnostics and decay-rate fitting ([`diagnostics`]);
//! * reproducible initial data families ([`initial_data`]);
//! * the experiment harness ([`experiments`]) and run configuration /
//!   checkpoint plumbing ([`config`], [`io`]).

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod field;
mod fft;
pub mod grid;
pub mod initial_data;
pub mod integrator;
pub mod io;
pub mod linear;
pub mod lp;
pub mod ops;
pub mod rhs;

pub use error::{ConfigError, Error, Result};
pub use field::{PhysicalField, Rank, SpectralField};
pub use grid::Grid;
