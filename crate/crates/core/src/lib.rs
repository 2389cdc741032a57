//! Numerical laboratory for the one-dimensional quasilinear Schrödinger equation
//!
//! ```text
//! i φ_t = -(φ_x / (1 - |φ|^{2α}))_x + α |φ|^{2α-2} |φ_x|² / (1 - |φ|^{2α})² φ - a |φ|^{2α} φ
//! ```
//!
//! The crate provides the explicit ground states and analytic cross-checks ([`model`]),
//! a Fourier pseudospectral discretization ([`spectral`]), fixed-step RK4 evolution with
//! conservation diagnostics ([`evolve`]), ground-state fitting of late-time fields
//! ([`fit`]) and the phase-plane / linearization machinery of the stationary problem
//! ([`phaseplane`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolve;
pub mod fit;
pub mod model;
pub mod ode;
pub mod phaseplane;
pub mod simplex;
pub mod spectral;
pub mod tridiag;

pub use error::{Error, Result};
pub use evolve::{evolve, make_initial, rk4_step, Diagnostics, EvolutionConfig, InitialCondition};
pub use fit::{fit_ground_state, recenter, FitResult};
pub use model::{energy, ComplexField, GroundState, ModelParams};
pub use spectral::{Grid, SpectralField};

pub use num_complex::Complex64;

/// Default singularity guard on `1 - max |φ|^{2α}`.
pub const DEFAULT_GUARD: f64 = 1e-8;
