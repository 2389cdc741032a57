//! Periodic grid, discrete Fourier transforms, spectral differentiation and the
//! semi-discrete right-hand side.
//!
//! The domain is `L·[-π, π)` sampled at `N` points. Wavenumbers are `m / L` in the usual
//! DFT ordering. The forward transform carries the `1/N` factor.
//!
//! Differentiation multiplies by `i k` and zeroes the Nyquist mode. Modes above a
//! configurable fraction of the Nyquist index are also zeroed in the multiplier (default
//! `2/3`), and the semi-discrete right-hand side is projected onto the retained modes.
//! The quasilinear flux term makes the explicit system stiff like
//! `k_max² / (1 - |φ|^{2α})`; with the top third removed RK4 is stable at the step sizes of
//! the benchmark runs, and resolved fields are left untouched.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::model::{check_guard, ComplexField, ModelParams};

/// Default fraction of the Nyquist index kept by the differentiation multiplier.
pub const DEFAULT_DERIVATIVE_CUTOFF: f64 = 2.0 / 3.0;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n: usize,
    half_period: f64,
    cutoff: f64,
    xs: Vec<f64>,
    wavenumbers: Vec<f64>,
    deriv: Vec<f64>,
    retained: Vec<bool>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    /// `n` points (a power of two, at least 4) on `l·[-π, π)` with the default derivative cutoff.
    pub fn new(n: usize, l: f64) -> Result<Self> {
        Self::with_derivative_cutoff(n, l, DEFAULT_DERIVATIVE_CUTOFF)
    }

    /// `cutoff` in `(0, 1]` is the fraction of the Nyquist index `N/2` kept by
    /// differentiation; `1.0` only drops the Nyquist mode itself.
    pub fn with_derivative_cutoff(n: usize, l: f64, cutoff: f64) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "N must be a power of two >= 4, got {n}"
            )));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidGrid(format!("L must be positive, got {l}")));
        }
        if !(cutoff > 0.0 && cutoff <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "derivative cutoff must be in (0, 1], got {cutoff}"
            )));
        }
        let nf = n as f64;
        let xs = (0..n)
            .map(|j| l * (-std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / nf))
            .collect();
        let modes: Vec<i64> = (0..n)
            .map(|j| {
                if j < n / 2 {
                    j as i64
                } else {
                    j as i64 - n as i64
                }
            })
            .collect();
        let wavenumbers: Vec<f64> = modes.iter().map(|&m| m as f64 / l).collect();
        let keep = cutoff * (n / 2) as f64;
        let retained: Vec<bool> = modes
            .iter()
            .map(|&m| m != -(n as i64 / 2) && (m.abs() as f64) <= keep)
            .collect();
        let deriv = retained
            .iter()
            .zip(&wavenumbers)
            .map(|(&r, &k)| if r { k } else { 0.0 })
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            inner: Arc::new(GridInner {
                n,
                half_period: l,
                cutoff,
                xs,
                wavenumbers,
                deriv,
                retained,
                forward,
                inverse,
            }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The scale `L` of the domain `L·[-π, π)`.
    pub fn half_period(&self) -> f64 {
        self.inner.half_period
    }

    pub fn derivative_cutoff(&self) -> f64 {
        self.inner.cutoff
    }

    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.inner.half_period / self.inner.n as f64
    }

    pub fn xs(&self) -> &[f64] {
        &self.inner.xs
    }

    /// Wavenumbers `m / L` in DFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.wavenumbers
    }

    pub fn nyquist_index(&self) -> usize {
        self.inner.n / 2
    }

    /// Index of the sample at `x = 0`.
    pub fn origin_index(&self) -> usize {
        self.inner.n / 2
    }

    /// Differentiation multiplier `k` (zero on the Nyquist mode and above the cutoff).
    pub(crate) fn derivative_multiplier(&self) -> &[f64] {
        &self.inner.deriv
    }

    /// `dt · (N/L)²`, the explicit-RK4 stability number.
    pub fn stability_number(&self, dt: f64) -> f64 {
        let r = self.inner.n as f64 / self.inner.half_period;
        dt * r * r
    }

    /// Whether mode index `j` (DFT order) survives differentiation and the right-hand side.
    pub fn is_retained(&self, j: usize) -> bool {
        self.inner.retained[j]
    }

    fn fft_forward(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inner.forward.process_with_scratch(buf, scratch);
    }

    fn fft_inverse(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inner.inverse.process_with_scratch(buf, scratch);
    }

    fn scratch_len(&self) -> usize {
        self.inner
            .forward
            .get_inplace_scratch_len()
            .max(self.inner.inverse.get_inplace_scratch_len())
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n
                && self.inner.half_period == other.inner.half_period
                && self.inner.cutoff == other.inner.cutoff)
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.inner.n)
            .field("half_period", &self.inner.half_period)
            .field("cutoff", &self.inner.cutoff)
            .finish()
    }
}

/// Fourier coefficients `û_m = (1/N) Σ_j u_j e^{-i m (x_j/L)}` up to the phase of the
/// shifted origin (samples start at `x = -πL`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    coeffs: Vec<Complex64>,
    grid: Grid,
}

impl SpectralField {
    pub fn new(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self {
            coeffs,
            grid: grid.clone(),
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Largest modulus among the top-octave coefficients (`|m| >= N/4`).
    pub fn tail(&self) -> f64 {
        let n = self.coeffs.len();
        let lo = n / 4;
        let hi = n - n / 4;
        self.coeffs[lo..=hi]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

pub fn forward(field: &ComplexField) -> SpectralField {
    let grid = field.grid();
    let mut buf = field.values().to_vec();
    let mut scratch = vec![Complex64::default(); grid.scratch_len()];
    grid.fft_forward(&mut buf, &mut scratch);
    let norm = 1.0 / grid.len() as f64;
    buf.iter_mut().for_each(|c| *c *= norm);
    SpectralField {
        coeffs: buf,
        grid: grid.clone(),
    }
}

pub fn inverse(spec: &SpectralField) -> ComplexField {
    let grid = &spec.grid;
    let mut buf = spec.coeffs.clone();
    let mut scratch = vec![Complex64::default(); grid.scratch_len()];
    grid.fft_inverse(&mut buf, &mut scratch);
    ComplexField::new(grid, buf).expect("length preserved by the transform")
}

/// Largest modulus among the top-octave Fourier coefficients of `field`.
pub fn fourier_tail(field: &ComplexField) -> f64 {
    forward(field).tail()
}

/// `∂ₓ field` via the multiplier `i k`.
pub fn spectral_derivative(field: &ComplexField) -> ComplexField {
    let grid = field.grid();
    let mut buf = field.values().to_vec();
    let mut scratch = vec![Complex64::default(); grid.scratch_len()];
    differentiate_in_place(grid, &mut buf, &mut scratch);
    ComplexField::new(grid, buf).expect("length preserved")
}

fn differentiate_in_place(grid: &Grid, buf: &mut [Complex64], scratch: &mut [Complex64]) {
    grid.fft_forward(buf, scratch);
    let norm = 1.0 / grid.len() as f64;
    for (c, &k) in buf.iter_mut().zip(grid.derivative_multiplier()) {
        *c *= I * (k * norm);
    }
    grid.fft_inverse(buf, scratch);
}

/// Zeroes the modes dropped by the derivative cutoff.
pub fn project(field: &ComplexField) -> ComplexField {
    let grid = field.grid();
    let mut buf = field.values().to_vec();
    let mut scratch = vec![Complex64::default(); grid.scratch_len()];
    grid.fft_forward(&mut buf, &mut scratch);
    let norm = 1.0 / grid.len() as f64;
    for (j, c) in buf.iter_mut().enumerate() {
        *c = if grid.is_retained(j) {
            *c * norm
        } else {
            Complex64::default()
        };
    }
    grid.fft_inverse(&mut buf, &mut scratch);
    ComplexField::new(grid, buf).expect("length preserved")
}

/// Reusable buffers for repeated right-hand-side evaluations on one grid.
pub struct RhsWorkspace {
    grid: Grid,
    dphi: Vec<Complex64>,
    flux: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl RhsWorkspace {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.len();
        Self {
            grid: grid.clone(),
            dphi: vec![Complex64::default(); n],
            flux: vec![Complex64::default(); n],
            scratch: vec![Complex64::default(); grid.scratch_len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Writes `∂ₜφ` for the samples `phi` into `out`.
    ///
    /// Fails without touching `out` when `max |φ|^{2α} > 1 - guard`.
    pub fn eval(
        &mut self,
        phi: &[Complex64],
        params: &ModelParams,
        guard: f64,
        out: &mut [Complex64],
    ) -> Result<()> {
        let al = params.alpha() as i32;
        let a = params.a();
        let alpha = params.alpha() as f64;

        let mut max_p = 0.0f64;
        for v in phi {
            let p = v.norm_sqr().powi(al);
            if !(p <= max_p) {
                max_p = if p.is_nan() { f64::INFINITY } else { p };
            }
        }
        if max_p > 1.0 - guard {
            let m = phi.iter().map(|v| v.norm()).fold(0.0, f64::max);
            return Err(Error::Singularity {
                max_modulus: m,
                stage: None,
            });
        }

        self.dphi.copy_from_slice(phi);
        differentiate_in_place(&self.grid, &mut self.dphi, &mut self.scratch);

        // flux = φ_x / q; out temporarily holds the pointwise (zeroth-order-in-∂ₓ) terms
        for j in 0..phi.len() {
            let v = phi[j];
            let rho = v.norm_sqr();
            let rho_m1 = rho.powi(al - 1);
            let p = rho_m1 * rho;
            let q = 1.0 - p;
            let dv = self.dphi[j];
            self.flux[j] = dv / q;
            out[j] = v * (alpha * rho_m1 * dv.norm_sqr() / (q * q) - a * p);
        }

        // ∂ₜφ = -i P [ -∂ₓ flux + pointwise ], assembled in Fourier space
        let grid = &self.grid;
        grid.fft_forward(&mut self.flux, &mut self.scratch);
        grid.fft_forward(out, &mut self.scratch);
        let norm = 1.0 / grid.len() as f64;
        let k = grid.derivative_multiplier();
        for j in 0..out.len() {
            out[j] = if grid.is_retained(j) {
                -I * norm * (out[j] - I * k[j] * self.flux[j])
            } else {
                Complex64::default()
            };
        }
        grid.fft_inverse(out, &mut self.scratch);
        Ok(())
    }
}

/// `∂ₜφ = -i [ -∂ₓ(φₓ/(1-|φ|^{2α})) + α|φ|^{2α-2}|φₓ|²/(1-|φ|^{2α})² φ - a|φ|^{2α} φ ]`.
///
/// Nonlinear terms are formed pointwise, both derivatives spectrally; the result is
/// projected onto the modes kept by the derivative cutoff.
pub fn rhs(field: &ComplexField, params: &ModelParams) -> Result<ComplexField> {
    rhs_guarded(field, params, crate::DEFAULT_GUARD)
}

pub fn rhs_guarded(field: &ComplexField, params: &ModelParams, guard: f64) -> Result<ComplexField> {
    let mut ws = RhsWorkspace::new(field.grid());
    let mut out = vec![Complex64::default(); field.len()];
    ws.eval(field.values(), params, guard, &mut out)?;
    ComplexField::new(field.grid(), out)
}

/// The same right-hand side through the constrained first-order form:
/// `χ = -i φₓ / (1 - |φ|^{2α})`, then `i φₜ = -i χₓ + α |φ|^{2α-2} |χ|² φ - a |φ|^{2α} φ`,
/// projected like [`rhs`].
pub fn rhs_via_dirac_system(field: &ComplexField, params: &ModelParams) -> Result<ComplexField> {
    check_guard(field, params.alpha(), crate::DEFAULT_GUARD)?;
    let al = params.alpha() as i32;
    let alpha = params.alpha() as f64;
    let dphi = spectral_derivative(field);
    let chi_vals = field
        .values()
        .iter()
        .zip(dphi.values())
        .map(|(v, d)| -I * d / (1.0 - v.norm_sqr().powi(al)))
        .collect();
    let chi = ComplexField::new(field.grid(), chi_vals)?;
    let dchi = spectral_derivative(&chi);
    let out = field
        .values()
        .iter()
        .zip(chi.values())
        .zip(dchi.values())
        .map(|((v, c), dc)| {
            let rho = v.norm_sqr();
            let i_dt =
                -I * dc + v * (alpha * rho.powi(al - 1) * c.norm_sqr() - params.a() * rho.powi(al));
            -I * i_dt
        })
        .collect();
    Ok(project(&ComplexField::new(field.grid(), out)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GroundState;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_layout() {
        let g = Grid::new(8, 2.0).unwrap();
        let pi = std::f64::consts::PI;
        assert_eq!(g.xs()[0], -2.0 * pi);
        assert!((g.xs()[4]).abs() < 1e-15);
        assert_eq!(g.origin_index(), 4);
        assert_eq!(
            g.wavenumbers(),
            &[0.0, 0.5, 1.0, 1.5, -2.0, -1.5, -1.0, -0.5]
        );
        assert_eq!(g.derivative_multiplier()[4], 0.0);
        assert!(Grid::new(12, 1.0).is_err());
        assert!(Grid::new(16, 0.0).is_err());
        assert!(Grid::with_derivative_cutoff(16, 1.0, 0.0).is_err());
    }

    #[test]
    fn cutoff_drops_top_third() {
        let g = Grid::new(16, 1.0).unwrap();
        // keep |m| <= 16/2 * 2/3 = 5.33
        let kept: Vec<bool> = g
            .derivative_multiplier()
            .iter()
            .map(|&k| k != 0.0)
            .collect();
        assert_eq!(
            kept,
            [
                false, true, true, true, true, true, false, false, false, false, false, true, true,
                true, true, true
            ]
        );
        let full = Grid::with_derivative_cutoff(16, 1.0, 1.0).unwrap();
        assert_eq!(
            full.derivative_multiplier()
                .iter()
                .filter(|&&k| k == 0.0)
                .count(),
            2
        );
    }

    #[test]
    fn constant_maps_to_dc() {
        let g = Grid::new(64, 3.0).unwrap();
        let f = ComplexField::from_fn(&g, |_| c(0.7, -0.2));
        let s = forward(&f);
        assert!((s.coeffs()[0] - c(0.7, -0.2)).norm() < 1e-15);
        assert!(s.coeffs()[1..].iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn pure_mode_is_single_coefficient() {
        let g = Grid::new(64, 3.0).unwrap();
        for m in [-5i64, 1, 7, 20] {
            let f = ComplexField::from_fn(&g, |x| (I * (m as f64 * x / 3.0)).exp());
            let s = forward(&f);
            let idx = if m < 0 { (64 + m) as usize } else { m as usize };
            for (j, v) in s.coeffs().iter().enumerate() {
                if j == idx {
                    assert!((v.norm() - 1.0).abs() < 1e-13);
                    assert!((g.wavenumbers()[j] - m as f64 / 3.0).abs() < 1e-15);
                } else {
                    assert!(v.norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in 8..=13 {
            let g = Grid::new(1 << p, 5.0).unwrap();
            let vals = (0..g.len())
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let f = ComplexField::new(&g, vals).unwrap();
            let back = inverse(&forward(&f));
            let scale = f.linf();
            assert!(back.max_abs_diff(&f) / scale < 1e-13);
        }
    }

    #[test]
    fn derivative_of_trig_and_constant() {
        let g = Grid::new(128, 1.0).unwrap();
        let f = ComplexField::from_fn(&g, |x| c(x.sin(), 0.0));
        let d = spectral_derivative(&f);
        for (x, v) in g.xs().iter().zip(d.values()) {
            assert!((v - c(x.cos(), 0.0)).norm() < 1e-12);
        }
        let k = spectral_derivative(&ComplexField::from_fn(&g, |_| c(2.0, 1.0)));
        assert!(k.linf() < 1e-14);
    }

    #[test]
    fn derivative_of_ground_state() {
        let g = Grid::new(1024, 5.0).unwrap();
        let gs = GroundState::centered(ModelParams::new(9.0, 4.4, 1).unwrap()).unwrap();
        let d = spectral_derivative(&gs.sample_on(&g));
        for (x, v) in g.xs().iter().zip(d.values()) {
            assert!((v.re - gs.deriv(*x)).abs() < 1e-10 && v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn ground_state_resolved() {
        let g = Grid::new(1024, 5.0).unwrap();
        let gs = GroundState::centered(ModelParams::new(9.0, 4.4, 1).unwrap()).unwrap();
        assert!(fourier_tail(&gs.sample_on(&g)) < 1e-13);
    }

    #[test]
    fn rhs_of_ground_state_is_phase_rotation() {
        let g = Grid::new(1024, 5.0).unwrap();
        let params = ModelParams::new(9.0, 4.4, 1).unwrap();
        let gs = GroundState::centered(params).unwrap();
        let f = gs.sample_on(&g);
        let expected = f.scaled(c(0.0, params.b()));
        assert!(rhs(&f, &params).unwrap().max_abs_diff(&expected) < 1e-10);
        assert!(
            rhs_via_dirac_system(&f, &params)
                .unwrap()
                .max_abs_diff(&expected)
                < 1e-10
        );
    }

    #[test]
    fn rhs_of_higher_power_ground_states() {
        for (b, alpha, tol) in [
            (2.9, 2, 1e-9),
            (2.1, 3, 1e-9),
            (1.4, 2, 1e-9),
            (1.2, 3, 1e-9),
        ] {
            let g = Grid::new(4096, 10.0).unwrap();
            let params = ModelParams::new(9.0, b, alpha).unwrap();
            let f = GroundState::centered(params).unwrap().sample_on(&g);
            let expected = f.scaled(c(0.0, params.b()));
            let r1 = rhs(&f, &params).unwrap().max_abs_diff(&expected);
            let r2 = rhs_via_dirac_system(&f, &params)
                .unwrap()
                .max_abs_diff(&expected);
            assert!(r1 < tol && r2 < tol, "alpha={alpha} b={b}: {r1:e} {r2:e}");
        }
    }

    #[test]
    fn rhs_of_zero_is_zero() {
        let g = Grid::new(64, 1.0).unwrap();
        let params = ModelParams::new(9.0, 4.4, 2).unwrap();
        let z = ComplexField::zeros(&g);
        assert_eq!(rhs(&z, &params).unwrap().linf(), 0.0);
        assert_eq!(rhs_via_dirac_system(&z, &params).unwrap().linf(), 0.0);
    }

    #[test]
    fn rhs_linear_regime() {
        // φ = ε e^{ix}: -i(-φ_xx) = -i φ, nonlinear corrections are O(ε³)
        let g = Grid::new(64, 1.0).unwrap();
        let params = ModelParams::new(9.0, 4.4, 1).unwrap();
        let eps = 1e-6;
        let f = ComplexField::from_fn(&g, |x| eps * (I * x).exp());
        let r = rhs(&f, &params).unwrap();
        let lin = f.scaled(-I);
        assert!(r.max_abs_diff(&lin) / eps < 1e-10);
    }

    #[test]
    fn rhs_routes_agree_on_perturbed_state() {
        let g = Grid::new(1024, 5.0).unwrap();
        let params = ModelParams::new(9.0, 4.4, 1).unwrap();
        let gs = GroundState::centered(params).unwrap();
        let f = gs.sample_on(&g).scaled(c(0.99, 0.0));
        let r1 = rhs(&f, &params).unwrap();
        let r2 = rhs_via_dirac_system(&f, &params).unwrap();
        assert!(r1.max_abs_diff(&r2) < 1e-10);
    }

    #[test]
    fn guard_rejects_unit_modulus() {
        let g = Grid::new(64, 1.0).unwrap();
        let params = ModelParams::new(9.0, 4.4, 1).unwrap();
        let f = ComplexField::from_fn(&g, |x| c((-x * x).exp(), 0.0));
        match rhs(&f, &params) {
            Err(Error::Singularity { max_modulus, .. }) => {
                assert!((max_modulus - 1.0).abs() < 1e-12)
            }
            other => panic!("expected singularity, got {other:?}"),
        }
        assert!(rhs_via_dirac_system(&f, &params).is_err());
    }
}
