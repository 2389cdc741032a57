//! Model parameters, the explicit ground state and its analytic cross-checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{self, Grid};

/// The triple `(a, b, α)`: nonlinear coupling, frequency and nonlinearity exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    a: f64,
    b: f64,
    alpha: u32,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    alpha: u32,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.a, raw.b, raw.alpha)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            a: p.a,
            b: p.b,
            alpha: p.alpha,
        }
    }
}

impl ModelParams {
    pub fn new(a: f64, b: f64, alpha: u32) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParams(format!(
                "a must be positive and finite, got {a}"
            )));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParams(format!(
                "b must be positive and finite, got {b}"
            )));
        }
        if alpha == 0 {
            return Err(Error::InvalidParams("alpha must be at least 1".into()));
        }
        Ok(Self { a, b, alpha })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// Same `a` and `α` with a different frequency.
    pub fn with_b(&self, b: f64) -> Result<Self> {
        Self::new(self.a, b, self.alpha)
    }

    /// Supremum `a / (α+1)` of the frequencies that admit a ground state.
    pub fn critical_b(&self) -> f64 {
        self.a / (self.alpha as f64 + 1.0)
    }

    /// `a > (α+1) b`.
    pub fn admits_ground_state(&self) -> bool {
        self.a > (self.alpha as f64 + 1.0) * self.b
    }

    /// Returns `self` if a ground state exists, the parameter-domain error otherwise.
    pub fn require_ground_state(&self) -> Result<Self> {
        if self.admits_ground_state() {
            Ok(*self)
        } else {
            Err(Error::ParameterDomain {
                a: self.a,
                b: self.b,
                alpha: self.alpha,
            })
        }
    }

    /// Peak value `((α+1) b / a)^{1/(2α)}` of the ground state.
    pub fn peak_amplitude(&self) -> f64 {
        ((self.alpha as f64 + 1.0) * self.b / self.a).powf(1.0 / (2.0 * self.alpha as f64))
    }

    /// Inverse of [`peak_amplitude`](Self::peak_amplitude): the `b` whose ground state peaks at `amplitude`.
    pub fn b_for_peak(&self, amplitude: f64) -> f64 {
        self.a * amplitude.powi(2 * self.alpha as i32) / (self.alpha as f64 + 1.0)
    }

    /// Lower bound `-a/(α+1)` of the energy over unit-mass states.
    pub fn energy_lower_bound(&self) -> f64 {
        -self.a / (self.alpha as f64 + 1.0)
    }
}

/// Value and first two derivatives of the ground state at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub phi: f64,
    pub dphi: f64,
    pub d2phi: f64,
    /// `1 - φ^{2α}`, evaluated without cancellation.
    pub gap: f64,
}

/// The explicit positive ground state
///
/// ```text
/// φ(x) = [ (r+1)/2 + (r-1)/2 · cosh(2α√b (x - x₀)) ]^{-1/(2α)},   r = a / ((α+1) b)
/// ```
///
/// Evaluation works in the exponentially scaled form of the bracket, so it neither
/// overflows for large `|x - x₀|` nor loses the gap `1 - φ^{2α}` to cancellation near the
/// peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    params: ModelParams,
    center: f64,
    rate: f64,
    half_excess: f64,
}

impl GroundState {
    pub fn new(params: ModelParams, center: f64) -> Result<Self> {
        params.require_ground_state()?;
        if !center.is_finite() {
            return Err(Error::InvalidParams(format!(
                "center must be finite, got {center}"
            )));
        }
        let r = params.a / ((params.alpha as f64 + 1.0) * params.b);
        Ok(Self {
            params,
            center,
            rate: 2.0 * params.alpha as f64 * params.b.sqrt(),
            half_excess: 0.5 * (r - 1.0),
        })
    }

    pub fn centered(params: ModelParams) -> Result<Self> {
        Self::new(params, 0.0)
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn peak(&self) -> f64 {
        self.params.peak_amplitude()
    }

    /// Constant `C` in `φ(x) ~ C e^{-√b |x - x₀|}`: `[(a - (α+1) b) / (4 (α+1) b)]^{-1/(2α)}`.
    pub fn asymptotic_constant(&self) -> f64 {
        let p = &self.params;
        let n = p.alpha as f64 + 1.0;
        ((p.a - n * p.b) / (4.0 * n * p.b)).powf(-1.0 / (2.0 * p.alpha as f64))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sample(x).phi
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.sample(x).dphi
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        self.sample(x).d2phi
    }

    /// `φ`, `φ'`, `φ''` and `1 - φ^{2α}` at `x`.
    pub fn sample(&self, x: f64) -> ProfileSample {
        // ψ = φ^{-2α} = A + B cosh(z) with B = (r-1)/2, A = 1 + B. Factor out e^{|z|}:
        // ψ = e^{|z|} D,  D = B/2 (1 + e^{-2|z|}) + A e^{-|z|}.
        let y = x - self.center;
        let z = self.rate * y.abs();
        let b_half = 0.5 * self.half_excess;
        let a_coef = 1.0 + self.half_excess;
        let e1 = (-z).exp();
        let e2 = e1 * e1;
        let d = b_half * (1.0 + e2) + a_coef * e1;
        let log_psi = z + d.ln();
        let kappa = 1.0 / (2.0 * self.params.alpha as f64);
        let phi = (-kappa * log_psi).exp();
        // ψ'/ψ and ψ''/ψ
        let g = y.signum() * self.rate * b_half * (1.0 - e2) / d;
        let h = self.rate * self.rate * b_half * (1.0 + e2) / d;
        let dphi = -kappa * phi * g;
        let d2phi = phi * (kappa * (kappa + 1.0) * g * g - kappa * h);
        // 1 - φ^{2α} = (ψ - 1)/ψ = B/2 (1 + e^{-|z|})² / D
        let gap = b_half * (1.0 + e1) * (1.0 + e1) / d;
        ProfileSample {
            phi,
            dphi,
            d2phi,
            gap,
        }
    }

    /// Residual of the stationary equation
    /// `-(φ'/(1-φ^{2α}))' + α φ'² φ^{2α-1}/(1-φ^{2α})² - a φ^{2α+1} + b φ`.
    pub fn stationary_residual(&self, x: f64) -> f64 {
        let s = self.sample(x);
        let (a, b, al) = (self.params.a, self.params.b, self.params.alpha as i32);
        let p_m1 = s.phi.powi(2 * al - 1);
        // (φ'/q)' = φ''/q + 2α φ^{2α-1} φ'²/q²; the transport term cancels half of the last piece.
        -s.d2phi / s.gap
            - al as f64 * p_m1 * s.dphi * s.dphi / (s.gap * s.gap)
            - a * p_m1 * s.phi * s.phi
            + b * s.phi
    }

    /// Left-hand side of the first integral `-φ'²/(1-φ^{2α}) - a/(α+1) φ^{2α+2} + b φ²`.
    pub fn first_integral_residual(&self, x: f64) -> f64 {
        let s = self.sample(x);
        let (a, b, al) = (self.params.a, self.params.b, self.params.alpha as i32);
        -s.dphi * s.dphi / s.gap - a / (al as f64 + 1.0) * s.phi.powi(2 * al + 2)
            + b * s.phi * s.phi
    }

    /// Residual of the equation satisfied by `u = arcsin(φ^α)`:
    /// `-u'' - aα sin³u cos u + bα sin u cos u - (1/α - 1) u'² cot u`.
    pub fn arcsin_transform_residual(&self, x: f64) -> f64 {
        let s = self.sample(x);
        let (a, b) = (self.params.a, self.params.b);
        let al = self.params.alpha as f64;
        let alpha = self.params.alpha as i32;
        let sin_u = s.phi.powi(alpha);
        let cos_u = s.gap.sqrt();
        // w = φ^α, w' = α φ^{α-1} φ', w'' = α φ^{α-1} (φ'' + (α-1) φ'²/φ)
        let w1 = al * s.phi.powi(alpha - 1) * s.dphi;
        let mut w2 = al * s.phi.powi(alpha - 1) * s.d2phi;
        if alpha > 1 {
            w2 += al * (al - 1.0) * s.phi.powi(alpha - 2) * s.dphi * s.dphi;
        }
        let du = w1 / cos_u;
        let d2u = (w2 + sin_u * du * du) / cos_u;
        let mut res = -d2u - a * al * sin_u.powi(3) * cos_u + b * al * sin_u * cos_u;
        if alpha > 1 {
            res -= (1.0 / al - 1.0) * du * du * cos_u / sin_u;
        }
        res
    }

    /// Full width of the profile at half its peak value.
    pub fn width_at_half_max(&self) -> f64 {
        let half = 0.5 * self.peak();
        let (mut lo, mut hi) = (0.0, 1.0);
        while self.eval(self.center + hi) > half {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(self.center + mid) > half {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo + hi
    }

    /// Samples the profile on every grid point as a complex field.
    pub fn sample_on(&self, grid: &Grid) -> ComplexField {
        ComplexField::from_fn(grid, |x| Complex64::new(self.eval(x), 0.0))
    }
}

/// Periodic grid samples of `φ(·, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    values: Vec<Complex64>,
    grid: Grid,
}

impl ComplexField {
    pub fn new(grid: &Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            values,
            grid: grid.clone(),
        })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            grid: grid.clone(),
        }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            values: grid.xs().iter().map(|&x| f(x)).collect(),
            grid: grid.clone(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `max |φ|`.
    pub fn linf(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max |φ|^{2α}`.
    pub fn max_density(&self, alpha: u32) -> f64 {
        self.values
            .iter()
            .map(|v| v.norm_sqr().powi(alpha as i32))
            .fold(0.0, f64::max)
    }

    /// `∫ |φ|² dx` over one period (trapezoidal rule).
    pub fn mass(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    /// `max_j |φ_j - ψ_j|`.
    pub fn max_abs_diff(&self, other: &ComplexField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max)
    }

    /// Multiplies every sample by `factor`.
    pub fn scaled(&self, factor: Complex64) -> ComplexField {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            grid: self.grid.clone(),
        }
    }

    /// Moduli `|φ_j|`.
    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }
}

/// Checks `max |φ|^{2α} <= 1 - guard`.
pub(crate) fn check_guard(field: &ComplexField, alpha: u32, guard: f64) -> Result<()> {
    let m = field.max_density(alpha);
    if m.is_finite() && m <= 1.0 - guard {
        Ok(())
    } else {
        Err(Error::Singularity {
            max_modulus: field.linf(),
            stage: None,
        })
    }
}

/// Conserved energy `∫ |φ_x|²/(1 - |φ|^{2α}) - a/(α+1) |φ|^{2α+2} dx` over one period.
///
/// `φ_x` is the spectral derivative; the quadrature is the trapezoidal rule on the periodic
/// grid. Fails with a singularity error when `max |φ|^{2α} > 1 - 1e-8`.
pub fn energy(field: &ComplexField, params: &ModelParams) -> Result<f64> {
    energy_guarded(field, params, crate::DEFAULT_GUARD)
}

pub fn energy_guarded(field: &ComplexField, params: &ModelParams, guard: f64) -> Result<f64> {
    check_guard(field, params.alpha, guard)?;
    let dx = spectral::spectral_derivative(field);
    let al = params.alpha as i32;
    let c = params.a / (params.alpha as f64 + 1.0);
    let sum: f64 = field
        .values
        .iter()
        .zip(dx.values())
        .map(|(v, d)| {
            let rho = v.norm_sqr();
            let p = rho.powi(al);
            d.norm_sqr() / (1.0 - p) - c * p * rho
        })
        .sum();
    Ok(sum * field.grid.spacing())
}
