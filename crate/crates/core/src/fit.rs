//! Identification of the ground state closest to a late-time field.
//!
//! The field is first recentred on its peak; then the frequency `b` of the explicit ground
//! state is adjusted by a Nelder–Mead search to minimize the windowed `L²` distance between
//! moduli,
//!
//! ```text
//! F(b) = Σ_{|x_j| < window} w_j (|φ(x_j)| - φ_b(x_j - δ))² Δx
//! ```
//!
//! with trapezoidal weights `w_j` and `δ` the sub-grid peak offset left after recentring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ComplexField, GroundState, ModelParams};
use crate::simplex::NelderMead;

/// Half-width of the fit window used by the experiments.
pub const DEFAULT_WINDOW: f64 = 5.0;

/// Frequencies at or above `a/(α+1)` are pulled back to this fraction of it before starting.
const START_BACKOFF: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub b_fit: f64,
    /// `sqrt(F(b_fit))`.
    pub residual_l2: f64,
    /// Peak position of the field in the original coordinates.
    pub center_fit: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Result of [`recenter_detail`].
#[derive(Debug, Clone, PartialEq)]
pub struct Recentered {
    /// Field circularly shifted so its largest sample sits at `x = 0`.
    pub field: ComplexField,
    /// Interpolated peak position in the original coordinates.
    pub center: f64,
    /// Interpolated peak position in the shifted coordinates, within half a cell of 0.
    pub offset: f64,
    /// Number of cells the samples were moved (positive: towards larger `x`).
    pub shift: isize,
    /// Interpolated peak value of `|φ|`.
    pub peak: f64,
}

/// Shifts `field` so that its peak sits at `x = 0` and returns it with the peak position
/// estimated by 3-point quadratic interpolation of `|φ|`.
pub fn recenter(field: &ComplexField) -> Result<(ComplexField, f64)> {
    let r = recenter_detail(field)?;
    Ok((r.field, r.center))
}

pub fn recenter_detail(field: &ComplexField) -> Result<Recentered> {
    let grid = field.grid();
    let n = grid.len();
    let m = field.moduli();
    let (jmax, _) = m
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    let left = m[(jmax + n - 1) % n];
    let right = m[(jmax + 1) % n];
    let top = m[jmax];
    let curvature = left - 2.0 * top + right;
    if curvature.abs() < 1e-14 {
        return Err(Error::DegenerateMaximum { index: jmax });
    }
    let delta = 0.5 * (left - right) / curvature;
    let peak = top - 0.125 * (left - right) * (left - right) / curvature;
    let h = grid.spacing();
    let center = grid.xs()[jmax] + delta * h;

    let origin = grid.origin_index();
    let values = field.values();
    let shifted = (0..n)
        .map(|i| values[(i + jmax + n - origin) % n])
        .collect();
    Ok(Recentered {
        field: ComplexField::new(grid, shifted)?,
        center,
        offset: delta * h,
        shift: origin as isize - jmax as isize,
        peak,
    })
}

/// The windowed least-squares problem in `b` for one recentred field.
#[derive(Debug, Clone)]
pub struct FitProblem {
    params: ModelParams,
    recentered: Recentered,
    xs: Vec<f64>,
    moduli: Vec<f64>,
    weights: Vec<f64>,
}

impl FitProblem {
    pub fn new(field: &ComplexField, params: &ModelParams, window: f64) -> Result<Self> {
        if !(window.is_finite() && window > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "fit window must be positive, got {window}"
            )));
        }
        let recentered = recenter_detail(field)?;
        let grid = recentered.field.grid();
        let h = grid.spacing();
        let idx: Vec<usize> = (0..grid.len())
            .filter(|&j| grid.xs()[j].abs() < window)
            .collect();
        if idx.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "fit window {window} holds fewer than two samples"
            )));
        }
        let xs: Vec<f64> = idx.iter().map(|&j| grid.xs()[j]).collect();
        let moduli = idx
            .iter()
            .map(|&j| recentered.field.values()[j].norm())
            .collect();
        let mut weights = vec![h; xs.len()];
        weights[0] *= 0.5;
        *weights.last_mut().unwrap() *= 0.5;
        Ok(Self {
            params: *params,
            recentered,
            xs,
            moduli,
            weights,
        })
    }

    pub fn recentered(&self) -> &Recentered {
        &self.recentered
    }

    /// `F(b)`; `+∞` where no ground state exists.
    pub fn objective(&self, b: f64) -> f64 {
        let Ok(params) = self.params.with_b(b) else {
            return f64::INFINITY;
        };
        let Ok(gs) = GroundState::new(params, self.recentered.offset) else {
            return f64::INFINITY;
        };
        self.xs
            .iter()
            .zip(&self.moduli)
            .zip(&self.weights)
            .map(|((&x, &m), &w)| {
                let d = m - gs.eval(x);
                w * d * d
            })
            .sum()
    }

    /// Starting frequency whose ground state has the same peak as the field.
    pub fn amplitude_start(&self) -> f64 {
        self.params.b_for_peak(self.recentered.peak)
    }

    pub fn solve(&self, b_start: f64, nm: &NelderMead) -> FitResult {
        let b_crit = self.params.critical_b();
        let start = if b_start >= b_crit {
            START_BACKOFF * b_crit
        } else {
            b_start
        };
        let min = nm.minimize(|b| self.objective(b[0]), &[start]);
        FitResult {
            b_fit: min.x[0],
            residual_l2: min.f.sqrt(),
            center_fit: self.recentered.center,
            iterations: min.iterations,
            converged: min.converged,
        }
    }
}

/// Fits the frequency of the ground state nearest to `field` inside `|x| < window`.
///
/// The search starts from the `b` whose ground state peak matches `max |φ|`. Hitting the
/// iteration cap is reported through `converged = false`.
pub fn fit_ground_state(
    field: &ComplexField,
    params: &ModelParams,
    window: f64,
) -> Result<FitResult> {
    let problem = FitProblem::new(field, params, window)?;
    Ok(problem.solve(problem.amplitude_start(), &NelderMead::default()))
}
