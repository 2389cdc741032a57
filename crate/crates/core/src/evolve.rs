//! Fixed-step RK4 time integration with conservation diagnostics.
//!
//! Accuracy is certified after the fact: the relative drift of the energy measures the
//! time-integration error and the top-octave Fourier coefficients measure the spatial
//! resolution.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{energy_guarded, ComplexField, GroundState, ModelParams};
use crate::ode::Rk4;
use crate::spectral::{self, Grid, RhsWorkspace};

/// Number of diagnostic records per run when no cadence is given.
pub const DEFAULT_RECORDS: u64 = 100;

/// Upper bound on `dt·(N/L)²` beyond which a run is flagged as likely unstable.
pub const STABILITY_LIMIT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub t_end: f64,
    pub n_steps: u64,
    pub record_every: u64,
    pub delta_guard: f64,
}

impl EvolutionConfig {
    /// `n_steps` steps on `[0, t_end]`, about 100 diagnostic records, default guard.
    pub fn new(t_end: f64, n_steps: u64) -> Result<Self> {
        let cfg = Self {
            t_end,
            n_steps,
            record_every: (n_steps / DEFAULT_RECORDS).max(1),
            delta_guard: crate::DEFAULT_GUARD,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_record_every(mut self, record_every: u64) -> Result<Self> {
        self.record_every = record_every;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidConfig("n_steps must be positive".into()));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig("record_every must be positive".into()));
        }
        if !(self.delta_guard > 0.0 && self.delta_guard < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "delta_guard must be in (0, 1), got {}",
                self.delta_guard
            )));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.n_steps as f64
    }

    /// `dt·(N/L)²` for this step size on `grid`.
    pub fn stability_number(&self, grid: &Grid) -> f64 {
        grid.stability_number(self.dt())
    }

    /// Whether `dt·(N/L)²` exceeds [`STABILITY_LIMIT`]. Advisory only.
    pub fn exceeds_stability_heuristic(&self, grid: &Grid) -> bool {
        self.stability_number(grid) > STABILITY_LIMIT
    }
}

/// Time series recorded during an evolution. All columns have equal length.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    /// `|E(t) - E(0)| / |E(0)|`, or the absolute drift when `E(0) = 0`.
    pub energy_rel_drift: Vec<f64>,
    pub linf: Vec<f64>,
    pub fourier_tail: Vec<f64>,
    pub mass: Vec<f64>,
}

impl Diagnostics {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_energy_drift(&self) -> f64 {
        self.energy_rel_drift.iter().copied().fold(0.0, f64::max)
    }

    /// Largest `|M(t) - M(0)| / M(0)` over the records.
    pub fn max_mass_drift(&self) -> f64 {
        let Some(&m0) = self.mass.first() else {
            return 0.0;
        };
        self.mass
            .iter()
            .map(|m| relative_drift(*m, m0))
            .fold(0.0, f64::max)
    }

    pub fn max_linf(&self) -> f64 {
        self.linf.iter().copied().fold(0.0, f64::max)
    }

    fn record(
        &mut self,
        t: f64,
        field: &ComplexField,
        params: &ModelParams,
        guard: f64,
    ) -> Result<()> {
        let e = energy_guarded(field, params, guard)?;
        let e0 = self.energy.first().copied().unwrap_or(e);
        self.times.push(t);
        self.energy.push(e);
        self.energy_rel_drift.push(relative_drift(e, e0));
        self.linf.push(field.linf());
        self.fourier_tail.push(spectral::fourier_tail(field));
        self.mass.push(field.mass());
        Ok(())
    }
}

fn relative_drift(v: f64, v0: f64) -> f64 {
    if v0 == 0.0 {
        (v - v0).abs()
    } else {
        ((v - v0) / v0).abs()
    }
}

/// An evolution stopped by the singularity guard. Carries everything computed so far.
#[derive(Debug, Clone)]
pub struct EvolveAbort {
    pub error: Error,
    /// Number of completed steps.
    pub step: u64,
    pub time: f64,
    pub last_field: ComplexField,
    pub diagnostics: Diagnostics,
}

impl fmt::Display for EvolveAbort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "evolution aborted after {} steps (t = {}): {}",
            self.step, self.time, self.error
        )
    }
}

impl std::error::Error for EvolveAbort {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Classical RK4 stepper with preallocated stage buffers.
pub struct Stepper {
    rk: Rk4<Complex64>,
    ws: RhsWorkspace,
    params: ModelParams,
    guard: f64,
}

impl Stepper {
    pub fn new(grid: &Grid, params: ModelParams, guard: f64) -> Self {
        Self {
            rk: Rk4::new(grid.len()),
            ws: RhsWorkspace::new(grid),
            params,
            guard,
        }
    }

    /// Advances `values` in place by `dt`. On a guard violation `values` is unchanged and the
    /// error names the RK4 stage that failed.
    pub fn step(&mut self, values: &mut [Complex64], dt: f64) -> Result<()> {
        let Self {
            rk,
            ws,
            params,
            guard,
        } = self;
        rk.step(values, dt, |y, out| ws.eval(y, params, *guard, out))
            .map_err(|(stage, e)| match e {
                Error::Singularity { max_modulus, .. } => Error::Singularity {
                    max_modulus,
                    stage: Some(stage),
                },
                other => other,
            })
    }
}

/// One RK4 step of the semi-discrete system.
pub fn rk4_step(field: &ComplexField, dt: f64, params: &ModelParams) -> Result<ComplexField> {
    let mut out = field.clone();
    Stepper::new(field.grid(), *params, crate::DEFAULT_GUARD).step(out.values_mut(), dt)?;
    Ok(out)
}

/// Integrates `field0` over `[0, cfg.t_end]`, recording diagnostics at `t = 0`, every
/// `cfg.record_every` steps and at the final time.
#[allow(clippy::result_large_err)]
pub fn evolve(
    field0: &ComplexField,
    cfg: &EvolutionConfig,
    params: &ModelParams,
) -> std::result::Result<(ComplexField, Diagnostics), EvolveAbort> {
    evolve_observed(field0, cfg, params, |_, _| {})
}

/// As [`evolve`], calling `on_record(t, field)` at every diagnostic record.
#[allow(clippy::result_large_err)]
pub fn evolve_observed(
    field0: &ComplexField,
    cfg: &EvolutionConfig,
    params: &ModelParams,
    mut on_record: impl FnMut(f64, &ComplexField),
) -> std::result::Result<(ComplexField, Diagnostics), EvolveAbort> {
    let mut diag = Diagnostics::default();
    let abort = |error, step, time, field: &ComplexField, diagnostics: &Diagnostics| EvolveAbort {
        error,
        step,
        time,
        last_field: field.clone(),
        diagnostics: diagnostics.clone(),
    };
    if let Err(e) = cfg.validate() {
        return Err(abort(e, 0, 0.0, field0, &diag));
    }
    if let Err(e) = diag.record(0.0, field0, params, cfg.delta_guard) {
        return Err(abort(e, 0, 0.0, field0, &diag));
    }
    on_record(0.0, field0);

    let dt = cfg.dt();
    let mut field = field0.clone();
    let mut stepper = Stepper::new(field0.grid(), *params, cfg.delta_guard);
    for step in 1..=cfg.n_steps {
        if let Err(e) = stepper.step(field.values_mut(), dt) {
            return Err(abort(e, step - 1, (step - 1) as f64 * dt, &field, &diag));
        }
        if step % cfg.record_every == 0 || step == cfg.n_steps {
            let t = step as f64 * dt;
            if let Err(e) = diag.record(t, &field, params, cfg.delta_guard) {
                return Err(abort(e, step, t, &field, &diag));
            }
            on_record(t, &field);
        }
    }
    Ok((field, diag))
}

/// Initial data of the stability and soliton-resolution experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    /// `λ φ(x)`.
    GroundStateScaled { lambda: f64 },
    /// `φ(x) + ε e^{-x²}`; the experiments use `ε = ±0.001`.
    GroundStatePlusGaussian { epsilon: f64 },
    /// `μ e^{-x²}`.
    Gaussian { mu: f64 },
}

impl InitialCondition {
    pub fn needs_ground_state(&self) -> bool {
        !matches!(self, InitialCondition::Gaussian { .. })
    }
}

/// Samples `kind` on `grid`, rejecting data with `max |φ₀|^{2α} >= 1 - 1e-8`.
pub fn make_initial(
    kind: &InitialCondition,
    params: &ModelParams,
    grid: &Grid,
) -> Result<ComplexField> {
    make_initial_guarded(kind, params, grid, crate::DEFAULT_GUARD)
}

pub fn make_initial_guarded(
    kind: &InitialCondition,
    params: &ModelParams,
    grid: &Grid,
    guard: f64,
) -> Result<ComplexField> {
    let field = match *kind {
        InitialCondition::GroundStateScaled { lambda } => {
            let gs = GroundState::centered(*params)?;
            ComplexField::from_fn(grid, |x| Complex64::new(lambda * gs.eval(x), 0.0))
        }
        InitialCondition::GroundStatePlusGaussian { epsilon } => {
            let gs = GroundState::centered(*params)?;
            ComplexField::from_fn(grid, |x| {
                Complex64::new(gs.eval(x) + epsilon * (-x * x).exp(), 0.0)
            })
        }
        InitialCondition::Gaussian { mu } => {
            ComplexField::from_fn(grid, |x| Complex64::new(mu * (-x * x).exp(), 0.0))
        }
    };
    let m = field.max_density(params.alpha());
    if !(m < 1.0 - guard) {
        return Err(Error::Amplitude {
            max_modulus: field.linf(),
        });
    }
    Ok(field)
}
