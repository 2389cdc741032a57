//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported operation has a plain Rust counterpart returning [`qnls_core::Result`], which is
//! what the native tests exercise.

use qnls_core::evolve::{make_initial, InitialCondition, Stepper};
use qnls_core::model::energy;
use qnls_core::phaseplane::{critical_points, shoot_ground_state, zero_level_set, CriticalKind};
use qnls_core::{ComplexField, Grid, GroundState, ModelParams, DEFAULT_GUARD};
use wasm_bindgen::prelude::*;

fn js(e: qnls_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Profile {
    xs: Vec<f64>,
    phi: Vec<f64>,
    peak: f64,
    width: f64,
}

#[wasm_bindgen]
impl Profile {
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }

    pub fn phi(&self) -> Vec<f64> {
        self.phi.clone()
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn width(&self) -> f64 {
        self.width
    }
}

/// Ground state on `n` equispaced points of `[-half_width, half_width]`.
pub fn profile(
    a: f64,
    b: f64,
    alpha: u32,
    half_width: f64,
    n: usize,
) -> qnls_core::Result<Profile> {
    let gs = GroundState::centered(ModelParams::new(a, b, alpha)?)?;
    let n = n.max(2);
    let xs: Vec<f64> = (0..n)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
        .collect();
    let phi = xs.iter().map(|&x| gs.eval(x)).collect();
    Ok(Profile {
        xs,
        phi,
        peak: gs.peak(),
        width: gs.width_at_half_max(),
    })
}

#[wasm_bindgen]
pub fn ground_state_profile(
    a: f64,
    b: f64,
    alpha: u32,
    half_width: f64,
    n: usize,
) -> Result<Profile, JsError> {
    profile(a, b, alpha, half_width, n).map_err(js)
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Portrait {
    level_phi: Vec<f64>,
    level_chi: Vec<f64>,
    crit_chi: Vec<f64>,
    crit_phi: Vec<f64>,
    crit_kind: Vec<String>,
    orbit_chi: Vec<f64>,
    orbit_phi: Vec<f64>,
}

#[wasm_bindgen]
impl Portrait {
    /// Upper branch `χ ≥ 0` of the zero level set; the lower branch is its mirror image.
    pub fn level_phi(&self) -> Vec<f64> {
        self.level_phi.clone()
    }

    pub fn level_chi(&self) -> Vec<f64> {
        self.level_chi.clone()
    }

    pub fn crit_chi(&self) -> Vec<f64> {
        self.crit_chi.clone()
    }

    pub fn crit_phi(&self) -> Vec<f64> {
        self.crit_phi.clone()
    }

    pub fn crit_kind(&self) -> Vec<String> {
        self.crit_kind.clone()
    }

    /// The homoclinic orbit traced by shooting; empty when no ground state exists.
    pub fn orbit_chi(&self) -> Vec<f64> {
        self.orbit_chi.clone()
    }

    pub fn orbit_phi(&self) -> Vec<f64> {
        self.orbit_phi.clone()
    }
}

pub fn portrait(a: f64, b: f64, alpha: u32, samples: usize) -> qnls_core::Result<Portrait> {
    let params = ModelParams::new(a, b, alpha)?;
    let m = samples.max(2);
    let (mut level_phi, mut level_chi) = (Vec::with_capacity(m), Vec::with_capacity(m));
    for i in 0..m {
        let phi = -1.0 + 2.0 * (i as f64 + 0.5) / m as f64;
        let chi_sq = zero_level_set(phi, &params)?;
        if chi_sq >= 0.0 {
            level_phi.push(phi);
            level_chi.push(chi_sq.sqrt());
        }
    }
    let report = critical_points(&params);
    let crit_kind = report
        .points
        .iter()
        .map(|c| match c.kind {
            CriticalKind::LocalMin => "min",
            CriticalKind::LocalMax => "max",
            CriticalKind::Saddle => "saddle",
        })
        .map(String::from)
        .collect();
    let orbit = if params.admits_ground_state() {
        shoot_ground_state(&params, 10.0, 4000)?
    } else {
        Vec::new()
    };
    Ok(Portrait {
        level_phi,
        level_chi,
        crit_chi: report.points.iter().map(|c| c.point.chi).collect(),
        crit_phi: report.points.iter().map(|c| c.point.phi).collect(),
        crit_kind,
        orbit_chi: orbit.iter().map(|(_, p)| p.chi).collect(),
        orbit_phi: orbit.iter().map(|(_, p)| p.phi).collect(),
    })
}

#[wasm_bindgen]
pub fn phase_portrait(a: f64, b: f64, alpha: u32, samples: usize) -> Result<Portrait, JsError> {
    portrait(a, b, alpha, samples).map_err(js)
}

/// A running evolution that the page advances a few steps per animation frame.
#[wasm_bindgen]
pub struct Simulation {
    params: ModelParams,
    field: ComplexField,
    stepper: Stepper,
    dt: f64,
    steps: u64,
    energy0: f64,
}

/// `kind` is `"scaled"` (`amplitude · φ`), `"bump"` (`φ + amplitude · e^{-x²}`) or
/// `"gaussian"` (`amplitude · e^{-x²}`).
pub fn initial_condition(kind: &str, amplitude: f64) -> qnls_core::Result<InitialCondition> {
    match kind {
        "scaled" => Ok(InitialCondition::GroundStateScaled { lambda: amplitude }),
        "bump" => Ok(InitialCondition::GroundStatePlusGaussian { epsilon: amplitude }),
        "gaussian" => Ok(InitialCondition::Gaussian { mu: amplitude }),
        other => Err(qnls_core::Error::InvalidConfig(format!(
            "unknown initial data {other:?}"
        ))),
    }
}

impl Simulation {
    #[allow(clippy::too_many_arguments)]
    pub fn create(
        a: f64,
        b: f64,
        alpha: u32,
        kind: &str,
        amplitude: f64,
        n: usize,
        l: f64,
        dt: f64,
    ) -> qnls_core::Result<Self> {
        let params = ModelParams::new(a, b, alpha)?;
        let initial = initial_condition(kind, amplitude)?;
        if initial.needs_ground_state() {
            params.require_ground_state()?;
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(qnls_core::Error::InvalidConfig(format!(
                "dt must be positive, got {dt}"
            )));
        }
        let grid = Grid::new(n, l)?;
        let field = make_initial(&initial, &params, &grid)?;
        let energy0 = energy(&field, &params)?;
        let stepper = Stepper::new(&grid, params, DEFAULT_GUARD);
        Ok(Self {
            params,
            field,
            stepper,
            dt,
            steps: 0,
            energy0,
        })
    }

    pub fn run(&mut self, steps: u32) -> qnls_core::Result<()> {
        for _ in 0..steps {
            self.stepper.step(self.field.values_mut(), self.dt)?;
            self.steps += 1;
        }
        Ok(())
    }

    pub fn field(&self) -> &ComplexField {
        &self.field
    }
}

#[wasm_bindgen]
impl Simulation {
    #[wasm_bindgen(constructor)]
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: f64,
        b: f64,
        alpha: u32,
        kind: &str,
        amplitude: f64,
        n: usize,
        l: f64,
        dt: f64,
    ) -> Result<Simulation, JsError> {
        Self::create(a, b, alpha, kind, amplitude, n, l, dt).map_err(js)
    }

    /// Takes `steps` RK4 steps. On a singularity the field keeps its last good value.
    pub fn advance(&mut self, steps: u32) -> Result<(), JsError> {
        self.run(steps).map_err(js)
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    pub fn xs(&self) -> Vec<f64> {
        self.field.grid().xs().to_vec()
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.field.moduli()
    }

    pub fn linf(&self) -> f64 {
        self.field.linf()
    }

    pub fn stability_number(&self) -> f64 {
        self.field.grid().stability_number(self.dt)
    }

    /// `|E(t) - E(0)| / |E(0)|`.
    pub fn energy_drift(&self) -> f64 {
        match energy(&self.field, &self.params) {
            Ok(e) if self.energy0 != 0.0 => ((e - self.energy0) / self.energy0).abs(),
            Ok(e) => (e - self.energy0).abs(),
            Err(_) => f64::NAN,
        }
    }
}
