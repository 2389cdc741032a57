//! Run configuration, read from TOML or from the `config` entry of a manifest.

use std::path::Path;

use qnls_core::evolve::{make_initial_guarded, EvolutionConfig, InitialCondition};
use qnls_core::fit::DEFAULT_WINDOW;
use qnls_core::spectral::DEFAULT_DERIVATIVE_CUTOFF;
use qnls_core::{ComplexField, Grid, ModelParams, DEFAULT_GUARD};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub a: f64,
    pub b: f64,
    pub alpha: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    /// Half-period divided by π: the domain is `L·[-π, π)`.
    pub l: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivative_cutoff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    pub t_end: f64,
    pub n_steps: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_every: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_guard: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    pub window: f64,
}

impl Default for FitSection {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub grid: GridSection,
    pub initial: InitialCondition,
    pub evolution: EvolutionSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSection>,
}

/// A configuration checked against the model and turned into solver inputs.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub params: ModelParams,
    pub grid: Grid,
    pub evolution: EvolutionConfig,
    pub initial: ComplexField,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config parse error: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes to TOML")
    }

    /// Reads a `.toml` config or the `config` entry of a `.json` manifest.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            let manifest: crate::run::Manifest = serde_json::from_str(&text).map_err(|e| {
                CliError::Validation(format!("{}: manifest parse error: {e}", path.display()))
            })?;
            Ok(manifest.config)
        } else {
            Self::from_toml(&text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
        }
    }

    pub fn params(&self) -> CliResult<ModelParams> {
        Ok(ModelParams::new(
            self.model.a,
            self.model.b,
            self.model.alpha,
        )?)
    }

    pub fn grid(&self) -> CliResult<Grid> {
        let cutoff = self
            .grid
            .derivative_cutoff
            .unwrap_or(DEFAULT_DERIVATIVE_CUTOFF);
        Ok(Grid::with_derivative_cutoff(
            self.grid.n,
            self.grid.l,
            cutoff,
        )?)
    }

    pub fn evolution(&self) -> CliResult<EvolutionConfig> {
        let e = &self.evolution;
        let mut cfg = EvolutionConfig::new(e.t_end, e.n_steps)?;
        if let Some(r) = e.record_every {
            cfg = cfg.with_record_every(r)?;
        }
        if let Some(g) = e.delta_guard {
            cfg.delta_guard = g;
            cfg.validate()?;
        }
        Ok(cfg)
    }

    pub fn fit_window(&self) -> f64 {
        self.fit.clone().unwrap_or_default().window
    }

    pub fn prepare(&self) -> CliResult<Prepared> {
        let params = self.params()?;
        if self.initial.needs_ground_state() {
            params.require_ground_state()?;
        }
        let grid = self.grid()?;
        let evolution = self.evolution()?;
        let window = self.fit_window();
        if !(window.is_finite() && window > 0.0) {
            return Err(CliError::Validation(format!(
                "fit window must be positive, got {window}"
            )));
        }
        let guard = self.evolution.delta_guard.unwrap_or(DEFAULT_GUARD);
        let initial = make_initial_guarded(&self.initial, &params, &grid, guard)?;
        Ok(Prepared {
            params,
            grid,
            evolution,
            initial,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[model]
a = 9.0
b = 4.4
alpha = 1

[grid]
n = 256
l = 5.0

[initial]
kind = "ground_state_scaled"
lambda = 0.99

[evolution]
t_end = 0.01
n_steps = 100
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = RunConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(
            cfg.initial,
            InitialCondition::GroundStateScaled { lambda: 0.99 }
        );
        assert_eq!(cfg.fit_window(), DEFAULT_WINDOW);
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        let p = cfg.prepare().unwrap();
        assert_eq!(p.grid.len(), 256);
        assert_eq!(p.evolution.record_every, 1);
    }

    #[test]
    fn parse_errors_name_the_key() {
        let err = RunConfig::from_toml(&SAMPLE.replace("n = 256", "n = \"many\"")).unwrap_err();
        assert!(err.to_string().contains("n"), "{err}");
        assert_eq!(err.exit_code(), 1);
        let err =
            RunConfig::from_toml(&SAMPLE.replace("alpha = 1", "alpha = 1\nbeta = 2")).unwrap_err();
        assert!(err.to_string().contains("beta"), "{err}");
    }

    #[test]
    fn gaussian_data_skip_ground_state_check() {
        let text = SAMPLE.replace("b = 4.4", "b = 5.0").replace(
            "kind = \"ground_state_scaled\"\nlambda = 0.99",
            "kind = \"gaussian\"\nmu = 0.5",
        );
        assert!(RunConfig::from_toml(&text).unwrap().prepare().is_ok());
    }
}
