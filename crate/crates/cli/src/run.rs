//! The subcommands, as functions that write into an output directory and return a summary.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use qnls_core::evolve::{evolve, InitialCondition, STABILITY_LIMIT};
use qnls_core::fit::{fit_ground_state, FitResult};
use qnls_core::phaseplane::{
    critical_points, nondegeneracy_check, shoot_ground_state, zero_level_set, CriticalPointReport,
    IntervalGrid, Nondegeneracy,
};
use qnls_core::{Complex64, GroundState, ModelParams};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::io;
use crate::presets::{self, Preset};

/// Everything needed to repeat a run. No timestamps, so identical runs give identical files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub version: String,
    pub config: RunConfig,
    pub dt: f64,
    pub stability_number: f64,
    pub stability_limit: f64,
    pub delta_guard: f64,
    pub record_every: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub final_linf: f64,
    pub energy_drift: f64,
    pub mass_drift: f64,
    /// `max |φ(T) - e^{ibT} φ(0)|` for the unscaled ground state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_state_error: Option<f64>,
    pub fit: FitResult,
}

impl RunSummary {
    pub fn line(&self, label: &str) -> String {
        let mut s = format!(
            "{label}: final_linf={:.10} energy_drift={:.3e} b_fit={:.6} residual_l2={:.3e}",
            self.final_linf, self.energy_drift, self.fit.b_fit, self.fit.residual_l2
        );
        if let Some(e) = self.ground_state_error {
            s.push_str(&format!(" gs_error={e:.3e}"));
        }
        s
    }
}

/// Evolves `cfg`, writing `config.toml`, `manifest.json`, `field_initial.csv`,
/// `diagnostics.csv`, `field_final.csv` and `fit.json` into `out`. On a singularity abort the
/// diagnostics so far and the last good field (`field_last.csv`) are still written.
pub fn run_config(cfg: &RunConfig, preset: Option<&str>, out: &Path) -> CliResult<RunSummary> {
    let prepared = cfg.prepare()?;
    let label = preset.unwrap_or("run");
    let stability = prepared.evolution.stability_number(&prepared.grid);
    if stability > STABILITY_LIMIT {
        eprintln!(
            "warning: {label}: dt*(N/L)^2 = {stability:.3} exceeds {STABILITY_LIMIT}; the run may go unstable"
        );
    }
    io::ensure_dir(out)?;
    io::write_text(&out.join("config.toml"), &cfg.to_toml())?;
    let manifest = Manifest {
        preset: preset.map(str::to_owned),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        config: cfg.clone(),
        dt: prepared.evolution.dt(),
        stability_number: stability,
        stability_limit: STABILITY_LIMIT,
        delta_guard: prepared.evolution.delta_guard,
        record_every: prepared.evolution.record_every,
    };
    io::write_json(&out.join("manifest.json"), &manifest)?;
    io::write_field(&out.join("field_initial.csv"), &prepared.initial)?;

    let (last, diag) = match evolve(&prepared.initial, &prepared.evolution, &prepared.params) {
        Ok(done) => done,
        Err(abort) => {
            io::write_diagnostics(&out.join("diagnostics.csv"), &abort.diagnostics)?;
            io::write_field(&out.join("field_last.csv"), &abort.last_field)?;
            return Err(CliError::Aborted(format!("{label}: {abort}")));
        }
    };
    io::write_diagnostics(&out.join("diagnostics.csv"), &diag)?;
    io::write_field(&out.join("field_final.csv"), &last)?;

    let fit = fit_ground_state(&last, &prepared.params, cfg.fit_window())?;
    io::write_json(&out.join("fit.json"), &fit)?;

    let ground_state_error = (cfg.initial == InitialCondition::GroundStateScaled { lambda: 1.0 })
        .then(|| {
            let phase = Complex64::from_polar(1.0, prepared.params.b() * prepared.evolution.t_end);
            last.max_abs_diff(&prepared.initial.scaled(phase))
        });
    Ok(RunSummary {
        final_linf: last.linf(),
        energy_drift: diag.max_energy_drift(),
        mass_drift: diag.max_mass_drift(),
        ground_state_error,
        fit,
    })
}

pub fn run_preset(preset: &Preset, out: &Path) -> CliResult<RunSummary> {
    run_config(&preset.config(), Some(preset.name), out)
}

/// Runs presets on up to `jobs` threads, each into `out/<name>`. Results come back in input order.
pub fn sweep(
    names: &[&'static Preset],
    jobs: usize,
    out: &Path,
) -> Vec<(&'static str, CliResult<RunSummary>)> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CliResult<RunSummary>>>> =
        Mutex::new((0..names.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, names.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(p) = names.get(i) else { break };
                let r = run_preset(p, &out.join(p.name));
                match &r {
                    Ok(summary) => println!("{}", summary.line(p.name)),
                    Err(e) => eprintln!("error: {e}"),
                }
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    names
        .iter()
        .zip(results.into_inner().unwrap())
        .map(|(p, r)| (p.name, r.expect("every preset ran")))
        .collect()
}

pub fn all_presets() -> Vec<&'static Preset> {
    presets::PRESETS.iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundStateSummary {
    pub b: f64,
    pub peak: f64,
    pub width_at_half_max: f64,
}

/// Writes `groundstate_b{b}.csv` (`x,phi`) for each frequency on the grid `L·[-π, π)` of
/// `n` points.
pub fn groundstates(
    a: f64,
    alpha: u32,
    bs: &[f64],
    n: usize,
    l: f64,
    out: &Path,
) -> CliResult<Vec<GroundStateSummary>> {
    let grid = qnls_core::Grid::new(n, l)?;
    let states = bs
        .iter()
        .map(|&b| {
            Ok(GroundState::centered(
                ModelParams::new(a, b, alpha)?.require_ground_state()?,
            )?)
        })
        .collect::<CliResult<Vec<_>>>()?;
    io::ensure_dir(out)?;
    let mut summaries = Vec::new();
    for (gs, &b) in states.iter().zip(bs) {
        let rows: Vec<[f64; 2]> = grid.xs().iter().map(|&x| [x, gs.eval(x)]).collect();
        io::write_table(
            &out.join(format!("groundstate_b{b}.csv")),
            &["x", "phi"],
            rows.iter().map(|r| &r[..]),
        )?;
        summaries.push(GroundStateSummary {
            b,
            peak: gs.peak(),
            width_at_half_max: gs.width_at_half_max(),
        });
    }
    Ok(summaries)
}

pub fn fit_snapshot(
    snapshot: &Path,
    params: &ModelParams,
    window: f64,
    out: &Path,
) -> CliResult<FitResult> {
    let field = io::read_snapshot(snapshot)?.to_field()?;
    let fit = fit_ground_state(&field, params, window)?;
    io::ensure_dir(out)?;
    io::write_json(&out.join("fit.json"), &fit)?;
    Ok(fit)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePlaneSummary {
    pub critical_points: CriticalPointReport,
    pub nondegeneracy: Option<Nondegeneracy>,
}

pub struct PhasePlaneOptions {
    pub level_samples: usize,
    pub orbit_span: f64,
    pub orbit_steps: usize,
    pub operator_half_width: f64,
    pub operator_points: usize,
}

impl Default for PhasePlaneOptions {
    fn default() -> Self {
        Self {
            level_samples: 2001,
            orbit_span: 10.0,
            orbit_steps: 20_000,
            operator_half_width: 24.0,
            operator_points: 1 << 15,
        }
    }
}

/// Writes `critical_points.json` and `level_set.csv` (`phi,chi_sq`: the zero level set of the
/// Hamiltonian as `χ²` over `φ ∈ (-1, 1)`, empty where `χ² < 0`). When a ground state exists
/// it also writes the shot orbit `orbit.csv` (`x,chi,phi`) and `nondegeneracy.json`.
pub fn phaseplane(
    params: &ModelParams,
    opts: &PhasePlaneOptions,
    out: &Path,
) -> CliResult<PhasePlaneSummary> {
    io::ensure_dir(out)?;
    let report = critical_points(params);
    io::write_json(&out.join("critical_points.json"), &report)?;

    let m = opts.level_samples.max(2);
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let phi = -1.0 + 2.0 * (i as f64 + 0.5) / m as f64;
        let chi_sq = zero_level_set(phi, params)?;
        if chi_sq >= 0.0 {
            rows.push([phi, chi_sq]);
        }
    }
    io::write_table(
        &out.join("level_set.csv"),
        &["phi", "chi_sq"],
        rows.iter().map(|r| &r[..]),
    )?;

    let mut nondegeneracy = None;
    if params.admits_ground_state() {
        let orbit = shoot_ground_state(params, opts.orbit_span, opts.orbit_steps)?;
        let rows: Vec<[f64; 3]> = orbit.iter().map(|(x, p)| [*x, p.chi, p.phi]).collect();
        io::write_table(
            &out.join("orbit.csv"),
            &["x", "chi", "phi"],
            rows.iter().map(|r| &r[..]),
        )?;
        let gs = GroundState::centered(*params)?;
        let grid = IntervalGrid::symmetric(opts.operator_half_width, opts.operator_points)?;
        let nd = nondegeneracy_check(&gs, &grid)?;
        io::write_json(&out.join("nondegeneracy.json"), &nd)?;
        nondegeneracy = Some(nd);
    }
    Ok(PhasePlaneSummary {
        critical_points: report,
        nondegeneracy,
    })
}
