//! Compiled-in experiment setups.

use qnls_core::evolve::InitialCondition;

use crate::config::{EvolutionSection, FitSection, GridSection, ModelSection, RunConfig};

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    a: f64,
    b: f64,
    alpha: u32,
    n: usize,
    l: f64,
    initial: InitialCondition,
    t_end: f64,
    n_steps: u64,
}

impl Preset {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            model: ModelSection {
                a: self.a,
                b: self.b,
                alpha: self.alpha,
            },
            grid: GridSection {
                n: self.n,
                l: self.l,
                derivative_cutoff: None,
            },
            initial: self.initial,
            evolution: EvolutionSection {
                t_end: self.t_end,
                n_steps: self.n_steps,
                record_every: None,
                delta_guard: None,
            },
            fit: Some(FitSection::default()),
        }
    }
}

use InitialCondition::{Gaussian, GroundStatePlusGaussian as Bump, GroundStateScaled as Scaled};

const fn preset(
    name: &'static str,
    description: &'static str,
    (a, b, alpha): (f64, f64, u32),
    (n, l): (usize, f64),
    initial: InitialCondition,
    (t_end, n_steps): (f64, u64),
) -> Preset {
    Preset {
        name,
        description,
        a,
        b,
        alpha,
        n,
        l,
        initial,
        t_end,
        n_steps,
    }
}

const CUBIC: (f64, f64, u32) = (9.0, 4.4, 1);
const QUINTIC: (f64, f64, u32) = (9.0, 2.9, 2);
const SEPTIC: (f64, f64, u32) = (9.0, 2.1, 3);
const NARROW: (usize, f64) = (2048, 5.0);
const WIDE: (usize, f64) = (8192, 20.0);
const SHORT: (f64, u64) = (0.25, 500_000);
const LONG: (f64, u64) = (2.0, 2_000_000);
const GAUSS_GRID: (usize, f64) = (4096, 40.0);
const GAUSS_TIME: (f64, u64) = (10.0, 500_000);

pub const PRESETS: &[Preset] = &[
    preset(
        "gs-exact-a9-b4.4",
        "exact ground state, alpha = 1: stays e^{ibt} phi",
        CUBIC,
        (1024, 5.0),
        Scaled { lambda: 1.0 },
        (1.0, 100_000),
    ),
    preset(
        "gs-perturb-0.99",
        "0.99 times the ground state, alpha = 1",
        CUBIC,
        NARROW,
        Scaled { lambda: 0.99 },
        SHORT,
    ),
    preset(
        "gs-perturb-1.001",
        "1.001 times the ground state, alpha = 1",
        CUBIC,
        NARROW,
        Scaled { lambda: 1.001 },
        SHORT,
    ),
    preset(
        "gs-gauss-minus",
        "ground state minus 0.001 exp(-x^2), alpha = 1",
        CUBIC,
        NARROW,
        Bump { epsilon: -0.001 },
        SHORT,
    ),
    preset(
        "gs-gauss-plus",
        "ground state plus 0.001 exp(-x^2), alpha = 1",
        CUBIC,
        NARROW,
        Bump { epsilon: 0.001 },
        SHORT,
    ),
    preset(
        "alpha2-perturb-0.99",
        "0.99 times the ground state, alpha = 2",
        QUINTIC,
        WIDE,
        Scaled { lambda: 0.99 },
        LONG,
    ),
    preset(
        "alpha2-perturb-1.001",
        "1.001 times the ground state, alpha = 2",
        QUINTIC,
        WIDE,
        Scaled { lambda: 1.001 },
        LONG,
    ),
    preset(
        "alpha3-perturb-0.99",
        "0.99 times the ground state, alpha = 3",
        SEPTIC,
        WIDE,
        Scaled { lambda: 0.99 },
        LONG,
    ),
    preset(
        "alpha3-perturb-1.001",
        "1.001 times the ground state, alpha = 3",
        SEPTIC,
        WIDE,
        Scaled { lambda: 1.001 },
        LONG,
    ),
    preset(
        "gaussian-0.9-alpha1",
        "0.9 exp(-x^2), alpha = 1",
        (9.0, 1.0, 1),
        GAUSS_GRID,
        Gaussian { mu: 0.9 },
        GAUSS_TIME,
    ),
    preset(
        "gaussian-0.9-alpha2",
        "0.9 exp(-x^2), alpha = 2",
        (9.0, 1.0, 2),
        GAUSS_GRID,
        Gaussian { mu: 0.9 },
        GAUSS_TIME,
    ),
    preset(
        "gaussian-0.9-alpha3",
        "0.9 exp(-x^2), alpha = 3",
        (9.0, 1.0, 3),
        GAUSS_GRID,
        Gaussian { mu: 0.9 },
        GAUSS_TIME,
    ),
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for p in PRESETS {
            let cfg = p.config();
            let prepared = cfg.prepare().unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert!(
                !prepared
                    .evolution
                    .exceeds_stability_heuristic(&prepared.grid),
                "{}",
                p.name
            );
            assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        }
    }

    #[test]
    fn names_are_unique() {
        for (i, p) in PRESETS.iter().enumerate() {
            assert!(PRESETS[i + 1..].iter().all(|q| q.name != p.name));
            assert!(find(p.name).is_some());
        }
        assert!(find("nope").is_none());
    }
}
