use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qnls_core::fit::DEFAULT_WINDOW;
use qnls_core::ModelParams;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::presets::{self, PRESETS};
use crate::run::{self, PhasePlaneOptions};

#[derive(Debug, Parser)]
#[command(
    name = "qnls",
    version,
    about = "Ground states and dynamics of a quasilinear Schrödinger equation"
)]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write ground-state profiles for one or more frequencies.
    Groundstate {
        #[arg(long, default_value_t = 9.0)]
        a: f64,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        /// Frequencies; repeat or separate with commas.
        #[arg(long, value_delimiter = ',', default_values_t = [4.0, 4.2, 4.4, 4.49, 4.499])]
        b: Vec<f64>,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value_t = 5.0)]
        l: f64,
    },
    /// Evolve the initial data of a config file (.toml, or a manifest.json from an earlier run).
    Evolve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fit the nearest ground state to a field snapshot.
    Fit {
        #[arg(long)]
        snapshot: PathBuf,
        /// Take `a` and `alpha` (and the fit window) from this config.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 9.0)]
        a: f64,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[arg(long)]
        window: Option<f64>,
    },
    /// Critical points, zero level set, shot orbit and linearized-operator check.
    Phaseplane {
        #[arg(long, default_value_t = 9.0)]
        a: f64,
        #[arg(long, default_value_t = 4.4)]
        b: f64,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
    },
    /// Run a compiled-in experiment.
    Preset {
        name: Option<String>,
        /// List the available presets.
        #[arg(long)]
        list: bool,
        /// Print the preset as a config file instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// Run several presets concurrently, each into its own subdirectory.
    Sweep {
        names: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn lookup(name: &str) -> CliResult<&'static presets::Preset> {
    presets::find(name).ok_or_else(|| {
        CliError::Validation(format!("unknown preset {name:?}; try `qnls preset --list`"))
    })
}

pub fn execute(cli: Cli) -> CliResult<()> {
    let out = cli.out;
    match cli.command {
        Command::Groundstate { a, alpha, b, n, l } => {
            for s in run::groundstates(a, alpha, &b, n, l, &out)? {
                println!(
                    "b={}: peak={:.6} width_at_half_max={:.6}",
                    s.b, s.peak, s.width_at_half_max
                );
            }
        }
        Command::Evolve { config } => {
            let cfg = RunConfig::load(&config)?;
            let summary = run::run_config(&cfg, None, &out)?;
            println!("{}", summary.line("run"));
        }
        Command::Fit {
            snapshot,
            config,
            a,
            alpha,
            window,
        } => {
            let (params, window) = match config {
                Some(path) => {
                    let cfg = RunConfig::load(&path)?;
                    (cfg.params()?, window.unwrap_or(cfg.fit_window()))
                }
                None => (
                    ModelParams::new(a, a / (alpha as f64 + 1.0) / 2.0, alpha)?,
                    window.unwrap_or(DEFAULT_WINDOW),
                ),
            };
            let fit = run::fit_snapshot(&snapshot, &params, window, &out)?;
            println!(
                "b_fit={:.6} residual_l2={:.3e} center_fit={:.6} iterations={} converged={}",
                fit.b_fit, fit.residual_l2, fit.center_fit, fit.iterations, fit.converged
            );
        }
        Command::Phaseplane { a, b, alpha } => {
            let params = ModelParams::new(a, b, alpha)?;
            let s = run::phaseplane(&params, &PhasePlaneOptions::default(), &out)?;
            println!(
                "regime={:?} critical_points={}",
                s.critical_points.regime,
                s.critical_points.points.len()
            );
            for c in &s.critical_points.points {
                println!(
                    "  chi={:+.6} phi={:+.6} {:?}",
                    c.point.chi, c.point.phi, c.kind
                );
            }
            if let Some(nd) = s.nondegeneracy {
                println!(
                    "linearized operator: eigenvalue_near_zero={:.3e} alignment={:.9} zero_multiplicity={}",
                    nd.eigenvalue_near_zero, nd.alignment, nd.zero_multiplicity
                );
            }
        }
        Command::Preset {
            name,
            list,
            print_config,
        } => {
            if list || name.is_none() {
                for p in PRESETS {
                    println!("{:<22} {}", p.name, p.description);
                }
                return Ok(());
            }
            let preset = lookup(name.as_deref().unwrap_or_default())?;
            if print_config {
                print!("{}", preset.config().to_toml());
            } else {
                let summary = run::run_preset(preset, &out)?;
                println!("{}", summary.line(preset.name));
            }
        }
        Command::Sweep { names, all, jobs } => {
            let selected = if all {
                run::all_presets()
            } else if names.is_empty() {
                return Err(CliError::Validation(
                    "sweep needs preset names or --all".into(),
                ));
            } else {
                names
                    .iter()
                    .map(|n| lookup(n))
                    .collect::<CliResult<Vec<_>>>()?
            };
            let results = run::sweep(&selected, jobs, &out);
            if let Some(worst) = results
                .into_iter()
                .filter_map(|(_, r)| r.err())
                .max_by_key(|e| e.exit_code())
            {
                return Err(worst);
            }
        }
    }
    Ok(())
}
