use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    /// No localized positive stationary solution exists for these parameters.
    #[error("no ground state for a = {a}, b = {b}, alpha = {alpha}: a <= (alpha+1)*b")]
    ParameterDomain { a: f64, b: f64, alpha: u32 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("size mismatch: expected {expected} samples, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    /// `1 - |phi|^(2 alpha)` fell below the guard; the equation's coefficients blow up there.
    #[error("singularity guard violated{}: max |phi| = {max_modulus}", stage_suffix(*.stage))]
    Singularity { max_modulus: f64, stage: Option<u8> },

    #[error("initial amplitude too large: max |phi0| = {max_modulus} (need max |phi0|^(2 alpha) < 1 - guard)")]
    Amplitude { max_modulus: f64 },

    #[error("invalid evolution config: {0}")]
    InvalidConfig(String),

    #[error("degenerate maximum: |phi| is flat around index {index}")]
    DegenerateMaximum { index: usize },

    #[error("phi left (0, 1) at x = {x} (phi = {phi}); reduce the step size")]
    OrbitGuard { x: f64, phi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),
}

fn stage_suffix(stage: Option<u8>) -> String {
    match stage {
        Some(s) => format!(" at RK4 stage {s}"),
        None => String::new(),
    }
}
