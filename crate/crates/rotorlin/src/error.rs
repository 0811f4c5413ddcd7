use thiserror::Error;

/// Errors surfaced by the toolkit. Exit-code mapping lives in the CLI:
/// usage errors → 2, convergence failures → 3, numerical failures → 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("missing parameter `{0}` in config")]
    MissingParameter(String),

    #[error("invalid parameter `{name}` = {value}: {constraint}")]
    InvalidParameter {
        name: String,
        value: f64,
        constraint: String,
    },

    #[error("calibration of `{parameter}` failed: {reason}")]
    CalibrationFailed { parameter: String, reason: String },

    #[error("inflow iteration diverged at mu={mu:.5}, mu_z={mu_z:.5} (residual {residual:.3e}); vortex-ring-adjacent condition outside model validity")]
    InflowDiverged { mu: f64, mu_z: f64, residual: f64 },

    #[error("kinematic singularity: |theta| = {0:.4} rad >= pi/2")]
    KinematicSingularity(f64),

    #[error("trim did not converge; residual history: {0:?}")]
    TrimNotConverged(Vec<f64>),

    #[error("advance ratio mu = {0:.4} outside model validity (mu <= {1})")]
    MuOutOfRange(f64, f64),

    #[error("partial derivative w.r.t. `{0}` unavailable (perturbed solves diverged)")]
    PartialUnavailable(String),

    #[error("eigensolver failed: {0}")]
    EigenFailed(String),

    #[error("unknown state label `{0}`")]
    LabelError(String),

    #[error("trajectory grids do not match: {0}")]
    GridError(String),

    #[error("config parse error at line {line}: {msg}")]
    ConfigSyntax { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
