use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("r = {r} lies outside the window [{lo}, {hi}]")]
    Domain { r: f64, lo: f64, hi: f64 },

    #[error("wind too strong at r = {r}: {detail}")]
    WindTooStrong { r: f64, detail: String },

    #[error("wind step {step} is inadmissible: {detail}")]
    WindStep { step: usize, detail: String },

    #[error("step size underflow at s = {s}")]
    StepUnderflow { s: f64 },

    #[error("integration exceeded {max_steps} steps at s = {s}")]
    TooManySteps { max_steps: usize, s: f64 },

    #[error("quadrature failed on [{a}, {b}]: {detail}")]
    Quadrature { a: f64, b: f64, detail: String },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("singular turning point: |m'(xi)| = {dm} at xi = {xi}")]
    SingularTurningPoint { xi: f64, dm: f64 },

    #[error("shooting did not converge: {detail}")]
    NoConvergence { detail: String, best: Option<f64> },

    #[error("trajectory has no F-arclength field")]
    MissingArclength,

    #[error("F-arclength not increasing at s = {s}")]
    NonMonotone { s: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
