use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} lies outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("tetrad is singular at theta = {theta} (sin theta = 0)")]
    SingularTetrad { theta: f64 },
    #[error("finite-difference step {h} exceeds the allowed maximum {max}")]
    StepTooLarge { h: f64, max: f64 },
    #[error("1 - 8 Omega^2 vanishes (Omega = {omega}); the quantization condition degenerates")]
    RotationSingular { omega: f64 },
    #[error("matching determinant has no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("step-size control collapsed at theta = {theta} (h = {h})")]
    StiffFailure { theta: f64, h: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
