use thiserror::Error;

use crate::ode::OdeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("quadrature order {requested} out of range [{min}, {max}]")]
    QuadratureOrder {
        requested: usize,
        min: usize,
        max: usize,
    },

    #[error("quadrature unstable: value changed by {change:e} under order doubling (limit {limit:e})")]
    QuadratureUnstable { change: f64, limit: f64 },

    /// The guidance denominator fell below the singularity floor.
    #[error("guidance singularity at t = {t} (x1 = {x1}, x2 = {x2}); last good time {last_good_t}")]
    Singularity {
        t: f64,
        x1: f64,
        x2: f64,
        last_good_t: f64,
    },

    #[error("phase undefined at ({x1}, {x2}, t = {t}): both arctangent arguments below floor")]
    UndefinedPhase { x1: f64, x2: f64, t: f64 },

    #[error(transparent)]
    Ode(#[from] OdeError),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
