use thiserror::Error;

use crate::hp::HpReal;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge within {levels} levels: best estimate {estimate}, last gap {gap:e}")]
    NonConvergence { estimate: HpReal, gap: f64, levels: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
