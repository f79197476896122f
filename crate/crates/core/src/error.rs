use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid {nx}x{nz} cannot resolve truncation (L={l_max}, M={m_max}): {reason}")]
    UnresolvedGrid { nx: usize, nz: usize, l_max: usize, m_max: usize, reason: &'static str },

    #[error("solution blew up at t = {t}")]
    BlowUp { t: f64 },

    #[error("trajectory has not converged to a fixed point (relative change {change:e})")]
    NotConverged { change: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
