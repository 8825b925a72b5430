use thiserror::Error;

/// Errors produced anywhere in the simulation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PtreError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "quadrature did not converge{}: estimate {estimate:e}, error bound {error:e} after {subdivisions} subdivisions",
        label.as_deref().map(|l| format!(" for {l}")).unwrap_or_else(|| format!(" (component {component})"))
    )]
    NonConvergence {
        label: Option<String>,
        component: usize,
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("degenerate polaron frame: epsilon = 0 and kappa*J = 0")]
    DegenerateFrame,

    #[error("singular frame: kappa = {0} (kappa^-1 enters the three-level generator)")]
    SingularFrame(f64),

    #[error("singular {what} generator at {point}")]
    Singular { what: &'static str, point: String },

    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("efficiency undefined: pump flux = {0:e} (engine not operating)")]
    UndefinedEfficiency(f64),

    #[error("residence proxy undefined: net pump throughput = {0:e}")]
    UndefinedProxy(f64),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for PtreError {
    fn from(e: std::io::Error) -> Self {
        PtreError::Io(e.to_string())
    }
}

impl From<csv::Error> for PtreError {
    fn from(e: csv::Error) -> Self {
        PtreError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, PtreError>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(PtreError::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(PtreError::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}
