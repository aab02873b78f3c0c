use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("divergent input: {0}")]
    Divergence(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("near-singular evaluation (|L| = {modulus:e})")]
    NearSingular { modulus: f64 },
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for errors caused by the caller's parameters rather than numerics.
    pub fn is_constraint(&self) -> bool {
        matches!(
            self,
            Error::Constraint(_) | Error::Domain(_) | Error::Divergence(_) | Error::Capacity(_) | Error::Unsupported(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Reject unless `ok`, naming the inequality that failed.
pub(crate) fn require(ok: bool, inequality: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Constraint(format!("requires {inequality}")))
    }
}
