use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation at a pole of the potential.
    #[error("infinite potential at {0}")]
    InfinitePotential(String),
    #[error("state n_r={n_r}, L={l} is not bound (nu={nu})")]
    NotBound { n_r: u32, l: u32, nu: f64 },
    /// Operation invoked for the other geometry.
    #[error("usage error: {0}")]
    Usage(String),
    /// A numerical procedure produced a non-finite value or failed to converge.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// A self-validation check did not reach its tolerance.
    #[error("accuracy error: {0}")]
    Accuracy(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
