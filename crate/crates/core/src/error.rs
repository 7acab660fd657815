/// Errors shared by every module in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A deformation parameter outside the supported domain.
    #[error("invalid deformation parameter: {0}")]
    InvalidQParam(String),

    /// An argument outside an operation's domain (negative mode count, bad label, ...).
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    /// The operation is only defined for the other parameter regime.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// Two operators built over different truncated bases were combined.
    #[error("basis mismatch: left has n_max = {left}, right has n_max = {right}")]
    BasisMismatch { left: usize, right: usize },

    /// The requested target cannot be bracketed inside the solver's domain.
    #[error("fit domain: {0}")]
    FitDomain(String),

    /// A computation escaped the finite range of f64.
    #[error("non-finite result: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
