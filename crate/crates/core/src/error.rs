use thiserror::Error;

use crate::density::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid subsystem set {0:?}: must be a nonempty strict subset of {{1,2,3}}")]
    InvalidSubsystem(Vec<usize>),

    #[error("state is not normalized (norm {0:.12})")]
    Unnormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(ValidationReport),

    #[error("parameter `{name}` = {value} is outside its domain {domain}")]
    OutOfDomain {
        name: String,
        value: f64,
        domain: String,
    },

    #[error("unsupported family `{0}` for this operation")]
    UnsupportedFamily(String),

    #[error("unknown {kind} `{label}`")]
    UnknownLabel { kind: &'static str, label: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("I/O failure: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn out_of_domain(name: &str, value: f64, domain: &str) -> Self {
        Error::OutOfDomain {
            name: name.to_owned(),
            value,
            domain: domain.to_owned(),
        }
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::NonFinite => "non_finite",
            Error::NotHermitian(_) => "not_hermitian",
            Error::InvalidSubsystem(_) => "invalid_subsystem",
            Error::Unnormalized(_) => "unnormalized",
            Error::InvalidDensity(_) => "invalid_density",
            Error::OutOfDomain { .. } => "out_of_domain",
            Error::UnsupportedFamily(_) => "unsupported_family",
            Error::UnknownLabel { .. } => "unknown_label",
            Error::Numerical(_) => "numerical",
            Error::InvalidInput(_) => "invalid_input",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
