use thiserror::Error;

/// Errors raised by constructions and enumerations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("expected an endo-1-cell: {0}")]
    NotEndo(String),
    #[error("enumeration budget exceeded in {what}: {needed} candidates against a cap of {cap}")]
    Budget {
        what: String,
        needed: u128,
        cap: u64,
    },
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn budget(what: impl Into<String>, needed: u128, cap: u64) -> Self {
        Error::Budget {
            what: what.into(),
            needed,
            cap,
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

/// Search and enumeration caps shared by every instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest candidate count an enumeration may walk.
    pub max_candidates: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_candidates: 10_000_000,
        }
    }
}
