use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument fell outside the domain of a function.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// A model parameter violated its constraint.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A root search could not bracket its target.
    #[error("no A attains capacity {target} on the searched range")]
    NoSolution { target: f64 },

    /// A curve assumed monotone was found not to be.
    #[error("curve is not monotone near A = {a}")]
    NotMonotone { a: f64 },

    /// A computed point violated an ordering that must hold.
    #[error("ordering violated at A = {a}: {detail}")]
    Ordering { a: f64, detail: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
