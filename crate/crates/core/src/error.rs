use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A numerical procedure failed to converge.
    #[error("numeric failure in {op}: {msg} (residual estimate {residual:e})")]
    Numeric {
        op: &'static str,
        msg: String,
        residual: f64,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    pub(crate) fn numeric(op: &'static str, msg: impl Into<String>, residual: f64) -> Self {
        Error::Numeric {
            op,
            msg: msg.into(),
            residual,
        }
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
