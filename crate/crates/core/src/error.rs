use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what}: requested size {requested} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed permutation: {0}")]
    InvalidPermutation(String),

    #[error("root not bracketed on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("quadrature did not converge after {nodes} nodes: last estimates {last} and {previous}")]
    NotConverged {
        nodes: usize,
        last: String,
        previous: String,
    },

    #[error("target {target} outside attainable range (supremum {supremum}): {reason}")]
    Infeasible {
        target: f64,
        supremum: f64,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
