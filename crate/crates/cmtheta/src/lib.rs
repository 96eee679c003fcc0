//! Exact-arithmetic toolkit for computations in the arithmetic of imaginary
//! quadratic orders: ring class groups and characters, weight-one theta
//! series, a two-variable optimal form, Brandt matrices of definite
//! quaternion algebras, higher Eisenstein elements, and elliptic units with
//! their mod-p regulators.
//!
//! All core arithmetic is exact (big integers, rationals, cyclotomic
//! integers, residue rings); floating point appears only in the complex
//! evaluation layer (`exactmath::bigc`, `units::delta`) where every
//! consumer either carries an explicit precision contract or rounds back
//! into Z with a checked defect.

pub mod exactmath;
pub mod quadratic;
pub mod quaternion;

/// Crate-wide error type. Variants mirror the failure modes that the
/// command line maps to exit codes: config errors (exit 2) versus honest
/// verification failures (exit 1) versus internal arithmetic errors.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Failed(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn failed(msg: impl Into<String>) -> Self {
        Error::Failed(msg.into())
    }
    pub fn arithmetic(msg: impl Into<String>) -> Self {
        Error::Arithmetic(msg.into())
    }
}
