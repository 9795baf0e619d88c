use std::path::PathBuf;

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("argument outside supported domain: {0}")]
    Domain(String),

    #[error("result overflows double precision: {0}")]
    Overflow(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no admissible square-root branch for gamma = {re} {im:+}i")]
    Branch { re: f64, im: f64 },

    #[error("root finder failed for k = {k}: {reason}")]
    NoRoot { k: u32, reason: String },

    #[error("root for k = {k} left the fourth quadrant: {re} {im:+}i")]
    Quadrant { k: u32, re: f64, im: f64 },

    #[error("augmented matrix for k = {k} has nullity {nullity}, expected 1")]
    Rank { k: u32, nullity: usize },

    #[error("iteration did not converge: {0}")]
    Convergence(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid series: {0}")]
    Series(String),

    #[error("malformed input {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures of the numerics as opposed to bad input or I/O.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Overflow(_)
                | Error::Branch { .. }
                | Error::NoRoot { .. }
                | Error::Quadrant { .. }
                | Error::Rank { .. }
                | Error::Convergence(_)
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Malformed { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
