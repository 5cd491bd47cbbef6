use thiserror::Error;

use crate::lattice::SystemSpec;
use crate::reduction::ReductionTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("class is not effective: {0}")]
    NotEffective(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("field of order {prime} is too small for multiplicity {max_mult}")]
    FieldTooSmall { prime: u64, max_mult: i64 },

    #[error("reduction of {} did not terminate within {limit} steps", .partial.initial)]
    NonTermination {
        limit: usize,
        partial: Box<ReductionTrace>,
    },

    #[error("{0} is (-1)-special; classify it instead of proving non-speciality")]
    MinusOneSpecial(SystemSpec),

    #[error("open case: no degeneration closes {stuck} (root {root})")]
    OpenCase { root: SystemSpec, stuck: SystemSpec },
}

/// Checked `i64` helpers; every lattice computation goes through these.
pub(crate) mod ck {
    use super::{Error, Result};

    #[inline]
    pub fn add(a: i64, b: i64) -> Result<i64> {
        a.checked_add(b).ok_or(Error::Overflow("addition"))
    }

    #[inline]
    pub fn sub(a: i64, b: i64) -> Result<i64> {
        a.checked_sub(b).ok_or(Error::Overflow("subtraction"))
    }

    #[inline]
    pub fn mul(a: i64, b: i64) -> Result<i64> {
        a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
    }

    /// `m(m+1)/2`, the number of conditions imposed by a point of multiplicity `m`.
    #[inline]
    pub fn conditions(m: i64) -> Result<i64> {
        Ok(mul(m, add(m, 1)?)? / 2)
    }
}
