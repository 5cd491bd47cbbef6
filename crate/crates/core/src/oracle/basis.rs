//! Monomial basis of `H^0(F_n, aF + bH)` in the affine chart away from
//! `Gamma_n` and one fiber: `x^i y^k` with `0 <= k <= b`, `0 <= i <= a + nk`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{h0_nef, DivisorClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialBasis {
    pub n: u32,
    pub a: i64,
    pub b: i64,
    /// `(i, k)` for `x^i y^k`, ordered by `k` then `i`.
    pub exponents: Vec<(u32, u32)>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn max_x_degree(&self) -> u32 {
        self.exponents.iter().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn max_y_degree(&self) -> u32 {
        self.exponents.iter().map(|&(_, k)| k).max().unwrap_or(0)
    }
}

pub fn basis(n: u32, a: i64, b: i64) -> Result<MonomialBasis> {
    if a < 0 || b < 0 {
        return Err(Error::InvalidInput(format!(
            "basis needs a, b >= 0, got ({a}, {b})"
        )));
    }
    let out = staircase(n, a, b)?;
    debug_assert_eq!(Some(out.len() as i64), h0_nef(DivisorClass::new(n, a, b)).ok());
    Ok(out)
}

/// The same staircase without the sign restriction on `a`; columns with
/// `a + nk < 0` are empty. This is `H^0` for every class with `b >= 0`.
pub(crate) fn staircase(n: u32, a: i64, b: i64) -> Result<MonomialBasis> {
    let mut exponents = Vec::new();
    if b >= 0 {
        for k in 0..=b {
            let top = a + i64::from(n) * k;
            if top < 0 {
                continue;
            }
            if top > i64::from(u32::MAX) || exponents.len() as i64 + top > 50_000_000 {
                return Err(Error::OutOfRange(format!(
                    "basis for ({a}, {b}) on F_{n} is too large"
                )));
            }
            exponents.extend((0..=top as u32).map(|i| (i, k as u32)));
        }
    }
    Ok(MonomialBasis { n, a, b, exponents })
}
