//! Picard lattice of `F_n` and of its blow-up at `r` general points.
//!
//! A class is written `aF + bH - sum m_i E_i` where `F` is a fiber, `H` a
//! section with `H^2 = n` and `E_i` the exceptional curves. The intersection
//! form is `F^2 = 0`, `F.H = 1`, `H^2 = n`, `E_i^2 = -1`.
//!
//! All arithmetic is exact and checked: an overflow is reported as
//! [`Error::Overflow`], never wrapped.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{ck, Error, Result};

/// `aF + bH` on `F_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DivisorClass {
    pub n: u32,
    pub a: i64,
    pub b: i64,
}

impl DivisorClass {
    pub fn new(n: u32, a: i64, b: i64) -> Self {
        DivisorClass { n, a, b }
    }

    pub fn n_i64(&self) -> i64 {
        i64::from(self.n)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}F{:+}H on F_{}", self.a, self.b, self.n)
    }
}

/// A class on the blow-up: a base class minus per-point multiplicities.
///
/// Multiplicities are stored per point, so `mults[i]` always refers to the
/// same point. Equality pads the shorter list with zeros; use
/// [`BlowupClass::canonical`] to compare up to relabelling the points.
#[derive(Clone, Debug, Serialize)]
pub struct BlowupClass {
    pub base: DivisorClass,
    pub mults: Vec<i64>,
}

impl PartialEq for BlowupClass {
    fn eq(&self, other: &Self) -> bool {
        if self.base != other.base {
            return false;
        }
        let len = self.mults.len().max(other.mults.len());
        (0..len).all(|i| self.mult(i) == other.mult(i))
    }
}

impl Eq for BlowupClass {}

impl BlowupClass {
    pub fn new(n: u32, a: i64, b: i64, mults: Vec<i64>) -> Self {
        BlowupClass {
            base: DivisorClass::new(n, a, b),
            mults,
        }
    }

    pub fn zero(n: u32, r: usize) -> Self {
        Self::new(n, 0, 0, vec![0; r])
    }

    pub fn n(&self) -> u32 {
        self.base.n
    }

    pub fn a(&self) -> i64 {
        self.base.a
    }

    pub fn b(&self) -> i64 {
        self.base.b
    }

    pub fn r(&self) -> usize {
        self.mults.len()
    }

    /// Multiplicity at point `i`, zero past the end of the list.
    pub fn mult(&self, i: usize) -> i64 {
        self.mults.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.base.a == 0 && self.base.b == 0 && self.mults.iter().all(|&m| m == 0)
    }

    /// Same class with multiplicities sorted in descending order.
    pub fn canonical(&self) -> BlowupClass {
        let mut mults = self.mults.clone();
        mults.sort_unstable_by(|x, y| y.cmp(x));
        BlowupClass {
            base: self.base,
            mults,
        }
    }

    /// Equality up to a permutation of the points (zeros are padding).
    pub fn canonical_eq(&self, other: &BlowupClass) -> bool {
        let strip = |c: &BlowupClass| {
            let mut c = c.canonical();
            c.mults.retain(|&m| m != 0);
            c
        };
        strip(self) == strip(other)
    }

    /// `self + coeff * other`, padding the point lists with zeros.
    pub fn add_scaled(&self, other: &BlowupClass, coeff: i64) -> Result<BlowupClass> {
        if self.n() != other.n() {
            return Err(mismatched(self.n(), other.n()));
        }
        let len = self.r().max(other.r());
        let mut mults = Vec::with_capacity(len);
        for i in 0..len {
            mults.push(ck::add(self.mult(i), ck::mul(coeff, other.mult(i))?)?);
        }
        Ok(BlowupClass::new(
            self.n(),
            ck::add(self.a(), ck::mul(coeff, other.a())?)?,
            ck::add(self.b(), ck::mul(coeff, other.b())?)?,
            mults,
        ))
    }

    pub fn sub_scaled(&self, other: &BlowupClass, coeff: i64) -> Result<BlowupClass> {
        self.add_scaled(other, ck::mul(coeff, -1)?)
    }

    /// `(L^2 - L.K)/2`, the Riemann-Roch form of the virtual dimension.
    pub fn riemann_roch(&self) -> Result<i64> {
        let k = canonical_class(self.n(), self.r());
        let self_sq = intersect(self, self)?;
        let with_k = intersect(self, &k)?;
        Ok(ck::sub(self_sq, with_k)? / 2)
    }
}

impl fmt::Display for BlowupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}; [", self.a(), self.b())?;
        for (i, m) in self.mults.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]) on F_{}", self.n())
    }
}

fn mismatched(n1: u32, n2: u32) -> Error {
    Error::InvalidInput(format!("classes live on different surfaces F_{n1} and F_{n2}"))
}

/// A linear system `L_n(a,b,m_1,...,m_r)` with general base points.
///
/// Stored canonically (multiplicities descending), so derived equality,
/// ordering and hashing all treat the points as unlabelled. The text form
/// `L6(0,4,3^11)` is produced by `Display` and parsed by `FromStr`, and is
/// also the serialized form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SystemSpec {
    n: u32,
    a: i64,
    b: i64,
    mults: Vec<i64>,
}

impl SystemSpec {
    pub fn new(n: u32, a: i64, b: i64, mut mults: Vec<i64>) -> Result<Self> {
        if let Some(&m) = mults.iter().find(|&&m| m < 0) {
            return Err(Error::InvalidInput(format!(
                "multiplicity {m} is negative; systems carry non-negative multiplicities"
            )));
        }
        mults.sort_unstable_by(|x, y| y.cmp(x));
        Ok(SystemSpec { n, a, b, mults })
    }

    /// `L_n(a, b, m^r)`.
    pub fn homogeneous(n: u32, a: i64, b: i64, m: i64, r: usize) -> Result<Self> {
        Self::new(n, a, b, vec![m; r])
    }

    /// Build from a class, clamping nothing: fails on a negative multiplicity.
    pub fn from_class(c: &BlowupClass) -> Result<Self> {
        Self::new(c.n(), c.a(), c.b(), c.mults.clone())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    pub fn r(&self) -> usize {
        self.mults.len()
    }

    pub fn base(&self) -> DivisorClass {
        DivisorClass::new(self.n, self.a, self.b)
    }

    pub fn class(&self) -> BlowupClass {
        BlowupClass {
            base: self.base(),
            mults: self.mults.clone(),
        }
    }

    pub fn max_mult(&self) -> i64 {
        self.mults.first().copied().unwrap_or(0)
    }

    /// The common multiplicity when every point has the same one.
    pub fn homogeneous_mult(&self) -> Option<i64> {
        let first = *self.mults.first()?;
        self.mults.iter().all(|&m| m == first).then_some(first)
    }

    /// Run-length groups `(m, count)` in descending `m`.
    pub fn runs(&self) -> Vec<(i64, usize)> {
        let mut runs: Vec<(i64, usize)> = Vec::new();
        for &m in &self.mults {
            match runs.last_mut() {
                Some((last, count)) if *last == m => *count += 1,
                _ => runs.push((m, 1)),
            }
        }
        runs
    }

    /// Total number of linear conditions `sum m_i(m_i+1)/2`.
    pub fn condition_count(&self) -> Result<i64> {
        self.mults
            .iter()
            .try_fold(0i64, |acc, &m| ck::add(acc, ck::conditions(m)?))
    }
}

impl PartialOrd for SystemSpec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SystemSpec {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.a, self.b, self.mults.len(), &self.mults).cmp(&(
            other.n,
            other.a,
            other.b,
            other.mults.len(),
            &other.mults,
        ))
    }
}

/// Virtual, expected and (when known) effective dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionTriple {
    pub v: i64,
    pub e: i64,
    pub l: Option<i64>,
}

impl DimensionTriple {
    pub fn new(v: i64, l: Option<i64>) -> Result<Self> {
        let e = v.max(-1);
        if let Some(l) = l {
            if l < e {
                return Err(Error::InvalidInput(format!(
                    "effective dimension {l} below expected dimension {e}"
                )));
            }
        }
        Ok(DimensionTriple { v, e, l })
    }

    pub fn of(s: &SystemSpec) -> Result<Self> {
        Self::new(virtual_dim(s)?, None)
    }

    /// `l - e`, the defect; `None` while `l` is unknown.
    pub fn deficiency(&self) -> Option<i64> {
        self.l.map(|l| l - self.e)
    }
}

/// `c1 . c2 = a1 b2 + a2 b1 + n b1 b2 - sum m1_i m2_i`.
pub fn intersect(c1: &BlowupClass, c2: &BlowupClass) -> Result<i64> {
    if c1.n() != c2.n() {
        return Err(mismatched(c1.n(), c2.n()));
    }
    let n = c1.base.n_i64();
    let mut total = ck::add(ck::mul(c1.a(), c2.b())?, ck::mul(c2.a(), c1.b())?)?;
    total = ck::add(total, ck::mul(n, ck::mul(c1.b(), c2.b())?)?)?;
    for (x, y) in c1.mults.iter().zip(&c2.mults) {
        total = ck::sub(total, ck::mul(*x, *y)?)?;
    }
    Ok(total)
}

/// `K_S = (n-2)F - 2H + sum E_i`, encoded with multiplicity `-1` per point.
pub fn canonical_class(n: u32, r: usize) -> BlowupClass {
    BlowupClass::new(n, i64::from(n) - 2, -2, vec![-1; r])
}

/// `h^0(aF + bH) = (b+1)(2a+2+nb)/2`, valid for `a >= 0`, `b >= -1`.
pub fn h0_nef(c: DivisorClass) -> Result<i64> {
    if c.a < 0 || c.b < -1 {
        return Err(Error::OutOfRange(format!(
            "h0 formula needs a >= 0 and b >= -1, got a = {}, b = {}",
            c.a, c.b
        )));
    }
    let inner = ck::add(ck::add(ck::mul(2, c.a)?, 2)?, ck::mul(c.n_i64(), c.b)?)?;
    Ok(ck::mul(ck::add(c.b, 1)?, inner)? / 2)
}

/// `h^0 - 1 - sum m_i(m_i+1)/2`, cross-checked against `(L^2 - L.K)/2`.
///
/// Accepts `b = -1` (the empty range of the `h^0` formula) because the
/// kernel systems of a degeneration reach it.
pub fn virtual_dim(s: &SystemSpec) -> Result<i64> {
    let h0 = h0_nef(s.base())?;
    let v = ck::sub(ck::sub(h0, 1)?, s.condition_count()?)?;
    let rr = s.class().riemann_roch()?;
    assert_eq!(v, rr, "virtual dimension disagrees with Riemann-Roch for {s}");
    Ok(v)
}

pub fn expected_dim(s: &SystemSpec) -> Result<i64> {
    Ok(virtual_dim(s)?.max(-1))
}

pub fn is_ample(c: DivisorClass) -> bool {
    c.a > 0 && c.b > 0
}

/// Split an effective class as `q Gamma_n + residual` with a base-point-free
/// residual (`a_1, b_1 >= 0`).
pub fn effective_decomposition(c: DivisorClass) -> Result<(i64, DivisorClass)> {
    if c.b < 0 {
        return Err(Error::NotEffective(format!("{c}: negative H coefficient")));
    }
    if c.a >= 0 {
        return Ok((0, c));
    }
    if c.n == 0 {
        return Err(Error::NotEffective(format!(
            "{c}: negative F coefficient on F_0"
        )));
    }
    let n = c.n_i64();
    let q = (-c.a + n - 1) / n;
    let residual = DivisorClass::new(c.n, ck::add(ck::mul(q, n)?, c.a)?, c.b - q);
    if residual.b < 0 {
        return Err(Error::NotEffective(format!(
            "{c}: removing {q} copies of the negative section leaves {residual}"
        )));
    }
    Ok((q, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(n: u32, a: i64, b: i64, mults: &[i64]) -> BlowupClass {
        BlowupClass::new(n, a, b, mults.to_vec())
    }

    #[test]
    fn intersect_worked_examples() {
        let l = cls(6, 0, 4, &[3; 11]);
        let e = cls(6, 2, 1, &[1; 11]);
        assert_eq!(intersect(&l, &e).unwrap(), -1);
        let l2 = cls(6, 4, 2, &[2; 11]);
        assert_eq!(intersect(&l2, &e).unwrap(), -2);
        let z = BlowupClass::zero(3, 4);
        assert_eq!(intersect(&z, &z).unwrap(), 0);
    }

    #[test]
    fn intersect_pads_with_zeros() {
        let c1 = cls(2, 1, 1, &[1, 1, 1]);
        let c2 = cls(2, 0, 1, &[1]);
        assert_eq!(intersect(&c1, &c2).unwrap(), 1 + 2 - 1);
        assert_eq!(intersect(&c2, &c1).unwrap(), 1 + 2 - 1);
    }

    #[test]
    fn intersect_rejects_mismatched_surfaces() {
        let err = intersect(&cls(1, 0, 1, &[]), &cls(2, 0, 1, &[])).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn intersect_overflow_is_loud() {
        let big = cls(1, i64::MAX / 2, 3, &[]);
        assert!(matches!(intersect(&big, &big), Err(Error::Overflow(_))));
    }

    #[test]
    fn canonical_class_values() {
        assert_eq!(canonical_class(0, 0), cls(0, -2, -2, &[]));
        assert_eq!(canonical_class(2, 0), cls(2, 0, -2, &[]));
        assert_eq!(canonical_class(6, 11), cls(6, 4, -2, &[-1; 11]));
    }

    #[test]
    fn canonical_class_reproduces_h0() {
        for n in 0..6u32 {
            for a in 0..8 {
                for b in 0..8 {
                    let c = cls(n, a, b, &[]);
                    let rr = c.riemann_roch().unwrap() + 1;
                    assert_eq!(rr, h0_nef(DivisorClass::new(n, a, b)).unwrap());
                }
            }
        }
    }

    #[test]
    fn h0_examples_and_range() {
        assert_eq!(h0_nef(DivisorClass::new(6, 0, 4)).unwrap(), 65);
        assert_eq!(h0_nef(DivisorClass::new(3, 0, 0)).unwrap(), 1);
        assert_eq!(h0_nef(DivisorClass::new(1, 0, 6)).unwrap(), 28);
        assert_eq!(h0_nef(DivisorClass::new(4, 5, -1)).unwrap(), 0);
        assert!(matches!(
            h0_nef(DivisorClass::new(1, -1, 2)),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            h0_nef(DivisorClass::new(1, 0, -2)),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn virtual_dim_examples() {
        let v = |n, a, b, m, r| virtual_dim(&SystemSpec::homogeneous(n, a, b, m, r).unwrap()).unwrap();
        assert_eq!(v(1, 0, 4, 2, 5), -1);
        assert_eq!(v(3, 7, 0, 3, 1), 1);
        assert_eq!(v(6, 0, 4, 3, 11), -2);
        assert_eq!(v(1, 0, 6, 3, 5), -3);
        assert_eq!(v(5, 1, 4, 3, 10), -1);
        let e = |n, a, b, m, r| expected_dim(&SystemSpec::homogeneous(n, a, b, m, r).unwrap()).unwrap();
        assert_eq!(e(1, 0, 6, 3, 5), -1);
        assert_eq!(e(4, 0, 0, 1, 0), 0);
        assert_eq!(e(5, 1, 4, 3, 10), -1);
    }

    #[test]
    fn ampleness() {
        assert!(is_ample(DivisorClass::new(3, 1, 1)));
        assert!(!is_ample(DivisorClass::new(3, 0, 1)));
        assert!(!is_ample(DivisorClass::new(3, -1, 5)));
    }

    #[test]
    fn effective_decomposition_examples() {
        assert_eq!(
            effective_decomposition(DivisorClass::new(6, -2, 3)).unwrap(),
            (1, DivisorClass::new(6, 4, 2))
        );
        assert_eq!(
            effective_decomposition(DivisorClass::new(2, 3, 2)).unwrap(),
            (0, DivisorClass::new(2, 3, 2))
        );
        assert_eq!(
            effective_decomposition(DivisorClass::new(4, -7, 3)).unwrap(),
            (2, DivisorClass::new(4, 1, 1))
        );
        assert!(matches!(
            effective_decomposition(DivisorClass::new(0, -1, 3)),
            Err(Error::NotEffective(_))
        ));
        assert!(matches!(
            effective_decomposition(DivisorClass::new(2, -7, 3)),
            Err(Error::NotEffective(_))
        ));
    }

    #[test]
    fn dimension_triple_chain() {
        let t = DimensionTriple::new(-3, Some(0)).unwrap();
        assert_eq!((t.e, t.deficiency()), (-1, Some(1)));
        assert!(DimensionTriple::new(2, Some(1)).is_err());
    }

    #[test]
    fn spec_is_canonical() {
        let s = SystemSpec::new(2, 1, 3, vec![1, 3, 2, 3]).unwrap();
        assert_eq!(s.mults(), &[3, 3, 2, 1]);
        assert_eq!(s.runs(), vec![(3, 2), (2, 1), (1, 1)]);
        assert_eq!(s.homogeneous_mult(), None);
        assert!(SystemSpec::new(2, 1, 3, vec![-1]).is_err());
    }

    #[test]
    fn blowup_canonical_eq_ignores_order_and_zeros() {
        let c1 = cls(3, 1, 2, &[0, 2, 1]);
        let c2 = cls(3, 1, 2, &[1, 2]);
        assert!(c1.canonical_eq(&c2));
        assert_ne!(c1, c2);
    }
}
