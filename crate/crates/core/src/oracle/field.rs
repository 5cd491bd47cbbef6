//! Arithmetic modulo an odd prime `p < 2^63`, in Montgomery form.

use crate::error::{Error, Result};

/// `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    p: u64,
    /// `-p^{-1} mod 2^64`.
    neg_inv: u64,
    /// `2^128 mod p`.
    r2: u64,
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 || p >= 1 << 63 {
            return Err(Error::InvalidInput(format!(
                "modulus {p} must be an odd prime below 2^63"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r2 = ((u128::MAX % u128::from(p) + 1) % u128::from(p)) as u64;
        Ok(Field {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + u128::from(m) * u128::from(self.p)) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// Into Montgomery form.
    #[inline]
    pub fn enter(&self, x: u64) -> u64 {
        self.redc(u128::from(x % self.p) * u128::from(self.r2))
    }

    /// Out of Montgomery form.
    #[inline]
    pub fn leave(&self, x: u64) -> u64 {
        self.redc(u128::from(x))
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        self.redc(u128::from(x) * u128::from(y))
    }

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        let s = x + y;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        if x >= y {
            x - y
        } else {
            x + self.p - y
        }
    }

    pub fn one(&self) -> u64 {
        self.enter(1)
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element (Montgomery form in and out).
    pub fn inv(&self, x: u64) -> u64 {
        debug_assert!(x != 0);
        self.pow(x, self.p - 2)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(m)) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime strictly below `x`.
pub fn prev_prime(x: u64) -> Option<u64> {
    (2..x).rev().find(|&c| is_prime(c))
}

/// Primes used in turn when a verdict needs confirmation or escalation:
/// the default, then the largest primes below `2^62`, `2^60`, `2^58`, ...
pub fn prime_ladder(first: u64, count: usize) -> Vec<u64> {
    let mut out = vec![first];
    let mut bit = 62;
    while out.len() < count && bit > 31 {
        let p = prev_prime(1 << bit).expect("primes exist below 2^bit");
        if !out.contains(&p) {
            out.push(p);
        }
        bit -= 2;
    }
    out
}
