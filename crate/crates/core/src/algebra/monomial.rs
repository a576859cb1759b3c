//! Exponent vectors packed into a single `u128`: 16 slots of 8 bits each.
//!
//! Slot 0 occupies the most significant byte, so comparing the packed words
//! numerically is lexicographic comparison with variable 0 largest.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 16;

const HIGH_BITS: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;
const LOW_BITS: u128 = 0x0101_0101_0101_0101_0101_0101_0101_0101;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u128);

#[inline]
fn shift(i: usize) -> u32 {
    debug_assert!(i < MAX_VARS);
    (8 * (MAX_VARS - 1 - i)) as u32
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables(exps.len()));
        }
        let mut w = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            if e > 255 {
                return Err(Error::ExponentOverflow);
            }
            w |= (e as u128) << shift(i);
        }
        Ok(Monomial(w))
    }

    pub fn var(i: usize, e: u32) -> Result<Self> {
        if i >= MAX_VARS {
            return Err(Error::TooManyVariables(i + 1));
        }
        if e > 255 {
            return Err(Error::ExponentOverflow);
        }
        Ok(Monomial((e as u128) << shift(i)))
    }

    #[inline]
    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> shift(i)) & 0xff) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exp(i)).collect()
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn total_degree(self) -> u32 {
        (0..MAX_VARS).map(|i| self.exp(i)).sum()
    }

    pub fn weighted_degree(self, weights: &[u32]) -> u64 {
        weights
            .iter()
            .enumerate()
            .map(|(i, &w)| w as u64 * self.exp(i) as u64)
            .sum()
    }

    /// Product; errors when some exponent would exceed 255.
    #[inline]
    pub fn try_mul(self, other: Monomial) -> Result<Monomial> {
        if (self.0 | other.0) & HIGH_BITS == 0 {
            return Ok(Monomial(self.0 + other.0));
        }
        let mut w = 0u128;
        for i in 0..MAX_VARS {
            let e = self.exp(i) + other.exp(i);
            if e > 255 {
                return Err(Error::ExponentOverflow);
            }
            w |= (e as u128) << shift(i);
        }
        Ok(Monomial(w))
    }

    /// Product, panicking on exponent overflow.
    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        self.try_mul(other).expect("monomial exponent overflow")
    }

    /// `true` when `self` divides `other`.
    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        if (self.0 | other.0) & HIGH_BITS != 0 {
            return (0..MAX_VARS).all(|i| self.exp(i) <= other.exp(i));
        }
        // all bytes < 128: (other_b + 128) - self_b never borrows across bytes,
        // and keeps the byte's high bit exactly when other_b >= self_b
        let d = (other.0 | HIGH_BITS) - self.0;
        (d & HIGH_BITS) == HIGH_BITS
    }

    /// `other / self`, assuming `self` divides `other`.
    #[inline]
    pub fn div(self, other: Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(other.0 - self.0)
    }

    pub fn checked_quotient(self, divisor: Monomial) -> Option<Monomial> {
        if divisor.divides(self) {
            Some(Monomial(self.0 - divisor.0))
        } else {
            None
        }
    }

    pub fn lcm(self, other: Monomial) -> Monomial {
        let mut w = 0u128;
        for i in 0..MAX_VARS {
            w |= (self.exp(i).max(other.exp(i)) as u128) << shift(i);
        }
        Monomial(w)
    }

    pub fn gcd(self, other: Monomial) -> Monomial {
        let mut w = 0u128;
        for i in 0..MAX_VARS {
            w |= (self.exp(i).min(other.exp(i)) as u128) << shift(i);
        }
        Monomial(w)
    }

    pub fn is_coprime(self, other: Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) == 0 || other.exp(i) == 0)
    }

    pub fn with_exp(self, i: usize, e: u32) -> Monomial {
        assert!(e <= 255, "monomial exponent overflow");
        let s = shift(i);
        Monomial((self.0 & !(0xffu128 << s)) | ((e as u128) << s))
    }

    /// Drops variable `i` (its exponent becomes zero).
    pub fn without(self, i: usize) -> Monomial {
        self.with_exp(i, 0)
    }

    pub fn raw(self) -> u128 {
        self.0
    }

    /// Number of variables with a positive exponent.
    pub fn support_size(self) -> usize {
        let nonzero = (self.0 | (self.0 >> 1) | (self.0 >> 2) | (self.0 >> 3)
            | (self.0 >> 4) | (self.0 >> 5) | (self.0 >> 6) | (self.0 >> 7))
            & LOW_BITS;
        nonzero.count_ones() as usize
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = (0..MAX_VARS).rev().find(|&i| self.exp(i) > 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", self.exponents(last))
    }
}
