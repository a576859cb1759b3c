//! Elements `a + b·√d` of a real quadratic field ℚ(√d).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Coefficient;
use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rat,
    b: Rat,
    d: u64,
}

fn is_square_free(d: u64) -> bool {
    let mut k = 2u64;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl QuadExt {
    pub fn new(a: Rat, b: Rat, d: u64) -> Result<Self> {
        if d < 2 || !is_square_free(d) {
            return Err(Error::InvalidArgument(format!("{d} is not a square-free integer > 1")));
        }
        Ok(QuadExt { a, b, d })
    }

    pub fn rational(a: Rat, d: u64) -> Result<Self> {
        Self::new(a, Rat::zero(), d)
    }

    pub fn sqrt_d(d: u64) -> Result<Self> {
        Self::new(Rat::zero(), Rat::one(), d)
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn conjugate(&self) -> QuadExt {
        QuadExt { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// `a² − d·b²`.
    pub fn norm(&self) -> Rat {
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * &Rat::from_int(self.d as i64))
    }

    pub fn recip(&self) -> Result<QuadExt> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::NotInvertible("zero in a quadratic field".into()));
        }
        let inv = n.recip();
        Ok(QuadExt { a: &self.a * &inv, b: -&(&self.b * &inv), d: self.d })
    }

    fn check(&self, other: &QuadExt) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("√{} and √{} live in different fields", self.d, other.d)))
        }
    }

    pub fn try_add(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check(other)?;
        Ok(QuadExt { a: &self.a + &other.a, b: &self.b + &other.b, d: self.d })
    }

    pub fn try_mul(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check(other)?;
        let dd = Rat::from_int(self.d as i64);
        Ok(QuadExt {
            a: &(&self.a * &other.a) + &(&(&self.b * &other.b) * &dd),
            b: &(&self.a * &other.b) + &(&self.b * &other.a),
            d: self.d,
        })
    }

    pub fn scale(&self, r: &Rat) -> QuadExt {
        QuadExt { a: &self.a * r, b: &self.b * r, d: self.d }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }

    /// Sign of the real number `a + b√d`, decided exactly.
    pub fn signum(&self) -> i32 {
        let (sa, sb) = (self.a.signum(), self.b.signum());
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        // opposite signs: compare a² with d·b²
        let lhs = &self.a * &self.a;
        let rhs = &(&self.b * &self.b) * &Rat::from_int(self.d as i64);
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        self.try_add(rhs).expect("quadratic field mismatch")
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        self.try_mul(rhs).expect("quadratic field mismatch")
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -&self.a, b: -&self.b, d: self.d }
    }
}

impl Coefficient for QuadExt {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(r)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = format!("sqrt({})", self.d);
        let b_part = if self.b.is_one() {
            root
        } else if (-&self.b).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{b_part}")
        } else if b_part.starts_with('-') {
            write!(f, "{} - {}", self.a, &b_part[1..])
        } else {
            write!(f, "{} + {}", self.a, b_part)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadExt({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Poly, VarSet};
    use proptest::prelude::*;

    #[test]
    fn field_operations() {
        let r = QuadExt::sqrt_d(33).unwrap();
        assert_eq!(&r * &r, QuadExt::rational(Rat::from_int(33), 33).unwrap());
        let x = QuadExt::new(Rat::new(9, 48), Rat::new(-1, 48), 33).unwrap();
        let one = &x * &x.recip().unwrap();
        assert_eq!(one, QuadExt::rational(Rat::one(), 33).unwrap());
        assert!(QuadExt::new(Rat::one(), Rat::one(), 12).is_err());
        assert!(QuadExt::sqrt_d(2).unwrap().try_add(&QuadExt::sqrt_d(3).unwrap()).is_err());
        assert_eq!(x.to_string(), "3/16 - 1/48*sqrt(33)");
        assert_eq!(x.signum(), 1);
        assert_eq!(QuadExt::new(Rat::from_int(5), Rat::from_int(-1), 33).unwrap().signum(), -1);
    }

    #[test]
    fn substitution_into_polynomial() {
        let v = VarSet::new(["t"]).unwrap();
        let p = Poly::parse("t^2 - 2", &v).unwrap();
        let root = QuadExt::sqrt_d(2).unwrap();
        let one = QuadExt::rational(Rat::one(), 2).unwrap();
        assert!(p.eval(&[root], &one).is_zero());
    }

    proptest! {
        #[test]
        fn conjugate_product_is_norm(a in -50i64..50, b in -50i64..50, da in 1i64..9, db in 1i64..9,
                                     d in prop::sample::select(vec![2u64, 3, 5, 6, 7, 33, 3297])) {
            let x = QuadExt::new(Rat::new(a, da), Rat::new(b, db), d).unwrap();
            let p = &x * &x.conjugate();
            prop_assert_eq!(p.as_rational().cloned(), Some(x.norm()));
            let expected = &Rat::new(a * a, da * da) - &(&Rat::new(b * b, db * db) * &Rat::from_int(d as i64));
            prop_assert_eq!(x.norm(), expected);
        }
    }
}
