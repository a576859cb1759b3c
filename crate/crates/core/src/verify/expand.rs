//! Expressions with rational powers, expanded as bivariate series at the origin.
//!
//! A value is kept as `(−1)^phase · Π bᵢ^eᵢ · s(x, y)`: constants that are not
//! rational stay symbolic, so `(3 + 4a·x³)^(4/3)` becomes `3^(1/3)·3·(1 + …)`.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::algebra::{Expr, Poly, Rat, VarSet};
use crate::error::{Error, Result};
use crate::series::BSeries;

/// A series times a constant `(−1)^phase · Π base^exp` with `0 < exp < 1`.
#[derive(Clone, Debug)]
pub struct Scaled {
    pub radicals: BTreeMap<Rat, Rat>,
    /// In `[0, 2)`.
    pub phase: Rat,
    pub series: BSeries,
}

fn floor(r: &Rat) -> i64 {
    let q = r.numer().div_floor(&r.denom());
    i64::try_from(q).expect("small exponent")
}

impl Scaled {
    fn plain(series: BSeries) -> Scaled {
        Scaled { radicals: BTreeMap::new(), phase: Rat::zero(), series }
    }

    /// The constant factor is rational (and folded into the series).
    pub fn is_plain(&self) -> bool {
        self.radicals.is_empty() && self.phase.is_zero()
    }

    fn normalize(mut self) -> Scaled {
        let mut factor = Rat::one();
        let mut keep = BTreeMap::new();
        for (b, e) in std::mem::take(&mut self.radicals) {
            let k = floor(&e);
            factor = &factor * &b.powi(k);
            let frac = &e - &Rat::from_int(k);
            if frac.is_zero() {
                continue;
            }
            match b.root_exact(frac.denom().try_into().unwrap_or(u32::MAX)) {
                Some(r) => factor = &factor * &r.powi(frac.numer().try_into().expect("small exponent")),
                None => {
                    keep.insert(b, frac);
                }
            }
        }
        let k = floor(&self.phase);
        if k % 2 != 0 {
            factor = -factor;
        }
        self.phase = &self.phase - &Rat::from_int(k);
        self.radicals = keep;
        if !factor.is_one() {
            self.series = self.series.scale(&factor);
        }
        self
    }

    fn same_constant(&self, o: &Scaled) -> bool {
        self.radicals == o.radicals && self.phase == o.phase
    }

    fn mul(&self, o: &Scaled) -> Result<Scaled> {
        let mut radicals = self.radicals.clone();
        for (b, e) in &o.radicals {
            let slot = radicals.entry(b.clone()).or_insert_with(Rat::zero);
            *slot = &*slot + e;
        }
        Ok(Scaled { radicals, phase: &self.phase + &o.phase, series: self.series.mul(&o.series)? }.normalize())
    }

    fn recip(&self) -> Result<Scaled> {
        let radicals = self.radicals.iter().map(|(b, e)| (b.clone(), -e)).collect();
        Ok(Scaled { radicals, phase: -&self.phase, series: self.series.reciprocal()? }.normalize())
    }

    fn add(&self, o: &Scaled) -> Result<Scaled> {
        if self.series.is_zero() {
            return Ok(o.clone());
        }
        if o.series.is_zero() {
            return Ok(self.clone());
        }
        if !self.same_constant(o) {
            return Err(Error::Expansion("sum of terms with different irrational constant factors".into()));
        }
        Ok(Scaled { series: self.series.add(&o.series)?, ..self.clone() })
    }

    fn neg(&self) -> Scaled {
        Scaled { series: self.series.scale(&Rat::from_int(-1)), ..self.clone() }
    }

    fn powi(&self, k: i64) -> Result<Scaled> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut acc = Scaled::plain(one_like(&self.series));
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    fn pow(&self, alpha: &Rat) -> Result<Scaled> {
        if alpha.is_integer() {
            return self.powi(alpha.to_i64().ok_or_else(|| Error::Expansion("exponent too large".into()))?);
        }
        let head = self.series.component(0).and_then(Poly::as_constant).filter(|c| !c.is_zero()).ok_or_else(|| {
            Error::Expansion("a fractional power needs a nonzero numeric value at the origin".into())
        })?;
        let unit = self.series.scale(&head.recip()).pow_with_head(alpha, Rat::one())?;
        let mut radicals: BTreeMap<Rat, Rat> = self.radicals.iter().map(|(b, e)| (b.clone(), e * alpha)).collect();
        let slot = radicals.entry(head.abs()).or_insert_with(Rat::zero);
        *slot = &*slot + alpha;
        let mut phase = &self.phase * alpha;
        if head.signum() < 0 {
            phase = &phase + alpha;
        }
        Ok(Scaled { radicals, phase, series: unit }.normalize())
    }
}

fn one_like(s: &BSeries) -> BSeries {
    BSeries::constant(s.ring(), 0, 1, Poly::one(s.ring()), s.order())
}

/// Expands `e` over `ring` (whose first two variables are `x`, `y`) through total degree `n`.
pub fn expand(e: &Expr, ring: &VarSet, n: usize) -> Result<Scaled> {
    Ok(match e {
        Expr::Num(r) => Scaled::plain(BSeries::constant(ring, 0, 1, Poly::constant(ring, r.clone()), n)),
        Expr::Var(v) => {
            let p = Poly::var(ring, v).map_err(|_| Error::UnboundVariable(v.clone()))?;
            Scaled::plain(BSeries::from_poly(&p, 0, 1, n))
        }
        Expr::Neg(a) => expand(a, ring, n)?.neg(),
        Expr::Add(a, b) => expand(a, ring, n)?.add(&expand(b, ring, n)?)?,
        Expr::Sub(a, b) => expand(a, ring, n)?.add(&expand(b, ring, n)?.neg())?,
        Expr::Mul(a, b) => expand(a, ring, n)?.mul(&expand(b, ring, n)?)?,
        Expr::Div(a, b) => expand(a, ring, n)?.mul(&expand(b, ring, n)?.recip()?)?,
        Expr::Pow(a, k) => expand(a, ring, n)?.pow(k)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> VarSet {
        VarSet::new(["x", "y", "a"]).unwrap()
    }

    #[test]
    fn rational_powers_fold_when_exact() {
        let r = ring();
        let s = expand(&Expr::parse("(4 + x)^(1/2)").unwrap(), &r, 3).unwrap();
        assert!(s.is_plain());
        assert_eq!(s.series.component(0).unwrap(), &Poly::constant(&r, Rat::from_int(2)));
        assert_eq!(s.series.component(1).unwrap(), &Poly::parse("x/4", &r).unwrap());
    }

    #[test]
    fn irrational_constants_stay_symbolic() {
        let r = ring();
        let s = expand(&Expr::parse("x/(3*(3 + 4*a*x^3)^(4/3))").unwrap(), &r, 4).unwrap();
        assert_eq!(s.radicals.get(&Rat::from_int(3)), Some(&Rat::new(2, 3)));
        assert_eq!(s.series.component(1).unwrap(), &Poly::parse("x/27", &r).unwrap());
        assert_eq!(s.series.component(4).unwrap(), &Poly::parse("-16/243*a*x^4", &r).unwrap());
        let neg = expand(&Expr::parse("(-1 + a*x^4)^(1/4)").unwrap(), &r, 4).unwrap();
        assert_eq!(neg.phase, Rat::new(1, 4));
        assert_eq!(neg.series.component(4).unwrap(), &Poly::parse("-a*x^4/4", &r).unwrap());
    }

    #[test]
    fn mixed_constants_do_not_add() {
        let r = ring();
        assert!(expand(&Expr::parse("(2 + x)^(1/2) + 1").unwrap(), &r, 3).is_err());
        assert!(expand(&Expr::parse("(x + y)^(1/2)").unwrap(), &r, 3).is_err());
        assert!(expand(&Expr::parse("z").unwrap(), &r, 3).is_err());
    }
}
