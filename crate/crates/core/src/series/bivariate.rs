//! Series in two state variables, truncated by total degree.
//!
//! Component `d` is a polynomial, homogeneous of degree `d` in the two state
//! variables, whose coefficients may involve the remaining ring variables.

use std::fmt;

use super::graded;
use crate::algebra::{Monomial, Poly, Rat, VarSet};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct BSeries {
    ring: VarSet,
    x: usize,
    y: usize,
    comps: Vec<Poly>,
}

impl BSeries {
    /// Splits a polynomial into homogeneous components through degree `n`.
    pub fn from_poly(p: &Poly, x: usize, y: usize, n: usize) -> Self {
        let ring = p.vars().clone();
        let mut parts: Vec<Vec<(Monomial, Rat)>> = vec![Vec::new(); n + 1];
        for (m, c) in p.terms() {
            let d = (m.exp(x) + m.exp(y)) as usize;
            if d <= n {
                parts[d].push((*m, c.clone()));
            }
        }
        let comps = parts.into_iter().map(|t| Poly::from_terms(&ring, t)).collect();
        BSeries { ring, x, y, comps }
    }

    pub fn constant(ring: &VarSet, x: usize, y: usize, c: Poly, n: usize) -> Self {
        let mut comps = vec![Poly::zero(ring); n + 1];
        comps[0] = c;
        BSeries { ring: ring.clone(), x, y, comps }
    }

    pub fn ring(&self) -> &VarSet {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn component(&self, d: usize) -> Option<&Poly> {
        self.comps.get(d)
    }

    /// Lowest degree with a nonzero component.
    pub fn valuation(&self) -> Option<usize> {
        self.comps.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    fn like(&self, comps: Vec<Poly>) -> BSeries {
        BSeries { ring: self.ring.clone(), x: self.x, y: self.y, comps }
    }

    fn check(&self, o: &BSeries) -> Result<()> {
        if self.ring != o.ring || self.x != o.x || self.y != o.y {
            return Err(Error::VariableMismatch { left: self.ring.to_string(), right: o.ring.to_string() });
        }
        Ok(())
    }

    pub fn truncate(&self, n: usize) -> BSeries {
        self.like(self.comps[..=n.min(self.order())].to_vec())
    }

    pub fn add(&self, o: &BSeries) -> Result<BSeries> {
        self.check(o)?;
        let n = self.order().min(o.order());
        Ok(self.like((0..=n).map(|d| &self.comps[d] + &o.comps[d]).collect()))
    }

    pub fn sub(&self, o: &BSeries) -> Result<BSeries> {
        self.check(o)?;
        let n = self.order().min(o.order());
        Ok(self.like((0..=n).map(|d| &self.comps[d] - &o.comps[d]).collect()))
    }

    pub fn scale(&self, r: &Rat) -> BSeries {
        self.like(self.comps.iter().map(|c| c.scale(r)).collect())
    }

    pub fn mul(&self, o: &BSeries) -> Result<BSeries> {
        self.check(o)?;
        let n = self.order().min(o.order());
        Ok(self.like(graded::conv(&self.ring, &self.comps, &o.comps, n)))
    }

    pub fn reciprocal(&self) -> Result<BSeries> {
        Ok(self.like(graded::reciprocal(&self.ring, &self.comps, self.order())?))
    }

    /// `s^alpha`, given the value `p0 = s(0)^alpha` of the constant term.
    pub fn pow_with_head(&self, alpha: &Rat, p0: Rat) -> Result<BSeries> {
        Ok(self.like(graded::power(&self.ring, &self.comps, alpha, p0, self.order())?))
    }

    /// Partial derivative in ring variable `var`; the order drops by one
    /// when `var` is a state variable.
    pub fn partial(&self, var: usize) -> Result<BSeries> {
        if var == self.x || var == self.y {
            if self.order() == 0 {
                return Err(Error::Truncation { needed: 1, have: 0 });
            }
            Ok(self.like(self.comps[1..].iter().map(|c| c.derivative(var)).collect()))
        } else {
            Ok(self.like(self.comps.iter().map(|c| c.derivative(var)).collect()))
        }
    }

    /// Recombines the components into one polynomial.
    pub fn to_poly(&self) -> Poly {
        self.comps.iter().fold(Poly::zero(&self.ring), |acc, c| &acc + c)
    }
}

impl fmt::Debug for BSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BSeries({} + O({}))", self.to_poly(), self.order() + 1)
    }
}
