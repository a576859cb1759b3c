//! Truncated power series with polynomial coefficients.
//!
//! A series of order `N` knows its coefficients of `x^0 … x^N`; nothing is
//! assumed beyond that. Binary operations keep the smaller order.

mod bivariate;
pub mod graded;

use std::fmt;

use crate::algebra::{Poly, Rat, VarSet};
use crate::error::{Error, Result};

pub use bivariate::BSeries;

#[derive(Clone, PartialEq, Eq)]
pub struct PSeries {
    ring: VarSet,
    coeffs: Vec<Poly>,
    valuation: Option<usize>,
}

fn first_nonzero(c: &[Poly]) -> Option<usize> {
    c.iter().position(|p| !p.is_zero())
}

impl PSeries {
    /// Series of order `coeffs.len() - 1`.
    pub fn new(ring: &VarSet, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least one coefficient".into()));
        }
        for c in &coeffs {
            c.check_same_vars(&Poly::zero(ring))?;
        }
        Ok(Self::from_vec(ring, coeffs))
    }

    fn from_vec(ring: &VarSet, coeffs: Vec<Poly>) -> Self {
        let valuation = first_nonzero(&coeffs);
        PSeries { ring: ring.clone(), coeffs, valuation }
    }

    /// Pads (with exact zeros) or truncates a coefficient list to order `n`.
    pub fn from_coeffs(ring: &VarSet, mut coeffs: Vec<Poly>, n: usize) -> Self {
        coeffs.resize(n + 1, Poly::zero(ring));
        Self::from_vec(ring, coeffs)
    }

    pub fn from_rats(ring: &VarSet, c: &[Rat], n: usize) -> Self {
        Self::from_coeffs(ring, c.iter().map(|r| Poly::constant(ring, r.clone())).collect(), n)
    }

    pub fn zero(ring: &VarSet, n: usize) -> Self {
        Self::from_coeffs(ring, vec![], n)
    }

    pub fn constant(p: Poly, n: usize) -> Self {
        let ring = p.vars().clone();
        Self::from_coeffs(&ring, vec![p], n)
    }

    pub fn one(ring: &VarSet, n: usize) -> Self {
        Self::constant(Poly::one(ring), n)
    }

    /// The series variable itself.
    pub fn x(ring: &VarSet, n: usize) -> Self {
        Self::from_coeffs(ring, vec![Poly::zero(ring), Poly::one(ring)], n)
    }

    pub fn ring(&self) -> &VarSet {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the first nonzero coefficient, `None` if zero through the order.
    pub fn valuation(&self) -> Option<usize> {
        self.valuation
    }

    pub fn coeff(&self, k: usize) -> Option<&Poly> {
        self.coeffs.get(k)
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.order() {
            return Err(Error::Truncation { needed: n, have: self.order() });
        }
        Ok(Self::from_vec(&self.ring, self.coeffs[..=n].to_vec()))
    }

    /// `true` when both agree through degree `n` (both must know that far).
    pub fn agrees_with(&self, other: &PSeries, n: usize) -> bool {
        n <= self.order() && n <= other.order() && self.coeffs[..=n] == other.coeffs[..=n]
    }

    fn check(&self, other: &PSeries) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::VariableMismatch { left: self.ring.to_string(), right: other.ring.to_string() })
        }
    }

    pub fn add(&self, other: &PSeries) -> Result<PSeries> {
        self.check(other)?;
        let n = self.order().min(other.order());
        Ok(Self::from_vec(&self.ring, (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect()))
    }

    pub fn sub(&self, other: &PSeries) -> Result<PSeries> {
        self.check(other)?;
        let n = self.order().min(other.order());
        Ok(Self::from_vec(&self.ring, (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect()))
    }

    pub fn neg(&self) -> PSeries {
        Self::from_vec(&self.ring, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, r: &Rat) -> PSeries {
        Self::from_vec(&self.ring, self.coeffs.iter().map(|c| c.scale(r)).collect())
    }

    pub fn mul_poly(&self, p: &Poly) -> Result<PSeries> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.try_mul(p)?);
        }
        Ok(Self::from_vec(&self.ring, out))
    }

    pub fn mul(&self, other: &PSeries) -> Result<PSeries> {
        self.check(other)?;
        let n = self.order().min(other.order());
        Ok(Self::from_vec(&self.ring, graded::conv(&self.ring, &self.coeffs, &other.coeffs, n)))
    }

    pub fn reciprocal(&self) -> Result<PSeries> {
        Ok(Self::from_vec(&self.ring, graded::reciprocal(&self.ring, &self.coeffs, self.order())?))
    }

    pub fn div(&self, other: &PSeries) -> Result<PSeries> {
        self.mul(&other.reciprocal()?)
    }

    pub fn differentiate(&self) -> Result<PSeries> {
        if self.order() == 0 {
            return Err(Error::Truncation { needed: 1, have: 0 });
        }
        Ok(Self::from_vec(
            &self.ring,
            (1..self.coeffs.len()).map(|k| self.coeffs[k].scale(&Rat::from_int(k as i64))).collect(),
        ))
    }

    /// `∫₀ˣ s`; the order grows by one.
    pub fn integrate_from_zero(&self) -> PSeries {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(Poly::zero(&self.ring));
        for (k, p) in self.coeffs.iter().enumerate() {
            c.push(p.scale(&Rat::new(1, k as i64 + 1)));
        }
        Self::from_vec(&self.ring, c)
    }

    /// Multiplies by `x^k`; the order grows by `k`.
    pub fn shift_up(&self, k: usize) -> PSeries {
        let mut c = vec![Poly::zero(&self.ring); k];
        c.extend(self.coeffs.iter().cloned());
        Self::from_vec(&self.ring, c)
    }

    /// Divides by `x^k`; requires valuation ≥ k.
    pub fn shift_down(&self, k: usize) -> Result<PSeries> {
        if self.coeffs[..k.min(self.coeffs.len())].iter().any(|c| !c.is_zero()) {
            return Err(Error::Valuation {
                expected: format!(">= {k}"),
                found: format!("{:?}", self.valuation),
            });
        }
        if k > self.order() {
            return Err(Error::Truncation { needed: k, have: self.order() });
        }
        Ok(Self::from_vec(&self.ring, self.coeffs[k..].to_vec()))
    }

    /// `s(t(x))`; requires `t(0) = 0`.
    pub fn compose(&self, t: &PSeries) -> Result<PSeries> {
        self.check(t)?;
        if !t.coeffs[0].is_zero() {
            return Err(Error::Valuation { expected: ">= 1".into(), found: "0".into() });
        }
        let n = self.order().min(t.order());
        let mut powers: Vec<Vec<Poly>> = vec![PSeries::one(&self.ring, n).coeffs];
        for k in 1..=n {
            if self.coeffs[k..=n].iter().all(Poly::is_zero) {
                break;
            }
            let next = graded::conv(&self.ring, &powers[k - 1], &t.coeffs[..=n], n);
            powers.push(next);
        }
        let one = Rat::one();
        let out: Vec<Poly> = (0..=n)
            .map(|d| {
                let triples: Vec<(&Poly, &Poly, Rat)> = (0..powers.len().min(d + 1))
                    .filter(|&k| !self.coeffs[k].is_zero() && !powers[k][d].is_zero())
                    .map(|k| (&self.coeffs[k], &powers[k][d], one.clone()))
                    .collect();
                graded::sum_products(&self.ring, &triples)
            })
            .collect();
        Ok(Self::from_vec(&self.ring, out))
    }

    /// The series `h` with `h∘t = self`, i.e. `self∘t⁻¹`, by a triangular solve
    /// against the powers of `t`; requires `t = x + O(x²)`.
    pub fn compose_inverse(&self, t: &PSeries) -> Result<PSeries> {
        self.check(t)?;
        if t.valuation != Some(1) || !t.coeffs[1].is_one() {
            return Err(Error::Valuation { expected: "t = x + O(x^2)".into(), found: format!("{:?}", t.valuation) });
        }
        let n = self.order().min(t.order());
        let mut powers: Vec<Vec<Poly>> = vec![PSeries::one(&self.ring, n).coeffs, t.coeffs[..=n].to_vec()];
        for k in 2..=n {
            let next = graded::conv(&self.ring, &powers[k - 1], &t.coeffs[..=n], n);
            powers.push(next);
        }
        let one = Rat::one();
        let minus = -&one;
        let mut h: Vec<Poly> = Vec::with_capacity(n + 1);
        for d in 0..=n {
            let mut triples: Vec<(&Poly, &Poly, Rat)> = vec![(&self.coeffs[d], &powers[0][0], one.clone())];
            for (k, hk) in h.iter().enumerate().skip(1) {
                if !hk.is_zero() && !powers[k][d].is_zero() {
                    triples.push((hk, &powers[k][d], minus.clone()));
                }
            }
            h.push(graded::sum_products(&self.ring, &triples));
        }
        Ok(Self::from_vec(&self.ring, h))
    }

    pub fn exp(&self) -> Result<PSeries> {
        Ok(Self::from_vec(&self.ring, graded::exp(&self.ring, &self.coeffs, self.order())?))
    }

    pub fn log(&self) -> Result<PSeries> {
        Ok(Self::from_vec(&self.ring, graded::log(&self.ring, &self.coeffs, self.order())?))
    }

    /// `s^alpha` for a series whose constant term is a number with an exact rational `alpha` power.
    pub fn pow_rat(&self, alpha: &Rat) -> Result<PSeries> {
        let c = self.coeffs[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::NotInvertible("power: constant term must be a nonzero number".into()))?;
        let p0 = rat_power(&c, alpha)
            .ok_or_else(|| Error::Expansion(format!("({c})^({alpha}) is not rational")))?;
        Ok(Self::from_vec(&self.ring, graded::power(&self.ring, &self.coeffs, alpha, p0, self.order())?))
    }

    /// Compositional inverse; requires valuation 1 with a numeric linear coefficient.
    pub fn revert(&self) -> Result<PSeries> {
        if self.valuation != Some(1) {
            return Err(Error::Valuation { expected: "1".into(), found: format!("{:?}", self.valuation) });
        }
        let lin = self.coeffs[1]
            .as_constant()
            .ok_or_else(|| Error::NotInvertible("linear coefficient is not a number".into()))?;
        let n = self.order();
        // Lagrange inversion: [x^k] r = (1/k) [w^{k-1}] q^k with q = w / s(w)
        let q = self.shift_down(1)?.reciprocal()?;
        let q0 = lin.recip();
        let mut r = vec![Poly::zero(&self.ring)];
        for k in 1..=n {
            let pk = graded::power(&self.ring, &q.coeffs[..k], &Rat::from_int(k as i64), q0.pow(k as u32), k - 1)?;
            r.push(pk[k - 1].scale(&Rat::new(1, k as i64)));
        }
        Ok(Self::from_vec(&self.ring, r))
    }

    /// The square root `x·(…)` of a series with valuation 2 and a square numeric leading coefficient.
    pub fn sqrt_valuation2(&self) -> Result<PSeries> {
        if self.valuation != Some(2) {
            return Err(Error::Valuation { expected: "2".into(), found: format!("{:?}", self.valuation) });
        }
        let lead = self.coeffs[2].as_constant().filter(|c| c.signum() > 0).ok_or_else(|| {
            Error::NotCenterCandidate(format!("leading coefficient {} is not a positive number", self.coeffs[2]))
        })?;
        let root = lead
            .root_exact(2)
            .ok_or_else(|| Error::Expansion(format!("leading coefficient {lead} is not a rational square")))?;
        let u = self.shift_down(2)?;
        let p = graded::power(&self.ring, &u.coeffs, &Rat::new(1, 2), root, u.order())?;
        Ok(Self::from_vec(&self.ring, p).shift_up(1))
    }

    /// Applies `f` to every coefficient (for example a parameter specialization).
    pub fn map_coeffs(&self, ring: &VarSet, f: impl Fn(&Poly) -> Result<Poly>) -> Result<PSeries> {
        let c: Result<Vec<Poly>> = self.coeffs.iter().map(f).collect();
        PSeries::new(ring, c?)
    }
}

/// `c^alpha` when it is rational.
pub fn rat_power(c: &Rat, alpha: &Rat) -> Option<Rat> {
    let num = alpha.numer();
    let den = alpha.denom();
    let p: i64 = num.try_into().ok()?;
    let q: u32 = den.try_into().ok()?;
    c.root_exact(q).map(|r| r.powi(p))
}

impl fmt::Display for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let xk = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            parts.push(match (c.len(), xk.is_empty()) {
                (_, true) => format!("({c})"),
                _ if c.is_one() => xk,
                _ => format!("({c})*{xk}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(x^{})", parts.join(" + "), self.order() + 1)
    }
}

impl fmt::Debug for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PSeries[{:?}]({self})", self.ring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn empty() -> VarSet {
        VarSet::empty()
    }

    fn rs(c: &[i64], n: usize) -> PSeries {
        PSeries::from_rats(&empty(), &c.iter().map(|&v| Rat::from_int(v)).collect::<Vec<_>>(), n)
    }

    fn nums(s: &PSeries) -> Vec<Rat> {
        s.coeffs().iter().map(|c| c.as_constant().unwrap()).collect()
    }

    #[test]
    fn integrate_and_geometric() {
        let one = PSeries::one(&empty(), 6);
        assert_eq!(one.integrate_from_zero(), PSeries::x(&empty(), 7));
        let g = rs(&[1, -1], 8).reciprocal().unwrap();
        assert_eq!(nums(&g), vec![Rat::one(); 9]);
        assert!(rs(&[0, 1], 4).reciprocal().is_err());
    }

    #[test]
    fn exp_and_log_basics() {
        assert_eq!(PSeries::zero(&empty(), 5).exp().unwrap(), PSeries::one(&empty(), 5));
        let l = rs(&[1, 1], 5).log().unwrap();
        let expected: Vec<Rat> =
            [0, 1, -2, 3, -4, 5].iter().map(|&k: &i64| if k == 0 { Rat::zero() } else { Rat::new(k.signum(), k.abs()) }).collect();
        assert_eq!(nums(&l), expected);
        assert!(rs(&[2, 1], 5).log().is_err());
        assert!(rs(&[1, 1], 5).exp().is_err());
    }

    #[test]
    fn reversion_examples() {
        let x = PSeries::x(&empty(), 10);
        assert_eq!(x.revert().unwrap(), x);
        let r = rs(&[0, 1, 1], 10).revert().unwrap();
        assert_eq!(&nums(&r)[..5], &[0, 1, -1, 2, -5].map(Rat::from_int)[..]);
        assert!(rs(&[0, 1, 1], 10).compose(&r).unwrap().agrees_with(&x, 10));
        assert!(rs(&[0, 0, 1], 10).revert().is_err());
    }

    #[test]
    fn square_root_examples() {
        let x2 = rs(&[0, 0, 1], 12);
        assert_eq!(x2.sqrt_valuation2().unwrap(), PSeries::x(&empty(), 11));
        let s = rs(&[0, 0, 1, 1], 12);
        let r = s.sqrt_valuation2().unwrap();
        assert_eq!(&nums(&r)[..4], &[Rat::zero(), Rat::one(), Rat::new(1, 2), Rat::new(-1, 8)]);
        assert!(r.mul(&r).unwrap().agrees_with(&s, 11));
        assert!(rs(&[0, 0, 0, 1], 12).sqrt_valuation2().is_err());
        assert!(rs(&[0, 0, -1], 12).sqrt_valuation2().is_err());
    }

    #[test]
    fn exp_of_log_power_with_parameter() {
        // exp(F)·exp(−F) = 1 for F = −(4/3)·log(1 − b·x³)
        let ring = VarSet::new(["b"]).unwrap();
        let b = Poly::var(&ring, "b").unwrap();
        let n = 24;
        let mut c = vec![Poly::one(&ring), Poly::zero(&ring), Poly::zero(&ring), -&b];
        c.resize(n + 1, Poly::zero(&ring));
        let base = PSeries::new(&ring, c).unwrap();
        let f = base.log().unwrap().scale(&Rat::new(-4, 3));
        let prod = f.exp().unwrap().mul(&f.neg().exp().unwrap()).unwrap();
        assert_eq!(prod, PSeries::one(&ring, n));
        assert_eq!(f.exp().unwrap(), base.pow_rat(&Rat::new(-4, 3)).unwrap());
    }

    fn arb_series() -> impl Strategy<Value = PSeries> {
        (proptest::collection::vec((-9i64..10, 1i64..5), 2..10), 1i64..5, prop::bool::ANY).prop_map(|(c, l, neg)| {
            let ring = VarSet::empty();
            let mut coeffs: Vec<Rat> = c.into_iter().map(|(n, d)| Rat::new(n, d)).collect();
            coeffs[0] = Rat::zero();
            coeffs[1] = Rat::new(if neg { -l } else { l }, 1);
            PSeries::from_rats(&ring, &coeffs, 10)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn reversion_is_two_sided(s in arb_series()) {
            let r = s.revert().unwrap();
            let id = PSeries::x(s.ring(), 10);
            prop_assert!(s.compose(&r).unwrap().agrees_with(&id, 10));
            prop_assert!(r.compose(&s).unwrap().agrees_with(&id, 10));
        }

        #[test]
        fn composition_inverse_matches_reversion(s in arb_series(), d in arb_series()) {
            let t = s.scale(&s.coeff(1).unwrap().as_constant().unwrap().recip());
            let h = d.compose_inverse(&t).unwrap();
            prop_assert_eq!(&h, &d.compose(&t.revert().unwrap()).unwrap());
            prop_assert!(h.compose(&t).unwrap().agrees_with(&d, 10));
        }

        #[test]
        fn square_root_squares_back(s in arb_series()) {
            // x²·(1 + x·t(x)) has a square leading coefficient
            let t = s.shift_down(1).unwrap();
            let u = t.scale(&t.coeff(0).unwrap().as_constant().unwrap().recip()).shift_up(2);
            let r = u.sqrt_valuation2().unwrap();
            let sq = r.mul(&r).unwrap();
            prop_assert!(sq.agrees_with(&u, r.order()));
        }

        #[test]
        fn calculus_and_exp_log(s in arb_series()) {
            let back = s.integrate_from_zero().differentiate().unwrap();
            prop_assert!(back.agrees_with(&s, s.order()));
            let e = s.exp().unwrap();
            prop_assert!(e.log().unwrap().agrees_with(&s, s.order()));
            let unit = s.add(&PSeries::one(s.ring(), s.order())).unwrap();
            prop_assert!(unit.log().unwrap().exp().unwrap().agrees_with(&unit, s.order()));
        }

        #[test]
        fn higher_order_reproduces_lower(s in arb_series()) {
            let lo = s.truncate(6).unwrap();
            prop_assert!(lo.revert().unwrap().agrees_with(&s.revert().unwrap(), 6));
            prop_assert!(lo.exp().unwrap().agrees_with(&s.exp().unwrap(), 6));
        }
    }
}
