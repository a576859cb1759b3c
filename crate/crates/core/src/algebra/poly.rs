//! Sparse multivariate polynomials over ℚ in named variables.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::expr::Expr;
use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::rat::{content_parts, Rat};
use super::vars::VarSet;
use crate::error::{Error, Result};

/// Multiplicative hasher for packed monomials.
#[derive(Default, Clone, Copy)]
pub struct MonoHasher(u64);

impl Hasher for MonoHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
        }
    }
    fn write_u128(&mut self, v: u128) {
        let folded = (v as u64) ^ ((v >> 64) as u64).rotate_left(29);
        self.0 = (self.0 ^ folded).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        self.0 ^= self.0 >> 31;
    }
}

pub type MonoMap<V> = HashMap<Monomial, V, BuildHasherDefault<MonoHasher>>;

/// Values a polynomial can be evaluated at.
pub trait Coefficient: Clone {
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale_rat(&self, r: &Rat) -> Self;
}

impl Coefficient for Rat {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        self * r
    }
}

impl Coefficient for Poly {
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

/// A polynomial: terms sorted by packed monomial (descending), no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: VarSet,
    terms: Vec<(Monomial, Rat)>,
}

impl Poly {
    pub fn zero(vars: &VarSet) -> Self {
        Poly { vars: vars.clone(), terms: Vec::new() }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn constant(vars: &VarSet, c: Rat) -> Self {
        Self::monomial(vars, Monomial::ONE, c)
    }

    pub fn monomial(vars: &VarSet, m: Monomial, c: Rat) -> Self {
        let terms = if c.is_zero() { vec![] } else { vec![(m, c)] };
        Poly { vars: vars.clone(), terms }
    }

    pub fn var(vars: &VarSet, name: &str) -> Result<Self> {
        let i = vars.require(name)?;
        Ok(Self::var_index(vars, i))
    }

    pub fn var_index(vars: &VarSet, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        Self::monomial(vars, Monomial::var(i, 1).expect("index checked"), Rat::one())
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(vars: &VarSet, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut map: MonoMap<Rat> = MonoMap::default();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(acc) => *acc += &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::from_map(vars, map)
    }

    pub fn from_map(vars: &VarSet, map: MonoMap<Rat>) -> Self {
        let mut terms: Vec<(Monomial, Rat)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { vars: vars.clone(), terms }
    }

    /// Terms already sorted descending and free of zeros and duplicates.
    fn from_sorted(vars: &VarSet, terms: Vec<(Monomial, Rat)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(Monomial::ONE)
    }

    pub fn coeff(&self, m: Monomial) -> Rat {
        match self.terms.binary_search_by(|t| m.cmp(&t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn check_same_vars(&self, other: &Poly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch {
                left: self.vars.to_string(),
                right: other.vars.to_string(),
            })
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same_vars(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same_vars(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same_vars(other)?;
        let mut acc = MonoMap::default();
        mul_accumulate(&mut acc, self, other)?;
        Ok(Poly::from_map(&self.vars, acc))
    }

    fn merge(&self, other: &Poly, subtract: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, if subtract { -&b[j].1 } else { b[j].1.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if subtract { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            out.push((t.0, if subtract { -&t.1 } else { t.1.clone() }));
        }
        Poly::from_sorted(&self.vars, out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly::from_sorted(&self.vars, self.terms.iter().map(|(m, a)| (*m, a * c)).collect())
    }

    /// `self * c * m`.
    pub fn mul_term(&self, m: Monomial, c: &Rat) -> Result<Poly> {
        if c.is_zero() {
            return Ok(Poly::zero(&self.vars));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, a) in &self.terms {
            terms.push((t.try_mul(m)?, a * c));
        }
        Ok(Poly::from_sorted(&self.vars, terms))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) > 0)
            .map(|(m, c)| {
                let e = m.exp(i);
                (m.with_exp(i, e - 1), c * &Rat::from_int(e as i64))
            });
        // lowering one exponent preserves the relative packed order
        Poly::from_sorted(&self.vars, terms.collect())
    }

    pub fn derivative_by(&self, name: &str) -> Result<Poly> {
        Ok(self.derivative(self.vars.require(name)?))
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.terms.iter().any(|(m, _)| m.exp(i) > 0)).collect()
    }

    /// Coefficients of `var^k` as polynomials in the remaining variables.
    pub fn coefficients_in(&self, i: usize) -> Vec<Poly> {
        let deg = self.degree_in(i) as usize;
        let mut parts: Vec<Vec<(Monomial, Rat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            parts[m.exp(i) as usize].push((m.without(i), c.clone()));
        }
        parts.into_iter().map(|t| Poly::from_terms(&self.vars, t)).collect()
    }

    /// Replaces variable `i` by `value`.
    pub fn substitute(&self, i: usize, value: &Poly) -> Result<Poly> {
        self.check_same_vars(value)?;
        let parts = self.coefficients_in(i);
        let mut acc = Poly::zero(&self.vars);
        for part in parts.iter().rev() {
            acc = &(&acc * value) + part;
        }
        Ok(acc)
    }

    pub fn substitute_by(&self, name: &str, value: &Poly) -> Result<Poly> {
        self.substitute(self.vars.require(name)?, value)
    }

    /// Substitutes several variables at once (simultaneously).
    pub fn substitute_many(&self, subs: &[(usize, Poly)]) -> Result<Poly> {
        let mut values: Vec<Poly> = (0..self.vars.len()).map(|i| Poly::var_index(&self.vars, i)).collect();
        for (i, v) in subs {
            v.check_same_vars(self)?;
            values[*i] = v.clone();
        }
        Ok(self.eval(&values, &Poly::one(&self.vars)))
    }

    /// Evaluates with one value per variable.
    pub fn eval<T: Coefficient>(&self, values: &[T], one: &T) -> T {
        assert_eq!(values.len(), self.vars.len(), "evaluation arity");
        let mut powers: Vec<Vec<T>> = Vec::with_capacity(values.len());
        for (i, v) in values.iter().enumerate() {
            let d = self.degree_in(i) as usize;
            let mut p = Vec::with_capacity(d + 1);
            p.push(one.clone());
            for k in 1..=d {
                let next = p[k - 1].mul_ref(v);
                p.push(next);
            }
            powers.push(p);
        }
        let mut acc: Option<T> = None;
        for (m, c) in &self.terms {
            let mut t = one.scale_rat(c);
            for (i, p) in powers.iter().enumerate() {
                let e = m.exp(i) as usize;
                if e > 0 {
                    t = t.mul_ref(&p[e]);
                }
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a.add_ref(&t),
            });
        }
        acc.unwrap_or_else(|| one.scale_rat(&Rat::zero()))
    }

    pub fn eval_rat(&self, values: &[Rat]) -> Result<Rat> {
        if values.len() != self.vars.len() {
            return Err(Error::Arity { expected: self.vars.len(), got: values.len() });
        }
        Ok(self.eval(values, &Rat::one()))
    }

    /// Fixes some variables to rational values, keeping the variable set.
    pub fn partial_eval(&self, assign: &[(usize, Rat)]) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut m = *m;
            let mut c = c.clone();
            for (i, v) in assign {
                let e = m.exp(*i);
                if e > 0 {
                    c = &c * &v.pow(e);
                    m = m.without(*i);
                }
            }
            terms.push((m, c));
        }
        Poly::from_terms(&self.vars, terms)
    }

    /// Re-expresses the polynomial over another variable set (matched by name).
    pub fn embed(&self, target: &VarSet) -> Result<Poly> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            let j = target.index_of(name);
            if j.is_none() && self.degree_in(i) > 0 {
                return Err(Error::UnknownVariable(name.clone()));
            }
            map.push(j);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, j) in map.iter().enumerate() {
                if let Some(j) = j {
                    exps[*j] = m.exp(i);
                }
            }
            terms.push((Monomial::from_exponents(&exps)?, c.clone()));
        }
        Ok(Poly::from_terms(target, terms))
    }

    /// Minimum and maximum weighted degree over the terms (`None` for zero).
    pub fn weighted_degree_range(&self, weights: &[u32]) -> Option<(u64, u64)> {
        let mut it = self.terms.iter().map(|(m, _)| m.weighted_degree(weights));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    pub fn leading(&self, order: &MonomialOrder) -> Option<(Monomial, &Rat)> {
        let mut best: Option<&(Monomial, Rat)> = None;
        for t in &self.terms {
            best = match best {
                Some(b) if order.cmp(b.0, t.0) != Ordering::Less => Some(b),
                _ => Some(t),
            };
        }
        best.map(|(m, c)| (*m, c))
    }

    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, Rat)> {
        let mut t = self.terms.clone();
        t.sort_by(|a, b| order.cmp(b.0, a.0));
        t
    }

    /// Integer content-free multiple with positive leading coefficient under `order`.
    pub fn primitive(&self, order: &MonomialOrder) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let (num_gcd, den_lcm) = content_parts(self.terms.iter().map(|(_, c)| c));
        let mut factor = Rat::from_big(num_rational::BigRational::new(den_lcm, num_gcd));
        if self.leading(order).map(|(_, c)| c.signum() < 0).unwrap_or(false) {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Scales so that the leading coefficient under `order` is 1.
    pub fn monic(&self, order: &MonomialOrder) -> Poly {
        match self.leading(order) {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Largest absolute value among the integer numerators (after making primitive).
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms
            .iter()
            .map(|(_, c)| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    /// Canonical text: terms descending under `order`, coefficients as `num/den`.
    pub fn to_text(&self, order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms(order).iter().enumerate() {
            let neg = c.signum() < 0;
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.monomial_text(*m);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    fn monomial_text(&self, m: Monomial) -> String {
        let mut parts = Vec::new();
        for (i, name) in self.vars.names().iter().enumerate() {
            match m.exp(i) {
                0 => {}
                1 => parts.push(name.clone()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }

    /// Parses over a fixed variable set.
    pub fn parse(text: &str, vars: &VarSet) -> Result<Poly> {
        Expr::parse(text)?.to_poly(vars)
    }

    /// Parses, taking the variables in order of first appearance... sorted by name.
    pub fn parse_auto(text: &str) -> Result<Poly> {
        let e = Expr::parse(text)?;
        let vars = VarSet::new(e.variables())?;
        e.to_poly(&vars)
    }

    /// Integer coefficients after clearing denominators (content not removed).
    pub fn integer_coefficients(&self) -> (Vec<(Monomial, BigInt)>, BigInt) {
        let (_, den_lcm) = content_parts(self.terms.iter().map(|(_, c)| c));
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&den_lcm / c.denom())))
            .collect();
        (terms, den_lcm)
    }

    /// `true` when every coefficient is an integer and their gcd is 1.
    pub fn is_primitive_integer(&self) -> bool {
        let (g, d) = content_parts(self.terms.iter().map(|(_, c)| c));
        d.is_one() && g.abs().is_one()
    }
}

/// `acc += a * b` over a monomial hash map.
pub fn mul_accumulate(acc: &mut MonoMap<Rat>, a: &Poly, b: &Poly) -> Result<()> {
    acc.reserve(a.len().saturating_mul(b.len()).min(1 << 16));
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let m = ma.try_mul(*mb)?;
            let p = ca * cb;
            match acc.get_mut(&m) {
                Some(v) => *v += &p,
                None => {
                    acc.insert(m, p);
                }
            }
        }
    }
    Ok(())
}

impl Expr {
    /// Lowers to a polynomial; division only by nonzero constants, nonnegative integer powers.
    pub fn to_poly(&self, vars: &VarSet) -> Result<Poly> {
        Ok(match self {
            Expr::Num(r) => Poly::constant(vars, r.clone()),
            Expr::Var(v) => Poly::var(vars, v)?,
            Expr::Neg(a) => -&a.to_poly(vars)?,
            Expr::Add(a, b) => &a.to_poly(vars)? + &b.to_poly(vars)?,
            Expr::Sub(a, b) => &a.to_poly(vars)? - &b.to_poly(vars)?,
            Expr::Mul(a, b) => &a.to_poly(vars)? * &b.to_poly(vars)?,
            Expr::Div(a, b) => {
                let d = b.to_poly(vars)?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => a.to_poly(vars)?.scale(&c.recip()),
                    _ => {
                        return Err(Error::parse(
                            &self.to_string(),
                            "division by a non-constant in a polynomial",
                        ))
                    }
                }
            }
            Expr::Pow(a, e) => {
                if !e.is_integer() || e.signum() < 0 {
                    return Err(Error::parse(
                        &self.to_string(),
                        "polynomial exponents must be nonnegative integers",
                    ));
                }
                let k: u32 = e
                    .to_string()
                    .parse()
                    .map_err(|_| Error::parse(&self.to_string(), "exponent too large"))?;
                a.to_poly(vars)?.pow(k)
            }
        })
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial addition over different variable sets")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial subtraction over different variable sets")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial multiplication failed")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_sorted(&self.vars, self.terms.iter().map(|(m, c)| (*m, -c)).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&MonomialOrder::plain_degrevlex(self.vars.len())))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{:?}]({})", self.vars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::order::WeightedOrder;
    use proptest::prelude::*;

    fn xy() -> VarSet {
        VarSet::new(["x", "y"]).unwrap()
    }

    fn p(s: &str, v: &VarSet) -> Poly {
        Poly::parse(s, v).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let v = xy();
        assert_eq!(&p("x+y", &v) * &p("x-y", &v), p("x^2 - y^2", &v));
    }

    #[test]
    fn mismatched_variables_error() {
        let a = Poly::parse_auto("x + 1").unwrap();
        let b = Poly::parse_auto("y + 1").unwrap();
        assert!(matches!(a.try_add(&b), Err(Error::VariableMismatch { .. })));
        assert!(matches!(a.eval_rat(&[]), Err(Error::Arity { .. })));
    }

    #[test]
    fn substitution_and_derivative() {
        let v = xy();
        let q = p("x^3 + 2*x*y", &v);
        assert_eq!(q.derivative(0), p("3*x^2 + 2*y", &v));
        assert_eq!(q.substitute(0, &p("y+1", &v)).unwrap(), p("(y+1)^3 + 2*(y+1)*y", &v));
        assert_eq!(q.eval_rat(&[Rat::from_int(2), Rat::new(1, 2)]).unwrap(), Rat::from_int(10));
        assert_eq!(q.partial_eval(&[(1, Rat::from_int(0))]), p("x^3", &v));
    }

    #[test]
    fn canonical_text_uses_the_order() {
        let v = VarSet::new(["b21", "a12", "b11", "a20"]).unwrap();
        let w = [("b21", 2), ("a12", 2), ("b11", 1), ("a20", 1)]
            .iter()
            .map(|(k, w)| (k.to_string(), *w))
            .collect();
        let o = WeightedOrder::weighted(w).bind(&v).unwrap();
        let q = p("3*b21 - 3*a12 + b11^2 - a20*b11 - 1/2*a20", &v);
        let text = q.to_text(&o);
        assert_eq!(text, "3*b21 - 3*a12 + b11^2 - b11*a20 - 1/2*a20");
        assert_eq!(Poly::parse(&text, &v).unwrap().to_text(&o), text);
        assert_eq!(Poly::zero(&v).to_text(&o), "0");
    }

    #[test]
    fn primitive_normalization() {
        let v = xy();
        let o = MonomialOrder::plain_degrevlex(2);
        let q = p("-2/3*x^2 + 4/9*y", &v).primitive(&o);
        assert_eq!(q, p("6*x^2 - 4*y", &v).scale(&Rat::new(1, 2)));
        assert!(q.is_primitive_integer());
    }

    #[test]
    fn embed_renames_by_name() {
        let a = p("x*y + 1", &xy());
        let wide = VarSet::new(["t", "y", "x"]).unwrap();
        let e = a.embed(&wide).unwrap();
        assert_eq!(e, p("x*y + 1", &wide));
        assert!(e.embed(&VarSet::new(["x"]).unwrap()).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(((0u32..4, 0u32..4), -5i64..6, 1i64..4), 0..6).prop_map(|ts| {
            let v = xy();
            Poly::from_terms(
                &v,
                ts.into_iter()
                    .map(|((a, b), n, d)| (Monomial::from_exponents(&[a, b]).unwrap(), Rat::new(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            let pt = [Rat::new(2, 3), Rat::new(-5, 7)];
            let lhs = (&a * &b).eval_rat(&pt).unwrap();
            prop_assert_eq!(lhs, a.eval_rat(&pt).unwrap() * b.eval_rat(&pt).unwrap());
        }

        #[test]
        fn text_round_trip(a in arb_poly()) {
            let o = MonomialOrder::plain_degrevlex(2);
            let t = a.to_text(&o);
            let back = Poly::parse(&t, &xy()).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_text(&o), t);
        }
    }
}
