//! Substituting a catalog family into a condition set.

use serde::{Deserialize, Serialize};

use crate::algebra::{Expr, Monomial, Poly, Rat, VarSet};
use crate::conditions::ConditionSet;
use crate::error::{Error, Result};
use crate::systems::{Binding, FamilyRecord, RatFn};

pub const DEFAULT_PRECISION_DIGITS: usize = 60;
/// Largest accepted relative residual of a numeric substitution.
pub const NUMERIC_THRESHOLD: f64 = 1e-40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SubstitutionMode {
    /// Over `ℚ(free symbols)`.
    Exact,
    /// Over `ℚ(√d)(free symbols)`.
    Quadratic { d: u64 },
    /// Decimal values rounded to `digits` significant digits.
    Numeric { digits: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionResidual {
    pub index: u32,
    pub zero: bool,
    /// Cleared numerator of the substituted condition, `√d` written as `s`.
    pub residual: String,
    /// Largest residual coefficient over the largest condition coefficient (numeric mode).
    pub magnitude: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySubstitution {
    pub all_zero: bool,
    pub mode: SubstitutionMode,
    pub residuals: Vec<ConditionResidual>,
}

pub fn substitute_family(cs: &ConditionSet, fam: &FamilyRecord) -> Result<FamilySubstitution> {
    substitute_family_with(cs, fam, DEFAULT_PRECISION_DIGITS)
}

/// Rounds to `digits` significant decimal digits.
fn round_significant(r: &Rat, digits: usize) -> Rat {
    if r.is_zero() {
        return r.clone();
    }
    let ten = Rat::from_int(10);
    let a = r.abs();
    let mut e: i64 = 0;
    let mut probe = Rat::one();
    while probe <= a {
        probe = &probe * &ten;
        e += 1;
    }
    while &probe / &ten > a {
        probe = &probe / &ten;
        e -= 1;
    }
    // 10^(e−1) ≤ |r| < 10^e
    let shift = ten.powi(digits as i64 - e);
    let scaled = &a * &shift;
    let half = Rat::new(1, 2);
    let rounded = (&scaled + &half).numer() / (&scaled + &half).denom();
    let out = &Rat::from_bigint(rounded) / &shift;
    if r.signum() < 0 {
        -out
    } else {
        out
    }
}

fn replace_sqrt(e: &Expr, d: u64, name: &str) -> Expr {
    let rec = |a: &Expr| Box::new(replace_sqrt(a, d, name));
    match e {
        Expr::Pow(a, k) if *k == Rat::new(1, 2) && a.constant_value() == Some(Rat::from_int(d as i64)) => {
            Expr::Var(name.to_string())
        }
        Expr::Num(_) | Expr::Var(_) => e.clone(),
        Expr::Neg(a) => Expr::Neg(rec(a)),
        Expr::Add(a, b) => Expr::Add(rec(a), rec(b)),
        Expr::Sub(a, b) => Expr::Sub(rec(a), rec(b)),
        Expr::Mul(a, b) => Expr::Mul(rec(a), rec(b)),
        Expr::Div(a, b) => Expr::Div(rec(a), rec(b)),
        Expr::Pow(a, k) => Expr::Pow(rec(a), k.clone()),
    }
}

/// Replaces `s²` by `d` for ring variable `s`.
fn reduce_sqrt(p: &Poly, s: usize, d: u64) -> Result<Poly> {
    let dr = Rat::from_int(d as i64);
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let e = m.exp(s);
        let rest = m.without(s);
        let m2 = rest.try_mul(Monomial::var(s, e % 2)?)?;
        terms.push((m2, c * &dr.pow(e / 2)));
    }
    Ok(Poly::from_terms(p.vars(), terms))
}

/// `p(n₁/d₁, …)·Π dᵢ^{deg_i p}` with the values given for every variable of `p`.
fn cleared(p: &Poly, values: &[(Poly, Poly)], ring: &VarSet) -> Poly {
    let k = values.len();
    let degs: Vec<u32> = (0..k).map(|i| p.degree_in(i)).collect();
    let powers = |base: &Poly, top: u32| -> Vec<Poly> {
        let mut v = vec![Poly::one(ring)];
        for _ in 0..top {
            let next = v.last().expect("nonempty") * base;
            v.push(next);
        }
        v
    };
    let num_pow: Vec<Vec<Poly>> = (0..k).map(|i| powers(&values[i].0, degs[i])).collect();
    let den_pow: Vec<Vec<Poly>> = (0..k)
        .map(|i| if values[i].1.is_one() { vec![] } else { powers(&values[i].1, degs[i]) })
        .collect();
    let mut acc = Poly::zero(ring);
    for (m, c) in p.terms() {
        let mut t = Poly::constant(ring, c.clone());
        for i in 0..k {
            let e = m.exp(i);
            if e > 0 {
                t = &t * &num_pow[i][e as usize];
            }
            if !den_pow[i].is_empty() && e < degs[i] {
                t = &t * &den_pow[i][(degs[i] - e) as usize];
            }
        }
        acc = &acc + &t;
    }
    acc
}

fn max_abs(p: &Poly) -> Rat {
    p.terms().iter().map(|(_, c)| c.abs()).max().unwrap_or_else(Rat::zero)
}

/// Substitutes the family's bindings into every condition; numeric bindings are rounded
/// to `digits` significant digits.
pub fn substitute_family_with(cs: &ConditionSet, fam: &FamilyRecord, digits: usize) -> Result<FamilySubstitution> {
    let sys = &fam.system;
    let free = &sys.params;
    let mut quad: Option<u64> = None;
    let mut numeric = false;
    for b in sys.bindings.values() {
        match b {
            Binding::Quad { d, .. } => {
                if quad.is_some_and(|q| q != *d) {
                    return Err(Error::InvalidArgument("bindings use two different square roots".into()));
                }
                quad = Some(*d);
            }
            Binding::Numeric(_) => numeric = true,
            _ => {}
        }
    }
    if numeric && quad.is_some() {
        return Err(Error::InvalidArgument("numeric and quadratic bindings cannot be mixed".into()));
    }
    let sname = {
        let mut s = "s".to_string();
        while free.index_of(&s).is_some() {
            s.push('_');
        }
        s
    };
    let ring = match quad {
        Some(_) => free.extended(&[sname.as_str()])?,
        None => free.clone(),
    };
    let mut values = Vec::with_capacity(cs.params.len());
    for name in cs.params.names() {
        let r = match sys.bindings.get(name) {
            None | Some(Binding::Free) => {
                if free.index_of(name).is_none() {
                    return Err(Error::UnboundVariable(name.clone()));
                }
                RatFn::poly(Poly::var(&ring, name)?)
            }
            Some(Binding::Exact(e)) => RatFn::from_expr(e, free)?.embed(&ring)?,
            Some(Binding::Quad { expr, d }) => RatFn::from_expr(&replace_sqrt(expr, *d, &sname), &ring)?,
            Some(Binding::Numeric(nb)) => {
                let t = RatFn::from_expr(&nb.times, free)?.embed(&ring)?;
                let v = round_significant(&nb.value, digits.min(nb.digits));
                RatFn::new(t.num.scale(&v), t.den)?
            }
        };
        values.push((r.num, r.den));
    }
    if let Some(d) = quad {
        let s = ring.len() - 1;
        for (_, den) in &values {
            if reduce_sqrt(den, s, d)?.is_zero() {
                return Err(Error::NotInvertible("a binding denominator vanishes in ℚ(√d)".into()));
            }
        }
    }
    let mode = match (quad, numeric) {
        (Some(d), _) => SubstitutionMode::Quadratic { d },
        (None, true) => SubstitutionMode::Numeric { digits: digits.min(max_digits(fam)) },
        (None, false) => SubstitutionMode::Exact,
    };
    let mut residuals = Vec::with_capacity(cs.conditions.len());
    for c in &cs.conditions {
        let mut r = cleared(&c.poly, &values, &ring);
        if let Some(d) = quad {
            r = reduce_sqrt(&r, ring.len() - 1, d)?;
        }
        let (zero, magnitude) = if numeric {
            let mag = (&max_abs(&r) / &max_abs(&c.poly)).to_f64();
            (mag < NUMERIC_THRESHOLD, Some(mag))
        } else {
            (r.is_zero(), None)
        };
        let residual = if numeric && !r.is_zero() { format!("{mag:e}", mag = magnitude.unwrap_or(0.0)) } else { r.to_string() };
        residuals.push(ConditionResidual { index: c.index, zero, residual, magnitude });
    }
    Ok(FamilySubstitution { all_zero: residuals.iter().all(|r| r.zero), mode, residuals })
}

fn max_digits(fam: &FamilyRecord) -> usize {
    fam.system
        .bindings
        .values()
        .filter_map(|b| match b {
            Binding::Numeric(nb) => Some(nb.digits),
            _ => None,
        })
        .min()
        .unwrap_or(usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::conditions;
    use crate::systems::lookup;

    #[test]
    fn rounding_keeps_significant_digits() {
        let r = Rat::from_decimal_str("0.0123456").unwrap();
        assert_eq!(round_significant(&r, 3), Rat::from_decimal_str("0.0123").unwrap());
        assert_eq!(round_significant(&-r, 4), Rat::from_decimal_str("-0.01235").unwrap());
        assert_eq!(round_significant(&Rat::from_int(999), 2), Rat::from_int(1000));
    }

    #[test]
    fn sqrt_reduction() {
        let v = VarSet::new(["a", "s"]).unwrap();
        let p = Poly::parse("s^3*a + s^2 - 2", &v).unwrap();
        assert_eq!(reduce_sqrt(&p, 1, 2).unwrap(), Poly::parse("2*s*a", &v).unwrap());
    }

    #[test]
    fn quartic_families_at_low_order() {
        let parent = lookup("deg4.family1").unwrap();
        let lp = parent.system.lienard().unwrap();
        let w = parent.system.weight_order().unwrap();
        let cs = conditions(&lp, 3, 10, Some(&w)).unwrap();
        for k in 1..=7 {
            let fam = lookup(&format!("deg4.family1.case{k}")).unwrap();
            let s = substitute_family(&cs, fam).unwrap();
            assert!(s.all_zero, "case {k}: {:?}", s.residuals);
            assert_eq!(s.mode, SubstitutionMode::Exact);
        }
        let mut wrong = lookup("deg4.family1.case5").unwrap().clone();
        wrong.system.bindings.insert("a12".into(), Binding::Exact(Expr::parse("a20^2").unwrap()));
        let s = substitute_family(&cs, &wrong).unwrap();
        assert!(!s.all_zero);
        assert!(s.residuals.iter().any(|r| r.residual != "0"));
    }

    #[test]
    fn quadratic_and_numeric_cases() {
        let parent = lookup("deg4.family2").unwrap();
        let lp = parent.system.lienard().unwrap();
        let w = parent.system.weight_order().unwrap();
        let cs = conditions(&lp, 3, 10, Some(&w)).unwrap();
        for k in [4, 5] {
            let s = substitute_family(&cs, lookup(&format!("deg4.family2.case{k}")).unwrap()).unwrap();
            assert!(s.all_zero, "case {k}: {:?}", s.residuals);
            assert_eq!(s.mode, SubstitutionMode::Quadratic { d: 33 });
        }
        let fam = lookup("deg4.family2.case7").unwrap();
        let s = substitute_family(&cs, fam).unwrap();
        assert!(s.all_zero, "{:?}", s.residuals);
        let coarse = substitute_family_with(&cs, fam, 20).unwrap();
        assert!(!coarse.all_zero);
        assert!(coarse.residuals.iter().all(|r| r.magnitude.unwrap() < 1e-12));
    }
}
