//! Recurrences shared by univariate and bivariate series.
//!
//! A graded sequence `s[0], s[1], …` stores homogeneous components. For a
//! univariate series the component of degree `n` is the coefficient of `xⁿ`;
//! for a bivariate one it is a polynomial homogeneous of degree `n` in `x, y`.
//! Multiplying by the degree is the Euler operator in both cases, which is all
//! the exp/log/power recurrences need.

use rayon::prelude::*;

use crate::algebra::{MonoMap, Poly, Rat, VarSet};
use crate::error::{Error, Result};

const PARALLEL_WORK: usize = 4096;

fn accumulate(acc: &mut MonoMap<Rat>, a: &Poly, b: &Poly, c: &Rat) {
    for (ma, ca) in a.terms() {
        let f = ca * c;
        for (mb, cb) in b.terms() {
            let m = ma.mul(*mb);
            let p = &f * cb;
            match acc.get_mut(&m) {
                Some(v) => *v += &p,
                None => {
                    acc.insert(m, p);
                }
            }
        }
    }
}

fn merge(mut a: MonoMap<Rat>, mut b: MonoMap<Rat>) -> MonoMap<Rat> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    for (m, c) in b {
        match a.get_mut(&m) {
            Some(v) => *v += &c,
            None => {
                a.insert(m, c);
            }
        }
    }
    a
}

/// `Σ c·a·b` over the given triples.
pub fn sum_products(ring: &VarSet, triples: &[(&Poly, &Poly, Rat)]) -> Poly {
    let work: usize = triples.iter().map(|(a, b, _)| a.len() * b.len()).sum();
    let map = if work >= PARALLEL_WORK && triples.len() > 1 {
        triples
            .par_iter()
            .fold(MonoMap::default, |mut acc, (a, b, c)| {
                accumulate(&mut acc, a, b, c);
                acc
            })
            .reduce(MonoMap::default, merge)
    } else {
        let mut acc = MonoMap::default();
        for (a, b, c) in triples {
            accumulate(&mut acc, a, b, c);
        }
        acc
    };
    Poly::from_map(ring, map)
}

/// Cauchy product through degree `n`.
pub fn conv(ring: &VarSet, a: &[Poly], b: &[Poly], n: usize) -> Vec<Poly> {
    let one = Rat::one();
    let degree = |k: usize| {
        let triples: Vec<(&Poly, &Poly, Rat)> = (0..=k)
            .filter(|&i| i < a.len() && k - i < b.len())
            .filter(|&i| !a[i].is_zero() && !b[k - i].is_zero())
            .map(|i| (&a[i], &b[k - i], one.clone()))
            .collect();
        sum_products(ring, &triples)
    };
    let work: usize = a.iter().map(Poly::len).sum::<usize>() * b.iter().map(Poly::len).sum::<usize>();
    if work >= PARALLEL_WORK {
        (0..=n).into_par_iter().map(degree).collect()
    } else {
        (0..=n).map(degree).collect()
    }
}

fn constant_head(s: &[Poly], what: &str) -> Result<Rat> {
    s.first()
        .and_then(Poly::as_constant)
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::NotInvertible(format!("{what}: constant term must be a nonzero number")))
}

/// Multiplicative inverse through degree `n`; `s[0]` must be a nonzero number.
pub fn reciprocal(ring: &VarSet, s: &[Poly], n: usize) -> Result<Vec<Poly>> {
    let c = constant_head(s, "reciprocal")?;
    let inv = c.recip();
    let neg_inv = -&inv;
    let mut r = vec![Poly::constant(ring, inv)];
    for k in 1..=n {
        let triples: Vec<(&Poly, &Poly, Rat)> = (1..=k)
            .filter(|&j| j < s.len() && !s[j].is_zero() && !r[k - j].is_zero())
            .map(|j| (&s[j], &r[k - j], neg_inv.clone()))
            .collect();
        r.push(sum_products(ring, &triples));
    }
    Ok(r)
}

/// `s^alpha` through degree `n`, given `p0 = s[0]^alpha`; `s[0]` must be a nonzero number.
pub fn power(ring: &VarSet, s: &[Poly], alpha: &Rat, p0: Rat, n: usize) -> Result<Vec<Poly>> {
    let c = constant_head(s, "power")?;
    let mut p = vec![Poly::constant(ring, p0)];
    for k in 1..=n {
        let denom = (&c * &Rat::from_int(k as i64)).recip();
        let triples: Vec<(&Poly, &Poly, Rat)> = (1..=k)
            .filter(|&j| j < s.len() && !s[j].is_zero() && !p[k - j].is_zero())
            .map(|j| {
                let w = &(alpha * &Rat::from_int(j as i64)) - &Rat::from_int((k - j) as i64);
                (&s[j], &p[k - j], &w * &denom)
            })
            .filter(|t| !t.2.is_zero())
            .collect();
        p.push(sum_products(ring, &triples));
    }
    Ok(p)
}

/// `exp(s)` through degree `n`; requires `s[0] = 0`.
pub fn exp(ring: &VarSet, s: &[Poly], n: usize) -> Result<Vec<Poly>> {
    if s.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::Valuation { expected: ">= 1".into(), found: "0".into() });
    }
    let mut e = vec![Poly::one(ring)];
    for k in 1..=n {
        let triples: Vec<(&Poly, &Poly, Rat)> = (1..=k)
            .filter(|&j| j < s.len() && !s[j].is_zero())
            .map(|j| (&s[j], &e[k - j], Rat::new(j as i64, k as i64)))
            .collect();
        e.push(sum_products(ring, &triples));
    }
    Ok(e)
}

/// `log(s)` through degree `n`; requires `s[0] = 1`.
pub fn log(ring: &VarSet, s: &[Poly], n: usize) -> Result<Vec<Poly>> {
    if !s.first().is_some_and(Poly::is_one) {
        return Err(Error::NotInvertible("log: constant term must be 1".into()));
    }
    let mut l = vec![Poly::zero(ring)];
    for k in 1..=n {
        let mut triples: Vec<(&Poly, &Poly, Rat)> = Vec::new();
        for j in 1..k {
            if !l[j].is_zero() && k - j < s.len() && !s[k - j].is_zero() {
                triples.push((&l[j], &s[k - j], Rat::new(-(j as i64), k as i64)));
            }
        }
        let head = if k < s.len() { s[k].clone() } else { Poly::zero(ring) };
        let tail = sum_products(ring, &triples);
        l.push(&head + &tail);
    }
    Ok(l)
}
