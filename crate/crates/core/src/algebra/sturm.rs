//! Dense univariate polynomials over ℚ and Sturm-sequence root counting.

use std::fmt;

use super::monomial::Monomial;
use super::poly::Poly;
use super::rat::Rat;
use super::vars::VarSet;
use crate::error::{Error, Result};

/// Coefficients indexed by degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly(Vec<Rat>);

/// An interval endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rat::from_int(x)).collect())
    }

    /// Converts a polynomial that involves at most one variable.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        let support = p.support();
        if support.len() > 1 {
            return Err(Error::NotUnivariate(p.to_string()));
        }
        let i = support.first().copied().unwrap_or(0);
        let deg = p.degree_in(i.min(p.vars().len().saturating_sub(1))) as usize;
        let mut c = vec![Rat::zero(); deg + 1];
        for (m, a) in p.terms() {
            let e = if p.vars().is_empty() { 0 } else { m.exp(i) } as usize;
            c[e] = a.clone();
        }
        Ok(Self::new(c))
    }

    pub fn to_poly(&self, vars: &VarSet, var: usize) -> Result<Poly> {
        let mut terms = Vec::new();
        for (e, c) in self.0.iter().enumerate() {
            terms.push((Monomial::var(var, e as u32)?, c.clone()));
        }
        Ok(Poly::from_terms(vars, terms))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Rat::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, r: &Rat) -> UPoly {
        UPoly::new(self.0.iter().map(|c| c * r).collect())
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly(vec![]);
        }
        let mut c = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        UPoly::new(c)
    }

    /// Euclidean division `(q, r)`.
    pub fn div_rem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let lead_inv = d.0[dd].recip();
        let mut r = self.0.clone();
        let mut q = vec![Rat::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = &r[r.len() - 1] * &lead_inv;
            for (j, c) in d.0.iter().enumerate() {
                let t = &r[k + j] - &(c * &f);
                r[k + j] = t;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    pub fn rem(&self, d: &UPoly) -> Result<UPoly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic.
    pub fn square_free(&self) -> Result<UPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        Ok(self.div_rem(&g)?.0.monic())
    }

    fn sign_at(&self, b: &Bound) -> i32 {
        match b {
            Bound::Finite(x) => self.eval(x).signum(),
            Bound::PosInf => self.leading().map_or(0, |l| l.signum()),
            Bound::NegInf => {
                let s = self.leading().map_or(0, |l| l.signum());
                if self.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
        }
    }

    /// Sturm sequence `p, p', −rem(p, p'), …`.
    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq[seq.len() - 1].is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&Rat::from_int(-1)));
        }
        if seq.last().is_some_and(|p| p.is_zero()) {
            seq.pop();
        }
        seq
    }

    /// Cauchy bound: every real root lies in `(−B, B)`.
    pub fn root_bound(&self) -> Rat {
        let Some(l) = self.leading() else { return Rat::one() };
        let max = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| (c / l).abs())
            .max()
            .unwrap_or_else(Rat::zero);
        &max + &Rat::one()
    }
}

fn variations(seq: &[UPoly], at: &Bound) -> usize {
    let signs: Vec<i32> = seq.iter().map(|p| p.sign_at(at)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
pub fn sturm_real_roots(p: &UPoly, lo: &Bound, hi: &Bound) -> Result<usize> {
    let mut q = p.square_free()?;
    if q.degree() == Some(0) {
        return Ok(0);
    }
    // make the endpoints non-roots so the count is over the open interval
    for b in [lo, hi] {
        if let Bound::Finite(x) = b {
            if q.eval(x).is_zero() {
                let lin = UPoly::new(vec![-x, Rat::one()]);
                q = q.div_rem(&lin)?.0;
            }
        }
    }
    let ordered = match (lo, hi) {
        (Bound::Finite(a), Bound::Finite(b)) => a < b,
        (Bound::PosInf, _) | (_, Bound::NegInf) => false,
        _ => true,
    };
    if !ordered {
        return Ok(0);
    }
    let seq = q.sturm_sequence();
    Ok(variations(&seq, lo).saturating_sub(variations(&seq, hi)))
}

/// Disjoint open intervals `(a, b)` with rational ends, each containing exactly
/// one real root, plus the exactly-known rational roots; sorted.
pub fn isolate_real_roots(p: &UPoly, width: &Rat) -> Result<Vec<(Rat, Rat)>> {
    let q = p.square_free()?;
    let b = q.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-&b, b.clone())];
    while let Some((a, c)) = stack.pop() {
        let n = sturm_real_roots(&q, &Bound::Finite(a.clone()), &Bound::Finite(c.clone()))?;
        if n == 0 {
            continue;
        }
        if n == 1 && &(&c - &a) <= width {
            out.push((a, c));
            continue;
        }
        let mid = &(&a + &c) / &Rat::from_int(2);
        if q.eval(&mid).is_zero() {
            out.push((mid.clone(), mid.clone()));
        }
        stack.push((a, mid.clone()));
        stack.push((mid, c));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.0.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(k, c)| format!("{c}*t^{k}")).collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fin(n: i64) -> Bound {
        Bound::Finite(Rat::from_int(n))
    }

    #[test]
    fn simple_counts() {
        let p = UPoly::from_ints(&[-2, 0, 1]);
        assert_eq!(sturm_real_roots(&p, &fin(0), &fin(2)).unwrap(), 1);
        let q = UPoly::from_ints(&[1, 0, 1]);
        assert_eq!(sturm_real_roots(&q, &Bound::NegInf, &Bound::PosInf).unwrap(), 0);
        // (x-1)^2 (x+1): two distinct roots, endpoint root excluded
        let r = UPoly::from_ints(&[1, -1, -1, 1]);
        assert_eq!(sturm_real_roots(&r, &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
        assert_eq!(sturm_real_roots(&r, &fin(-1), &fin(1)).unwrap(), 0);
        assert_eq!(sturm_real_roots(&r, &fin(-1), &fin(2)).unwrap(), 1);
        assert!(sturm_real_roots(&UPoly::new(vec![]), &fin(0), &fin(1)).is_err());
        let roots = isolate_real_roots(&UPoly::from_ints(&[-2, 0, 1]), &Rat::new(1, 1000)).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[1].0.to_f64() <= 2f64.sqrt() && 2f64.sqrt() <= roots[1].1.to_f64());
    }

    #[test]
    fn from_poly_checks_univariate() {
        let v = VarSet::new(["a", "b"]).unwrap();
        let p = Poly::parse("b^2 - 3", &v).unwrap();
        assert_eq!(UPoly::from_poly(&p).unwrap(), UPoly::from_ints(&[-3, 0, 1]));
        assert!(UPoly::from_poly(&Poly::parse("a*b", &v).unwrap()).is_err());
    }

    /// Counts roots of the square-free part by exact sign changes on a grid.
    fn sampling_oracle(p: &UPoly, lo: &Rat, hi: &Rat) -> usize {
        let q = p.square_free().unwrap();
        let step = Rat::new(1, 1000);
        let mut count = 0;
        let mut x = lo + &step;
        let mut prev = q.eval(lo).signum();
        while &x < hi {
            let s = q.eval(&x).signum();
            if s == 0 {
                count += 1;
            } else if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
            x = &x + &step;
        }
        let s_hi = q.eval(hi).signum();
        if prev != 0 && s_hi != 0 && s_hi != prev {
            count += 1;
        }
        count
    }

    #[test]
    fn sturm_matches_sampling_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..100 {
            let deg = rng.gen_range(1..=6);
            let mut c: Vec<Rat> = (0..=deg).map(|_| Rat::new(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
            if c[deg].is_zero() {
                c[deg] = Rat::one();
            }
            let p = UPoly::new(c);
            let b = p.root_bound();
            let bi = Rat::from_int(b.to_f64().ceil() as i64);
            let total = sturm_real_roots(&p, &Bound::NegInf, &Bound::PosInf).unwrap();
            assert_eq!(total, sampling_oracle(&p, &-&bi, &bi), "{p:?}");
            let lo = Rat::new(rng.gen_range(-3000..0), 1000);
            let hi = Rat::new(rng.gen_range(1..3000), 1000);
            let part = sturm_real_roots(&p, &Bound::Finite(lo.clone()), &Bound::Finite(hi.clone())).unwrap();
            assert_eq!(part, sampling_oracle(&p, &lo, &hi), "{p:?} on ({lo}, {hi})");
        }
    }
}
