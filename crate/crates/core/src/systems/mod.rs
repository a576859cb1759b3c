//! Planar systems, their Liénard reductions, and the catalog of families.

mod catalog;
mod spec;

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Expr, Monomial, Poly, Rat, VarSet, WeightedOrder};
use crate::error::{Error, Result};
use crate::series::PSeries;

pub use catalog::{catalog, lookup, Catalog, FamilyRecord, UrabeClosedForm, UrabeSpec};
pub use spec::{
    normalize_name, Binding, ClosedFormText, CoefficientText, LinearizationText, NumericBinding, Resolved, SystemKind,
    SystemSpec, UrabeText, FORMAT_VERSION,
};

/// A rational function `num/den` over a ring that contains the state variable(s).
#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.check_same_vars(&den)?;
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(RatFn { num, den })
    }

    pub fn poly(p: Poly) -> Self {
        let den = Poly::one(p.vars());
        RatFn { num: p, den }
    }

    pub fn ring(&self) -> &VarSet {
        self.num.vars()
    }

    pub fn add(&self, o: &RatFn) -> Result<RatFn> {
        if self.den == o.den {
            return RatFn::new(self.num.try_add(&o.num)?, self.den.clone());
        }
        RatFn::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            self.den.try_mul(&o.den)?,
        )
    }

    pub fn sub(&self, o: &RatFn) -> Result<RatFn> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFn) -> Result<RatFn> {
        RatFn::new(self.num.try_mul(&o.num)?, self.den.try_mul(&o.den)?)
    }

    pub fn derivative(&self, var: usize) -> RatFn {
        if self.den.is_constant() {
            let c = self.den.as_constant().expect("constant");
            return RatFn { num: self.num.derivative(var), den: Poly::constant(self.ring(), c) };
        }
        let num = &(&self.num.derivative(var) * &self.den) - &(&self.num * &self.den.derivative(var));
        RatFn { num, den: &self.den * &self.den }
    }

    /// `true` when the function is identically zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Power series in ring variable `x` with coefficients over `params`.
    pub fn to_series(&self, x: usize, params: &VarSet, n: usize) -> Result<PSeries> {
        let num = poly_series(&self.num, x, params, n)?;
        if self.den.is_one() {
            return Ok(num);
        }
        let den = poly_series(&self.den, x, params, n)?;
        num.div(&den)
    }

    /// Substitutes ring variables (simultaneously).
    pub fn substitute_many(&self, subs: &[(usize, Poly)]) -> Result<RatFn> {
        RatFn::new(self.num.substitute_many(subs)?, self.den.substitute_many(subs)?)
    }

    pub fn embed(&self, ring: &VarSet) -> Result<RatFn> {
        RatFn::new(self.num.embed(ring)?, self.den.embed(ring)?)
    }

    /// Lowers an expression with integer exponents; no cancellation is attempted.
    pub fn from_expr(e: &Expr, ring: &VarSet) -> Result<RatFn> {
        Ok(match e {
            Expr::Num(r) => RatFn::poly(Poly::constant(ring, r.clone())),
            Expr::Var(v) => RatFn::poly(Poly::var(ring, v)?),
            Expr::Neg(a) => RatFn::from_expr(a, ring)?.neg(),
            Expr::Add(a, b) => RatFn::from_expr(a, ring)?.add(&RatFn::from_expr(b, ring)?)?,
            Expr::Sub(a, b) => RatFn::from_expr(a, ring)?.sub(&RatFn::from_expr(b, ring)?)?,
            Expr::Mul(a, b) => RatFn::from_expr(a, ring)?.mul(&RatFn::from_expr(b, ring)?)?,
            Expr::Div(a, b) => RatFn::from_expr(a, ring)?.mul(&RatFn::from_expr(b, ring)?.recip()?)?,
            Expr::Pow(a, k) => {
                let k = k
                    .to_i64()
                    .filter(|_| k.is_integer())
                    .ok_or_else(|| Error::parse(&e.to_string(), "exponent is not an integer"))?;
                let base = RatFn::from_expr(a, ring)?;
                let base = if k < 0 { base.recip()? } else { base };
                let k = k.unsigned_abs() as u32;
                RatFn::new(base.num.pow(k), base.den.pow(k))?
            }
        })
    }

    pub fn recip(&self) -> Result<RatFn> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    /// Replaces ring variable `var` by a rational function (over the same ring).
    pub fn substitute(&self, var: usize, value: &RatFn) -> Result<RatFn> {
        let dn = self.num.degree_in(var);
        let dd = self.den.degree_in(var);
        let d = dn.max(dd);
        let num = homogenized(&self.num, var, value, d)?;
        let den = homogenized(&self.den, var, value, d)?;
        RatFn::new(num, den)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

/// `p(n/d)·d^deg` in variable `var`, for `deg ≥ deg_var p`.
fn homogenized(p: &Poly, var: usize, value: &RatFn, deg: u32) -> Result<Poly> {
    let parts = p.coefficients_in(var);
    let mut acc = Poly::zero(p.vars());
    let mut npow = Poly::one(p.vars());
    for (k, c) in parts.iter().enumerate() {
        if !c.is_zero() {
            let term = &(c * &npow) * &value.den.pow(deg - k as u32);
            acc = &acc + &term;
        }
        npow = &npow * &value.num;
    }
    Ok(acc)
}

/// Coefficients of a polynomial in `x` as a series over `params`.
pub fn poly_series(p: &Poly, x: usize, params: &VarSet, n: usize) -> Result<PSeries> {
    let parts = p.coefficients_in(x);
    let mut coeffs = Vec::with_capacity(parts.len());
    for c in parts.iter().take(n + 1) {
        coeffs.push(c.embed(params)?);
    }
    Ok(PSeries::from_coeffs(params, coeffs, n))
}

/// `ẋ = xdot(x, y)`, `ẏ = ydot(x, y)`, with parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlanarSystem {
    ring: VarSet,
    pub xdot: Poly,
    pub ydot: Poly,
}

impl PlanarSystem {
    /// `ring` must start with the state variables `x`, `y`.
    pub fn new(xdot: Poly, ydot: Poly) -> Result<Self> {
        xdot.check_same_vars(&ydot)?;
        let ring = xdot.vars().clone();
        if ring.len() < 2 || ring.name(0) != "x" || ring.name(1) != "y" {
            return Err(Error::MalformedSystem("the ring must start with x, y".into()));
        }
        let sys = PlanarSystem { ring, xdot, ydot };
        sys.check_linear_part()?;
        Ok(sys)
    }

    fn check_linear_part(&self) -> Result<()> {
        let x = Monomial::var(0, 1)?;
        let y = Monomial::var(1, 1)?;
        let ok = self.xdot.constant_term().is_zero()
            && self.ydot.constant_term().is_zero()
            && linear_coeff(&self.xdot, x) == Some(Rat::zero())
            && linear_coeff(&self.xdot, y) == Some(Rat::from_int(-1))
            && linear_coeff(&self.ydot, x) == Some(Rat::one())
            && linear_coeff(&self.ydot, y) == Some(Rat::zero());
        if ok {
            Ok(())
        } else {
            Err(Error::MalformedSystem("linear part must be xdot = -y, ydot = x".into()))
        }
    }

    pub fn ring(&self) -> &VarSet {
        &self.ring
    }

    /// Parameter names (ring variables after `x`, `y`).
    pub fn params(&self) -> VarSet {
        VarSet::new(self.ring.names()[2..].iter().cloned()).expect("subset of a valid set")
    }

    /// Fixes parameters to numbers; unmentioned parameters stay symbolic.
    pub fn specialize(&self, values: &BTreeMap<String, Rat>) -> Result<PlanarSystem> {
        let mut assign = Vec::new();
        for (k, v) in values {
            assign.push((self.ring.require(k)?, v.clone()));
        }
        let keep: Vec<String> = self
            .ring
            .names()
            .iter()
            .filter(|n| !values.contains_key(*n))
            .cloned()
            .collect();
        let ring = VarSet::new(keep)?;
        PlanarSystem::new(
            self.xdot.partial_eval(&assign).embed(&ring)?,
            self.ydot.partial_eval(&assign).embed(&ring)?,
        )
    }

    /// Numeric vector field; requires every parameter to be fixed.
    pub fn numeric(&self) -> Result<NumericField> {
        if self.ring.len() > 2 {
            return Err(Error::UnboundVariable(self.ring.name(2).to_string()));
        }
        let conv = |p: &Poly| -> Vec<(i32, i32, f64)> {
            p.terms().iter().map(|(m, c)| (m.exp(0) as i32, m.exp(1) as i32, c.to_f64())).collect()
        };
        Ok(NumericField { xdot: conv(&self.xdot), ydot: conv(&self.ydot) })
    }
}

fn linear_coeff(p: &Poly, m: Monomial) -> Option<Rat> {
    // the coefficient of a state monomial, as a number (parameters must not occur)
    let mut acc: Option<Rat> = Some(Rat::zero());
    for (t, c) in p.terms() {
        if t.exp(0) + t.exp(1) == 1 && t.exp(0) == m.exp(0) && t.exp(1) == m.exp(1) {
            if t.support_size() > 1 {
                return None;
            }
            acc = Some(c.clone());
        }
    }
    acc
}

/// A planar field evaluated in `f64`: terms `(i, j, c)` meaning `c·xⁱ·yʲ`.
#[derive(Clone, Debug)]
pub struct NumericField {
    pub xdot: Vec<(i32, i32, f64)>,
    pub ydot: Vec<(i32, i32, f64)>,
}

impl NumericField {
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let e = |t: &[(i32, i32, f64)]| t.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum::<f64>();
        (e(&self.xdot), e(&self.ydot))
    }
}

/// `ẍ + f(x)ẋ² + g(x) = 0`, with `f`, `g` over `params + [x]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LienardPair {
    params: VarSet,
    ring: VarSet,
    pub f: RatFn,
    pub g: RatFn,
}

impl LienardPair {
    /// `f`, `g` over a ring whose last variable is `x`.
    pub fn new(f: RatFn, g: RatFn) -> Result<Self> {
        f.num.check_same_vars(&g.num)?;
        let ring = f.ring().clone();
        if ring.is_empty() || ring.name(ring.len() - 1) != "x" {
            return Err(Error::MalformedSystem("the last ring variable must be x".into()));
        }
        let params = VarSet::new(ring.names()[..ring.len() - 1].iter().cloned())?;
        let lp = LienardPair { params, ring, f, g };
        lp.validate()?;
        Ok(lp)
    }

    fn validate(&self) -> Result<()> {
        let x = self.x();
        let at0 = |p: &Poly| p.partial_eval(&[(x, Rat::zero())]);
        if at0(&self.f.den).is_zero() || at0(&self.g.den).is_zero() {
            return Err(Error::NotCenterCandidate("f or g is not defined at 0".into()));
        }
        let g0 = at0(&self.g.num);
        let g1 = at0(&self.g.num.derivative(x));
        if !g0.is_zero() || g1 != at0(&self.g.den) {
            return Err(Error::NotCenterCandidate(format!(
                "xg(x)>0 fails structurally: g must be x + O(x^2), got {}",
                self.g
            )));
        }
        Ok(())
    }

    pub fn params(&self) -> &VarSet {
        &self.params
    }

    pub fn ring(&self) -> &VarSet {
        &self.ring
    }

    pub fn x(&self) -> usize {
        self.ring.len() - 1
    }

    pub fn f_series(&self, n: usize) -> Result<PSeries> {
        self.f.to_series(self.x(), &self.params, n)
    }

    pub fn g_series(&self, n: usize) -> Result<PSeries> {
        self.g.to_series(self.x(), &self.params, n)
    }

    /// Fixes some parameters to values given as polynomials over `target` (parameters only).
    pub fn specialize(&self, target: &VarSet, values: &BTreeMap<String, Poly>) -> Result<LienardPair> {
        let ring = target.extended(&["x"])?;
        let big = self.params.extended(target.names())?.extended(&["x"])?;
        let mut subs = Vec::new();
        for (name, v) in values {
            if let Some(i) = big.index_of(name) {
                subs.push((i, v.embed(&big)?));
            }
        }
        let f = self.f.embed(&big)?.substitute_many(&subs)?;
        let g = self.g.embed(&big)?.substitute_many(&subs)?;
        LienardPair::new(f.embed(&ring)?, g.embed(&ring)?)
    }
}

/// `ẋ = −y`, `ẏ = x(1 + a₁y + … + aₙyⁿ)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelSystem {
    pub params: VarSet,
    pub a: Vec<Poly>,
}

impl AbelSystem {
    pub fn new(a: Vec<Poly>) -> Result<Self> {
        let params = a.first().map(|p| p.vars().clone()).unwrap_or_else(VarSet::empty);
        for p in &a {
            p.check_same_vars(&Poly::zero(&params))?;
        }
        if a.is_empty() {
            return Err(Error::InvalidArgument("Abel degree must be at least 1".into()));
        }
        Ok(AbelSystem { params, a })
    }

    /// All coefficients `a1 … an` symbolic.
    pub fn symbolic(n: usize) -> Result<Self> {
        let params = VarSet::new((1..=n).map(|k| format!("a{k}")))?;
        Self::new((0..n).map(|i| Poly::var_index(&params, i)).collect())
    }

    pub fn numeric(a: &[Rat]) -> Result<Self> {
        let params = VarSet::empty();
        Self::new(a.iter().map(|c| Poly::constant(&params, c.clone())).collect())
    }

    pub fn degree(&self) -> usize {
        self.a.len()
    }

    /// `P(t)` over `params + [t]`.
    pub fn p_poly(&self, t: &str) -> Result<Poly> {
        let ring = self.params.extended(&[t])?;
        let ti = ring.len() - 1;
        let mut acc = Poly::zero(&ring);
        for (k, c) in self.a.iter().enumerate() {
            let term = c.embed(&ring)?.mul_term(Monomial::var(ti, k as u32 + 1)?, &Rat::one())?;
            acc = &acc + &term;
        }
        Ok(acc)
    }

    pub fn planar(&self) -> Result<PlanarSystem> {
        let ring = VarSet::new(["x", "y"])?.extended(self.params.names())?;
        let p = self.p_poly("y")?.embed(&ring)?;
        let x = Poly::var_index(&ring, 0);
        let y = Poly::var_index(&ring, 1);
        PlanarSystem::new(-&y, &x * &(&Poly::one(&ring) + &p))
    }
}

/// Reduction of `ẋ = −y·B(x)`, `ẏ = A(x) + C(x)·y²` to `f = (C − B′)/B`, `g = A·B`.
pub fn lienard_from_planar(sys: &PlanarSystem) -> Result<LienardPair> {
    let ring = sys.ring();
    let mut b_terms = Vec::new();
    for (m, c) in sys.xdot.terms() {
        if m.exp(1) != 1 {
            return Err(Error::MalformedSystem("xdot must have the form -y*B(x)".into()));
        }
        b_terms.push((m.without(1), -c));
    }
    let mut a_terms = Vec::new();
    let mut c_terms = Vec::new();
    for (m, c) in sys.ydot.terms() {
        match m.exp(1) {
            0 => a_terms.push((*m, c.clone())),
            2 => c_terms.push((m.without(1), c.clone())),
            _ => return Err(Error::MalformedSystem("ydot must have the form A(x) + C(x)*y^2".into())),
        }
    }
    let target = sys.params().extended(&["x"])?;
    let conv = |t: Vec<(Monomial, Rat)>| Poly::from_terms(ring, t).embed(&target);
    let (b, a, c) = (conv(b_terms)?, conv(a_terms)?, conv(c_terms)?);
    let xi = target.len() - 1;
    let f = RatFn::new(&c - &b.derivative(xi), b.clone())?;
    let g = RatFn::poly(&a * &b);
    LienardPair::new(f, g)
}

/// Index data of a coefficient name of the degree-n `cn` family
/// `xdot = -y + sum b_i1 x^i y`, `ydot = x + sum a_i0 x^i + sum a_i2 x^i y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CnIndex {
    pub letter: char,
    pub i: u32,
    pub j: u32,
}

impl CnIndex {
    /// Accepts `a20`, `b21`, `a_2_0`, `a_{2,0}`.
    pub fn parse(name: &str) -> Option<CnIndex> {
        let mut chars = name.chars();
        let letter = chars.next()?;
        if letter != 'a' && letter != 'b' {
            return None;
        }
        let digits: String = chars.filter(|c| c.is_ascii_digit()).collect();
        let rest_ok = name[1..].chars().all(|c| c.is_ascii_digit() || "_{},".contains(c));
        if !rest_ok || digits.len() != 2 {
            return None;
        }
        let i = digits[..1].parse().ok()?;
        let j = digits[1..].parse().ok()?;
        Some(CnIndex { letter, i, j })
    }

    pub fn name(&self) -> String {
        format!("{}{}{}", self.letter, self.i, self.j)
    }

    pub fn weight(&self) -> u32 {
        self.i + self.j - 1
    }

    /// Whether the coefficient exists in the degree-n family.
    pub fn valid_for(&self, n: u32) -> bool {
        match (self.letter, self.j) {
            ('a', 0) => (2..=n).contains(&self.i),
            ('a', 2) => self.i + 2 <= n,
            ('b', 1) => (1..n).contains(&self.i),
            _ => false,
        }
    }
}

/// All coefficient names of the degree-n family in a fixed order: b's, then a_{k,0}, then a_{k,2}.
pub fn cn_coefficients(n: u32) -> Vec<CnIndex> {
    let mut v = Vec::new();
    for i in 1..n {
        v.push(CnIndex { letter: 'b', i, j: 1 });
    }
    for i in 2..=n {
        v.push(CnIndex { letter: 'a', i, j: 0 });
    }
    for i in 0..=n.saturating_sub(2) {
        v.push(CnIndex { letter: 'a', i, j: 2 });
    }
    v
}

/// The degree-n system with the given coefficient values (over a common parameter ring).
pub fn cn_system(n: u32, coeffs: &BTreeMap<String, Poly>, params: &VarSet) -> Result<PlanarSystem> {
    if !(2..=9).contains(&n) {
        return Err(Error::MalformedSystem(format!("degree {n} outside 2..=9")));
    }
    let ring = VarSet::new(["x", "y"])?.extended(params.names())?;
    let mut xdot = -&Poly::var_index(&ring, 1);
    let mut ydot = Poly::var_index(&ring, 0);
    for (name, value) in coeffs {
        let idx = CnIndex::parse(name)
            .filter(|c| c.valid_for(n))
            .ok_or_else(|| Error::MalformedSystem(format!("`{name}` is not a coefficient of the degree-{n} family")))?;
        let v = value.embed(&ring)?;
        let (xe, ye) = (idx.i, idx.j);
        match idx.letter {
            'b' => xdot = &xdot + &v.mul_term(Monomial::from_exponents(&[xe, 1])?, &Rat::one())?,
            _ => ydot = &ydot + &v.mul_term(Monomial::from_exponents(&[xe, ye])?, &Rat::one())?,
        }
    }
    PlanarSystem::new(xdot, ydot)
}

/// `f`, `g` of the degree-n system directly from the coefficients.
pub fn lienard_from_cn(n: u32, coeffs: &BTreeMap<String, Poly>, params: &VarSet) -> Result<LienardPair> {
    lienard_from_planar(&cn_system(n, coeffs, params)?)
}

/// `f = −P′/(1+P)`, `g = x(1+P)`.
pub fn lienard_from_abel(sys: &AbelSystem) -> Result<LienardPair> {
    let p = sys.p_poly("x")?;
    let ring = p.vars().clone();
    let xi = ring.len() - 1;
    let one_p = &Poly::one(&ring) + &p;
    let f = RatFn::new(-&p.derivative(xi), one_p.clone())?;
    let g = RatFn::poly(&Poly::var_index(&ring, xi) * &one_p);
    LienardPair::new(f, g)
}

/// Quasi-homogeneity weights: `i+j−1` for `cn` coefficients, `k` for Abel `a_k`,
/// `2i+1` for Urabe coefficients `c_{2i+1}`.
pub fn default_weight(name: &str) -> Option<u32> {
    if let Some(idx) = CnIndex::parse(name) {
        return Some(idx.weight());
    }
    let digits = name.get(1..)?;
    if !digits.chars().all(|c| c.is_ascii_digit()) || digits.is_empty() {
        return None;
    }
    let k: u32 = digits.parse().ok()?;
    match name.chars().next()? {
        'a' if k >= 1 => Some(k),
        'c' if k % 2 == 1 => Some(k),
        _ => None,
    }
}

/// Weighted-degrevlex order with the default weights for every name of `vars`.
pub fn default_order(vars: &VarSet) -> Result<WeightedOrder> {
    let mut w = BTreeMap::new();
    for name in vars.names() {
        let k = default_weight(name).ok_or_else(|| Error::MissingWeight(name.clone()))?;
        w.insert(name.clone(), k);
    }
    Ok(WeightedOrder::weighted(w))
}
