//! Gröbner bases over ℚ: Buchberger's algorithm with the sugar strategy,
//! Gebauer–Möller pair criteria and fraction-free reduction.

pub mod abel;
mod ops;
mod solve;

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, MonomialOrder, Poly, Rat, VarSet, WeightedOrder};
use crate::error::{Error, Result};

pub use ops::{eliminate, saturate, saturate_auxiliary, saturate_homogeneous, SaturationMethod};
pub use solve::{eliminant, radical_membership, slice, zero_dim_points, RadicalWitness, VariableEliminant, ZeroDimReport};

type Term = (Monomial, Rat);

/// Limits on a single Gröbner computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// S-polynomials reduced.
    pub max_pairs: usize,
    /// Terms in any intermediate polynomial.
    pub max_terms: usize,
    /// Elements ever added to the basis.
    pub max_basis: usize,
    pub max_seconds: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 100_000, max_terms: 1_000_000, max_basis: 5_000, max_seconds: None }
    }
}

impl Budget {
    pub const ENV_PAIRS: &'static str = "ISOCHRON_BUDGET_PAIRS";
    pub const ENV_SECONDS: &'static str = "ISOCHRON_BUDGET_SECONDS";

    /// The default budget with overrides from the environment.
    pub fn from_env() -> Budget {
        let mut b = Budget::default();
        if let Some(p) = std::env::var(Self::ENV_PAIRS).ok().and_then(|s| s.parse().ok()) {
            b.max_pairs = p;
        }
        if let Some(s) = std::env::var(Self::ENV_SECONDS).ok().and_then(|s| s.parse().ok()) {
            b.max_seconds = Some(s);
        }
        b
    }

    pub fn with_pairs(mut self, max_pairs: usize) -> Budget {
        self.max_pairs = max_pairs;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub pairs_skipped: usize,
    pub max_terms: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ideal {
    vars: VarSet,
    generators: Vec<Poly>,
    pub order: WeightedOrder,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(vars: &VarSet, generators: Vec<Poly>, order: WeightedOrder) -> Result<Ideal> {
        let zero = Poly::zero(vars);
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            g.check_same_vars(&zero)?;
            if !g.is_zero() {
                gens.push(g);
            }
        }
        order.bind(vars)?;
        Ok(Ideal { vars: vars.clone(), generators: gens, order })
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.is_constant())
    }

    pub fn monomial_order(&self) -> MonomialOrder {
        self.order.bind(&self.vars).expect("checked on construction")
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    vars: VarSet,
    /// Primitive integer polynomials with positive leading coefficient, sorted by
    /// leading monomial (largest first).
    pub basis: Vec<Poly>,
    pub order: WeightedOrder,
    pub reduced: bool,
    pub stats: GbStats,
    monic: Vec<Vec<Term>>,
    mo: MonomialOrder,
}

impl GroebnerBasis {
    fn from_elems(vars: &VarSet, order: &WeightedOrder, mo: MonomialOrder, elems: Vec<Vec<Term>>, stats: GbStats) -> Self {
        let basis: Vec<Poly> = elems.iter().map(|t| Poly::from_terms(vars, t.iter().cloned())).collect();
        let monic = elems.iter().map(|t| monic_terms(t)).collect();
        GroebnerBasis { vars: vars.clone(), basis, order: order.clone(), reduced: true, stats, monic, mo }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.monic.iter().map(|t| t[0].0).collect()
    }

    /// Remainder of `p` on division by the basis; zero iff `p` is in the ideal.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        p.check_same_vars(&Poly::zero(&self.vars))?;
        let refs: Vec<&[Term]> = self.monic.iter().map(Vec::as_slice).collect();
        let r = reduce_field(&self.mo, p.sorted_terms(&self.mo), &refs)?;
        Ok(Poly::from_terms(&self.vars, r))
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn to_ideal(&self) -> Ideal {
        Ideal { vars: self.vars.clone(), generators: self.basis.clone(), order: self.order.clone() }
    }
}

pub fn normal_form(p: &Poly, gb: &GroebnerBasis) -> Result<Poly> {
    gb.normal_form(p)
}

/// `S(f, g)` under `order`, scaled to avoid denominators.
pub fn s_polynomial(f: &Poly, g: &Poly, order: &WeightedOrder) -> Result<Poly> {
    f.check_same_vars(g)?;
    let mo = order.bind(f.vars())?;
    let (a, b) = (f.sorted_terms(&mo), g.sorted_terms(&mo));
    if a.is_empty() || b.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let l = a[0].0.lcm(b[0].0);
    let s = combine(&mo, &b[0].1, a[0].0.div(l), &a[1..], &a[0].1, b[0].0.div(l), &b[1..])?;
    Ok(Poly::from_terms(f.vars(), s))
}

pub fn buchberger(ideal: &Ideal) -> Result<GroebnerBasis> {
    buchberger_with(ideal, &Budget::from_env())
}

pub fn buchberger_with(ideal: &Ideal, budget: &Budget) -> Result<GroebnerBasis> {
    if ideal.generators.is_empty() {
        return Err(Error::InvalidArgument("Gröbner basis of an empty generator list".into()));
    }
    let mo = ideal.monomial_order();
    let mut engine = Engine::new(mo, budget);
    let mut gens: Vec<Vec<Term>> = ideal.generators.iter().map(|g| primitive_terms(g.sorted_terms(&mo))).collect();
    // smaller generators first: cheaper early reducers
    gens.sort_by(|a, b| mo.cmp(a[0].0, b[0].0).then(a.len().cmp(&b.len())));
    for g in gens {
        let sugar = sugar_of(&mo, &g);
        if engine.insert_reduced(g, sugar)? {
            break;
        }
    }
    engine.run()?;
    let elems = engine.finish()?;
    Ok(GroebnerBasis::from_elems(&ideal.vars, &ideal.order, mo, elems, engine.stats))
}

struct Elem {
    terms: Vec<Term>,
    sugar: u64,
}

impl Elem {
    fn lm(&self) -> Monomial {
        self.terms[0].0
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u64,
}

struct Engine<'a> {
    mo: MonomialOrder,
    budget: &'a Budget,
    elems: Vec<Elem>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    unit: bool,
    stats: GbStats,
    start: Instant,
}

impl<'a> Engine<'a> {
    fn new(mo: MonomialOrder, budget: &'a Budget) -> Self {
        Engine {
            mo,
            budget,
            elems: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            unit: false,
            stats: GbStats::default(),
            start: Instant::now(),
        }
    }

    fn check_time(&self) -> Result<()> {
        if let Some(limit) = self.budget.max_seconds {
            if self.start.elapsed().as_secs_f64() > limit {
                return Err(Error::BudgetExceeded(format!("time limit of {limit} s")));
            }
        }
        Ok(())
    }

    fn reducers(&self) -> Vec<(&[Term], u64)> {
        self.elems
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(e, _)| (e.terms.as_slice(), e.sugar))
            .collect()
    }

    /// Reduces `p` against the active basis and adds a nonzero remainder.
    /// Returns `true` once the ideal is known to be the unit ideal.
    fn insert_reduced(&mut self, p: Vec<Term>, sugar: u64) -> Result<bool> {
        let (r, sugar) = {
            let red = self.reducers();
            reduce_fraction_free(&self.mo, p, sugar, &red, self.budget, self.start)?
        };
        self.stats.max_terms = self.stats.max_terms.max(r.len());
        if r.is_empty() {
            self.stats.zero_reductions += 1;
            return Ok(false);
        }
        if r[0].0.is_one() {
            self.unit = true;
            return Ok(true);
        }
        if self.elems.len() >= self.budget.max_basis {
            return Err(Error::BudgetExceeded(format!("basis size above {}", self.budget.max_basis)));
        }
        self.update(Elem { terms: r, sugar });
        Ok(false)
    }

    /// Gebauer–Möller installation of a new element.
    fn update(&mut self, h: Elem) {
        let hl = h.lm();
        let k = self.elems.len();
        let mut cand: Vec<(usize, Monomial, bool)> = (0..k)
            .filter(|&g| self.active[g])
            .map(|g| {
                let gl = self.elems[g].lm();
                (g, gl.lcm(hl), gl.is_coprime(hl))
            })
            .collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((g, l, coprime)) = cand.pop() {
            let dominated = cand.iter().any(|c| c.1.divides(l)) || kept.iter().any(|c| c.1.divides(l));
            if coprime || !dominated {
                kept.push((g, l, coprime));
            } else {
                self.stats.pairs_skipped += 1;
            }
        }
        let before = self.pairs.len();
        let elems = &self.elems;
        self.pairs.retain(|p| {
            !(hl.divides(p.lcm) && elems[p.i].lm().lcm(hl) != p.lcm && elems[p.j].lm().lcm(hl) != p.lcm)
        });
        self.stats.pairs_skipped += before - self.pairs.len();
        for (g, l, coprime) in kept {
            if coprime {
                self.stats.pairs_skipped += 1;
                continue;
            }
            let eg = &self.elems[g];
            let sugar = (eg.sugar + self.mo.degree(eg.lm().div(l))).max(h.sugar + self.mo.degree(hl.div(l)));
            self.pairs.push(Pair { i: g, j: k, lcm: l, sugar });
        }
        for g in 0..k {
            if self.active[g] && hl.divides(self.elems[g].lm()) {
                self.active[g] = false;
            }
        }
        self.elems.push(h);
        self.active.push(true);
    }

    fn pop_pair(&mut self) -> Option<Pair> {
        let mo = self.mo;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar.cmp(&b.sugar).then_with(|| mo.cmp(a.lcm, b.lcm)).then((a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn run(&mut self) -> Result<()> {
        while !self.unit {
            let Some(p) = self.pop_pair() else { break };
            self.stats.pairs_reduced += 1;
            if self.stats.pairs_reduced > self.budget.max_pairs {
                return Err(Error::BudgetExceeded(format!("more than {} S-polynomials", self.budget.max_pairs)));
            }
            self.check_time()?;
            let (a, b) = (&self.elems[p.i], &self.elems[p.j]);
            let s = combine(
                &self.mo,
                &b.terms[0].1,
                a.lm().div(p.lcm),
                &a.terms[1..],
                &a.terms[0].1,
                b.lm().div(p.lcm),
                &b.terms[1..],
            )?;
            let s = primitive_terms(s);
            self.insert_reduced(s, p.sugar)?;
        }
        Ok(())
    }

    /// Minimal, inter-reduced, primitive and sorted.
    fn finish(&self) -> Result<Vec<Vec<Term>>> {
        if self.unit {
            return Ok(vec![vec![(Monomial::ONE, Rat::one())]]);
        }
        let minimal: Vec<Vec<Term>> = self
            .elems
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(e, _)| monic_terms(&e.terms))
            .collect();
        let mut out = Vec::with_capacity(minimal.len());
        for (k, g) in minimal.iter().enumerate() {
            let others: Vec<&[Term]> =
                minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, t)| t.as_slice()).collect();
            let tail = reduce_field(&self.mo, g[1..].to_vec(), &others)?;
            let mut t = Vec::with_capacity(tail.len() + 1);
            t.push(g[0].clone());
            t.extend(tail);
            out.push(primitive_terms(t));
        }
        let mo = self.mo;
        out.sort_by(|a, b| mo.cmp(b[0].0, a[0].0));
        Ok(out)
    }
}

fn sugar_of(mo: &MonomialOrder, t: &[Term]) -> u64 {
    t.iter().map(|(m, _)| mo.degree(*m)).max().unwrap_or(0)
}

/// `fa·ma·a − fb·mb·b` for term lists sorted by `mo`, descending.
fn combine(
    mo: &MonomialOrder,
    fa: &Rat,
    ma: Monomial,
    a: &[Term],
    fb: &Rat,
    mb: Monomial,
    b: &[Term],
) -> Result<Vec<Term>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let shift = |m: Monomial, s: Monomial| m.try_mul(s);
    let scale = |c: &Rat, f: &Rat| if f.is_one() { c.clone() } else { c * f };
    let mut am = if a.is_empty() { None } else { Some(shift(a[0].0, ma)?) };
    let mut bm = if b.is_empty() { None } else { Some(shift(b[0].0, mb)?) };
    loop {
        let ord = match (am, bm) {
            (None, None) => break,
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (Some(x), Some(y)) => mo.cmp(x, y),
        };
        match ord {
            Ordering::Greater => {
                out.push((am.unwrap(), scale(&a[i].1, fa)));
                i += 1;
            }
            Ordering::Less => {
                out.push((bm.unwrap(), -scale(&b[j].1, fb)));
                j += 1;
            }
            Ordering::Equal => {
                let c = &scale(&a[i].1, fa) - &scale(&b[j].1, fb);
                if !c.is_zero() {
                    out.push((am.unwrap(), c));
                }
                i += 1;
                j += 1;
            }
        }
        if ord != Ordering::Less {
            am = if i < a.len() { Some(shift(a[i].0, ma)?) } else { None };
        }
        if ord != Ordering::Greater {
            bm = if j < b.len() { Some(shift(b[j].0, mb)?) } else { None };
        }
    }
    Ok(out)
}

fn find_reducer<'r>(m: Monomial, reducers: &[(&'r [Term], u64)]) -> Option<(&'r [Term], u64)> {
    let mut best: Option<(&[Term], u64)> = None;
    for &(g, s) in reducers {
        if g[0].0.divides(m) && best.map_or(true, |(b, _)| g.len() < b.len()) {
            best = Some((g, s));
        }
    }
    best
}

/// Full reduction keeping integer coefficients; the result is primitive with
/// positive leading coefficient.
fn reduce_fraction_free(
    mo: &MonomialOrder,
    mut p: Vec<Term>,
    mut sugar: u64,
    reducers: &[(&[Term], u64)],
    budget: &Budget,
    start: Instant,
) -> Result<(Vec<Term>, u64)> {
    let mut done: Vec<Term> = Vec::new();
    let mut steps = 0usize;
    loop {
        let Some(k) = p.iter().position(|(m, _)| find_reducer(*m, reducers).is_some()) else {
            done.extend(p);
            break;
        };
        done.extend(p.drain(..k));
        let (m, c) = p[0].clone();
        let (g, gs) = find_reducer(m, reducers).expect("found above");
        let q = g[0].0.div(m);
        let d = c.int_gcd(&g[0].1);
        let a = &g[0].1 / &d;
        let b = &c / &d;
        p = combine(mo, &a, Monomial::ONE, &p[1..], &b, q, &g[1..])?;
        if !a.is_one() {
            for t in done.iter_mut() {
                t.1 = &t.1 * &a;
            }
        }
        sugar = sugar.max(gs + mo.degree(q));
        if p.len() + done.len() > budget.max_terms {
            return Err(Error::BudgetExceeded(format!("intermediate polynomial above {} terms", budget.max_terms)));
        }
        steps += 1;
        if steps % 8 == 0 {
            remove_joint_content(&mut done, &mut p);
        }
        if steps % 4 == 0 {
            if let Some(limit) = budget.max_seconds {
                if start.elapsed().as_secs_f64() > limit {
                    return Err(Error::BudgetExceeded(format!("time limit of {limit} s")));
                }
            }
        }
    }
    Ok((primitive_terms(done), sugar))
}

fn remove_joint_content(a: &mut [Term], b: &mut [Term]) {
    let mut g = BigInt::zero();
    for (_, c) in a.iter().chain(b.iter()) {
        g = num_integer::Integer::gcd(&g, &c.numer());
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    let inv = Rat::from_bigint(g).recip();
    for t in a.iter_mut().chain(b.iter_mut()) {
        t.1 = &t.1 * &inv;
    }
}

/// Exact remainder over ℚ by monic reducers.
fn reduce_field(mo: &MonomialOrder, mut p: Vec<Term>, reducers: &[&[Term]]) -> Result<Vec<Term>> {
    let red: Vec<(&[Term], u64)> = reducers.iter().map(|g| (*g, 0)).collect();
    let mut done = Vec::new();
    loop {
        let Some(k) = p.iter().position(|(m, _)| find_reducer(*m, &red).is_some()) else {
            done.extend(p);
            break;
        };
        done.extend(p.drain(..k));
        let (m, c) = p[0].clone();
        let (g, _) = find_reducer(m, &red).expect("found above");
        let f = &c / &g[0].1;
        p = combine(mo, &Rat::one(), Monomial::ONE, &p[1..], &f, g[0].0.div(m), &g[1..])?;
    }
    Ok(done)
}

fn primitive_terms(mut t: Vec<Term>) -> Vec<Term> {
    if t.is_empty() {
        return t;
    }
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, c) in &t {
        num = num_integer::Integer::gcd(&num, &c.numer());
        den = num_integer::Integer::lcm(&den, &c.denom());
    }
    if t[0].1.signum() < 0 {
        num = -num;
    }
    if num.is_one() && den.is_one() {
        return t;
    }
    let f = Rat::from_big(num_rational::BigRational::new(den, num));
    for x in t.iter_mut() {
        x.1 = &x.1 * &f;
    }
    debug_assert!(!t[0].1.numer().is_negative());
    t
}

fn monic_terms(t: &[Term]) -> Vec<Term> {
    let inv = t[0].1.recip();
    t.iter().map(|(m, c)| (*m, c * &inv)).collect()
}
