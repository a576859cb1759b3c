//! Randomized property suites, 1000 cases each.

use std::collections::BTreeMap;

use anyhow::{anyhow, Result};
use isochron::algebra::{isolate_real_roots, sturm_real_roots, Bound, Poly, Rat, UPoly, VarSet, WeightedOrder};
use isochron::conditions::oracle::cr_derivative_oracle;
use isochron::conditions::{compute_series_triple, conditions, default_series_order, urabe_extract, ConditionSet};
use isochron::groebner::{buchberger, s_polynomial, Ideal};
use isochron::series::PSeries;
use isochron::systems::{cn_coefficients, default_order, lienard_from_cn, LienardPair, RatFn};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 1000;

/// `ACCEPTANCE_CASES` lowers the case count for quick runs.
pub fn cases() -> u32 {
    std::env::var("ACCEPTANCE_CASES").ok().and_then(|s| s.parse().ok()).unwrap_or(CASES)
}

type Check = std::result::Result<(), TestCaseError>;

fn fail<E: std::fmt::Display>(e: E) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn run<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Check) -> Result<()>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases: cases(), failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| anyhow!("{name}: {e}"))
}

/// Runs every suite; returns each name with its running time in seconds.
pub fn run_all() -> Result<Vec<(&'static str, f64)>> {
    let suites: [(&str, fn() -> Result<()>); 7] = [
        ("series reversion and composition", reversion),
        ("square root squares back", sqrt_square_back),
        ("derivative oracle ideal equality", cross_route),
        ("quasi-homogeneous conditions", quasi_homogeneity),
        ("S-polynomials reduce to zero", s_polynomials),
        ("Sturm count vs sampling", sturm_vs_sampling),
        ("weighted rescaling covariance", rescaling),
    ];
    let mut out = Vec::new();
    for (name, f) in suites {
        let started = std::time::Instant::now();
        f().map_err(|e| anyhow!("{name}: {e:#}"))?;
        out.push((name, started.elapsed().as_secs_f64()));
    }
    Ok(out)
}

fn arb_series() -> impl Strategy<Value = PSeries> {
    (prop::collection::vec((-9i64..10, 1i64..5), 2..10), 1i64..5, any::<bool>()).prop_map(|(c, l, neg)| {
        let mut coeffs: Vec<Rat> = c.into_iter().map(|(n, d)| Rat::new(n, d)).collect();
        coeffs[0] = Rat::zero();
        coeffs[1] = Rat::from_int(if neg { -l } else { l });
        PSeries::from_rats(&VarSet::empty(), &coeffs, 10)
    })
}

fn reversion() -> Result<()> {
    run("reversion", (arb_series(), arb_series()), |(s, d)| {
        let id = PSeries::x(s.ring(), 10);
        let r = s.revert().map_err(fail)?;
        prop_assert!(s.compose(&r).map_err(fail)?.agrees_with(&id, 10));
        prop_assert!(r.compose(&s).map_err(fail)?.agrees_with(&id, 10));
        let c1 = s.coeff(1).and_then(Poly::as_constant).ok_or_else(|| fail("non-constant"))?;
        let t = s.scale(&c1.recip());
        let h = d.compose_inverse(&t).map_err(fail)?;
        prop_assert_eq!(&h, &d.compose(&t.revert().map_err(fail)?).map_err(fail)?);
        prop_assert!(h.compose(&t).map_err(fail)?.agrees_with(&d, 10));
        Ok(())
    })
}

fn sqrt_square_back() -> Result<()> {
    run("sqrt", arb_series(), |s| {
        let t = s.shift_down(1).map_err(fail)?;
        let c0 = t.coeff(0).and_then(Poly::as_constant).ok_or_else(|| fail("non-constant"))?;
        let u = t.scale(&c0.recip()).shift_up(2);
        let r = u.sqrt_valuation2().map_err(fail)?;
        prop_assert!(r.mul(&r).map_err(fail)?.agrees_with(&u, r.order()));
        Ok(())
    })
}

#[derive(Clone, Debug)]
enum Coef {
    Free,
    Zero,
    Val(i64, i64),
}

fn arb_coef() -> impl Strategy<Value = Coef> {
    prop_oneof![
        2 => Just(Coef::Free),
        1 => Just(Coef::Zero),
        2 => (-3i64..=3, 1i64..=3).prop_map(|(n, d)| Coef::Val(n, d)),
    ]
}

const PAIR_NAMES: [&str; 6] = ["f0", "f1", "f2", "f3", "g2", "g3"];

/// `f = f0 + f1 x + f2 x² + f3 x³`, `g = x + g2 x² + g3 x³`, at most three symbols.
fn random_pair(coefs: &[Coef]) -> Result<LienardPair> {
    let mut free = Vec::new();
    let mut coefs = coefs.to_vec();
    for (k, c) in coefs.iter_mut().enumerate() {
        if matches!(c, Coef::Free) {
            if free.len() < 3 {
                free.push(PAIR_NAMES[k]);
            } else {
                *c = Coef::Val(1, 1);
            }
        }
    }
    let params = VarSet::new(free.iter().copied())?;
    let ring = params.extended(&["x"])?;
    let x = Poly::var(&ring, "x")?;
    let value = |k: usize| -> Result<Poly> {
        Ok(match &coefs[k] {
            Coef::Free => Poly::var(&ring, PAIR_NAMES[k])?,
            Coef::Zero => Poly::zero(&ring),
            Coef::Val(n, d) => Poly::constant(&ring, Rat::new(*n, *d)),
        })
    };
    let mut f = Poly::zero(&ring);
    for k in 0..4 {
        f = &f + &(&value(k)? * &x.pow(k as u32));
    }
    let g = &(&x + &(&value(4)? * &x.pow(2))) + &(&value(5)? * &x.pow(3));
    Ok(LienardPair::new(RatFn::poly(f), RatFn::poly(g))?)
}

fn contained(vars: &VarSet, gens: &[Poly], members: &[Poly]) -> Result<bool> {
    if vars.is_empty() {
        let unit = gens.iter().any(|p| !p.is_zero());
        return Ok(unit || members.iter().all(Poly::is_zero));
    }
    let gb = buchberger(&Ideal::new(vars, gens.to_vec(), WeightedOrder::degrevlex())?)?;
    for p in members {
        if !gb.normal_form(p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cross_route() -> Result<()> {
    let m = 3;
    run("cross-route", prop::collection::vec(arb_coef(), 6), |coefs| {
        let lp = random_pair(&coefs).map_err(fail)?;
        let st = compute_series_triple(&lp, default_series_order(m)).map_err(fail)?;
        let a = urabe_extract(&st, m, None).map_err(fail)?;
        let b = cr_derivative_oracle(&lp, m, None).map_err(fail)?;
        prop_assert_eq!(&a.params, &b.params);
        let (pa, pb) = (a.polys(), b.polys());
        prop_assert!(contained(&a.params, &pa, &pb).map_err(fail)?, "oracle conditions outside the extracted ideal");
        prop_assert!(contained(&a.params, &pb, &pa).map_err(fail)?, "extracted conditions outside the oracle ideal");
        Ok(())
    })
}

/// A degree, a subset of at most four of its coefficients made symbolic, and a scale.
fn arb_subfamily() -> impl Strategy<Value = (u32, Vec<String>, Rat)> {
    (2u32..=4, prop::collection::vec(any::<bool>(), 9), (1i64..=3, 1i64..=3, any::<bool>())).prop_map(|(n, mask, (p, q, neg))| {
        let names: Vec<String> = cn_coefficients(n)
            .iter()
            .zip(&mask)
            .filter(|(_, &on)| on)
            .map(|(c, _)| c.name())
            .take(4)
            .collect();
        (n, names, Rat::new(if neg { -p } else { p }, q))
    })
}

fn subfamily_conditions(n: u32, names: &[String], scale: Option<&Rat>) -> Result<ConditionSet> {
    let params = VarSet::new(names.iter().cloned())?;
    let mut coeffs = BTreeMap::new();
    for name in names {
        let mut v = Poly::var(&params, name)?;
        if let Some(l) = scale {
            let w = isochron::systems::default_weight(name).ok_or_else(|| anyhow!("no weight for {name}"))?;
            v = v.scale(&l.pow(w));
        }
        coeffs.insert(name.clone(), v);
    }
    let lp = lienard_from_cn(n, &coeffs, &params)?;
    let m = 3;
    let order = default_order(lp.params())?;
    Ok(conditions(&lp, m, default_series_order(m), Some(&order))?)
}

fn weight_vector(vars: &VarSet) -> Result<Vec<u32>> {
    vars.names()
        .iter()
        .map(|n| isochron::systems::default_weight(n).ok_or_else(|| anyhow!("no weight for {n}")))
        .collect()
}

fn quasi_homogeneity() -> Result<()> {
    run("quasi-homogeneity", arb_subfamily(), |(n, names, _)| {
        let cs = subfamily_conditions(n, &names, None).map_err(fail)?;
        cs.audit_quasi_homogeneous().map_err(fail)?;
        let w = weight_vector(&cs.params).map_err(fail)?;
        for c in &cs.conditions {
            let d = (c.index - 1) as u64;
            prop_assert_eq!(c.poly.weighted_degree_range(&w), Some((d, d)), "condition {}", c.index);
        }
        for u in cs.urabe_coeffs.iter().filter(|u| !u.value.is_zero()) {
            let d = u.index as u64;
            prop_assert_eq!(u.value.weighted_degree_range(&w), Some((d, d)), "Urabe coefficient {}", u.index);
        }
        Ok(())
    })
}

fn rescaling() -> Result<()> {
    run("rescaling", arb_subfamily(), |(n, names, l)| {
        let base = subfamily_conditions(n, &names, None).map_err(fail)?;
        let scaled = subfamily_conditions(n, &names, Some(&l)).map_err(fail)?;
        prop_assert_eq!(base.polys(), scaled.polys());
        prop_assert_eq!(base.urabe_coeffs.len(), scaled.urabe_coeffs.len());
        for (u, v) in base.urabe_coeffs.iter().zip(&scaled.urabe_coeffs) {
            prop_assert_eq!(&u.value.scale(&l.pow(u.index)), &v.value, "Urabe coefficient {}", u.index);
        }
        Ok(())
    })
}

fn small_poly(vars: &VarSet) -> impl Strategy<Value = Poly> {
    let vars = vars.clone();
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -3i64..=3), 1..4).prop_map(move |terms| {
        let mut p = Poly::zero(&vars);
        for ((a, b, c), k) in terms {
            let m = &(&Poly::var_index(&vars, 0).pow(a) * &Poly::var_index(&vars, 1).pow(b)) * &Poly::var_index(&vars, 2).pow(c);
            p = &p + &m.scale(&Rat::from_int(k));
        }
        p
    })
}

fn s_polynomials() -> Result<()> {
    let v = VarSet::new(["x", "y", "z"])?;
    run("S-polynomials", (prop::collection::vec(small_poly(&v), 1..4), 0usize..3), |(gens, kind)| {
        // lex stays bivariate
        let gens: Vec<Poly> =
            if kind == 0 { gens.iter().map(|g| g.partial_eval(&[(2, Rat::one())])).collect() } else { gens };
        let order = match kind {
            0 => WeightedOrder::lex(),
            1 => WeightedOrder::degrevlex(),
            _ => WeightedOrder::weighted([("x", 2u32), ("y", 1), ("z", 3)].iter().map(|(k, w)| (k.to_string(), *w)).collect()),
        };
        let ideal = Ideal::new(gens[0].vars(), gens.clone(), order.clone()).map_err(fail)?;
        if ideal.generators().is_empty() {
            return Ok(());
        }
        let g = buchberger(&ideal).map_err(fail)?;
        for a in 0..g.basis.len() {
            for b in a + 1..g.basis.len() {
                let s = s_polynomial(&g.basis[a], &g.basis[b], &order).map_err(fail)?;
                prop_assert!(g.normal_form(&s).map_err(fail)?.is_zero());
            }
        }
        for f in &gens {
            prop_assert!(g.normal_form(f).map_err(fail)?.is_zero());
        }
        Ok(())
    })
}

/// Real roots on the grid k/10 with multiplicities, times factors `(x − a)² + s`, `s > 0`.
fn arb_rooted() -> impl Strategy<Value = (UPoly, Vec<i64>, i64, i64)> {
    (
        prop::collection::vec((-30i64..=30, 1u32..=3), 0..5),
        prop::collection::vec((-4i64..=4, 1i64..=5), 0..3),
        -1i64..=1,
        (-40i64..=40, -40i64..=40),
    )
        .prop_map(|(roots, quads, sign, (a, b))| {
            let mut p = UPoly::new(vec![Rat::from_int(if sign == 0 { 2 } else { sign * 3 })]);
            for &(k, mult) in &roots {
                for _ in 0..mult {
                    p = p.mul(&UPoly::new(vec![Rat::new(-k, 10), Rat::one()]));
                }
            }
            for &(a, s) in &quads {
                let a = Rat::new(a, 2);
                let c = &(&a * &a) + &Rat::new(s, 10);
                p = p.mul(&UPoly::new(vec![c, -&(&a * &Rat::from_int(2)), Rat::one()]));
            }
            let mut distinct: Vec<i64> = roots.iter().map(|r| r.0).collect();
            distinct.sort_unstable();
            distinct.dedup();
            (p, distinct, a.min(b), a.max(b))
        })
}

/// `2·max |a_{n−k}/a_n|^{1/k}`, an upper bound on the moduli of the roots.
fn fujiwara_bound(p: &UPoly) -> f64 {
    let c: Vec<f64> = p.coeffs().iter().map(Rat::to_f64).collect();
    let n = c.len() - 1;
    let top = c[n].abs();
    (1..=n).map(|k| (c[n - k].abs() / top).powf(1.0 / k as f64)).fold(0.0, f64::max) * 2.0 * (1.0 + 1e-9)
}

fn sturm_vs_sampling() -> Result<()> {
    run("Sturm", arb_rooted(), |(p, roots, lo, hi)| {
        // every real root lies on the grid k/10 within the Cauchy bound, so sampling there is exhaustive
        let reach = (fujiwara_bound(&p) * 10.0).ceil() as i64 + 1;
        let sampled: Vec<i64> = (-reach..=reach).filter(|&k| p.eval(&Rat::new(k, 10)).is_zero()).collect();
        prop_assert_eq!(&sampled, &roots);
        let total = sturm_real_roots(&p, &Bound::NegInf, &Bound::PosInf).map_err(fail)?;
        prop_assert_eq!(total, sampled.len());
        // half-grid endpoints are never roots
        let (a, b) = (Rat::new(2 * lo + 1, 20), Rat::new(2 * hi + 1, 20));
        let inside = sampled.iter().filter(|&&k| lo < k && k <= hi).count();
        let counted = sturm_real_roots(&p, &Bound::Finite(a.clone()), &Bound::Finite(b.clone())).map_err(fail)?;
        prop_assert_eq!(counted, inside, "interval ({}, {})", a, b);
        let isolated = isolate_real_roots(&p, &Rat::new(1, 10)).map_err(fail)?;
        prop_assert_eq!(isolated.len(), sampled.len());
        for ((l, r), k) in isolated.iter().zip(&sampled) {
            let x = Rat::new(*k, 10);
            prop_assert!(l <= &x && &x <= r, "root {} outside ({}, {})", x, l, r);
        }
        Ok(())
    })
}
