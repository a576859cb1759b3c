//! Isochronicity conditions of a Liénard pair by the C-algorithm.
//!
//! The primary route expands `F = ∫f`, `φ = ∫e^F` and `X = sqrt(2∫g·e^{2F})`,
//! then writes `φ − X` as a series in `X`. Its odd coefficients are the
//! conditions and its even coefficients give the Urabe coefficients. The
//! derivative recursion in [`oracle`] computes the same ideal independently.

mod homogenize;
pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::algebra::{weighted_degree, Poly, Rat, VarSet, WeightedOrder};
use crate::error::{Error, Result};
use crate::series::PSeries;
use crate::systems::LienardPair;

pub use homogenize::{homogenize_reparametrize, normalize_a20, reparametrized_weights, A20Mode, Reparametrization};
pub use oracle::cr_derivative_oracle;

pub const DEFAULT_M: usize = 9;

/// Default truncation order for a given `m`.
pub fn default_series_order(m: usize) -> usize {
    2 * m + 4
}

#[derive(Clone, Debug)]
pub struct SeriesTriple {
    pub big_f: PSeries,
    pub phi: PSeries,
    pub x: PSeries,
    pub order: usize,
}

/// `F`, `φ`, `X` through order `n`.
pub fn compute_series_triple(lp: &LienardPair, n: usize) -> Result<SeriesTriple> {
    let f = lp.f_series(n)?;
    let g = lp.g_series(n)?;
    let big_f = f.integrate_from_zero();
    let phi = big_f.exp()?.integrate_from_zero();
    let e2f = big_f.scale(&Rat::from_int(2)).exp()?;
    let q = g.mul(&e2f)?.integrate_from_zero().scale(&Rat::from_int(2));
    let x = q.sqrt_valuation2()?;
    Ok(SeriesTriple {
        big_f: big_f.truncate(n)?,
        phi: phi.truncate(n)?,
        x: x.truncate(n)?,
        order: n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Reversion of `X` and the identity `φ = X + ∫h`.
    Series,
    /// The derivative recursion on both sides of `g̃ = X/(1+h)`.
    Derivative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    /// Derivative order `2k+1` the condition comes from.
    pub index: u32,
    pub poly: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UrabeCoeff {
    /// `2k+1` for `c_{2k+1}`.
    pub index: u32,
    pub value: Poly,
}

#[derive(Clone, Debug)]
pub struct ConditionSet {
    pub params: VarSet,
    /// Nonzero conditions in increasing derivative order.
    pub conditions: Vec<Condition>,
    pub urabe_coeffs: Vec<UrabeCoeff>,
    pub weights: WeightedOrder,
    pub order_m: usize,
    pub series_order: usize,
    pub route: Route,
    pub reparametrization: Option<Reparametrization>,
    pub a20_branch: Option<A20Mode>,
}

impl ConditionSet {
    pub fn polys(&self) -> Vec<Poly> {
        self.conditions.iter().map(|c| c.poly.clone()).collect()
    }

    pub fn first_nonzero(&self) -> Option<&Poly> {
        self.conditions.first().map(|c| &c.poly)
    }

    pub fn urabe_coeff(&self, index: u32) -> Option<&Poly> {
        self.urabe_coeffs.iter().find(|c| c.index == index).map(|c| &c.value)
    }

    /// Checks every condition is quasi-homogeneous under the weights.
    pub fn audit_quasi_homogeneous(&self) -> Result<()> {
        if self.weights.weights.is_empty() {
            return Ok(());
        }
        for c in &self.conditions {
            let wd = weighted_degree(&c.poly, &self.weights)?;
            if !wd.homogeneous {
                return Err(Error::NotQuasiHomogeneous(format!(
                    "condition {} has weighted degrees {:?}",
                    c.index, wd.term_degrees
                )));
            }
        }
        Ok(())
    }
}

/// Weights when every parameter has one, plain degrevlex otherwise.
pub(crate) fn normalizing_order(params: &VarSet, weights: Option<&WeightedOrder>) -> WeightedOrder {
    match weights {
        Some(w) if params.names().iter().all(|n| w.weight_of(n).is_some()) => {
            let mut w = w.clone();
            w.weights.retain(|k, _| params.index_of(k).is_some());
            WeightedOrder::weighted(w.weights)
        }
        _ => WeightedOrder::degrevlex(),
    }
}

/// Integer, content-free, positive leading coefficient.
pub(crate) fn normalize(p: &Poly, order: &WeightedOrder) -> Result<Poly> {
    Ok(p.primitive(&order.bind(p.vars())?))
}

/// Conditions and Urabe coefficients from the series triple.
pub fn urabe_extract(st: &SeriesTriple, m: usize, weights: Option<&WeightedOrder>) -> Result<ConditionSet> {
    let n = st.order;
    if n < 2 * m + 4 {
        return Err(Error::Truncation { needed: 2 * m + 4, have: n });
    }
    let params = st.x.ring().clone();
    let d = st.phi.sub(&st.x)?;
    let h = d.compose_inverse(&st.x)?;
    let order = normalizing_order(&params, weights);
    let mut conditions = Vec::new();
    for k in 1..=m {
        let c = h.coeff(2 * k + 1).expect("within order");
        if !c.is_zero() {
            conditions.push(Condition { index: (2 * k + 1) as u32, poly: normalize(c, &order)? });
        }
    }
    let mut urabe_coeffs = Vec::new();
    let mut j = 2;
    while j <= n {
        let c = h.coeff(j).expect("within order").scale(&Rat::from_int(j as i64));
        urabe_coeffs.push(UrabeCoeff { index: (j - 1) as u32, value: c });
        j += 2;
    }
    Ok(ConditionSet {
        params,
        conditions,
        urabe_coeffs,
        weights: order,
        order_m: m,
        series_order: n,
        route: Route::Series,
        reparametrization: None,
        a20_branch: None,
    })
}

/// Series triple and extraction in one step.
pub fn conditions(lp: &LienardPair, m: usize, n: usize, weights: Option<&WeightedOrder>) -> Result<ConditionSet> {
    let st = compute_series_triple(lp, n)?;
    urabe_extract(&st, m, weights)
}

/// `S(f,g)` of the period-monotonicity criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityIndex {
    /// `5g″(0)² + 10g″(0)f(0) + 8f(0)² − 3g‴(0) − 6f′(0)`.
    pub raw: Poly,
    /// `raw/2`, the normalization matching the quartic and Abel polynomials.
    pub value: Poly,
}

pub fn monotonicity_index(lp: &LienardPair) -> Result<MonotonicityIndex> {
    let f = lp.f_series(1)?;
    let g = lp.g_series(3)?;
    let c = |s: &PSeries, k: usize| s.coeff(k).expect("within order").clone();
    let (f0, f1) = (c(&f, 0), c(&f, 1));
    let g2 = c(&g, 2).scale(&Rat::from_int(2));
    let g3 = c(&g, 3).scale(&Rat::from_int(6));
    let r = |k: i64| Rat::from_int(k);
    let raw = &(&(&(&(&g2 * &g2).scale(&r(5)) + &(&g2 * &f0).scale(&r(10))) + &(&f0 * &f0).scale(&r(8)))
        - &g3.scale(&r(3)))
        - &f1.scale(&r(6));
    let value = raw.scale(&Rat::new(1, 2));
    Ok(MonotonicityIndex { raw, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{default_order, lienard_from_abel, lienard_from_cn, AbelSystem, RatFn};
    use std::collections::BTreeMap;

    fn c4_symbolic() -> LienardPair {
        let names = ["b11", "b21", "b31", "a20", "a30", "a40", "a02", "a12", "a22"];
        let params = VarSet::new(names).unwrap();
        let map: BTreeMap<String, Poly> =
            names.iter().map(|k| (k.to_string(), Poly::var(&params, k).unwrap())).collect();
        lienard_from_cn(4, &map, &params).unwrap()
    }

    #[test]
    fn linear_center_has_no_conditions() {
        let x = VarSet::new(["x"]).unwrap();
        let lp = LienardPair::new(RatFn::poly(Poly::zero(&x)), RatFn::poly(Poly::var(&x, "x").unwrap())).unwrap();
        let st = compute_series_triple(&lp, 10).unwrap();
        assert_eq!(st.x.coeffs()[1], Poly::one(st.x.ring()));
        assert!(st.x.coeffs().iter().skip(2).all(Poly::is_zero));
        let cs = urabe_extract(&st, 3, None).unwrap();
        assert!(cs.conditions.is_empty());
        assert!(cs.urabe_coeffs.iter().all(|c| c.value.is_zero()));
        assert!(urabe_extract(&st, 4, None).is_err());
    }

    #[test]
    fn quartic_first_condition_and_index() {
        let lp = c4_symbolic();
        let w = default_order(lp.params()).unwrap();
        let cs = conditions(&lp, 2, 8, Some(&w)).unwrap();
        cs.audit_quasi_homogeneous().unwrap();
        let p = |s: &str| Poly::parse(s, lp.params()).unwrap();
        let p2 = p("3*b21 - 3*a12 + b11^2 - a20*b11 - 9*a30 + 4*a02^2 - 5*b11*a02 + 10*a20^2 + 10*a20*a02");
        let order = w.bind(lp.params()).unwrap();
        assert_eq!(cs.first_nonzero().unwrap(), &p2.primitive(&order));
        let s = monotonicity_index(&lp).unwrap();
        assert_eq!(s.value, p2);
    }

    #[test]
    fn abel_index_is_a1_squared_minus_3a2() {
        let lp = lienard_from_abel(&AbelSystem::symbolic(3).unwrap()).unwrap();
        let s = monotonicity_index(&lp).unwrap();
        assert_eq!(s.value, Poly::parse("a1^2 - 3*a2", lp.params()).unwrap());
    }
}
