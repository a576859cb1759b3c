//! Sufficiency certificates: the `g′ + fg = 1` test, first integrals,
//! linearizations, closed-form Urabe functions and family substitution.

mod abel;
mod expand;
mod family;

use serde::{Deserialize, Serialize};

use crate::algebra::{Expr, Poly, Rat, VarSet};
use crate::conditions::{compute_series_triple, conditions, default_series_order, UrabeCoeff};
use crate::error::{Error, Result};
use crate::series::{BSeries, PSeries};
use crate::systems::{Binding, LienardPair, PlanarSystem, RatFn, Resolved, UrabeClosedForm};

pub use abel::{abel_first_integral, AbelIntegral};
pub use expand::{expand, Scaled};
pub use family::{
    substitute_family, substitute_family_with, ConditionResidual, FamilySubstitution, SubstitutionMode,
    DEFAULT_PRECISION_DIGITS, NUMERIC_THRESHOLD,
};

/// Default series order of the first-integral and linearization checks.
pub const DEFAULT_CHECK_ORDER: usize = 30;

#[derive(Clone, Debug)]
pub struct ZeroUrabeCheck {
    pub holds: bool,
    /// `g′ + fg − 1`.
    pub residual: RatFn,
}

/// Exact test of `g′(x) + f(x)·g(x) = 1`.
pub fn check_zero_urabe(lp: &LienardPair) -> Result<ZeroUrabeCheck> {
    let x = lp.x();
    let one = RatFn::poly(Poly::one(lp.ring()));
    let residual = lp.g.derivative(x).add(&lp.f.mul(&lp.g)?)?.sub(&one)?;
    Ok(ZeroUrabeCheck { holds: residual.is_zero(), residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CheckMethod {
    Exact,
    Series { order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstIntegralCheck {
    pub holds: bool,
    pub method: CheckMethod,
    /// Lowest degree where the series identity fails.
    pub first_failure_order: Option<usize>,
}

fn check_ring(sys: &PlanarSystem, e: &Expr) -> Result<()> {
    for v in e.variables() {
        if sys.ring().index_of(&v).is_none() {
            return Err(Error::UnboundVariable(v));
        }
    }
    Ok(())
}

/// Derivative of a series along the field, through degree `order − 1`.
fn along_flow(sys: &PlanarSystem, s: &BSeries) -> Result<BSeries> {
    let n = s.order();
    let xd = BSeries::from_poly(&sys.xdot, 0, 1, n);
    let yd = BSeries::from_poly(&sys.ydot, 0, 1, n);
    s.partial(0)?.mul(&xd)?.add(&s.partial(1)?.mul(&yd)?)
}

/// `∂H/∂x·ẋ + ∂H/∂y·ẏ ≡ 0`, exactly for rational `H`, else as a series through `order`.
pub fn check_first_integral(sys: &PlanarSystem, h: &Expr, order: usize) -> Result<FirstIntegralCheck> {
    check_ring(sys, h)?;
    if h.is_rational_function() {
        let r = RatFn::from_expr(h, sys.ring())?;
        let xd = RatFn::poly(sys.xdot.clone());
        let yd = RatFn::poly(sys.ydot.clone());
        let dh = r.derivative(0).mul(&xd)?.add(&r.derivative(1).mul(&yd)?)?;
        return Ok(FirstIntegralCheck { holds: dh.is_zero(), method: CheckMethod::Exact, first_failure_order: None });
    }
    let s = expand(h, sys.ring(), order + 1)?;
    let d = along_flow(sys, &s.series)?;
    let fail = d.valuation();
    Ok(FirstIntegralCheck { holds: fail.is_none(), method: CheckMethod::Series { order }, first_failure_order: fail })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearizationCheck {
    pub holds: bool,
    pub order: usize,
    /// `k` with `u̇ = −k·v`, `v̇ = k·u`; `−1` is the time-reversed rotation.
    pub orientation: i32,
    pub first_failure_order: Option<usize>,
    /// `u·u̇ + v·v̇ ≡ 0`: the map sends orbits to circles, possibly with a non-constant speed.
    pub orbital: bool,
}

fn linear_coeff(s: &BSeries, var: usize) -> Option<Rat> {
    let c1 = s.component(1)?;
    let other = 1 - var;
    let mut out = None;
    for (m, c) in c1.terms() {
        if m.support_size() != 1 || m.exp(other) != 0 {
            return None;
        }
        out = Some(c.clone());
    }
    out
}

/// `u̇ = −v`, `v̇ = u` along the flow, as series through `order`, up to a shared constant
/// factor and orientation.
pub fn check_linearization(sys: &PlanarSystem, u: &Expr, v: &Expr, order: usize) -> Result<LinearizationCheck> {
    check_ring(sys, u)?;
    check_ring(sys, v)?;
    let su = expand(u, sys.ring(), order + 1)?;
    let mut sv = expand(v, sys.ring(), order + 1)?;
    let failed =
        |order| LinearizationCheck { holds: false, order, orientation: 1, first_failure_order: Some(1), orbital: false };
    if su.radicals != sv.radicals {
        return Ok(failed(order));
    }
    let dphase = &su.phase - &sv.phase;
    if dphase.abs().is_one() {
        sv.series = sv.series.scale(&Rat::from_int(-1));
    } else if !dphase.is_zero() {
        return Ok(failed(order));
    }
    let (Some(alpha), Some(beta)) = (linear_coeff(&su.series, 0), linear_coeff(&sv.series, 1)) else {
        return Ok(failed(order));
    };
    let k = &alpha / &beta;
    let orientation = match k.to_i64() {
        Some(1) => 1,
        Some(-1) => -1,
        _ => return Ok(failed(order)),
    };
    let kr = Rat::from_int(orientation as i64);
    let fu = along_flow(sys, &su.series)?;
    let fv = along_flow(sys, &sv.series)?;
    let orbital = fu.mul(&su.series)?.add(&fv.mul(&sv.series)?)?.is_zero();
    let du = fu.add(&sv.series.scale(&kr))?;
    let dv = fv.sub(&su.series.scale(&kr))?;
    let fail = match (du.valuation(), dv.valuation()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    Ok(LinearizationCheck { holds: fail.is_none(), order, orientation, first_failure_order: fail, orbital })
}

#[derive(Clone, Debug)]
pub struct UrabeClosedFormCheck {
    pub holds: bool,
    /// `X/(1 + h(X)) = g·e^F` through order `2m+2`.
    pub cri_holds: bool,
    /// `φ = X + ∫₀^X h` through the same order.
    pub integrated_holds: bool,
    /// The odd coefficients of `h` agree with the extracted Urabe coefficients.
    pub coefficients_match: bool,
    /// Nonzero coefficients of `h` through `X^{2m+1}`.
    pub coefficients: Vec<UrabeCoeff>,
}

/// `h(X) = k1·X^p/sqrt(k2² + k3·X^q)` as a series in `X` over `params`.
pub fn closed_form_series(h: &UrabeClosedForm, params: &VarSet, n: usize) -> Result<PSeries> {
    let k1 = h.k1.to_poly(params)?;
    let k3 = h.k3.to_poly(params)?;
    let k2 = h
        .k2
        .constant_value()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::Expansion("k2 must be a nonzero number".into()))?;
    let k2sq = &k2 * &k2;
    let mut inner = vec![Poly::one(params)];
    inner.resize(n + 1, Poly::zero(params));
    let q = h.q as usize;
    if q <= n {
        inner[q] = k3.scale(&k2sq.recip());
    }
    let root = PSeries::from_coeffs(params, inner, n).pow_rat(&Rat::new(-1, 2))?;
    let series = PSeries::constant(k1, n).mul(&root)?.shift_up(h.p as usize).truncate(n)?;
    Ok(series.scale(&k2.abs().recip()))
}

/// Validates a closed-form Urabe function against the identity `X/(1+h(X)) = g·e^F`.
pub fn check_urabe_closed_form(lp: &LienardPair, h: &UrabeClosedForm, m: usize) -> Result<UrabeClosedFormCheck> {
    let top = 2 * m + 2;
    let n = default_series_order(m);
    let st = compute_series_triple(lp, n)?;
    let params = lp.params();
    let hs = closed_form_series(h, params, n)?;
    let one = PSeries::one(params, n);
    let lhs = st.x.div(&one.add(&hs.compose(&st.x)?)?)?;
    let rhs = lp.g_series(n)?.mul(&st.big_f.exp()?)?;
    let cri_holds = lhs.agrees_with(&rhs, top);
    let integrated = st.x.add(&hs.integrate_from_zero().compose(&st.x)?)?;
    let integrated_holds = integrated.agrees_with(&st.phi, top);
    let cs = conditions(lp, m, n, None)?;
    let mut coefficients_match = true;
    for c in &cs.urabe_coeffs {
        if c.index as usize <= 2 * m + 1 && hs.coeff(c.index as usize) != Some(&c.value) {
            coefficients_match = false;
        }
    }
    let coefficients = (0..=2 * m + 1)
        .filter_map(|j| {
            let c = hs.coeff(j)?;
            (!c.is_zero()).then(|| UrabeCoeff { index: j as u32, value: c.clone() })
        })
        .collect();
    Ok(UrabeClosedFormCheck {
        holds: cri_holds && integrated_holds && coefficients_match,
        cri_holds,
        integrated_holds,
        coefficients_match,
        coefficients,
    })
}

/// Replaces bound coefficient names in `e` by their exact bindings.
pub fn bind_expr(sys: &Resolved, e: &Expr) -> Expr {
    e.substitute(&|name: &str| match sys.bindings.get(name) {
        Some(Binding::Exact(b)) => Some(b.clone()),
        _ => None,
    })
}
