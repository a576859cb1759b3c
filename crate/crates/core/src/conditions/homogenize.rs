//! Weighted homogenization `A^w = a` and the `A20 = 0 | 1` reduction.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{normalize, Condition, ConditionSet};
use crate::algebra::{Monomial, Poly, VarSet, WeightedOrder};
use crate::error::{Error, Result};

/// Old parameters `a` and new ones `A` with `A^w = a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reparametrization {
    pub from: VarSet,
    pub to: VarSet,
    pub weights: Vec<u32>,
}

fn upper_name(name: &str) -> String {
    let mut c = name.chars();
    match c.next() {
        Some(first) => first.to_ascii_uppercase().to_string() + c.as_str(),
        None => String::new(),
    }
}

impl Reparametrization {
    pub fn forward(&self, p: &Poly) -> Result<Poly> {
        p.check_same_vars(&Poly::zero(&self.from))?;
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let e: Vec<u32> = (0..self.from.len()).map(|i| m.exp(i) * self.weights[i]).collect();
            terms.push((Monomial::from_exponents(&e)?, c.clone()));
        }
        Ok(Poly::from_terms(&self.to, terms))
    }

    /// Inverse of [`forward`](Self::forward); every exponent must be a multiple of the weight.
    pub fn back(&self, p: &Poly) -> Result<Poly> {
        let p = p.embed(&self.to)?;
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut e = Vec::with_capacity(self.to.len());
            for i in 0..self.to.len() {
                let (x, w) = (m.exp(i), self.weights[i]);
                if x % w != 0 {
                    return Err(Error::NotQuasiHomogeneous(format!(
                        "{}^{x} is not a power of {}^{w}",
                        self.to.name(i),
                        self.to.name(i)
                    )));
                }
                e.push(x / w);
            }
            terms.push((Monomial::from_exponents(&e)?, c.clone()));
        }
        Ok(Poly::from_terms(&self.from, terms))
    }
}

pub fn homogenize_reparametrize(cs: &ConditionSet) -> Result<ConditionSet> {
    if cs.reparametrization.is_some() {
        return Err(Error::InvalidArgument("conditions are already homogenized".into()));
    }
    if cs.weights.weights.is_empty() {
        return Err(Error::MissingWeight("homogenization needs weights on every parameter".into()));
    }
    cs.audit_quasi_homogeneous()?;
    let mut weights = Vec::new();
    for name in cs.params.names() {
        weights.push(cs.weights.weight_of(name).ok_or_else(|| Error::MissingWeight(name.clone()))?);
    }
    let to = VarSet::new(cs.params.names().iter().map(|n| upper_name(n)))?;
    let rp = Reparametrization { from: cs.params.clone(), to: to.clone(), weights };
    let order = WeightedOrder::degrevlex();
    let mut conditions = Vec::new();
    for c in &cs.conditions {
        conditions.push(Condition { index: c.index, poly: normalize(&rp.forward(&c.poly)?, &order)? });
    }
    Ok(ConditionSet {
        params: to,
        conditions,
        urabe_coeffs: Vec::new(),
        weights: order,
        order_m: cs.order_m,
        series_order: cs.series_order,
        route: cs.route,
        reparametrization: Some(rp),
        a20_branch: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum A20Mode {
    SetZero,
    SetOne,
}

impl FromStr for A20Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a20_zero" | "zero" | "set_zero" => Ok(A20Mode::SetZero),
            "a20_one" | "one" | "set_one" => Ok(A20Mode::SetOne),
            _ => Err(Error::InvalidArgument(format!("unknown normalization `{s}`"))),
        }
    }
}

/// Fixes `A20` on homogenized conditions; `A20 = 1` corresponds to rescaling `(x, y) ↦ (x, y)/A20`.
pub fn normalize_a20(cs: &ConditionSet, mode: A20Mode) -> Result<ConditionSet> {
    if cs.reparametrization.is_none() {
        return Err(Error::InvalidArgument("normalize_a20 expects homogenized conditions".into()));
    }
    if cs.a20_branch.is_some() {
        return Err(Error::InvalidArgument("A20 is already fixed".into()));
    }
    let i = cs.params.require("A20")?;
    let value = match mode {
        A20Mode::SetZero => crate::algebra::Rat::zero(),
        A20Mode::SetOne => crate::algebra::Rat::one(),
    };
    let to = cs.params.without(&["A20"])?;
    let order = WeightedOrder::degrevlex();
    let mut conditions = Vec::new();
    for c in &cs.conditions {
        let p = c.poly.partial_eval(&[(i, value.clone())]).embed(&to)?;
        if !p.is_zero() {
            conditions.push(Condition { index: c.index, poly: normalize(&p, &order)? });
        }
    }
    Ok(ConditionSet {
        params: to,
        conditions,
        urabe_coeffs: Vec::new(),
        weights: order,
        order_m: cs.order_m,
        series_order: cs.series_order,
        route: cs.route,
        reparametrization: cs.reparametrization.clone(),
        a20_branch: Some(mode),
    })
}

/// Weights of the reparametrized variables, for reporting.
pub fn reparametrized_weights(rp: &Reparametrization) -> BTreeMap<String, u32> {
    rp.to.names().iter().cloned().zip(rp.weights.iter().copied()).collect()
}
