//! Saturation and elimination on top of [`buchberger_with`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{buchberger_with, Budget, Ideal};
use crate::algebra::{weighted_degree, Monomial, OrderKind, Poly, VarSet, WeightedOrder};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SaturationMethod {
    /// Adjoin `t`, add `1 − t·q`, eliminate `t`.
    Auxiliary,
    /// `q` is a variable and the ideal is quasi-homogeneous: one basis in a
    /// degree order with `q` smallest, then divide out powers of `q`.
    Homogeneous,
    /// `q` is a nonzero constant.
    Trivial,
}

fn weights_of(order: &WeightedOrder) -> BTreeMap<String, u32> {
    match order.kind {
        OrderKind::WeightedDegrevlex | OrderKind::EliminationBlock => order.weights.clone(),
        _ => BTreeMap::new(),
    }
}

/// Generators of `I ∩ ℚ[remaining variables]`.
pub fn eliminate(ideal: &Ideal, drop: &[&str], budget: &Budget) -> Result<Ideal> {
    let vars = ideal.vars();
    for d in drop {
        vars.require(d)?;
    }
    let rest = vars.without(drop)?;
    let mut out_order = ideal.order.clone();
    out_order.weights.retain(|k, _| rest.index_of(k).is_some());
    out_order.eliminate.retain(|k| rest.index_of(k).is_some());
    if out_order.kind == OrderKind::EliminationBlock && out_order.eliminate.is_empty() {
        out_order.kind = if out_order.weights.len() == rest.len() && !rest.is_empty() {
            OrderKind::WeightedDegrevlex
        } else {
            OrderKind::Degrevlex
        };
    }
    if ideal.generators().is_empty() {
        return Ideal::new(&rest, vec![], out_order);
    }
    let order = if drop.is_empty() {
        ideal.order.clone()
    } else {
        WeightedOrder::elimination(drop.iter().map(|s| s.to_string()).collect(), weights_of(&ideal.order))
    };
    let gb = buchberger_with(&Ideal::new(vars, ideal.generators().to_vec(), order)?, budget)?;
    let idx: Vec<usize> = drop.iter().map(|d| vars.index_of(d).expect("checked")).collect();
    let mut gens = Vec::new();
    for b in &gb.basis {
        if idx.iter().all(|&i| b.degree_in(i) == 0) {
            gens.push(b.embed(&rest)?);
        }
    }
    Ideal::new(&rest, gens, out_order)
}

fn fresh_name(vars: &VarSet) -> String {
    let mut name = "t".to_string();
    let mut k = 0;
    while vars.index_of(&name).is_some() {
        k += 1;
        name = format!("t_{k}");
    }
    name
}

pub fn saturate_auxiliary(ideal: &Ideal, q: &Poly, budget: &Budget) -> Result<Ideal> {
    q.check_same_vars(&Poly::zero(ideal.vars()))?;
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let t = fresh_name(ideal.vars());
    let ext = ideal.vars().extended(&[t.as_str()])?;
    let mut gens = Vec::with_capacity(ideal.generators().len() + 1);
    for g in ideal.generators() {
        gens.push(g.embed(&ext)?);
    }
    let tq = &Poly::var(&ext, &t)? * &q.embed(&ext)?;
    gens.push(&Poly::one(&ext) - &tq);
    let mut order = ideal.order.clone();
    if order.kind == OrderKind::Lex {
        order = WeightedOrder::degrevlex();
    }
    if !order.weights.is_empty() {
        order.weights.insert(t.clone(), 1);
    }
    let big = Ideal::new(&ext, gens, order)?;
    let mut out = eliminate(&big, &[t.as_str()], budget)?;
    out.order = ideal.order.clone();
    Ok(out)
}

/// Weights making every generator and `q` quasi-homogeneous under a degree
/// order, when `q` is a single variable.
fn homogeneous_setup(ideal: &Ideal, q: &Poly) -> Option<(usize, BTreeMap<String, u32>)> {
    if q.len() != 1 {
        return None;
    }
    let (m, _) = &q.terms()[0];
    let support: Vec<usize> = (0..ideal.vars().len()).filter(|&i| m.exp(i) > 0).collect();
    if support.len() != 1 {
        return None;
    }
    let weights: BTreeMap<String, u32> = match ideal.order.kind {
        OrderKind::Degrevlex => ideal.vars().names().iter().map(|n| (n.clone(), 1)).collect(),
        OrderKind::WeightedDegrevlex => ideal.order.weights.clone(),
        _ => return None,
    };
    let w = WeightedOrder::weighted(weights.clone());
    for g in ideal.generators() {
        if !weighted_degree(g, &w).ok()?.homogeneous {
            return None;
        }
    }
    Some((support[0], weights))
}

/// Bayer's method; `None` when `q` is not a variable or the ideal is not quasi-homogeneous.
pub fn saturate_homogeneous(ideal: &Ideal, q: &Poly, budget: &Budget) -> Result<Option<Ideal>> {
    q.check_same_vars(&Poly::zero(ideal.vars()))?;
    let Some((k, weights)) = homogeneous_setup(ideal, q) else {
        return Ok(None);
    };
    if ideal.generators().is_empty() {
        return Ok(Some(ideal.clone()));
    }
    let vars = ideal.vars();
    let qname = vars.name(k).to_string();
    let mut names: Vec<String> = vars.names().iter().filter(|n| **n != qname).cloned().collect();
    names.push(qname);
    let moved = VarSet::new(names)?;
    let gens = ideal.generators().iter().map(|g| g.embed(&moved)).collect::<Result<Vec<_>>>()?;
    let gb = buchberger_with(&Ideal::new(&moved, gens, WeightedOrder::weighted(weights))?, budget)?;
    let last = moved.len() - 1;
    let mut out = Vec::with_capacity(gb.basis.len());
    for b in &gb.basis {
        let e = b.terms().iter().map(|(m, _)| m.exp(last)).min().unwrap_or(0);
        let div = Monomial::var(last, e)?;
        let terms = b.terms().iter().map(|(m, c)| (div.div(*m), c.clone()));
        out.push(Poly::from_terms(&moved, terms).embed(vars)?);
    }
    Ok(Some(Ideal::new(vars, out, ideal.order.clone())?))
}

/// `I : q^∞`, with the method used.
pub fn saturate(ideal: &Ideal, q: &Poly, budget: &Budget) -> Result<(Ideal, SaturationMethod)> {
    q.check_same_vars(&Poly::zero(ideal.vars()))?;
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if q.is_constant() {
        return Ok((ideal.clone(), SaturationMethod::Trivial));
    }
    if let Some(s) = saturate_homogeneous(ideal, q, budget)? {
        return Ok((s, SaturationMethod::Homogeneous));
    }
    Ok((saturate_auxiliary(ideal, q, budget)?, SaturationMethod::Auxiliary))
}
