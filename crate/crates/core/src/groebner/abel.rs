//! Isochronous centers of `ẋ = −y, ẏ = x(1 + a1·y + … + an·yⁿ)`.
//!
//! For `n ≤ 3` the candidate family comes from the slice `a1 = 1` and is
//! certified by `I ⊆ J ⊆ √I`. For `n ≥ 4` the ideal is saturated by `an`;
//! a unit ideal, or slices `an = ±1` without real points, rule out `an ≠ 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    buchberger_with, radical_membership, saturate, slice, zero_dim_points, Budget, GroebnerBasis, Ideal,
    RadicalWitness, SaturationMethod, ZeroDimReport,
};
use crate::algebra::{Poly, Rat};
use crate::conditions::{conditions, default_series_order, ConditionSet, UrabeCoeff};
use crate::error::{Error, Result};
use crate::systems::{default_order, lienard_from_abel, AbelSystem};

const MAX_POWER: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbelVerdict {
    /// Every isochronous member lies on the reported one-parameter family.
    UniqueFamily,
    /// Only `a1 = … = an = 0`.
    OnlyLinearCenter,
    /// No isochronous center with `an ≠ 0`.
    NoneWithLeadingNonzero,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct AbelFamily {
    /// `a_k = r_k·a1^k` (or `a_k = 0`).
    pub bindings: Vec<(String, Poly)>,
    /// Every condition vanishes on the family.
    pub conditions_vanish: bool,
    /// Each `a_k − r_k·a1^k` lies in the radical of the condition ideal.
    pub witnesses: Vec<(String, RadicalWitness)>,
    /// Urabe coefficients on the family; zero ones omitted.
    pub urabe: Vec<UrabeCoeff>,
}

impl AbelFamily {
    pub fn certified(&self) -> bool {
        self.conditions_vanish && self.witnesses.iter().all(|(_, w)| w.holds())
    }
}

#[derive(Clone, Debug)]
pub struct SliceOutcome {
    pub value: Rat,
    pub report: ZeroDimReport,
}

#[derive(Clone, Debug)]
pub struct SaturationOutcome {
    pub method: SaturationMethod,
    pub unit: bool,
    pub slices: Vec<SliceOutcome>,
}

#[derive(Clone, Debug)]
pub struct AbelReport {
    pub n: usize,
    pub conditions: ConditionSet,
    pub basis: Option<GroebnerBasis>,
    pub family: Option<AbelFamily>,
    pub saturation: Option<SaturationOutcome>,
    pub verdict: AbelVerdict,
    /// Which argument produced the verdict.
    pub route: String,
    pub notes: Vec<String>,
}

impl AbelReport {
    pub fn verdict_text(&self) -> String {
        match self.verdict {
            AbelVerdict::UniqueFamily => {
                let f = self.family.as_ref().expect("family verdict carries a family");
                let b: Vec<String> = f.bindings.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                format!("unique family {}", b.join(", "))
            }
            AbelVerdict::OnlyLinearCenter => "only the linear center".to_string(),
            AbelVerdict::NoneWithLeadingNonzero => format!("no isochronous with a{}≠0", self.n),
            AbelVerdict::Inconclusive => "inconclusive at this m/budget".to_string(),
        }
    }
}

impl fmt::Display for AbelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AbelVerdict::UniqueFamily => "unique_family",
            AbelVerdict::OnlyLinearCenter => "only_linear_center",
            AbelVerdict::NoneWithLeadingNonzero => "none_with_leading_nonzero",
            AbelVerdict::Inconclusive => "inconclusive",
        })
    }
}

pub fn abel_conditions(n: usize, m: usize, series_order: Option<usize>) -> Result<ConditionSet> {
    if !(1..=9).contains(&n) {
        return Err(Error::InvalidArgument(format!("Abel degree must be in 1..=9, got {n}")));
    }
    let lp = lienard_from_abel(&AbelSystem::symbolic(n)?)?;
    let w = default_order(lp.params())?;
    conditions(&lp, m, series_order.unwrap_or_else(|| default_series_order(m)), Some(&w))
}

fn inconclusive(n: usize, cs: ConditionSet, basis: Option<GroebnerBasis>, why: String) -> AbelReport {
    AbelReport {
        n,
        conditions: cs,
        basis,
        family: None,
        saturation: None,
        verdict: AbelVerdict::Inconclusive,
        route: "budget".to_string(),
        notes: vec![why],
    }
}

pub fn abel_analysis(n: usize, m: usize, series_order: Option<usize>, budget: &Budget) -> Result<AbelReport> {
    let cs = abel_conditions(n, m, series_order)?;
    let ideal = Ideal::new(&cs.params, cs.polys(), cs.weights.clone())?;
    if ideal.generators().is_empty() {
        let mut r = inconclusive(n, cs, None, "no nonzero conditions at this order".into());
        r.route = "conditions".into();
        return Ok(r);
    }
    let gb = match buchberger_with(&ideal, budget) {
        Ok(g) => g,
        Err(Error::BudgetExceeded(why)) => return Ok(inconclusive(n, cs, None, why)),
        Err(e) => return Err(e),
    };
    let run = if n <= 3 { family_route(n, &cs, &ideal, &gb, budget) } else { saturation_route(n, &ideal, budget) };
    match run {
        Ok((verdict, route, family, saturation, notes)) => Ok(AbelReport {
            n,
            conditions: cs,
            basis: Some(gb),
            family,
            saturation,
            verdict,
            route,
            notes,
        }),
        Err(Error::BudgetExceeded(why)) => Ok(inconclusive(n, cs, Some(gb), why)),
        Err(e) => Err(e),
    }
}

type RouteResult = (AbelVerdict, String, Option<AbelFamily>, Option<SaturationOutcome>, Vec<String>);

fn family_route(n: usize, cs: &ConditionSet, ideal: &Ideal, gb: &GroebnerBasis, budget: &Budget) -> Result<RouteResult> {
    let params = &cs.params;
    let a1 = Poly::var(params, "a1")?;
    let s = slice(ideal, "a1", &Rat::one())?;
    let point: Vec<(String, Rat)> = if s.vars().is_empty() {
        if s.is_unit() {
            return family_from(n, cs, gb, None, budget);
        }
        vec![]
    } else {
        match zero_dim_points(&s, budget)? {
            ZeroDimReport::Empty => return family_from(n, cs, gb, None, budget),
            ZeroDimReport::UniqueRationalPoint(p) => p,
            other => {
                let note = format!("slice a1 = 1 does not give a single rational point: {other:?}");
                return Ok((AbelVerdict::Inconclusive, "slice".into(), None, None, vec![note]));
            }
        }
    };
    let mut bindings = Vec::new();
    for (name, r) in point {
        let k: u32 = name[1..].parse().map_err(|_| Error::UnknownVariable(name.clone()))?;
        bindings.push((name, a1.pow(k).scale(&r)));
    }
    family_from(n, cs, gb, Some(bindings), budget)
}

/// `bindings = None` means the family `a1 = … = an = 0`.
fn family_from(
    n: usize,
    cs: &ConditionSet,
    gb: &GroebnerBasis,
    bindings: Option<Vec<(String, Poly)>>,
    budget: &Budget,
) -> Result<RouteResult> {
    let params = &cs.params;
    let trivial = bindings.is_none();
    let bindings = match bindings {
        Some(b) => b,
        None => params.names().iter().map(|k| (k.clone(), Poly::zero(params))).collect(),
    };
    let subs: Vec<(usize, Poly)> = bindings.iter().map(|(k, v)| (params.index_of(k).expect("parameter"), v.clone())).collect();
    let mut conditions_vanish = true;
    for c in &cs.conditions {
        if !c.poly.substitute_many(&subs)?.is_zero() {
            conditions_vanish = false;
        }
    }
    let mut witnesses = Vec::new();
    for (k, v) in &bindings {
        let g = &Poly::var(params, k)? - v;
        witnesses.push((k.clone(), radical_membership(gb, &g, MAX_POWER, budget)?));
    }
    let mut urabe = Vec::new();
    for c in &cs.urabe_coeffs {
        let v = c.value.substitute_many(&subs)?;
        if !v.is_zero() {
            urabe.push(UrabeCoeff { index: c.index, value: v });
        }
    }
    let family = AbelFamily { bindings, conditions_vanish, witnesses, urabe };
    let route = "family from the slice a1 = 1, certified by I ⊆ J ⊆ √I".to_string();
    let verdict = match (family.certified(), trivial) {
        (true, true) => AbelVerdict::OnlyLinearCenter,
        (true, false) => AbelVerdict::UniqueFamily,
        (false, _) => AbelVerdict::Inconclusive,
    };
    let mut notes = Vec::new();
    if verdict == AbelVerdict::Inconclusive {
        notes.push(format!("n = {n}: candidate family is not certified"));
    }
    Ok((verdict, route, Some(family), None, notes))
}

fn saturation_route(n: usize, ideal: &Ideal, budget: &Budget) -> Result<RouteResult> {
    let an = format!("a{n}");
    let q = Poly::var(ideal.vars(), &an)?;
    let (sat, method) = saturate(ideal, &q, budget)?;
    let sgb = buchberger_with(&sat, budget)?;
    if sgb.is_unit() {
        let out = SaturationOutcome { method, unit: true, slices: vec![] };
        let route = format!("saturation by {an} is the unit ideal");
        return Ok((AbelVerdict::NoneWithLeadingNonzero, route, None, Some(out), vec![]));
    }
    // weights make a_n ↦ λⁿ·a_n; odd n reaches every sign from +1
    let values: Vec<Rat> = if n % 2 == 0 { vec![Rat::one(), Rat::from_int(-1)] } else { vec![Rat::one()] };
    let mut slices = Vec::new();
    let mut empty = true;
    for v in values {
        let s = slice(&sat, &an, &v)?;
        let report = if s.vars().is_empty() {
            if s.is_unit() {
                ZeroDimReport::Empty
            } else {
                ZeroDimReport::Finite(vec![])
            }
        } else {
            zero_dim_points(&s, budget)?
        };
        if !matches!(report, ZeroDimReport::Empty | ZeroDimReport::NoRealPoints(_)) {
            empty = false;
        }
        slices.push(SliceOutcome { value: v, report });
    }
    let out = SaturationOutcome { method, unit: false, slices };
    if empty {
        let route = format!("slices {an} = ±1 of the saturation have no real points (Sturm)");
        Ok((AbelVerdict::NoneWithLeadingNonzero, route, None, Some(out), vec![]))
    } else {
        let note = format!("real candidates remain with {an} ≠ 0");
        Ok((AbelVerdict::Inconclusive, "saturation".into(), None, Some(out), vec![note]))
    }
}
