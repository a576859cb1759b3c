//! Small solving tools on top of Gröbner bases: slices, eliminants,
//! radical membership and zero-dimensional real points.

use serde::{Deserialize, Serialize};

use super::{buchberger_with, eliminate, Budget, GroebnerBasis, Ideal};
use crate::algebra::{sturm_real_roots, Bound, Poly, Rat, UPoly, VarSet};
use crate::error::{Error, Result};

/// `I` with `var = value`, over the remaining variables.
pub fn slice(ideal: &Ideal, var: &str, value: &Rat) -> Result<Ideal> {
    let i = ideal.vars().require(var)?;
    let rest = ideal.vars().without(&[var])?;
    let mut gens = Vec::with_capacity(ideal.generators().len());
    for g in ideal.generators() {
        gens.push(g.partial_eval(&[(i, value.clone())]).embed(&rest)?);
    }
    let mut order = ideal.order.clone();
    order.weights.remove(var);
    order.eliminate.retain(|v| v != var);
    Ideal::new(&rest, gens, order)
}

/// Generator of `I ∩ ℚ[var]`, or `None` when that intersection is zero.
pub fn eliminant(ideal: &Ideal, var: &str, budget: &Budget) -> Result<Option<UPoly>> {
    ideal.vars().require(var)?;
    let drop: Vec<&str> = ideal.vars().names().iter().map(String::as_str).filter(|v| *v != var).collect();
    let e = eliminate(ideal, &drop, budget)?;
    if e.generators().is_empty() {
        return Ok(None);
    }
    let gb = buchberger_with(&e, budget)?;
    Ok(Some(UPoly::from_poly(&gb.basis[0])?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RadicalWitness {
    /// `f^k` reduces to zero.
    Power { k: u32 },
    /// `1 ∈ I + ⟨1 − t·f⟩`.
    Rabinowitsch,
    NotInRadical,
}

impl RadicalWitness {
    pub fn holds(&self) -> bool {
        !matches!(self, RadicalWitness::NotInRadical)
    }
}

/// Decides `f ∈ √I`, preferring an explicit power of `f` in `I`.
pub fn radical_membership(gb: &GroebnerBasis, f: &Poly, max_power: u32, budget: &Budget) -> Result<RadicalWitness> {
    let mut p = f.clone();
    for k in 1..=max_power {
        if gb.normal_form(&p)?.is_zero() {
            return Ok(RadicalWitness::Power { k });
        }
        p = &p * f;
    }
    let vars = gb.vars();
    let t = fresh(vars);
    let ext = vars.extended(&[t.as_str()])?;
    let mut gens = Vec::with_capacity(gb.basis.len() + 1);
    for g in &gb.basis {
        gens.push(g.embed(&ext)?);
    }
    gens.push(&Poly::one(&ext) - &(&Poly::var(&ext, &t)? * &f.embed(&ext)?));
    let mut order = gb.order.clone();
    if !order.weights.is_empty() {
        order.weights.insert(t, 1);
    }
    let g = buchberger_with(&Ideal::new(&ext, gens, order)?, budget)?;
    Ok(if g.is_unit() { RadicalWitness::Rabinowitsch } else { RadicalWitness::NotInRadical })
}

fn fresh(vars: &VarSet) -> String {
    let mut name = "t".to_string();
    let mut k = 0;
    while vars.index_of(&name).is_some() {
        k += 1;
        name = format!("t_{k}");
    }
    name
}

#[derive(Clone, Debug, PartialEq)]
pub struct VariableEliminant {
    pub var: String,
    pub eliminant: UPoly,
    pub real_roots: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroDimReport {
    /// The ideal is ⟨1⟩.
    Empty,
    /// Some variable's eliminant has no real root.
    NoRealPoints(Vec<VariableEliminant>),
    /// Exactly one complex point, and it is rational.
    UniqueRationalPoint(Vec<(String, Rat)>),
    /// Finitely many points, not all of the above.
    Finite(Vec<VariableEliminant>),
    /// Some variable has no eliminant.
    PositiveDimensional,
}

/// Real-point analysis of an ideal by per-variable eliminants.
pub fn zero_dim_points(ideal: &Ideal, budget: &Budget) -> Result<ZeroDimReport> {
    if ideal.generators().is_empty() {
        return Ok(ZeroDimReport::PositiveDimensional);
    }
    if buchberger_with(ideal, budget)?.is_unit() {
        return Ok(ZeroDimReport::Empty);
    }
    let mut elims = Vec::new();
    for v in ideal.vars().names() {
        let Some(e) = eliminant(ideal, v, budget)? else {
            return Ok(ZeroDimReport::PositiveDimensional);
        };
        let real_roots = sturm_real_roots(&e, &Bound::NegInf, &Bound::PosInf)?;
        elims.push(VariableEliminant { var: v.clone(), eliminant: e, real_roots });
    }
    if elims.iter().any(|e| e.real_roots == 0) {
        return Ok(ZeroDimReport::NoRealPoints(elims));
    }
    let mut point = Vec::new();
    for e in &elims {
        let sf = e.eliminant.square_free()?;
        if sf.degree() != Some(1) {
            return Ok(ZeroDimReport::Finite(elims));
        }
        let c = sf.coeffs();
        point.push((e.var.clone(), -(&c[0] / &c[1])));
    }
    let values: Vec<Rat> = point.iter().map(|(_, r)| r.clone()).collect();
    for g in ideal.generators() {
        if !g.eval_rat(&values)?.is_zero() {
            return Err(Error::Expansion("eliminant roots do not form a common zero".into()));
        }
    }
    Ok(ZeroDimReport::UniqueRationalPoint(point))
}

#[cfg(test)]
mod tests {
    use super::super::buchberger;
    use super::*;
    use crate::algebra::WeightedOrder;

    fn ideal(vars: &[&str], gens: &[&str]) -> Ideal {
        let v = VarSet::new(vars.iter().copied()).unwrap();
        let g = gens.iter().map(|s| Poly::parse(s, &v).unwrap()).collect();
        Ideal::new(&v, g, WeightedOrder::degrevlex()).unwrap()
    }

    #[test]
    fn powers_and_rabinowitsch() {
        let i = ideal(&["x", "y"], &["x^3", "y^2 - x*y"]);
        let g = buchberger(&i).unwrap();
        let x = Poly::var(i.vars(), "x").unwrap();
        assert_eq!(radical_membership(&g, &x, 5, &Budget::default()).unwrap(), RadicalWitness::Power { k: 3 });
        assert_eq!(radical_membership(&g, &x, 1, &Budget::default()).unwrap(), RadicalWitness::Rabinowitsch);
        let y1 = Poly::parse("y + 1", i.vars()).unwrap();
        assert!(!radical_membership(&g, &y1, 3, &Budget::default()).unwrap().holds());
    }

    #[test]
    fn zero_dimensional_points() {
        let i = ideal(&["x", "y"], &["x^2 + 1", "y"]);
        assert!(matches!(zero_dim_points(&i, &Budget::default()).unwrap(), ZeroDimReport::NoRealPoints(_)));
        let i = ideal(&["x", "y"], &["(3*x - 1)^2", "y - 6*x"]);
        match zero_dim_points(&i, &Budget::default()).unwrap() {
            ZeroDimReport::UniqueRationalPoint(p) => assert_eq!(p[0].1, Rat::new(1, 3)),
            other => panic!("{other:?}"),
        }
        let i = ideal(&["x", "y"], &["x^2 - 2", "y - x"]);
        assert!(matches!(zero_dim_points(&i, &Budget::default()).unwrap(), ZeroDimReport::Finite(_)));
        let i = ideal(&["x", "y"], &["x*y"]);
        assert_eq!(zero_dim_points(&i, &Budget::default()).unwrap(), ZeroDimReport::PositiveDimensional);
        let i = ideal(&["x", "y"], &["x", "x - 1"]);
        assert_eq!(zero_dim_points(&i, &Budget::default()).unwrap(), ZeroDimReport::Empty);
    }

    #[test]
    fn slicing() {
        let i = ideal(&["x", "y"], &["x*y - 2", "x^2 - y"]);
        let s = slice(&i, "x", &Rat::from_int(1)).unwrap();
        assert_eq!(s.vars().names(), &["y".to_string()]);
        assert!(buchberger(&s).unwrap().is_unit());
    }
}
