//! Second route: derivatives of `g̃(u) = X/(1+h(X))` computed two ways.
//!
//! In `X`: `D₀ = X/(1+h)`, `D_k = D′_{k−1}/(1+h)`, `v_k = D_k(0)`.
//! In `x`: `S₀ = g`, `S_k = S′_{k−1} + (2−k)·f·S_{k−1}`, `w_k = S_k(0)`.
//! Even `k` solve for `c_{k−1}`; odd `k` leave a condition.

use super::{normalize, normalizing_order, Condition, ConditionSet, Route, UrabeCoeff};
use crate::algebra::{Monomial, Poly, Rat, VarSet, WeightedOrder};
use crate::error::{Error, Result};
use crate::series::PSeries;
use crate::systems::LienardPair;

/// `v_1 … v_M` as polynomials in `c1, c3, …`.
pub fn v_side(cring: &VarSet, top: usize) -> Result<Vec<Poly>> {
    let mut h = vec![Poly::zero(cring); top + 1];
    for (i, slot) in (1..=top).step_by(2).enumerate() {
        if i < cring.len() {
            h[slot] = Poly::var_index(cring, i);
        }
    }
    h[0] = Poly::one(cring);
    let inv = PSeries::from_coeffs(cring, h, top).reciprocal()?;
    let mut d = PSeries::x(cring, top).mul(&inv)?;
    let mut v = Vec::with_capacity(top);
    for _ in 1..=top {
        d = d.differentiate()?.mul(&inv)?;
        v.push(d.coeff(0).expect("nonempty").clone());
    }
    Ok(v)
}

/// `w_1 … w_M` as polynomials in the parameters.
pub fn w_side(lp: &LienardPair, top: usize) -> Result<Vec<Poly>> {
    let f = lp.f_series(top)?;
    let mut s = lp.g_series(top)?;
    let mut w = Vec::with_capacity(top);
    for k in 1..=top {
        let ds = s.differentiate()?;
        let fs = f.mul(&s)?;
        s = ds.add(&fs.scale(&Rat::from_int(2 - k as i64)))?;
        w.push(s.coeff(0).expect("nonempty").clone());
    }
    Ok(w)
}

pub fn cr_derivative_oracle(lp: &LienardPair, m: usize, weights: Option<&WeightedOrder>) -> Result<ConditionSet> {
    let top = 2 * m + 1;
    let params = lp.params().clone();
    let cnames: Vec<String> = (0..m).map(|j| format!("c{}", 2 * j + 1)).collect();
    if cnames.iter().any(|c| params.index_of(c).is_some()) {
        return Err(Error::InvalidArgument("parameter names clash with Urabe coefficients".into()));
    }
    let cring = VarSet::new(cnames.clone())?;
    let v = v_side(&cring, top)?;
    let w = w_side(lp, top)?;
    let order = normalizing_order(&params, weights);

    // values of c1, c3, … once solved; unsolved ones stay zero and must not occur
    let mut solved: Vec<Poly> = vec![Poly::zero(&params); m];
    let one = Poly::one(&params);
    let mut conditions = Vec::new();
    let mut urabe_coeffs = Vec::new();
    for k in 1..=top {
        let vk = &v[k - 1];
        let known = if k % 2 == 0 { (k - 2) / 2 } else { (k - 1) / 2 };
        for (mono, _) in vk.terms() {
            if (known..m).any(|i| mono.exp(i) > 0) && !(k % 2 == 0 && mono.exp(known) == 1 && mono.total_degree() == 1) {
                return Err(Error::Expansion(format!("v_{k} involves an unsolved Urabe coefficient nonlinearly")));
            }
        }
        if k % 2 == 0 {
            let j = known;
            let lin = Monomial::var(j, 1)?;
            let alpha = vk.coeff(lin);
            if alpha.is_zero() {
                return Err(Error::Expansion(format!("c{} does not appear in v_{k}", 2 * j + 1)));
            }
            let rest = vk.try_sub(&Poly::monomial(&cring, lin, alpha.clone()))?;
            let rest = rest.eval(&solved, &one);
            let value = w[k - 1].try_sub(&rest)?.scale(&alpha.recip());
            urabe_coeffs.push(UrabeCoeff { index: (2 * j + 1) as u32, value: value.clone() });
            solved[j] = value;
        } else {
            let diff = w[k - 1].try_sub(&vk.eval(&solved, &one))?;
            if !diff.is_zero() {
                conditions.push(Condition { index: k as u32, poly: normalize(&diff, &order)? });
            }
        }
    }
    Ok(ConditionSet {
        params,
        conditions,
        urabe_coeffs,
        weights: order,
        order_m: m,
        series_order: top,
        route: Route::Derivative,
        reparametrization: None,
        a20_branch: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{lienard_from_abel, AbelSystem};

    #[test]
    fn v_side_low_orders() {
        let cring = VarSet::new(["c1", "c3"]).unwrap();
        let v = v_side(&cring, 5).unwrap();
        let p = |s: &str| Poly::parse(s, &cring).unwrap();
        assert_eq!(v[0], p("1"));
        assert_eq!(v[1], p("-3*c1"));
    }

    #[test]
    fn abel_cubic_family_satisfies_oracle() {
        let params = VarSet::new(["a1"]).unwrap();
        let a1 = Poly::var(&params, "a1").unwrap();
        let sys = AbelSystem::new(vec![
            a1.clone(),
            (&a1 * &a1).scale(&Rat::new(1, 3)),
            a1.pow(3).scale(&Rat::new(1, 27)),
        ])
        .unwrap();
        let lp = lienard_from_abel(&sys).unwrap();
        let cs = cr_derivative_oracle(&lp, 5, None).unwrap();
        assert!(cs.conditions.is_empty());
        assert_eq!(cs.urabe_coeffs[0].value, a1.scale(&Rat::new(-1, 3)));
        assert!(cs.urabe_coeffs[1..].iter().all(|c| c.value.is_zero()));
    }
}
