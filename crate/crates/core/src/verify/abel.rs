//! First integral `I = x² + 2∫₀^y s/(1 + P(s)) ds` of an Abel system.

use super::{check_first_integral, CheckMethod, FirstIntegralCheck, DEFAULT_CHECK_ORDER};
use crate::algebra::{Expr, Poly, Rat, VarSet};
use crate::error::Result;
use crate::series::{BSeries, PSeries};
use crate::systems::AbelSystem;

#[derive(Clone, Debug)]
pub struct AbelIntegral {
    /// Closed form, when `1 + P` is `1` or a power `(1 + k·y)ⁿ` with `n ≥ 3`.
    pub closed_form: Option<Expr>,
    /// `x^2 + 2*int(s/(1 + P(s)), s = 0..y)`, always available.
    pub quadrature: String,
    pub check: FirstIntegralCheck,
}

fn binomial(n: u32, k: u32) -> Rat {
    let mut r = Rat::one();
    for i in 0..k {
        r = &(&r * &Rat::from_int((n - i) as i64)) / &Rat::from_int((i + 1) as i64);
    }
    r
}

/// `k` with `1 + P(y) = (1 + k·y)ⁿ`.
fn perfect_power(sys: &AbelSystem) -> Option<Poly> {
    let n = sys.degree() as u32;
    let k = sys.a[0].scale(&Rat::new(1, n as i64));
    for (j, a) in sys.a.iter().enumerate() {
        let j = j as u32 + 1;
        if *a != k.pow(j).scale(&binomial(n, j)) {
            return None;
        }
    }
    Some(k)
}

fn closed_form(sys: &AbelSystem) -> Option<String> {
    if sys.a.iter().all(Poly::is_zero) {
        return Some("x^2 + y^2".into());
    }
    let n = sys.degree() as i64;
    if n < 3 {
        return None;
    }
    let k = perfect_power(sys)?;
    let w = format!("(1 + ({k})*y)");
    if n == 3 {
        return Some(format!("x^2 + y^2/{w}^2"));
    }
    // 2∫₀^y s·w⁻ⁿ ds with w = 1 + k·s
    Some(format!(
        "x^2 + 2/({k})^2*(({w}^({}) - 1)/({}) - ({w}^({}) - 1)/({}))",
        2 - n,
        2 - n,
        1 - n,
        1 - n
    ))
}

/// `2∫₀^y s/(1 + P(s)) ds` as a polynomial through degree `n` in `y`.
fn quadrature_series(sys: &AbelSystem, ring: &VarSet, n: usize) -> Result<Poly> {
    let params = &sys.params;
    let mut coeffs = vec![Poly::one(params)];
    for a in &sys.a {
        coeffs.push(a.clone());
    }
    coeffs.truncate(n + 1);
    let inv = PSeries::from_coeffs(params, coeffs, n).reciprocal()?;
    let r = inv.shift_up(1).integrate_from_zero().scale(&Rat::from_int(2));
    let y = Poly::var(ring, "y")?;
    let mut acc = Poly::zero(ring);
    for (j, c) in r.coeffs().iter().enumerate().take(n + 1) {
        if !c.is_zero() {
            acc = &acc + &(&c.embed(ring)? * &y.pow(j as u32));
        }
    }
    Ok(acc)
}

/// The first integral, in closed form when possible, checked against the planar field.
pub fn abel_first_integral(sys: &AbelSystem) -> Result<AbelIntegral> {
    let planar = sys.planar()?;
    let mut p = String::new();
    for (j, a) in sys.a.iter().enumerate() {
        if !a.is_zero() {
            p.push_str(&format!(" + ({a})*s^{}", j + 1));
        }
    }
    let quadrature = format!("x^2 + 2*int(s/(1{p}), s = 0..y)");
    if let Some(text) = closed_form(sys) {
        let e = Expr::parse(&text)?;
        let check = check_first_integral(&planar, &e, DEFAULT_CHECK_ORDER)?;
        return Ok(AbelIntegral { closed_form: Some(e), quadrature, check });
    }
    let n = DEFAULT_CHECK_ORDER;
    let ring = planar.ring();
    let x = Poly::var(ring, "x")?;
    let i = &(&x * &x) + &quadrature_series(sys, ring, n + 1)?;
    let s = BSeries::from_poly(&i, 0, 1, n + 1);
    let xd = BSeries::from_poly(&planar.xdot, 0, 1, n + 1);
    let yd = BSeries::from_poly(&planar.ydot, 0, 1, n + 1);
    let d = s.partial(0)?.mul(&xd)?.add(&s.partial(1)?.mul(&yd)?)?;
    let fail = d.valuation();
    let check = FirstIntegralCheck { holds: fail.is_none(), method: CheckMethod::Series { order: n }, first_failure_order: fail };
    Ok(AbelIntegral { closed_form: None, quadrature, check })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::lookup;

    #[test]
    fn closed_forms() {
        let zero = AbelSystem::numeric(&[Rat::zero(), Rat::zero()]).unwrap();
        let i = abel_first_integral(&zero).unwrap();
        assert_eq!(i.closed_form.unwrap().to_string(), Expr::parse("x^2 + y^2").unwrap().to_string());
        let ab3 = lookup("abel.ab3").unwrap().system.abel().unwrap();
        let i = abel_first_integral(&ab3).unwrap();
        assert!(i.check.holds);
        assert_eq!(i.check.method, CheckMethod::Exact);
        let printed = Expr::parse("x^2 + y^2/(1 + y)^2").unwrap();
        assert!(check_first_integral(&ab3.planar().unwrap(), &printed, 10).unwrap().holds);
        let n3 = lookup("abel.n3").unwrap().system.abel().unwrap();
        let i = abel_first_integral(&n3).unwrap();
        assert!(i.closed_form.is_some() && i.check.holds);
    }

    #[test]
    fn higher_powers_and_quadratures() {
        let r = |v: &[i64]| v.iter().map(|&k| Rat::from_int(k)).collect::<Vec<_>>();
        let quartic = AbelSystem::numeric(&r(&[8, 24, 32, 16])).unwrap();
        let i = abel_first_integral(&quartic).unwrap();
        assert!(i.closed_form.is_some());
        assert!(i.check.holds);
        let other = AbelSystem::numeric(&r(&[1, 1])).unwrap();
        let i = abel_first_integral(&other).unwrap();
        assert!(i.closed_form.is_none());
        assert!(i.check.holds);
        assert_eq!(i.quadrature, "x^2 + 2*int(s/(1 + (1)*s^1 + (1)*s^2), s = 0..y)");
    }
}
