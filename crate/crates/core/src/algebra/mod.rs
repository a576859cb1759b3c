//! Exact arithmetic: rationals, quadratic fields, sparse polynomials,
//! monomial orders and real-root counting.

mod expr;
mod monomial;
mod order;
mod poly;
mod quad;
mod rat;
mod sturm;
mod vars;

pub use expr::Expr;
pub use monomial::{Monomial, MAX_VARS};
pub use order::{MonomialOrder, OrderKind, WeightedOrder};
pub use poly::{mul_accumulate, Coefficient, MonoMap, Poly};
pub use quad::QuadExt;
pub use rat::Rat;
pub use sturm::{isolate_real_roots, sturm_real_roots, Bound, UPoly};
pub use vars::VarSet;

/// Result of a quasi-homogeneity audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDegree {
    pub homogeneous: bool,
    /// The common degree when homogeneous (0 for the zero polynomial).
    pub degree: Option<u64>,
    /// Distinct term degrees, ascending.
    pub term_degrees: Vec<u64>,
}

/// Weighted degree report of `p`; every variable of `p` needs a weight.
pub fn weighted_degree(p: &Poly, w: &WeightedOrder) -> crate::error::Result<WeightedDegree> {
    let mut weights = Vec::with_capacity(p.vars().len());
    for (i, name) in p.vars().names().iter().enumerate() {
        match w.weight_of(name) {
            Some(x) => weights.push(x),
            None if p.degree_in(i) == 0 => weights.push(0),
            None => return Err(crate::error::Error::MissingWeight(name.clone())),
        }
    }
    let mut degs: Vec<u64> = p.terms().iter().map(|(m, _)| m.weighted_degree(&weights)).collect();
    degs.sort_unstable();
    degs.dedup();
    Ok(match degs.len() {
        0 => WeightedDegree { homogeneous: true, degree: Some(0), term_degrees: vec![] },
        1 => WeightedDegree { homogeneous: true, degree: Some(degs[0]), term_degrees: degs },
        _ => WeightedDegree { homogeneous: false, degree: None, term_degrees: degs },
    })
}
