//! Input description of a system: kind, degree, coefficient bindings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{
    cn_coefficients, default_weight, lienard_from_abel, lienard_from_planar, AbelSystem, CnIndex, LienardPair,
    PlanarSystem, RatFn,
};
use crate::algebra::{Expr, Poly, Rat, VarSet, WeightedOrder};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Cn,
    Homogeneous,
    Abel,
    Lienard,
    Planar,
}

/// A coefficient as written in an input file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientText {
    Integer(i64),
    Text(String),
    Numeric {
        /// Decimal approximation of the coefficient at unit scale.
        value: String,
        /// Monomial in free symbols multiplying `value`.
        #[serde(default)]
        times: Option<String>,
        /// Exact defining text, for reference.
        exact: String,
    },
}

/// Closed-form Urabe data `h(X) = k1·X^p / sqrt(k2² + k3·X^q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormText {
    pub k1: String,
    pub k2: String,
    pub k3: String,
    pub p: u32,
    pub q: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UrabeText {
    Zero,
    ClosedForm(ClosedFormText),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearizationText {
    pub u: String,
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub format_version: u32,
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    /// Catalog id of the family whose condition set the bindings refer to.
    #[serde(default)]
    pub parent: Option<String>,
    pub kind: SystemKind,
    #[serde(default)]
    pub degree: Option<u32>,
    /// `"zero"` (default) or `"free"` for coefficients not listed.
    #[serde(default)]
    pub default: Option<String>,
    #[serde(default)]
    pub coefficients: BTreeMap<String, CoefficientText>,
    /// Extra weights for free symbols without a conventional weight.
    #[serde(default)]
    pub weights: BTreeMap<String, u32>,
    #[serde(default)]
    pub f: Option<String>,
    #[serde(default)]
    pub g: Option<String>,
    #[serde(default)]
    pub xdot: Option<String>,
    #[serde(default)]
    pub ydot: Option<String>,
    #[serde(default)]
    pub urabe: Option<UrabeText>,
    #[serde(default)]
    pub first_integral: Option<String>,
    #[serde(default)]
    pub linearization: Option<LinearizationText>,
}

/// A decimal approximation scaled by a monomial of free symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericBinding {
    pub value: Rat,
    pub digits: usize,
    pub times: Expr,
    pub exact: String,
}

/// The value a coefficient is bound to.
#[derive(Clone, Debug, PartialEq)]
pub enum Binding {
    /// A free symbol of the same name.
    Free,
    /// A rational function of the free symbols.
    Exact(Expr),
    /// An element of `ℚ(√d)[free symbols]`, written with `sqrt(d)`.
    Quad { expr: Expr, d: u64 },
    Numeric(NumericBinding),
}

impl Binding {
    pub fn is_exact_rational(&self) -> bool {
        matches!(self, Binding::Free | Binding::Exact(_))
    }
}

/// `a_2_0`, `a_{2,0}` → `a20`; other names unchanged.
pub fn normalize_name(name: &str) -> String {
    match CnIndex::parse(name) {
        Some(idx) => idx.name(),
        None => name.to_string(),
    }
}

fn find_sqrt(e: &Expr, found: &mut BTreeSet<u64>) -> Result<()> {
    match e {
        Expr::Num(_) | Expr::Var(_) => Ok(()),
        Expr::Neg(a) => find_sqrt(a, found),
        Expr::Pow(a, k) if !k.is_integer() => {
            let half = Rat::new(1, 2);
            let base = a.constant_value();
            match base.and_then(|b| b.to_i64()).filter(|_| *k == half) {
                Some(d) if d >= 2 => {
                    found.insert(d as u64);
                    Ok(())
                }
                _ => Err(Error::parse(&e.to_string(), "only sqrt of an integer constant may appear in a binding")),
            }
        }
        Expr::Pow(a, _) => find_sqrt(a, found),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            find_sqrt(a, found)?;
            find_sqrt(b, found)
        }
    }
}

impl SystemSpec {
    pub fn from_toml(text: &str) -> Result<SystemSpec> {
        let spec: SystemSpec = toml::from_str(text).map_err(|e| Error::parse("system spec", e.to_string()))?;
        if spec.format_version != FORMAT_VERSION {
            return Err(Error::parse(
                "system spec",
                format!("unsupported format_version {} (expected {FORMAT_VERSION})", spec.format_version),
            ));
        }
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("serializable")
    }

    fn default_free(&self) -> Result<bool> {
        match self.default.as_deref() {
            None | Some("zero") => Ok(false),
            Some("free") => Ok(true),
            Some(other) => Err(Error::parse("default", format!("expected `zero` or `free`, got `{other}`"))),
        }
    }

    /// Coefficient names the kind admits, in canonical order.
    pub fn schema(&self) -> Result<Vec<String>> {
        let n = || self.degree.ok_or_else(|| Error::parse("degree", "missing degree"));
        Ok(match self.kind {
            SystemKind::Cn => {
                let n = n()?;
                if !(2..=9).contains(&n) {
                    return Err(Error::parse("degree", format!("cn degree {n} outside 2..=9")));
                }
                cn_coefficients(n).iter().map(CnIndex::name).collect()
            }
            SystemKind::Homogeneous => {
                let n = n()?;
                if !(2..=9).contains(&n) {
                    return Err(Error::parse("degree", format!("homogeneous degree {n} outside 2..=9")));
                }
                cn_coefficients(n).into_iter().filter(|c| c.i + c.j == n).map(|c| c.name()).collect()
            }
            SystemKind::Abel => {
                let n = n()?;
                if !(1..=9).contains(&n) {
                    return Err(Error::parse("degree", format!("abel degree {n} outside 1..=9")));
                }
                (1..=n).map(|k| format!("a{k}")).collect()
            }
            SystemKind::Lienard | SystemKind::Planar => Vec::new(),
        })
    }

    /// Bindings of every schema coefficient plus the free-symbol set.
    pub fn resolve(&self) -> Result<Resolved> {
        let schema = self.schema()?;
        let default_free = self.default_free()?;
        let mut given: BTreeMap<String, &CoefficientText> = BTreeMap::new();
        for (k, v) in &self.coefficients {
            let name = normalize_name(k);
            if !matches!(self.kind, SystemKind::Lienard | SystemKind::Planar) && !schema.contains(&name) {
                return Err(Error::parse(
                    &format!("coefficients.{k}"),
                    format!("`{k}` is not a coefficient of this {:?} system", self.kind),
                ));
            }
            if given.insert(name, v).is_some() {
                return Err(Error::parse(&format!("coefficients.{k}"), "coefficient given twice"));
            }
        }
        let mut names = schema.clone();
        for k in given.keys() {
            if !names.contains(k) {
                names.push(k.clone());
            }
        }
        let mut bindings = BTreeMap::new();
        let mut free: Vec<String> = Vec::new();
        let mut mentioned: BTreeSet<String> = BTreeSet::new();
        for name in &names {
            let b = match given.get(name) {
                None if default_free => Binding::Free,
                None => Binding::Exact(Expr::Num(Rat::zero())),
                Some(CoefficientText::Integer(i)) => Binding::Exact(Expr::Num(Rat::from_int(*i))),
                Some(CoefficientText::Text(t)) if t.trim() == "free" => Binding::Free,
                Some(CoefficientText::Text(t)) => {
                    let e = Expr::parse(t).map_err(|err| Error::parse(&format!("coefficients.{name}"), err.to_string()))?;
                    let mut roots = BTreeSet::new();
                    find_sqrt(&e, &mut roots)?;
                    mentioned.extend(e.variables());
                    match roots.len() {
                        0 => Binding::Exact(e),
                        1 => Binding::Quad { expr: e, d: *roots.iter().next().expect("one root") },
                        _ => {
                            return Err(Error::parse(
                                &format!("coefficients.{name}"),
                                "at most one square root per binding",
                            ))
                        }
                    }
                }
                Some(CoefficientText::Numeric { value, times, exact }) => {
                    let v = Rat::from_decimal_str(value)?;
                    let digits = value.chars().filter(|c| c.is_ascii_digit()).count();
                    let times = match times {
                        Some(t) => Expr::parse(t)?,
                        None => Expr::Num(Rat::one()),
                    };
                    mentioned.extend(times.variables());
                    Binding::Numeric(NumericBinding { value: v, digits, times, exact: exact.clone() })
                }
            };
            if b == Binding::Free {
                free.push(name.clone());
            }
            bindings.insert(name.clone(), b);
        }
        for m in &mentioned {
            match bindings.get(m) {
                Some(Binding::Free) | None => {
                    if !free.contains(m) {
                        free.push(m.clone());
                    }
                }
                Some(_) => {
                    return Err(Error::parse(
                        &format!("coefficients.{m}"),
                        format!("`{m}` is bound and also used in another binding; bindings may only use free symbols"),
                    ))
                }
            }
        }
        if matches!(self.kind, SystemKind::Lienard | SystemKind::Planar) {
            let mut extra = BTreeSet::new();
            for t in [&self.f, &self.g, &self.xdot, &self.ydot].into_iter().flatten() {
                extra.extend(Expr::parse(t)?.variables());
            }
            for v in extra {
                if v != "x" && v != "y" && !bindings.contains_key(&v) && !free.contains(&v) {
                    free.push(v);
                }
            }
        }
        let params = VarSet::new(free)?;
        Ok(Resolved { spec: self.clone(), params, bindings })
    }
}

/// A spec with every coefficient bound.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub spec: SystemSpec,
    /// Free symbols, schema order first.
    pub params: VarSet,
    pub bindings: BTreeMap<String, Binding>,
}

impl Resolved {
    pub fn kind(&self) -> SystemKind {
        self.spec.kind
    }

    pub fn is_exact_rational(&self) -> bool {
        self.bindings.values().all(Binding::is_exact_rational)
    }

    /// Binding of each coefficient as a rational function over `params`.
    pub fn rational_bindings(&self) -> Result<BTreeMap<String, RatFn>> {
        let mut out = BTreeMap::new();
        for (k, b) in &self.bindings {
            let r = match b {
                Binding::Free => RatFn::poly(Poly::var(&self.params, k)?),
                Binding::Exact(e) => RatFn::from_expr(e, &self.params)?,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "coefficient `{k}` is not rational over the free symbols"
                    )))
                }
            };
            out.insert(k.clone(), r);
        }
        Ok(out)
    }

    /// Bindings as polynomials over `params`; fails on quotients and irrational values.
    pub fn polynomial_bindings(&self) -> Result<BTreeMap<String, Poly>> {
        let mut out = BTreeMap::new();
        for (k, r) in self.rational_bindings()? {
            let d = r.den.as_constant().filter(|c| !c.is_zero()).ok_or_else(|| {
                Error::InvalidArgument(format!("coefficient `{k}` is not polynomial in the free symbols"))
            })?;
            out.insert(k, r.num.scale(&d.recip()));
        }
        Ok(out)
    }

    /// Planar form with polynomial coefficients.
    pub fn planar(&self) -> Result<PlanarSystem> {
        match self.kind() {
            SystemKind::Cn | SystemKind::Homogeneous => {
                let n = self.spec.degree.expect("checked by schema");
                super::cn_system(n, &self.polynomial_bindings()?, &self.params)
            }
            SystemKind::Abel => self.abel()?.planar(),
            SystemKind::Planar => {
                let ring = VarSet::new(["x", "y"])?.extended(self.params.names())?;
                let subst = self.substitution_map()?;
                let get = |t: &Option<String>, what: &str| -> Result<Poly> {
                    let t = t.as_ref().ok_or_else(|| Error::parse(what, "missing field"))?;
                    Expr::parse(t)?.substitute(&subst).to_poly(&ring)
                };
                PlanarSystem::new(get(&self.spec.xdot, "xdot")?, get(&self.spec.ydot, "ydot")?)
            }
            SystemKind::Lienard => Err(Error::MalformedSystem("a Liénard spec has no planar form".into())),
        }
    }

    fn substitution_map(&self) -> Result<impl Fn(&str) -> Option<Expr>> {
        let mut map = BTreeMap::new();
        for (k, b) in &self.bindings {
            match b {
                Binding::Free => {}
                Binding::Exact(e) => {
                    map.insert(k.clone(), e.clone());
                }
                _ => return Err(Error::InvalidArgument(format!("coefficient `{k}` is not rational"))),
            }
        }
        Ok(move |name: &str| map.get(name).cloned())
    }

    pub fn abel(&self) -> Result<AbelSystem> {
        if self.kind() != SystemKind::Abel {
            return Err(Error::MalformedSystem("not an Abel spec".into()));
        }
        let n = self.spec.degree.expect("checked by schema") as usize;
        let b = self.polynomial_bindings()?;
        AbelSystem::new((1..=n).map(|k| b[&format!("a{k}")].clone()).collect())
    }

    /// The Liénard pair over `params + [x]`; coefficients may be rational in the parameters.
    pub fn lienard(&self) -> Result<LienardPair> {
        match self.kind() {
            SystemKind::Lienard => {
                let ring = self.params.extended(&["x"])?;
                let subst = self.substitution_map()?;
                let get = |t: &Option<String>, what: &str| -> Result<RatFn> {
                    let t = t.as_ref().ok_or_else(|| Error::parse(what, "missing field"))?;
                    RatFn::from_expr(&Expr::parse(t)?.substitute(&subst), &ring)
                };
                LienardPair::new(get(&self.spec.f, "f")?, get(&self.spec.g, "g")?)
            }
            SystemKind::Abel if self.polynomial_bindings().is_ok() => lienard_from_abel(&self.abel()?),
            SystemKind::Planar => lienard_from_planar(&self.planar()?),
            SystemKind::Cn | SystemKind::Homogeneous if self.polynomial_bindings().is_ok() => {
                lienard_from_planar(&self.planar()?)
            }
            _ => self.lienard_by_substitution(),
        }
    }

    /// Symbolic parent pair, then each coefficient replaced by its rational binding.
    fn lienard_by_substitution(&self) -> Result<LienardPair> {
        let names: Vec<String> = self.spec.schema()?;
        let coef_ring = VarSet::new(names.clone())?;
        let symbolic: BTreeMap<String, Poly> =
            names.iter().map(|k| Ok((k.clone(), Poly::var(&coef_ring, k)?))).collect::<Result<_>>()?;
        let parent = match self.kind() {
            SystemKind::Abel => {
                let sys = AbelSystem::new(names.iter().map(|k| symbolic[k].clone()).collect())?;
                lienard_from_abel(&sys)?
            }
            _ => super::lienard_from_cn(self.spec.degree.expect("checked"), &symbolic, &coef_ring)?,
        };
        let big = coef_ring.extended(self.params.names())?.extended(&["x"])?;
        let mut f = parent.f.embed(&big)?;
        let mut g = parent.g.embed(&big)?;
        for (k, r) in self.rational_bindings()? {
            if matches!(self.bindings[&k], Binding::Free) {
                continue;
            }
            let i = big.require(&k)?;
            let r = r.embed(&big)?;
            f = f.substitute(i, &r)?;
            g = g.substitute(i, &r)?;
        }
        let ring = self.params.extended(&["x"])?;
        LienardPair::new(f.embed(&ring)?, g.embed(&ring)?)
    }

    /// Weighted order on the free symbols (conventional weights plus the spec's extras).
    pub fn weight_order(&self) -> Result<WeightedOrder> {
        let mut w = BTreeMap::new();
        for name in self.params.names() {
            let k = self
                .spec
                .weights
                .get(name)
                .copied()
                .or_else(|| default_weight(name))
                .ok_or_else(|| Error::MissingWeight(name.clone()))?;
            w.insert(name.clone(), k);
        }
        Ok(WeightedOrder::weighted(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cn_with_mixed_values() {
        let spec = SystemSpec::from_toml(
            r#"
            format_version = 1
            kind = "cn"
            degree = 4
            [coefficients]
            a_4_0 = "free"
            b31 = "-4/3*a40"
            a22 = "-16/3 * a40"
            "#,
        )
        .unwrap();
        let r = spec.resolve().unwrap();
        assert_eq!(r.params.names(), ["a40"]);
        let lp = r.lienard().unwrap();
        let ring = lp.ring().clone();
        let p = |s: &str| Poly::parse(s, &ring).unwrap();
        assert_eq!(lp.f.num, p("-28/3*a40*x^2"));
        assert_eq!(lp.g.num, p("(x + a40*x^4)*(1 + 4/3*a40*x^3)"));
    }

    #[test]
    fn rejects_unknown_names_and_versions() {
        let bad = "format_version = 1\nkind = \"cn\"\ndegree = 2\n[coefficients]\na31 = 1\n";
        assert!(SystemSpec::from_toml(bad).unwrap().resolve().is_err());
        assert!(SystemSpec::from_toml("format_version = 7\nkind = \"cn\"\ndegree = 2\n").is_err());
        let chained = "format_version = 1\nkind = \"cn\"\ndegree = 3\n[coefficients]\na20 = \"a30\"\na30 = 2\n";
        assert!(SystemSpec::from_toml(chained).unwrap().resolve().is_err());
    }

    #[test]
    fn rational_bindings_reduce_through_substitution() {
        let spec = SystemSpec::from_toml(
            r#"
            format_version = 1
            kind = "cn"
            degree = 3
            [coefficients]
            a20 = "free"
            b21 = "free"
            a12 = "b21/a20"
            "#,
        )
        .unwrap();
        let lp = spec.resolve().unwrap().lienard().unwrap();
        let ring = lp.ring().clone();
        let p = |s: &str| Poly::parse(s, &ring).unwrap();
        // f = (a12 + 2 b21) x / (1 - b21 x^2) with a12 = b21/a20
        assert_eq!(&lp.f.num * &p("a20*(1 - b21*x^2)"), &p("(b21 + 2*a20*b21)*x") * &lp.f.den);
    }

    #[test]
    fn quad_and_numeric_bindings() {
        let spec = SystemSpec::from_toml(
            r#"
            format_version = 1
            kind = "cn"
            degree = 4
            [coefficients]
            a02 = "free"
            a30 = "a02^2*(9 - sqrt(33))/48"
            a40 = { value = "0.048069544019423393591", times = "a02^3", exact = "root" }
            "#,
        )
        .unwrap();
        let r = spec.resolve().unwrap();
        assert!(matches!(r.bindings["a30"], Binding::Quad { d: 33, .. }));
        assert!(matches!(r.bindings["a40"], Binding::Numeric(_)));
        assert!(!r.is_exact_rational());
        assert!(r.lienard().is_err());
    }

    #[test]
    fn lienard_and_planar_kinds() {
        let spec = SystemSpec::from_toml(
            "format_version = 1\nkind = \"lienard\"\nf = \"-3/(1+x)\"\ng = \"x*(1+x)^3\"\n",
        )
        .unwrap();
        let lp = spec.resolve().unwrap().lienard().unwrap();
        assert!(lp.params().is_empty());
        let spec = SystemSpec::from_toml(
            "format_version = 1\nkind = \"planar\"\nxdot = \"-y + a*y*x^4\"\nydot = \"x + a*x^3*y^2\"\n[weights]\na = 4\n",
        )
        .unwrap();
        let r = spec.resolve().unwrap();
        assert_eq!(r.params.names(), ["a"]);
        let lp = r.lienard().unwrap();
        let ring = lp.ring().clone();
        assert_eq!(lp.g.num, Poly::parse("x*(1 - a*x^4)", &ring).unwrap());
        assert!(r.weight_order().is_ok());
    }
}
