//! The shipped catalog of isochronous families, stored as TOML fixtures.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use super::spec::{Resolved, SystemSpec, UrabeText, FORMAT_VERSION};
use crate::algebra::Expr;
use crate::error::{Error, Result};

const SOURCES: &[(&str, &str)] = &[
    ("basic.toml", include_str!("../../catalog/basic.toml")),
    ("deg4.toml", include_str!("../../catalog/deg4.toml")),
    ("deg5.toml", include_str!("../../catalog/deg5.toml")),
    ("abel.toml", include_str!("../../catalog/abel.toml")),
];

/// Closed-form Urabe function `h(X) = k1·X^p / sqrt(k2² + k3·X^q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UrabeClosedForm {
    pub k1: Expr,
    pub k2: Expr,
    pub k3: Expr,
    pub p: u32,
    pub q: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum UrabeSpec {
    Zero,
    ClosedForm(UrabeClosedForm),
    Unknown,
}

#[derive(Clone, Debug)]
pub struct FamilyRecord {
    pub id: String,
    pub description: Option<String>,
    pub parent: Option<String>,
    pub system: Resolved,
    pub urabe: UrabeSpec,
    pub first_integral: Option<Expr>,
    pub linearization: Option<(Expr, Expr)>,
}

impl FamilyRecord {
    pub fn from_spec(spec: SystemSpec) -> Result<FamilyRecord> {
        let id = spec.id.clone().unwrap_or_else(|| "unnamed".to_string());
        let urabe = match &spec.urabe {
            None | Some(UrabeText::Unknown) => UrabeSpec::Unknown,
            Some(UrabeText::Zero) => UrabeSpec::Zero,
            Some(UrabeText::ClosedForm(c)) => {
                if c.p % 2 == 0 || c.q % 2 == 1 {
                    return Err(Error::parse(&id, "closed-form Urabe data needs odd p and even q"));
                }
                UrabeSpec::ClosedForm(UrabeClosedForm {
                    k1: Expr::parse(&c.k1)?,
                    k2: Expr::parse(&c.k2)?,
                    k3: Expr::parse(&c.k3)?,
                    p: c.p,
                    q: c.q,
                })
            }
        };
        let first_integral = spec.first_integral.as_deref().map(Expr::parse).transpose()?;
        let linearization = match &spec.linearization {
            Some(l) => Some((Expr::parse(&l.u)?, Expr::parse(&l.v)?)),
            None => None,
        };
        let system = spec.resolve()?;
        Ok(FamilyRecord {
            id,
            description: spec.description.clone(),
            parent: spec.parent.clone(),
            system,
            urabe,
            first_integral,
            linearization,
        })
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.system.spec
    }
}

#[derive(Deserialize)]
struct CatalogFile {
    format_version: u32,
    family: Vec<SystemSpec>,
}

pub struct Catalog {
    records: BTreeMap<String, FamilyRecord>,
}

impl Catalog {
    fn load() -> Result<Catalog> {
        let mut records = BTreeMap::new();
        for (name, text) in SOURCES {
            let file: CatalogFile = toml::from_str(text).map_err(|e| Error::parse(name, e.to_string()))?;
            if file.format_version != FORMAT_VERSION {
                return Err(Error::parse(name, "unsupported format_version"));
            }
            for spec in file.family {
                let rec = FamilyRecord::from_spec(spec)?;
                if records.insert(rec.id.clone(), rec).is_some() {
                    return Err(Error::parse(name, "duplicate catalog id"));
                }
            }
        }
        for rec in records.values() {
            if let Some(p) = &rec.parent {
                if !records.contains_key(p) {
                    return Err(Error::UnknownFamily(p.clone()));
                }
            }
        }
        Ok(Catalog { records })
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(String::as_str)
    }

    pub fn records(&self) -> impl Iterator<Item = &FamilyRecord> {
        self.records.values()
    }

    pub fn get(&self, id: &str) -> Result<&FamilyRecord> {
        self.records.get(id).ok_or_else(|| Error::UnknownFamily(id.to_string()))
    }

    /// TOML text of one record, in the input-file schema.
    pub fn source(&self, id: &str) -> Result<String> {
        Ok(self.get(id)?.spec().to_toml())
    }
}

pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Catalog::load().expect("the shipped catalog is well formed"))
}

pub fn lookup(id: &str) -> Result<&'static FamilyRecord> {
    catalog().get(id)
}

#[cfg(test)]
mod tests {
    use super::super::spec::Binding;
    use super::*;
    use crate::algebra::{Poly, Rat};

    #[test]
    fn loads_every_record() {
        let c = Catalog::load().unwrap();
        assert!(c.ids().count() >= 22);
        for rec in c.records() {
            let back = SystemSpec::from_toml(&c.source(&rec.id).unwrap()).unwrap();
            assert_eq!(back.id.as_deref(), Some(rec.id.as_str()));
            if let Some(parent) = &rec.spec().parent {
                assert!(c.get(parent).is_ok(), "{} has unknown parent {parent}", rec.id);
            }
        }
    }

    #[test]
    fn family1_case1_bindings() {
        let rec = lookup("deg4.family1.case1").unwrap();
        assert_eq!(rec.urabe, UrabeSpec::Zero);
        let b = rec.system.polynomial_bindings().unwrap();
        let p = |s: &str| Poly::parse(s, &rec.system.params).unwrap();
        assert_eq!(b["b31"], p("-4/3*a40"));
        assert_eq!(b["a22"], p("-16/3*a40"));
        for k in ["a20", "a02", "b21", "a12", "b11", "a30"] {
            assert!(b[k].is_zero(), "{k}");
        }
    }

    #[test]
    fn deg5_case2_is_system_52() {
        let rec = lookup("deg5.case2").unwrap();
        let sys = rec.system.planar().unwrap();
        let ring = sys.ring().clone();
        assert_eq!(sys.xdot, Poly::parse("-y + a*y*x^4", &ring).unwrap());
        assert_eq!(sys.ydot, Poly::parse("x + a*x^3*y^2", &ring).unwrap());
    }

    #[test]
    fn abel_n3_family() {
        let rec = lookup("abel.n3").unwrap();
        let b = rec.system.polynomial_bindings().unwrap();
        let p = |s: &str| Poly::parse(s, &rec.system.params).unwrap();
        assert_eq!(b["a2"], p("a1^2/3"));
        assert_eq!(b["a3"], p("a1^3/27"));
        match &rec.urabe {
            UrabeSpec::ClosedForm(c) => {
                assert_eq!(c.k2.constant_value(), Some(Rat::one()));
                assert_eq!(c.k3.constant_value(), Some(Rat::zero()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn irrational_bindings_are_typed() {
        let rec = lookup("deg4.family2.case4").unwrap();
        assert!(matches!(rec.system.bindings["a30"], Binding::Quad { d: 33, .. }));
        let rec = lookup("deg4.family2.case7").unwrap();
        match &rec.system.bindings["a40"] {
            Binding::Numeric(n) => assert!(n.digits >= 60),
            other => panic!("{other:?}"),
        }
        assert!(matches!(lookup("nope"), Err(Error::UnknownFamily(_))));
    }
}
