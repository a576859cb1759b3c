use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::monomial::{Monomial, MAX_VARS};
use super::vars::VarSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    Lex,
    Degrevlex,
    WeightedDegrevlex,
    /// Block order: monomials are first compared by their (weighted) degree in
    /// the eliminated variables, ties broken by weighted degrevlex.
    EliminationBlock,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Lex => "lex",
            OrderKind::Degrevlex => "degrevlex",
            OrderKind::WeightedDegrevlex => "weighted-degrevlex",
            OrderKind::EliminationBlock => "elimination-block",
        })
    }
}

impl FromStr for OrderKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lex" => OrderKind::Lex,
            "degrevlex" | "grevlex" => OrderKind::Degrevlex,
            "weighted-degrevlex" | "wdegrevlex" => OrderKind::WeightedDegrevlex,
            "elimination-block" | "elimination" => OrderKind::EliminationBlock,
            _ => return Err(Error::parse(s, "unknown monomial order")),
        })
    }
}

/// A monomial order described by names, independent of any variable set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedOrder {
    pub kind: OrderKind,
    #[serde(default)]
    pub weights: BTreeMap<String, u32>,
    /// Variables of the first block for [`OrderKind::EliminationBlock`].
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eliminate: Vec<String>,
}

impl WeightedOrder {
    pub fn lex() -> Self {
        Self { kind: OrderKind::Lex, weights: BTreeMap::new(), eliminate: vec![] }
    }

    pub fn degrevlex() -> Self {
        Self { kind: OrderKind::Degrevlex, weights: BTreeMap::new(), eliminate: vec![] }
    }

    pub fn weighted(weights: BTreeMap<String, u32>) -> Self {
        Self { kind: OrderKind::WeightedDegrevlex, weights, eliminate: vec![] }
    }

    pub fn elimination(eliminate: Vec<String>, weights: BTreeMap<String, u32>) -> Self {
        Self { kind: OrderKind::EliminationBlock, weights, eliminate }
    }

    pub fn weight_of(&self, name: &str) -> Option<u32> {
        self.weights.get(name).copied()
    }

    /// Binds the order to a concrete variable set.
    pub fn bind(&self, vars: &VarSet) -> Result<MonomialOrder> {
        let n = vars.len();
        let needs_weights = matches!(self.kind, OrderKind::WeightedDegrevlex);
        let mut weights = [1u32; MAX_VARS];
        for (i, name) in vars.names().iter().enumerate() {
            match self.weights.get(name) {
                Some(&w) if w >= 1 => weights[i] = w,
                Some(_) => {
                    return Err(Error::InvalidArgument(format!("weight of `{name}` must be >= 1")))
                }
                None if needs_weights => return Err(Error::MissingWeight(name.clone())),
                None => {}
            }
        }
        let mut elim = [false; MAX_VARS];
        for name in &self.eliminate {
            let i = vars.index_of(name).ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            elim[i] = true;
        }
        if matches!(self.kind, OrderKind::Lex | OrderKind::Degrevlex) {
            weights = [1; MAX_VARS];
        }
        Ok(MonomialOrder { kind: self.kind, nvars: n, weights, elim })
    }
}

impl fmt::Display for WeightedOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.weights.is_empty() {
            let w: Vec<String> = self.weights.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            write!(f, " [{}]", w.join(", "))?;
        }
        if !self.eliminate.is_empty() {
            write!(f, " eliminate {{{}}}", self.eliminate.join(", "))?;
        }
        Ok(())
    }
}

/// A monomial order bound to a variable set; compares packed monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    nvars: usize,
    weights: [u32; MAX_VARS],
    elim: [bool; MAX_VARS],
}

impl MonomialOrder {
    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights[..self.nvars]
    }

    pub fn is_eliminated(&self, i: usize) -> bool {
        self.elim[i]
    }

    /// Plain lex on `nvars` variables, variable 0 largest.
    pub fn plain_lex(nvars: usize) -> Self {
        Self { kind: OrderKind::Lex, nvars, weights: [1; MAX_VARS], elim: [false; MAX_VARS] }
    }

    pub fn plain_degrevlex(nvars: usize) -> Self {
        Self { kind: OrderKind::Degrevlex, nvars, weights: [1; MAX_VARS], elim: [false; MAX_VARS] }
    }

    #[inline]
    pub fn degree(&self, m: Monomial) -> u64 {
        m.weighted_degree(&self.weights[..self.nvars])
    }

    fn revlex(&self, a: Monomial, b: Monomial) -> Ordering {
        for i in (0..self.nvars).rev() {
            match a.exp(i).cmp(&b.exp(i)) {
                Ordering::Equal => continue,
                // smaller exponent in the last differing variable is larger
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }

    fn elim_degree(&self, m: Monomial) -> u64 {
        (0..self.nvars)
            .filter(|&i| self.elim[i])
            .map(|i| self.weights[i] as u64 * m.exp(i) as u64)
            .sum()
    }

    #[inline]
    pub fn cmp(&self, a: Monomial, b: Monomial) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        match self.kind {
            OrderKind::Lex => a.raw().cmp(&b.raw()),
            OrderKind::Degrevlex | OrderKind::WeightedDegrevlex => self
                .degree(a)
                .cmp(&self.degree(b))
                .then_with(|| self.revlex(a, b)),
            OrderKind::EliminationBlock => self
                .elim_degree(a)
                .cmp(&self.elim_degree(b))
                .then_with(|| self.degree(a).cmp(&self.degree(b)))
                .then_with(|| self.revlex(a, b)),
        }
    }
}
