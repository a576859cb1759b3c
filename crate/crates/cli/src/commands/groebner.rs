use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use isochron::algebra::{OrderKind, Poly, VarSet, WeightedOrder};
use isochron::groebner::{buchberger_with, Ideal};
use isochron::Error;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::input::{input_error, parse_assignment, poly_text};
use crate::report::{Draft, Output, Status, FORMAT_VERSION};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Ideal file (TOML or JSON) or a `conditions` report.
    pub ideal: PathBuf,
    /// lex, degrevlex or weighted-degrevlex (default: the file's order).
    #[arg(long)]
    pub order: Option<String>,
    /// Weight overrides `name=w`.
    #[arg(long = "weight", value_parser = parse_assignment)]
    pub weight: Vec<(String, String)>,
    /// Limit on reduced S-pairs (also ISOCHRON_BUDGET_PAIRS).
    #[arg(long)]
    pub budget_pairs: Option<usize>,
    /// Polynomials to reduce against the basis.
    #[arg(long = "normal-form")]
    pub normal_form: Vec<String>,
}

/// `variables`, `generators` and an optional `order`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealFile {
    format_version: u32,
    variables: Vec<String>,
    generators: Vec<String>,
    #[serde(default)]
    order: Option<WeightedOrder>,
}

pub struct LoadedIdeal {
    pub vars: VarSet,
    pub generators: Vec<Poly>,
    pub order: Option<WeightedOrder>,
}

pub fn load_ideal(path: &PathBuf) -> anyhow::Result<LoadedIdeal> {
    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = if raw.trim_start().starts_with('{') {
        serde_json::from_str(&raw).with_context(|| format!("in {}", path.display()))?
    } else {
        let t: toml::Value = toml::from_str(&raw).with_context(|| format!("in {}", path.display()))?;
        serde_json::to_value(t)?
    };
    if let Some(p) = value.get("payload").filter(|p| p.get("conditions").is_some()) {
        let vars: Vec<String> = serde_json::from_value(p["variables"].clone())?;
        let vars = VarSet::new(vars)?;
        let mut generators = Vec::new();
        for c in p["conditions"].as_array().into_iter().flatten() {
            let text = c["poly"].as_str().ok_or_else(|| input_error("condition without `poly`"))?;
            generators.push(Poly::parse(text, &vars)?);
        }
        let order = serde_json::from_value(p["order"].clone()).ok();
        return Ok(LoadedIdeal { vars, generators, order });
    }
    let f: IdealFile = serde_json::from_value(value).with_context(|| format!("in {}", path.display()))?;
    if f.format_version != FORMAT_VERSION {
        return Err(input_error(format!("unsupported format_version {}", f.format_version)));
    }
    let vars = VarSet::new(f.variables)?;
    let generators = f.generators.iter().map(|g| Poly::parse(g, &vars)).collect::<Result<_, _>>()?;
    Ok(LoadedIdeal { vars, generators, order: f.order })
}

fn choose_order(a: &Args, loaded: &LoadedIdeal) -> anyhow::Result<WeightedOrder> {
    let mut order = match (&a.order, &loaded.order) {
        (Some(k), file) => {
            let kind: OrderKind = k.parse()?;
            let weights = file.as_ref().map(|o| o.weights.clone()).unwrap_or_default();
            WeightedOrder { kind, weights, eliminate: vec![] }
        }
        (None, Some(o)) => o.clone(),
        (None, None) => WeightedOrder::degrevlex(),
    };
    for (k, v) in &a.weight {
        let w: u32 = v.parse().map_err(|_| input_error(format!("bad weight `{v}` for `{k}`")))?;
        order.weights.insert(k.clone(), w);
    }
    if order.kind == OrderKind::Lex || order.kind == OrderKind::Degrevlex {
        order.weights.clear();
    }
    Ok(order)
}

pub fn run(a: &Args) -> anyhow::Result<Output> {
    let started = Instant::now();
    let loaded = load_ideal(&a.ideal)?;
    let order = choose_order(a, &loaded)?;
    let budget = super::budget(a.budget_pairs);
    let ideal = Ideal::new(&loaded.vars, loaded.generators.clone(), order.clone())?;
    let inputs = json!({
        "file": a.ideal.display().to_string(),
        "variables": loaded.vars.names(),
        "generators": loaded.generators.iter().map(|g| poly_text(g, &order)).collect::<Vec<_>>(),
        "order": order,
        "budget": budget,
        "normal_form": a.normal_form,
    });
    let draft = Draft::new("groebner", started, inputs);
    let gb = match buchberger_with(&ideal, &budget) {
        Ok(gb) => gb,
        Err(Error::BudgetExceeded(why)) => {
            let p = json!({ "budget_exceeded": why });
            return Ok(Output::Report(draft.payload(p, Status::Inconclusive)));
        }
        Err(e) => return Err(e.into()),
    };
    let mut nfs = Vec::new();
    for text in &a.normal_form {
        let p = Poly::parse(text, &loaded.vars)?;
        let r = gb.normal_form(&p)?;
        nfs.push(json!({ "poly": poly_text(&p, &order), "normal_form": poly_text(&r, &order), "zero": r.is_zero() }));
    }
    let lms: Vec<String> = gb
        .leading_monomials()
        .iter()
        .map(|m| poly_text(&Poly::monomial(&loaded.vars, *m, isochron::algebra::Rat::one()), &order))
        .collect();
    let payload = json!({
        "variables": loaded.vars.names(),
        "order": order,
        "reduced": gb.reduced,
        "unit": gb.is_unit(),
        "basis": gb.basis.iter().map(|g| poly_text(g, &order)).collect::<Vec<_>>(),
        "leading_monomials": lms,
        "normal_forms": nfs,
    });
    Ok(Output::Report(draft.payload(payload, Status::Ok).resource("stats", &gb.stats)))
}
