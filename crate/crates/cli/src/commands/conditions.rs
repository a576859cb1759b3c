use std::collections::BTreeMap;
use std::time::Instant;

use clap::ValueEnum;
use isochron::algebra::{weighted_degree, WeightedOrder};
use isochron::conditions::{
    compute_series_triple, default_series_order, homogenize_reparametrize, monotonicity_index, normalize_a20,
    reparametrized_weights, urabe_extract, A20Mode, ConditionSet, DEFAULT_M,
};
use isochron::systems::Resolved;
use serde_json::{json, Value};

use crate::input::{input_error, poly_text, SourceArgs};
use crate::report::{Draft, Output, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightsMode {
    /// Conventional weights, plus the spec's `[weights]` table.
    Default,
    /// Only the spec's `[weights]` table; every parameter must be listed.
    Explicit,
    /// No weights: plain degrevlex normalization.
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Normalize {
    None,
    #[value(name = "a20_zero", alias = "a20-zero")]
    A20Zero,
    #[value(name = "a20_one", alias = "a20-one")]
    A20One,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Number of conditions to extract (odd orders 3 … 2m+1).
    #[arg(long = "order-m", default_value_t = DEFAULT_M)]
    pub order_m: usize,
    /// Truncation order of the series (default 2m+4).
    #[arg(long)]
    pub series_order: Option<usize>,
    #[arg(long, value_enum, default_value_t = WeightsMode::Default)]
    pub weights: WeightsMode,
    /// Rewrite the conditions in parameters `A` with `A^w = a`.
    #[arg(long)]
    pub homogenize: bool,
    /// Fix `A20` after homogenizing (implies --homogenize).
    #[arg(long, value_enum, default_value_t = Normalize::None)]
    pub normalize: Normalize,
}

pub fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

pub fn weight_order(sys: &Resolved, mode: WeightsMode) -> anyhow::Result<Option<WeightedOrder>> {
    Ok(match mode {
        WeightsMode::Default => Some(sys.weight_order()?),
        WeightsMode::Explicit => {
            let mut w = BTreeMap::new();
            for name in sys.params.names() {
                let k = sys
                    .spec
                    .weights
                    .get(name)
                    .ok_or_else(|| input_error(format!("--weights explicit: no weight for `{name}` in [weights]")))?;
                w.insert(name.clone(), *k);
            }
            Some(WeightedOrder::weighted(w))
        }
        WeightsMode::None => None,
    })
}

pub fn condition_set(sys: &Resolved, m: usize, n: Option<usize>, weights: Option<&WeightedOrder>) -> anyhow::Result<ConditionSet> {
    let lp = sys.lienard()?;
    let n = n.unwrap_or_else(|| default_series_order(m));
    let st = compute_series_triple(&lp, n)?;
    Ok(urabe_extract(&st, m, weights)?)
}

/// Conditions, Urabe coefficients and weights as canonical text.
pub fn payload(cs: &ConditionSet) -> Value {
    let order = &cs.weights;
    let conditions: Vec<Value> = cs
        .conditions
        .iter()
        .map(|c| {
            let wd = weighted_degree(&c.poly, order).ok().and_then(|d| d.degree);
            json!({ "index": c.index, "weighted_degree": wd, "terms": c.poly.len(), "poly": poly_text(&c.poly, order) })
        })
        .collect();
    let urabe: Vec<Value> = cs
        .urabe_coeffs
        .iter()
        .map(|c| json!({ "index": c.index, "value": poly_text(&c.value, order) }))
        .collect();
    let mut out = json!({
        "variables": cs.params.names(),
        "order": order,
        "order_m": cs.order_m,
        "series_order": cs.series_order,
        "route": cs.route,
        "quasi_homogeneous": cs.audit_quasi_homogeneous().is_ok(),
        "conditions": conditions,
        "urabe_coefficients": urabe,
    });
    if let Some(rp) = &cs.reparametrization {
        out["reparametrization"] = json!({ "from": rp.from.names(), "weights": reparametrized_weights(rp) });
    }
    if let Some(b) = cs.a20_branch {
        out["a20"] = json!(b);
    }
    out
}

pub fn run(a: &Args) -> anyhow::Result<Output> {
    let started = Instant::now();
    let src = a.source.load()?;
    let sys = &src.record.system;
    let w = weight_order(sys, a.weights)?;
    let mut cs = condition_set(sys, a.order_m, a.series_order, w.as_ref())?;
    if a.homogenize || a.normalize != Normalize::None {
        cs = homogenize_reparametrize(&cs)?;
    }
    match a.normalize {
        Normalize::None => {}
        Normalize::A20Zero => cs = normalize_a20(&cs, A20Mode::SetZero)?,
        Normalize::A20One => cs = normalize_a20(&cs, A20Mode::SetOne)?,
    }
    let mut p = payload(&cs);
    if let Ok(s) = sys.lienard().and_then(|lp| monotonicity_index(&lp)) {
        p["monotonicity_index"] = json!(s.value.to_string());
    }
    let inputs = json!({
        "source": src.origin,
        "spec": src.text,
        "order_m": a.order_m,
        "series_order": cs.series_order,
        "weights": value_name(&a.weights),
        "homogenize": a.homogenize,
        "normalize": value_name(&a.normalize),
    });
    let draft = Draft::new("conditions", started, inputs).payload(p, Status::Ok);
    Ok(Output::Report(draft))
}
