use std::time::Instant;

use isochron::algebra::{Poly, UPoly, VarSet};
use isochron::conditions::DEFAULT_M;
use isochron::groebner::abel::{abel_analysis, AbelVerdict};
use isochron::groebner::{buchberger_with, Ideal, ZeroDimReport};
use serde_json::{json, Value};

use super::conditions::payload as conditions_payload;
use crate::input::{input_error, poly_text};
use crate::report::{Draft, Output, Status};

/// Degrees above this need `--long-running`.
const DESK_MAX_N: usize = 8;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Degree of P(y) = a1*y + … + an*y^n.
    #[arg(long)]
    pub n: usize,
    #[arg(long = "order-m", default_value_t = DEFAULT_M)]
    pub order_m: usize,
    #[arg(long)]
    pub series_order: Option<usize>,
    #[arg(long)]
    pub budget_pairs: Option<usize>,
    /// Allow degrees beyond desk scale.
    #[arg(long)]
    pub long_running: bool,
}

fn upoly_text(p: &UPoly, var: &str) -> String {
    let vars = VarSet::new([var]).expect("valid name");
    p.to_poly(&vars, 0).map(|q| q.to_string()).unwrap_or_default()
}

fn zero_dim(r: &ZeroDimReport) -> Value {
    let elims = |v: &Vec<isochron::groebner::VariableEliminant>| -> Vec<Value> {
        v.iter()
            .map(|e| json!({ "var": e.var, "eliminant": upoly_text(&e.eliminant, &e.var), "real_roots": e.real_roots }))
            .collect()
    };
    match r {
        ZeroDimReport::Empty => json!({ "kind": "empty" }),
        ZeroDimReport::NoRealPoints(v) => json!({ "kind": "no_real_points", "eliminants": elims(v) }),
        ZeroDimReport::UniqueRationalPoint(p) => {
            let pt: Vec<Value> = p.iter().map(|(k, v)| json!([k, v.to_string()])).collect();
            json!({ "kind": "unique_rational_point", "point": pt })
        }
        ZeroDimReport::Finite(v) => json!({ "kind": "finite", "eliminants": elims(v) }),
        ZeroDimReport::PositiveDimensional => json!({ "kind": "positive_dimensional" }),
    }
}

pub fn run(a: &Args) -> anyhow::Result<Output> {
    let started = Instant::now();
    if !(1..=9).contains(&a.n) {
        return Err(input_error(format!("--n must be in 1..=9, got {}", a.n)));
    }
    if a.n > DESK_MAX_N && !a.long_running {
        return Err(input_error(format!("n = {} is beyond desk scale; pass --long-running", a.n)));
    }
    let budget = super::budget(a.budget_pairs);
    let r = abel_analysis(a.n, a.order_m, a.series_order, &budget)?;
    let cs = &r.conditions;
    let order = &cs.weights;
    let mut p = json!({
        "n": a.n,
        "verdict": r.verdict,
        "verdict_text": r.verdict_text(),
        "route": r.route,
        "notes": r.notes,
        "conditions": conditions_payload(cs),
    });
    if let Some(gb) = &r.basis {
        p["basis"] = json!(gb.basis.iter().map(|g| poly_text(g, order)).collect::<Vec<_>>());
    }
    if let Some(f) = &r.family {
        let bindings: Vec<Value> = f.bindings.iter().map(|(k, v)| json!([k, poly_text(v, order)])).collect();
        let urabe: Vec<Value> =
            f.urabe.iter().map(|u| json!({ "index": u.index, "value": poly_text(&u.value, order) })).collect();
        let mut members = Vec::new();
        if let Some(gb) = &r.basis {
            // the family as an ideal J = ⟨a_k − r_k·a1^k⟩
            let mut gens = Vec::new();
            for ((k, v), (_, w)) in f.bindings.iter().zip(&f.witnesses) {
                let g = &Poly::var(&cs.params, k)? - v;
                let g = g.primitive(&order.bind(&cs.params)?);
                let nf = gb.normal_form(&g)?;
                members.push(json!({
                    "poly": poly_text(&g, order),
                    "normal_form": poly_text(&nf, order),
                    "radical_witness": w,
                }));
                gens.push(g);
            }
            let j = buchberger_with(&Ideal::new(&cs.params, gens, order.clone())?, &budget)?;
            let mut in_j = true;
            for c in &cs.conditions {
                in_j &= j.normal_form(&c.poly)?.is_zero();
            }
            p["family_ideal"] = json!({
                "basis": j.basis.iter().map(|g| poly_text(g, order)).collect::<Vec<_>>(),
                "contains_conditions": in_j,
            });
        }
        p["family"] = json!({
            "bindings": bindings,
            "conditions_vanish": f.conditions_vanish,
            "membership": members,
            "urabe": urabe,
        });
    }
    if let Some(s) = &r.saturation {
        let slices: Vec<Value> =
            s.slices.iter().map(|o| json!({ "value": o.value.to_string(), "report": zero_dim(&o.report) })).collect();
        p["saturation"] = json!({ "method": s.method, "unit": s.unit, "slices": slices });
    }
    let status = if r.verdict == AbelVerdict::Inconclusive { Status::Inconclusive } else { Status::Ok };
    let inputs = json!({
        "n": a.n,
        "order_m": a.order_m,
        "series_order": cs.series_order,
        "budget": budget,
    });
    let mut draft = Draft::new("abel", started, inputs).payload(p, status);
    if let Some(gb) = &r.basis {
        draft = draft.resource("stats", &gb.stats);
    }
    Ok(Output::Report(draft))
}
