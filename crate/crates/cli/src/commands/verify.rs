use std::time::Instant;

use isochron::conditions::DEFAULT_M;
use isochron::systems::{catalog, FamilyRecord, UrabeSpec};
use isochron::verify::{
    bind_expr, check_first_integral, check_linearization, check_urabe_closed_form, check_zero_urabe,
    substitute_family_with, SubstitutionMode, DEFAULT_CHECK_ORDER, DEFAULT_PRECISION_DIGITS, NUMERIC_THRESHOLD,
};
use serde::Serialize;
use serde_json::{json, Value};

use super::conditions::condition_set;
use crate::input::{input_error, poly_text, SourceArgs};
use crate::report::{Draft, Output, Status};

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Order of the parent condition set the bindings are substituted into.
    #[arg(long = "order-m", default_value_t = DEFAULT_M)]
    pub order_m: usize,
    #[arg(long)]
    pub series_order: Option<usize>,
    /// Significant digits kept from numeric bindings.
    #[arg(long, default_value_t = DEFAULT_PRECISION_DIGITS)]
    pub precision_digits: usize,
    /// Series order of the first-integral and linearization checks.
    #[arg(long, default_value_t = DEFAULT_CHECK_ORDER)]
    pub check_order: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum CheckStatus {
    Pass,
    Fail,
    /// The map straightens orbits but does not conjugate time.
    Orbital,
    Skipped,
}

#[derive(Serialize)]
struct Verdict {
    check: &'static str,
    status: CheckStatus,
    /// What argument produced the status.
    route: String,
    detail: Value,
}

fn pass(b: bool) -> CheckStatus {
    if b {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

fn substitution(rec: &FamilyRecord, a: &Args) -> anyhow::Result<Option<Verdict>> {
    let Some(parent_id) = &rec.parent else { return Ok(None) };
    let parent = catalog().get(parent_id)?;
    let w = parent.system.weight_order()?;
    let cs = condition_set(&parent.system, a.order_m, a.series_order, Some(&w))?;
    let s = substitute_family_with(&cs, rec, a.precision_digits)?;
    let route = match s.mode {
        SubstitutionMode::Exact => "exact substitution into the parent conditions".to_string(),
        SubstitutionMode::Quadratic { d } => format!("exact substitution over Q(sqrt({d}))"),
        SubstitutionMode::Numeric { digits } => {
            format!("numeric substitution at {digits} digits, relative residual < {NUMERIC_THRESHOLD:e}")
        }
    };
    let detail = json!({
        "parent": parent_id,
        "order_m": cs.order_m,
        "series_order": cs.series_order,
        "conditions": cs.conditions.len(),
        "mode": s.mode,
        "residuals": s.residuals,
    });
    Ok(Some(Verdict { check: "conditions", status: pass(s.all_zero), route, detail }))
}

fn urabe(rec: &FamilyRecord, m: usize) -> anyhow::Result<Option<Verdict>> {
    if matches!(rec.urabe, UrabeSpec::Unknown) {
        return Ok(None);
    }
    let lp = match rec.system.lienard() {
        Ok(lp) => lp,
        Err(e) => {
            let detail = json!({ "reason": e.to_string() });
            return Ok(Some(Verdict { check: "urabe", status: CheckStatus::Skipped, route: "none".into(), detail }));
        }
    };
    Ok(Some(match &rec.urabe {
        UrabeSpec::Zero => {
            let c = check_zero_urabe(&lp)?;
            let detail = json!({ "residual": c.residual.to_string() });
            Verdict { check: "urabe_zero", status: pass(c.holds), route: "h = 0: g'(x) + f(x) g(x) = 1 exactly".into(), detail }
        }
        UrabeSpec::ClosedForm(h) => {
            // one step past the condition order, so the coefficients reach c_{2m+3}
            let c = check_urabe_closed_form(&lp, h, m + 1)?;
            let order = &rec.system.weight_order().unwrap_or_else(|_| isochron::algebra::WeightedOrder::degrevlex());
            let coeffs: Vec<Value> =
                c.coefficients.iter().map(|u| json!({ "index": u.index, "value": poly_text(&u.value, order) })).collect();
            let detail = json!({
                "h": format!("({})*X^{}/sqrt(({})^2 + ({})*X^{})", h.k1, h.p, h.k2, h.k3, h.q),
                "through_order": 2 * m + 4,
                "cri_identity": c.cri_holds,
                "integrated_identity": c.integrated_holds,
                "coefficients_match": c.coefficients_match,
                "coefficients": coeffs,
            });
            let route = "closed-form h: X/(1+h(X)) = g e^F and phi = X + int h, as series".into();
            Verdict { check: "urabe_closed_form", status: pass(c.holds), route, detail }
        }
        UrabeSpec::Unknown => unreachable!(),
    }))
}

fn certificates(rec: &FamilyRecord, order: usize, out: &mut Vec<Verdict>) -> anyhow::Result<()> {
    if rec.first_integral.is_none() && rec.linearization.is_none() {
        return Ok(());
    }
    let planar = match rec.system.planar() {
        Ok(p) => p,
        Err(e) => {
            let detail = json!({ "reason": e.to_string() });
            out.push(Verdict { check: "certificates", status: CheckStatus::Skipped, route: "none".into(), detail });
            return Ok(());
        }
    };
    if let Some(h) = &rec.first_integral {
        let e = bind_expr(&rec.system, h);
        let c = check_first_integral(&planar, &e, order)?;
        let route = match c.method {
            isochron::verify::CheckMethod::Exact => "dH/dt = 0 as a rational function".to_string(),
            isochron::verify::CheckMethod::Series { order } => format!("dH/dt = 0 as a series through order {order}"),
        };
        let detail = json!({ "h": h.to_string(), "method": c.method, "first_failure_order": c.first_failure_order });
        out.push(Verdict { check: "first_integral", status: pass(c.holds), route, detail });
    }
    if let Some((u, v)) = &rec.linearization {
        let (bu, bv) = (bind_expr(&rec.system, u), bind_expr(&rec.system, v));
        let c = check_linearization(&planar, &bu, &bv, order)?;
        let status = match (c.holds, c.orbital) {
            (true, _) => CheckStatus::Pass,
            (false, true) => CheckStatus::Orbital,
            (false, false) => CheckStatus::Fail,
        };
        let detail = json!({
            "u": u.to_string(),
            "v": v.to_string(),
            "orientation": c.orientation,
            "first_failure_order": c.first_failure_order,
            "orbital": c.orbital,
        });
        let route = format!("u' = -k v, v' = k u with k = ±1, as series through order {}", c.order);
        out.push(Verdict { check: "linearization", status, route, detail });
    }
    Ok(())
}

pub fn run(a: &Args) -> anyhow::Result<Output> {
    let started = Instant::now();
    let src = a.source.load()?;
    let rec = &src.record;
    let mut verdicts = Vec::new();
    verdicts.extend(substitution(rec, a)?);
    verdicts.extend(urabe(rec, a.order_m)?);
    certificates(rec, a.check_order, &mut verdicts)?;
    if verdicts.is_empty() {
        return Err(input_error("nothing to verify: the spec has no parent and no certificates"));
    }
    let conditions_ok = verdicts.iter().find(|v| v.check == "conditions").map(|v| v.status == CheckStatus::Pass);
    let sufficient = verdicts
        .iter()
        .find(|v| matches!(v.check, "urabe_zero" | "urabe_closed_form" | "linearization") && v.status == CheckStatus::Pass);
    let (family, route) = match (conditions_ok, sufficient) {
        (Some(false), _) => ("not_established", "conditions do not vanish".to_string()),
        (_, Some(v)) => ("isochronous", v.check.to_string()),
        (Some(true), None) => ("necessary_conditions_hold", "conditions".to_string()),
        (None, None) => ("not_established", "no sufficient certificate passed".to_string()),
    };
    let failed = verdicts.iter().any(|v| v.status == CheckStatus::Fail);
    let status = if failed || family == "not_established" { Status::CheckFailed } else { Status::Ok };
    let payload = json!({
        "id": rec.id,
        "verdict": { "family": family, "route": route },
        "checks": verdicts,
    });
    let inputs = json!({
        "source": src.origin,
        "spec": src.text,
        "order_m": a.order_m,
        "precision_digits": a.precision_digits,
        "check_order": a.check_order,
    });
    Ok(Output::Report(Draft::new("verify", started, inputs).payload(payload, status)))
}
