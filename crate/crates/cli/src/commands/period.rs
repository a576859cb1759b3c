use std::collections::BTreeMap;
use std::time::Instant;

use isochron::algebra::Rat;
use isochron::conditions::monotonicity_index;
use isochron::period::{classify_monotonicity, period_scan, DEFAULT_RANGE, DEFAULT_TOL};
use serde_json::json;

use crate::input::{input_error, parse_assignment, SourceArgs};
use crate::report::{Draft, Output, Status};

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Values for free symbols, `name=value` with an exact rational value.
    #[arg(long = "set", value_parser = parse_assignment)]
    pub set: Vec<(String, String)>,
    #[arg(long, default_value_t = DEFAULT_RANGE.0)]
    pub lo: f64,
    #[arg(long, default_value_t = DEFAULT_RANGE.1)]
    pub hi: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Integrator tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Print the tab-separated table instead of the JSON report.
    #[arg(long)]
    pub table: bool,
}

pub fn run(a: &Args) -> anyhow::Result<Output> {
    let started = Instant::now();
    let src = a.source.load()?;
    let sys = src.record.system.planar()?;
    let mut values = BTreeMap::new();
    for (k, v) in &a.set {
        let r: Rat = v.parse().map_err(|_| input_error(format!("`{k}={v}` is not an exact rational")))?;
        values.insert(k.clone(), r);
    }
    let params = sys.params();
    let free: Vec<&String> = params.names().iter().filter(|n| !values.contains_key(*n)).collect();
    if !free.is_empty() {
        return Err(input_error(format!("free symbols need values (--set name=value): {free:?}")));
    }
    let sys = sys.specialize(&values)?;
    let s = monotonicity_index(&src.record.system.lienard()?)?.value;
    let assign: Vec<(usize, Rat)> =
        values.iter().filter_map(|(k, v)| Some((s.vars().index_of(k)?, v.clone()))).collect();
    let s = s.partial_eval(&assign).as_constant().ok_or_else(|| input_error("monotonicity index is not a number"))?;
    let scan = period_scan(&sys, a.lo, a.hi, a.step, a.tol)?;
    if a.table {
        let status = if scan.gaps.is_empty() { Status::Ok } else { Status::CheckFailed };
        return Ok(Output::Text(scan.to_table(), status));
    }
    let class = classify_monotonicity(&scan, &s).ok();
    let status = match &class {
        _ if !scan.gaps.is_empty() => Status::CheckFailed,
        Some(c) if c.inconclusive => Status::Inconclusive,
        Some(c) if !c.consistent => Status::CheckFailed,
        _ => Status::Ok,
    };
    let rows: Vec<_> = (0..scan.amplitudes.len())
        .map(|i| json!({ "amplitude": scan.amplitudes[i], "period": scan.periods[i], "error_estimate": scan.error_estimates[i] }))
        .collect();
    let payload = json!({
        "rows": rows,
        "gaps": scan.gaps,
        "max_deviation_from_2pi": scan.max_deviation_from_2pi,
        "monotonicity_index": s.to_string(),
        "classification": class,
    });
    let set: BTreeMap<&str, &str> = a.set.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    let inputs = json!({
        "source": src.origin,
        "spec": src.text,
        "set": set,
        "lo": a.lo,
        "hi": a.hi,
        "step": a.step,
        "tol": a.tol,
    });
    Ok(Output::Report(Draft::new("period", started, inputs).payload(payload, status)))
}
