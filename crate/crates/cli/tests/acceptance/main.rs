//! Acceptance run over the `isochron` binary and library.
//!
//! Prints one line per criterion and exits nonzero if any fails.
//! `cargo test --test acceptance -- 4 11` runs a subset.

mod properties;

use std::collections::HashMap;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, ensure, Context, Result};
use isochron::algebra::{Poly, Rat, VarSet};
use isochron::conditions::monotonicity_index;
use isochron::systems::{lienard_from_abel, lookup, AbelSystem};
use serde_json::{json, Value};

/// Reference quartic conditions of weighted degree 2 and 4.
const P2: &str = "3*b21 - 3*a12 + b11^2 - a20*b11 - 9*a30 + 4*a02^2 - 5*b11*a02 + 10*a20^2 + 10*a20*a02";

const P3: &str = "72*b21^2 + 396*a20*b11*a12 + 90*b11*a02*a12 + 36*b11*a22 + 324*b31*a02 - 36*b21*a12 \
    - 468*a20*b11*b21 + 612*a20*b21*a02 - 4116*b11*a20^2*a02 + 108*a20*b31 - 540*a30*b21 - 324*a40*b11 \
    + 1566*a30*b11*a02 - 288*a20*a22 - 459*a30*b11^2 - 1296*a40*a02 - 306*b21*b11*a02 + 1428*a20*b11^2*a02 \
    + 153*b21*b11^2 - 117*b11^2*a12 - 191*a20*b11^3 + 180*a20*a02*a12 + 43*b11^4 - 2319*a20*b11*a02^2 \
    - 289*b11^3*a02 - 360*a02*a22 - 36*a12^2 - 171*b21*a02^2 + 513*a30*a02^2 + 537*b11^2*a02^2 \
    + 351*a02^2*a12 - 271*b11*a02^3 + 542*a20*a02^3 + 756*a20*a30*a02 + 2268*a20*a30*b11 - 20*a02^4 \
    + 1120*a20^4 + 798*b11^2*a20^2 - 2240*b11*a20^3 - 1512*a20*a40 + 1008*a20^2*b21 - 252*a20^2*a12 \
    + 1806*a20^2*a02^2 + 2240*a20^3*a02";

/// Closed-form Urabe coefficients of the homogeneous case with `h = b31 X³/√(4 + b31² X⁶)`.
const CLOSED_FORM: [(u64, &str); 4] = [(3, "1/2*b31"), (9, "-1/16*b31^3"), (15, "3/256*b31^5"), (21, "-5/2048*b31^7")];

struct Run {
    code: i32,
    report: Value,
}

fn isochron(args: &[&str]) -> Result<Run> {
    let out = Command::new(env!("CARGO_BIN_EXE_isochron")).args(args).output()?;
    let code = out.status.code().unwrap_or(-1);
    let report = serde_json::from_slice(&out.stdout)
        .with_context(|| format!("isochron {}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr).trim()))?;
    Ok(Run { code, report })
}

static VERIFIED: Mutex<Option<HashMap<String, Value>>> = Mutex::new(None);

/// Payload of `isochron verify --family id` at m = 9, cached across criteria.
fn verified(id: &str) -> Result<Value> {
    if let Some(v) = VERIFIED.lock().unwrap().get_or_insert_with(HashMap::new).get(id) {
        return Ok(v.clone());
    }
    let r = isochron(&["verify", "--family", id, "--order-m", "9"])?;
    let payload = r.report["payload"].clone();
    VERIFIED.lock().unwrap().get_or_insert_with(HashMap::new).insert(id.to_string(), payload.clone());
    Ok(payload)
}

fn check<'a>(payload: &'a Value, name: &str) -> Result<&'a Value> {
    payload["checks"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["check"] == name))
        .ok_or_else(|| anyhow!("{}: no {name} check", payload["id"]))
}

fn expect_pass(payload: &Value, name: &str) -> Result<()> {
    let c = check(payload, name)?;
    ensure!(c["status"] == "pass", "{} {name}: {}", payload["id"], c["status"]);
    Ok(())
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().map(|a| a.iter().filter_map(|s| s.as_str().map(String::from)).collect()).unwrap_or_default()
}

fn parse(text: &str, vars: &VarSet) -> Result<Poly> {
    Poly::parse(text, vars).with_context(|| format!("parsing {text}"))
}

fn same_poly(a: &str, b: &str) -> Result<bool> {
    let (a, b) = (Poly::parse_auto(a)?, Poly::parse_auto(b)?);
    Ok((&a - &b.embed(a.vars())?).is_zero())
}

fn multiple_of(a: &str, b: &str) -> bool {
    match (Poly::parse_auto(a), Poly::parse_auto(b)) {
        (Ok(a), Ok(b)) => b.embed(a.vars()).is_ok_and(|b| proportional(&a, &b).is_some()),
        _ => false,
    }
}

/// `a = r·b` for some nonzero rational `r`.
fn proportional(a: &Poly, b: &Poly) -> Option<Rat> {
    let (m, c) = b.terms().first()?.clone();
    let r = &a.coeff(m) / &c;
    (!r.is_zero() && *a == b.scale(&r)).then_some(r)
}

fn c1() -> Result<String> {
    let r = isochron(&["conditions", "--family", "deg4", "--order-m", "2"])?;
    ensure!(r.code == 0, "exit code {}", r.code);
    let p = &r.report["payload"];
    let vars = VarSet::new(strings(&p["variables"]))?;
    let first = p["conditions"][0]["poly"].as_str().ok_or_else(|| anyhow!("no conditions"))?;
    let s1 = parse(first, &vars)?;
    let r = proportional(&s1, &parse(P2, &vars)?).ok_or_else(|| anyhow!("first condition {first} is not a multiple of P2"))?;
    Ok(format!("first condition = {r}·P2"))
}

fn groebner_normal_forms(vars: &[String], gens: &[&str], members: &[&str]) -> Result<Vec<String>> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("ideal.json");
    std::fs::write(&path, json!({ "format_version": 1, "variables": vars, "generators": gens }).to_string())?;
    let mut args = vec!["groebner", path.to_str().unwrap()];
    for m in members {
        args.extend(["--normal-form", m]);
    }
    let r = isochron(&args)?;
    ensure!(r.code == 0, "groebner exit code {}", r.code);
    Ok(r.report["payload"]["normal_forms"]
        .as_array()
        .ok_or_else(|| anyhow!("no normal forms"))?
        .iter()
        .map(|n| n["normal_form"].as_str().unwrap_or("?").to_string())
        .collect())
}

fn c2() -> Result<String> {
    let r = isochron(&["conditions", "--family", "deg4", "--order-m", "3"])?;
    ensure!(r.code == 0, "exit code {}", r.code);
    let p = &r.report["payload"];
    let vars = strings(&p["variables"]);
    let s1 = p["conditions"][0]["poly"].as_str().unwrap_or_default().to_string();
    let s2 = p["conditions"][1]["poly"].as_str().unwrap_or_default().to_string();
    let forward = groebner_normal_forms(&vars, &[&s1, &s2], &[P2, P3])?;
    let back = groebner_normal_forms(&vars, &[P2, P3], &[&s1, &s2])?;
    ensure!(forward.iter().all(|n| n == "0"), "P2, P3 modulo GB(s1, s2): {forward:?}");
    ensure!(back.iter().all(|n| n == "0"), "s1, s2 modulo GB(P2, P3): {back:?}");
    Ok("mutual normal forms vanish".into())
}

fn c3() -> Result<String> {
    let lp = lookup("deg4")?.system.lienard()?;
    let s = monotonicity_index(&lp)?.value;
    ensure!(s == parse(P2, s.vars())?, "index {s} differs from P2");
    let mut multiples = Vec::new();
    for n in 2..=5 {
        let s = monotonicity_index(&lienard_from_abel(&AbelSystem::symbolic(n)?)?)?.value;
        let target = parse("a1^2 - 3*a2", s.vars())?;
        let r = proportional(&s, &target).ok_or_else(|| anyhow!("Abel n={n}: index {s}"))?;
        ensure!(r > Rat::zero(), "Abel n={n}: negative multiple {r}");
        multiples.push(r.to_string());
    }
    Ok(format!("equals P2 term for term; Abel n=2..5 give ({})·(a1^2 - 3*a2)", multiples.join(", ")))
}

fn closed_form_case(payload: &Value) -> Result<()> {
    let c = check(payload, "urabe_closed_form")?;
    ensure!(c["status"] == "pass", "{} closed form: {}", payload["id"], c["status"]);
    ensure!(c["detail"]["coefficients_match"] == true, "extracted coefficients differ from the closed form");
    let coeffs = c["detail"]["coefficients"].as_array().ok_or_else(|| anyhow!("no coefficients"))?;
    for (index, want) in CLOSED_FORM {
        let got = coeffs
            .iter()
            .find(|v| v["index"] == index)
            .and_then(|v| v["value"].as_str())
            .ok_or_else(|| anyhow!("c{index} missing"))?;
        ensure!(same_poly(got, want)?, "c{index} = {got}, expected {want}");
    }
    Ok(())
}

fn conditions_mode(payload: &Value) -> Result<Value> {
    let c = check(payload, "conditions")?;
    ensure!(c["status"] == "pass", "{} conditions: {}", payload["id"], c["status"]);
    Ok(c["detail"]["mode"].clone())
}

fn homogeneous_case(family: &str, k: u32) -> Result<()> {
    let p = verified(&format!("{family}.case{k}"))?;
    ensure!(conditions_mode(&p)?["kind"] == "exact", "case {k} not exact");
    if k == 2 {
        closed_form_case(&p)
    } else {
        expect_pass(&p, "urabe_zero")
    }
}

fn c4() -> Result<String> {
    for k in 1..=7 {
        homogeneous_case("deg4.family1", k)?;
    }
    Ok("7 cases vanish exactly at m=9; case 2 reproduces c3, c9, c15, c21".into())
}

fn c5() -> Result<String> {
    for k in 1..=3 {
        homogeneous_case("deg4.family2", k)?;
    }
    for k in 4..=5 {
        let mode = conditions_mode(&verified(&format!("deg4.family2.case{k}"))?)?;
        ensure!(mode == json!({ "kind": "quadratic", "d": 33 }), "case {k} mode {mode}");
    }
    ensure!(conditions_mode(&verified("deg4.family2.case6")?)?["kind"] == "exact", "case 6 not exact");
    let p = verified("deg4.family2.case7")?;
    let mode = conditions_mode(&p)?;
    ensure!(mode == json!({ "kind": "numeric", "digits": 60 }), "case 7 mode {mode}");
    let worst = check(&p, "conditions")?["detail"]["residuals"]
        .as_array()
        .ok_or_else(|| anyhow!("no residuals"))?
        .iter()
        .map(|r| r["magnitude"].as_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    ensure!(worst < 1e-40, "case 7 residual {worst:e}");
    Ok(format!("cases 4-5 exact in Q(sqrt 33); case 7 residual {worst:.1e}"))
}

fn c6() -> Result<String> {
    for id in ["deg5.case1", "deg5.case2"] {
        let p = verified(id)?;
        for name in ["conditions", "urabe_zero", "first_integral", "linearization"] {
            expect_pass(&p, name)?;
        }
    }
    Ok("both quintic cases: zero Urabe function, first integral, linearization".into())
}

fn c7() -> Result<String> {
    let ids = ["deg4.family1.case1", "deg4.family1.case2", "deg4.family1.case3", "deg5.case1", "deg5.case2", "abel.ab3"];
    let mut methods = Vec::new();
    for id in ids {
        let p = verified(id)?;
        expect_pass(&p, "first_integral")?;
        methods.push(check(&p, "first_integral")?["detail"]["method"]["kind"].as_str().unwrap_or("?").to_string());
    }
    let ab3 = verified("abel.ab3")?;
    let ab3 = check(&ab3, "first_integral")?;
    ensure!(same_expr(ab3["detail"]["h"].as_str().unwrap_or_default(), "x^2 + y^2/(1 + y)^2")?, "abel.ab3 integral {}", ab3["detail"]["h"]);
    Ok(format!("six integrals hold ({})", methods.join(", ")))
}

fn same_expr(a: &str, b: &str) -> Result<bool> {
    use isochron::algebra::Expr;
    Ok(Expr::parse(a)?.to_string() == Expr::parse(b)?.to_string())
}

fn c8() -> Result<String> {
    let r = isochron(&["abel", "--n", "3"])?;
    let p = &r.report["payload"];
    ensure!(p["verdict"] == "unique_family", "verdict {}", p["verdict"]);
    let fam = &p["family"];
    let bindings: HashMap<String, String> = fam["bindings"]
        .as_array()
        .ok_or_else(|| anyhow!("no bindings"))?
        .iter()
        .map(|b| (b[0].as_str().unwrap_or_default().into(), b[1].as_str().unwrap_or_default().into()))
        .collect();
    ensure!(same_poly(&bindings["a2"], "a1^2/3")? && same_poly(&bindings["a3"], "a1^3/27")?, "family {bindings:?}");
    let h = fam["urabe"].as_array().and_then(|u| u.iter().find(|c| c["index"] == 1)).ok_or_else(|| anyhow!("no Urabe"))?;
    ensure!(same_poly(h["value"].as_str().unwrap_or_default(), "-a1/3")?, "Urabe {}", h["value"]);
    let nf = |target: &str| -> Result<(String, Value)> {
        let m = fam["membership"]
            .as_array()
            .and_then(|ms| ms.iter().find(|m| multiple_of(m["poly"].as_str().unwrap_or_default(), target)))
            .ok_or_else(|| anyhow!("no membership for {target}"))?;
        Ok((m["normal_form"].as_str().unwrap_or_default().to_string(), m["radical_witness"].clone()))
    };
    let (n2, _) = nf("3*a2 - a1^2")?;
    ensure!(n2 == "0", "NF(3a2 - a1^2) = {n2}");
    let (n3, witness) = nf("27*a3 - a1^3")?;
    if n3 != "0" {
        let j = &p["family_ideal"];
        bail!(
            "NF(27a3 - a1^3) = {n3} in GB(I), I = <{}>; I is not radical: witness {witness}, J = <3a2 - a1^2, 27a3 - a1^3> contains I: {}",
            strings(&p["basis"]).join(", "),
            j["contains_conditions"]
        );
    }
    Ok("family a2 = a1^2/3, a3 = a1^3/27 with h = -a1 X/3".into())
}

fn c9() -> Result<String> {
    let mut routes = Vec::new();
    for n in ["4", "5"] {
        for m in ["9", "11"] {
            let r = isochron(&["abel", "--n", n, "--order-m", m])?;
            let p = &r.report["payload"];
            ensure!(p["verdict"] == "none_with_leading_nonzero", "n={n}, m={m}: {}", p["verdict_text"]);
            routes.push(format!("n={n} m={m}: {}", p["route"].as_str().unwrap_or("?")));
        }
    }
    Ok(routes.join("; "))
}

fn c10() -> Result<String> {
    let suites = properties::run_all()?;
    let times: Vec<String> = suites.iter().map(|(n, s)| format!("{n} {s:.1} s")).collect();
    Ok(format!("{} cases each: {}", properties::cases(), times.join(", ")))
}

fn scan(id: &str, set: &[&str]) -> Result<Value> {
    let mut args = vec!["period", "--family", id, "--lo", "0.05", "--hi", "0.4"];
    for s in set {
        args.extend(["--set", s]);
    }
    let started = Instant::now();
    let r = isochron(&args)?;
    ensure!(started.elapsed() < Duration::from_secs(60), "{id} scan took {:?}", started.elapsed());
    ensure!(r.report["payload"]["gaps"].as_array().is_some_and(|g| g.is_empty()), "{id}: gaps");
    Ok(r.report["payload"].clone())
}

fn c11() -> Result<String> {
    let mut out = Vec::new();
    for (id, set) in [("deg4.family1.case1", vec!["a40=1"]), ("deg5.case2", vec!["a=1"]), ("abel.ab3", vec![])] {
        let p = scan(id, &set)?;
        let dev = p["max_deviation_from_2pi"].as_f64().unwrap_or(f64::INFINITY);
        ensure!(dev < 1e-6, "{id}: max |T - 2pi| = {dev:e}");
        out.push(format!("{id} {dev:.1e}"));
    }
    for (id, s, trend) in [("quadratic.a20", "10", "increasing"), ("abel.a2", "-3", "decreasing")] {
        let p = scan(id, &[])?;
        let class = &p["classification"];
        ensure!(p["monotonicity_index"] == s, "{id}: S = {}", p["monotonicity_index"]);
        ensure!(class["observed"] == trend && class["consistent"] == true, "{id}: {class}");
        let periods: Vec<f64> = p["rows"].as_array().unwrap_or(&vec![]).iter().filter_map(|r| r["period"].as_f64()).collect();
        let strict = periods.windows(2).all(|w| if trend == "increasing" { w[1] > w[0] } else { w[1] < w[0] });
        ensure!(strict, "{id}: periods not strictly {trend}");
        out.push(format!("{id} {trend} with S={s}"));
    }
    Ok(out.join("; "))
}

struct Criterion {
    number: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Result<String>,
}

fn main() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let criteria = [
        Criterion { number: 1, title: "quartic first condition", limit: min(1), run: c1 },
        Criterion { number: 2, title: "quartic second condition", limit: min(5), run: c2 },
        Criterion { number: 3, title: "monotonicity index", limit: min(5), run: c3 },
        Criterion { number: 4, title: "first quartic family", limit: min(30), run: c4 },
        Criterion { number: 5, title: "second quartic family", limit: min(30), run: c5 },
        Criterion { number: 6, title: "quintic cases", limit: min(30), run: c6 },
        Criterion { number: 7, title: "first integrals", limit: min(30), run: c7 },
        Criterion { number: 8, title: "Abel n=3 uniqueness", limit: min(2), run: c8 },
        Criterion { number: 9, title: "Abel n=4, 5 nonexistence", limit: min(60), run: c9 },
        Criterion { number: 10, title: "property suites", limit: min(30), run: c10 },
        Criterion { number: 11, title: "period scans", limit: min(5), run: c11 },
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    let mut ran = 0;
    for c in criteria.iter().filter(|c| only.is_empty() || only.contains(&c.number)) {
        ran += 1;
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err(anyhow!("panicked")));
        let elapsed = started.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.limit => Err(anyhow!("took {elapsed:.1?}, limit {:?}", c.limit)),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", format!("{e:#}")),
        };
        println!("criterion {:>2} {tag} {} ({:.1} s): {detail}", c.number, c.title, elapsed.as_secs_f64());
        if outcome.is_err() {
            failed.push(c.number);
        }
    }
    println!("acceptance: {}/{ran} passed", ran - failed.len());
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}
