//! Numerical period function: Dormand–Prince 5(4) with dense output, the
//! return to the positive `x`-axis located by bisection.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Expr, Rat};
use crate::error::{Error, Result};
use crate::systems::{NumericField, PlanarSystem};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_RANGE: (f64, f64) = (0.05, 0.4);
pub const MAX_STEPS: usize = 2_000_000;
const EVENT_TOL: f64 = 1e-14;

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

type State = [f64; 2];

/// One accepted step with its continuous extension.
struct Step {
    t0: f64,
    h: f64,
    rcont: [State; 5],
}

impl Step {
    fn at(&self, t: f64) -> State {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let r = &self.rcont;
        let f = |i: usize| r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        [f(0), f(1)]
    }
}

struct Integrator<'a> {
    field: &'a NumericField,
    sign: f64,
    tol: f64,
}

impl Integrator<'_> {
    fn rhs(&self, y: &State) -> State {
        let (a, b) = self.field.eval(y[0], y[1]);
        [self.sign * a, self.sign * b]
    }

    /// Tries a step of size `h`; returns the new state, error norm and dense data.
    fn attempt(&self, t: f64, y: &State, k1: &State, h: f64) -> (State, State, f64, Step) {
        let mut k = [[0.0; 2]; 7];
        k[0] = *k1;
        for s in 1..7 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s) {
                for i in 0..2 {
                    ys[i] += h * A[s][j] * kj[i];
                }
            }
            k[s] = self.rhs(&ys);
        }
        // the last stage is the 5th-order solution (FSAL)
        let mut y1 = *y;
        for (j, kj) in k.iter().enumerate().take(6) {
            for i in 0..2 {
                y1[i] += h * A[6][j] * kj[i];
            }
        }
        let mut err = 0.0;
        for i in 0..2 {
            let e: f64 = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let sc = self.tol + self.tol * y[i].abs().max(y1[i].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / 2.0).sqrt();
        let mut rcont = [[0.0; 2]; 5];
        for i in 0..2 {
            let ydiff = y1[i] - y[i];
            let bspl = h * k[0][i] - ydiff;
            rcont[0][i] = y[i];
            rcont[1][i] = ydiff;
            rcont[2][i] = bspl;
            rcont[3][i] = ydiff - h * k[6][i] - bspl;
            rcont[4][i] = h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>();
        }
        (y1, k[6], err, Step { t0: t, h, rcont })
    }

    /// Integrates until `stop(step, y0, y1)` returns an event time, or until `t_end`.
    fn run(
        &self,
        y0: State,
        t_end: f64,
        mut stop: impl FnMut(&Step, &State, &State) -> Option<f64>,
        mut visit: impl FnMut(f64, &State),
    ) -> Result<(f64, State, usize)> {
        let mut t = 0.0;
        let mut y = y0;
        let mut k1 = self.rhs(&y);
        let mut h = (self.tol.powf(0.2) * 0.1).min(t_end);
        let mut steps = 0usize;
        loop {
            if steps >= MAX_STEPS {
                return Err(Error::OrbitNotClosed(format!("no return within {MAX_STEPS} steps")));
            }
            if !y[0].is_finite() || !y[1].is_finite() || y[0].abs() > 1e6 || y[1].abs() > 1e6 {
                return Err(Error::OrbitNotClosed("the orbit escapes".into()));
            }
            h = h.min(t_end - t);
            if h <= 1e-15 {
                return Ok((t, y, steps));
            }
            let (y1, k7, err, step) = self.attempt(t, &y, &k1, h);
            steps += 1;
            if err <= 1.0 {
                if let Some(te) = stop(&step, &y, &y1) {
                    let ye = step.at(te);
                    visit(te, &ye);
                    return Ok((te, ye, steps));
                }
                t += h;
                y = y1;
                k1 = k7;
                visit(t, &y);
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h *= fac;
            } else {
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            }
        }
    }
}

fn numeric_field(sys: &PlanarSystem) -> Result<NumericField> {
    sys.numeric()
}

fn upward_crossing(step: &Step, y0: &State, y1: &State) -> Option<f64> {
    if !(y0[1] < 0.0 && y1[1] >= 0.0) {
        return None;
    }
    let (mut lo, mut hi) = (step.t0, step.t0 + step.h);
    while hi - lo > EVENT_TOL * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if step.at(mid)[1] < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    (step.at(t)[0] > 0.0).then_some(t)
}

/// Trajectory samples of one revolution from `(amplitude, 0)`.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub period: f64,
    pub samples: Vec<(f64, f64, f64)>,
    pub steps: usize,
}

pub fn integrate_orbit(sys: &PlanarSystem, amplitude: f64, tol: f64) -> Result<Orbit> {
    if amplitude <= 0.0 || !amplitude.is_finite() {
        return Err(Error::InvalidArgument(format!("amplitude must be positive, got {amplitude}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let field = numeric_field(sys)?;
    let integ = Integrator { field: &field, sign: 1.0, tol };
    let mut samples = vec![(0.0, amplitude, 0.0)];
    let (t, _, steps) =
        integ.run([amplitude, 0.0], f64::INFINITY, upward_crossing, |t, y| samples.push((t, y[0], y[1])))?;
    Ok(Orbit { period: t, samples, steps })
}

/// State after time `t` (negative for backward time) from `start`.
pub fn flow(sys: &PlanarSystem, start: (f64, f64), t: f64, tol: f64) -> Result<(f64, f64)> {
    let field = numeric_field(sys)?;
    let integ = Integrator { field: &field, sign: t.signum(), tol };
    let (_, y, _) = integ.run([start.0, start.1], t.abs(), |_, _, _| None, |_, _| {})?;
    Ok((y[0], y[1]))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodEstimate {
    pub period: f64,
    /// `|T(tol) − T(tol/10)|`.
    pub error_estimate: f64,
}

/// Period of the orbit through `(amplitude, 0)`, with an error estimate from a run at `tol/10`.
pub fn orbit_period_estimate(sys: &PlanarSystem, amplitude: f64, tol: f64) -> Result<PeriodEstimate> {
    let coarse = integrate_orbit(sys, amplitude, tol)?.period;
    let fine = integrate_orbit(sys, amplitude, tol / 10.0)?.period;
    Ok(PeriodEstimate { period: fine, error_estimate: (fine - coarse).abs() })
}

pub fn orbit_period(sys: &PlanarSystem, amplitude: f64, tol: f64) -> Result<f64> {
    Ok(orbit_period_estimate(sys, amplitude, tol)?.period)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodScan {
    pub amplitudes: Vec<f64>,
    pub periods: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub integrator_tolerance: f64,
    pub max_deviation_from_2pi: f64,
    /// Amplitudes whose orbit failed, with the reason.
    pub gaps: Vec<(f64, String)>,
}

impl PeriodScan {
    /// Tab-separated rows `amplitude period error`.
    pub fn to_table(&self) -> String {
        let mut s = String::from("amplitude\tperiod\terror_estimate\n");
        for i in 0..self.amplitudes.len() {
            s.push_str(&format!("{:.6}\t{:.15}\t{:.3e}\n", self.amplitudes[i], self.periods[i], self.error_estimates[i]));
        }
        for (a, why) in &self.gaps {
            s.push_str(&format!("{a:.6}\tNaN\t# {why}\n"));
        }
        s
    }
}

/// Amplitudes `lo, lo + step, …` up to `hi`.
pub fn amplitude_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(0.0 < lo && lo < hi && step > 0.0) {
        return Err(Error::InvalidArgument(format!("need 0 < lo < hi and step > 0, got {lo}, {hi}, {step}")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

pub fn period_scan(sys: &PlanarSystem, lo: f64, hi: f64, step: f64, tol: f64) -> Result<PeriodScan> {
    let grid = amplitude_grid(lo, hi, step)?;
    numeric_field(sys)?;
    let runs: Vec<(f64, Result<PeriodEstimate>)> =
        grid.par_iter().map(|&a| (a, orbit_period_estimate(sys, a, tol))).collect();
    let mut scan = PeriodScan {
        amplitudes: vec![],
        periods: vec![],
        error_estimates: vec![],
        integrator_tolerance: tol,
        max_deviation_from_2pi: 0.0,
        gaps: vec![],
    };
    for (a, r) in runs {
        match r {
            Ok(p) => {
                scan.amplitudes.push(a);
                scan.periods.push(p.period);
                scan.error_estimates.push(p.error_estimate);
                scan.max_deviation_from_2pi = scan.max_deviation_from_2pi.max((p.period - 2.0 * PI).abs());
            }
            Err(e) => scan.gaps.push((a, e.to_string())),
        }
    }
    Ok(scan)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Flat,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub observed: Monotonicity,
    pub expected: Monotonicity,
    pub consistent: bool,
    /// The scan cannot separate the trend from noise although `S ≠ 0`.
    pub inconclusive: bool,
    pub band: f64,
}

/// Strict trend of the periods, with ties inside `band`.
pub fn observed_trend(periods: &[f64], band: f64) -> Monotonicity {
    let diffs: Vec<f64> = periods.windows(2).map(|w| w[1] - w[0]).collect();
    let spread = periods.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - periods.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread <= band {
        Monotonicity::Flat
    } else if diffs.iter().all(|d| *d > band) {
        Monotonicity::Increasing
    } else if diffs.iter().all(|d| *d < -band) {
        Monotonicity::Decreasing
    } else {
        Monotonicity::Mixed
    }
}

/// Compares the numeric trend with the sign of the monotonicity index.
pub fn classify_monotonicity(scan: &PeriodScan, s_value: &Rat) -> Result<MonotonicityReport> {
    if scan.amplitudes.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "monotonicity needs at least 5 amplitudes, got {}",
            scan.amplitudes.len()
        )));
    }
    let noise = scan.error_estimates.iter().cloned().fold(0.0, f64::max);
    let band = (10.0 * scan.integrator_tolerance).max(noise);
    let observed = observed_trend(&scan.periods, band);
    let expected = match s_value.signum() {
        1 => Monotonicity::Increasing,
        -1 => Monotonicity::Decreasing,
        _ => Monotonicity::Flat,
    };
    let inconclusive = expected != Monotonicity::Flat && observed == Monotonicity::Flat;
    Ok(MonotonicityReport { observed, expected, consistent: observed == expected, inconclusive, band })
}

/// Evaluates an expression in `f64`; unknown names are an error.
pub fn eval_f64(e: &Expr, values: &BTreeMap<String, f64>) -> Result<f64> {
    Ok(match e {
        Expr::Num(r) => r.to_f64(),
        Expr::Var(v) => *values.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?,
        Expr::Neg(a) => -eval_f64(a, values)?,
        Expr::Add(a, b) => eval_f64(a, values)? + eval_f64(b, values)?,
        Expr::Sub(a, b) => eval_f64(a, values)? - eval_f64(b, values)?,
        Expr::Mul(a, b) => eval_f64(a, values)? * eval_f64(b, values)?,
        Expr::Div(a, b) => eval_f64(a, values)? / eval_f64(b, values)?,
        Expr::Pow(a, k) => {
            let base = eval_f64(a, values)?;
            match k.to_i64() {
                Some(i) if k.is_integer() => base.powi(i as i32),
                _ => base.powf(k.to_f64()),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Poly, VarSet};

    fn system(xdot: &str, ydot: &str) -> PlanarSystem {
        let r = VarSet::new(["x", "y"]).unwrap();
        PlanarSystem::new(Poly::parse(xdot, &r).unwrap(), Poly::parse(ydot, &r).unwrap()).unwrap()
    }

    #[test]
    fn linear_center_has_period_two_pi() {
        let sys = system("-y", "x");
        for a in [0.1, 0.5, 2.0] {
            let p = orbit_period_estimate(&sys, a, 1e-10).unwrap();
            assert!((p.period - 2.0 * PI).abs() < 1e-9, "{a}: {p:?}");
            assert!(p.error_estimate < 1e-9);
        }
        let scan = period_scan(&sys, 0.1, 1.0, 0.1, 1e-10).unwrap();
        assert_eq!(scan.amplitudes.len(), 10);
        assert!(scan.max_deviation_from_2pi < 1e-9);
        let r = classify_monotonicity(&scan, &Rat::zero()).unwrap();
        assert_eq!(r.observed, Monotonicity::Flat);
        assert!(r.consistent);
    }

    #[test]
    fn quadratic_period_increases() {
        let sys = system("-y", "x + x^2");
        let t2 = orbit_period(&sys, 0.2, 1e-10).unwrap();
        let t3 = orbit_period(&sys, 0.3, 1e-10).unwrap();
        assert!(t3 > t2);
        let scan = period_scan(&sys, 0.05, 0.4, 0.05, 1e-10).unwrap();
        let r = classify_monotonicity(&scan, &Rat::from_int(10)).unwrap();
        assert_eq!(r.observed, Monotonicity::Increasing);
        assert!(r.consistent);
        assert!(!classify_monotonicity(&scan, &Rat::from_int(-1)).unwrap().consistent);
    }

    #[test]
    fn escaping_orbits_are_reported() {
        // the saddle of x + x^2 sits at x = −1; this orbit leaves the annulus
        let sys = system("-y", "x + x^2");
        assert!(matches!(integrate_orbit(&sys, 1.5, 1e-8), Err(Error::OrbitNotClosed(_))));
        let scan = period_scan(&sys, 0.5, 1.5, 0.5, 1e-8).unwrap();
        assert_eq!(scan.amplitudes.len(), 1);
        assert_eq!(scan.gaps.len(), 2);
    }

    #[test]
    fn energy_and_time_reversal() {
        let sys = system("-y", "x*(1 + y)^3");
        let h = Expr::parse("x^2 + y^2/(1 + y)^2").unwrap();
        let tol = 1e-10;
        let orbit = integrate_orbit(&sys, 0.3, tol).unwrap();
        let at = |x: f64, y: f64| {
            let v: BTreeMap<String, f64> = [("x".to_string(), x), ("y".to_string(), y)].into();
            eval_f64(&h, &v).unwrap()
        };
        let h0 = at(0.3, 0.0);
        for &(_, x, y) in &orbit.samples {
            assert!((at(x, y) - h0).abs() <= 100.0 * tol);
        }
        let (x, y) = flow(&sys, (0.3, 0.0), 1.3, tol).unwrap();
        let (xb, yb) = flow(&sys, (x, y), -1.3, tol).unwrap();
        assert!((xb - 0.3).abs() < 10.0 * tol && yb.abs() < 10.0 * tol);
    }

    #[test]
    fn catalog_isochrones_and_abel_trend() {
        use crate::systems::lookup;
        let one = |id: &str, p: &str| {
            let sys = lookup(id).unwrap().system.planar().unwrap();
            sys.specialize(&[(p.to_string(), Rat::one())].into()).unwrap()
        };
        for sys in [one("deg4.family1.case1", "a40"), one("deg5.case2", "a")] {
            let scan = period_scan(&sys, 0.05, 0.4, 0.05, DEFAULT_TOL).unwrap();
            assert!(scan.gaps.is_empty());
            assert!(scan.max_deviation_from_2pi < 1e-6, "{scan:?}");
        }
        let a2 = lookup("abel.a2").unwrap().system.planar().unwrap();
        let scan = period_scan(&a2, 0.05, 0.4, 0.05, DEFAULT_TOL).unwrap();
        let r = classify_monotonicity(&scan, &Rat::from_int(-3)).unwrap();
        assert_eq!(r.observed, Monotonicity::Decreasing);
    }

    #[test]
    fn trends() {
        assert_eq!(observed_trend(&[1.0, 1.0 + 1e-12, 1.0], 1e-9), Monotonicity::Flat);
        assert_eq!(observed_trend(&[1.0, 2.0, 3.0], 1e-9), Monotonicity::Increasing);
        assert_eq!(observed_trend(&[3.0, 2.0, 1.0], 1e-9), Monotonicity::Decreasing);
        assert_eq!(observed_trend(&[1.0, 2.0, 1.5], 1e-9), Monotonicity::Mixed);
        let short = PeriodScan {
            amplitudes: vec![0.1; 3],
            periods: vec![1.0; 3],
            error_estimates: vec![0.0; 3],
            integrator_tolerance: 1e-10,
            max_deviation_from_2pi: 0.0,
            gaps: vec![],
        };
        assert!(classify_monotonicity(&short, &Rat::zero()).is_err());
    }
}
