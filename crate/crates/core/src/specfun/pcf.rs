//! Parabolic cylinder function `D_nu(z)` of real order and argument.
//!
//! `D_nu` is the solution of Weber's equation
//! `y'' - (z^2/4 - nu - 1/2) y = 0` that decays as `z -> +inf`. Three
//! evaluation paths are combined:
//!
//! * series: the even/odd Kummer decomposition around `z = 0`, with reciprocal
//!   gamma factors so integer orders are smooth;
//! * asymptotic: `z^nu e^{-z^2/4} sum_k (-1)^k (-nu)_{2k} / (k! (2z^2)^k)` for
//!   large positive `z`, truncated at its smallest term;
//! * ode-fallback: RK4 on Weber's equation. For `z < 0`, and for `z > 0`
//!   inside the turning point, the fundamental system is integrated outward
//!   from the closed-form data at `z = 0`. Beyond the turning point the
//!   recessive solution is integrated inward from a point where the
//!   asymptotic expansion is exact to rounding, first as a Riccati equation
//!   for `y'/y` (stable inward) and then linearly through the oscillatory
//!   region. Both run at two step sizes and the difference gives the error
//!   estimate.
//!
//! A series value within the accuracy target is used as is; otherwise the
//! path with the smallest claimed error wins.

use core::f64::consts::SQRT_2;

use super::dd::Dd;
use super::kummer::kummer_series;
use super::{rgamma, EvalPath, EvalReport};
use crate::{Error, Result};

pub const PCF_MIN_ORDER: f64 = -1.0;
pub const PCF_MAX_ORDER: f64 = 200.0;
pub const PCF_MAX_ABS_Z: f64 = 40.0;

/// Series is tried while `z^2/2` stays below this.
const SERIES_MAX_HALF_SQUARE: f64 = 60.0;
/// A series result this accurate is returned without trying other paths.
/// Preferring it over a marginally better asymptotic or ODE value keeps
/// `D_nu` smooth in `z` through the moderate-argument region: the series
/// is noise-free there, while the other paths switch truncation order or
/// step pattern with `z`.
const SERIES_ACCEPT: f64 = 1e-10;
/// Above this relative error the ODE fallback is run.
const FALLBACK_THRESHOLD: f64 = 1e-11;
/// Required accuracy of the asymptotic expansion at the ODE starting point.
const START_ACCURACY: f64 = 1e-15;
const MAX_ASYMPTOTIC_TERMS: usize = 400;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Order `nu` of a parabolic cylinder function, restricted to the supported
/// range `[-1, 200]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PcfOrder(f64);

impl PcfOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && (PCF_MIN_ORDER..=PCF_MAX_ORDER).contains(&nu) {
            Ok(PcfOrder(nu))
        } else {
            Err(Error::Domain { what: "parabolic cylinder order", value: nu })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// The order `nu + 1`, if still supported.
    pub fn succ(self) -> Result<Self> {
        PcfOrder::new(self.0 + 1.0)
    }
}

impl TryFrom<f64> for PcfOrder {
    type Error = Error;

    fn try_from(nu: f64) -> Result<Self> {
        PcfOrder::new(nu)
    }
}

fn check_argument(z: f64) -> Result<()> {
    if z.is_finite() && z.abs() <= PCF_MAX_ABS_Z {
        Ok(())
    } else {
        Err(Error::Domain { what: "parabolic cylinder argument", value: z })
    }
}

/// `D_nu(z)`, recessive as `z -> +inf`.
pub fn pcf_d(nu: PcfOrder, z: f64) -> Result<EvalReport> {
    check_argument(z)?;
    let nu = nu.get();
    let mut best: Option<EvalReport> = None;

    if z * z * 0.5 <= SERIES_MAX_HALF_SQUARE {
        match series(nu, z) {
            Ok(r) if r.relative_error() <= SERIES_ACCEPT => return Ok(r),
            Ok(r) => best = Some(r),
            Err(Error::Overflow { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    if z > 0.0 {
        if let Some(asym) = Asymptotic::at(nu, z) {
            if let Some(r) = asym.report() {
                best = Some(pick(best, r));
            }
        }
    }

    if let Some(r) = best {
        if r.relative_error() <= FALLBACK_THRESHOLD {
            return Ok(r);
        }
    }

    // inside the turning point the solution oscillates and the short
    // integration from the origin is accurate; beyond it only the inward
    // integration of the recessive solution is stable
    let oscillatory = 0.25 * z * z < nu + 0.5;
    let mut failure = None;
    if z <= 0.0 || oscillatory {
        match ode_outward(nu, z) {
            Ok(r) => best = Some(pick(best, r)),
            Err(e) => failure = Some(e),
        }
    }
    if z > 0.0 && (!oscillatory || failure.is_some()) {
        match ode_inward(nu, z) {
            Ok(r) => best = Some(pick(best, r)),
            Err(e) => failure = Some(e),
        }
    }
    match (best, failure) {
        (Some(r), _) => Ok(r),
        (None, Some(e)) => Err(e),
        (None, None) => Err(Error::NonConvergence { what: "parabolic cylinder function", iterations: 0 }),
    }
}

/// `D'_nu(z) = (z/2) D_nu(z) - D_{nu+1}(z)`.
///
/// Needs `nu + 1` in the supported range as well. The error bound is the sum
/// of the two contributing bounds.
pub fn pcf_d_prime(nu: PcfOrder, z: f64) -> Result<EvalReport> {
    let here = pcf_d(nu, z)?;
    let up = pcf_d(nu.succ()?, z)?;
    let value = 0.5 * z * here.value - up.value;
    let est_abs_error = 0.5 * z.abs() * here.est_abs_error + up.est_abs_error + f64::EPSILON * value.abs();
    Ok(EvalReport { value, est_abs_error, path: worse_path(here.path, up.path) })
}

fn worse_path(a: EvalPath, b: EvalPath) -> EvalPath {
    let rank = |p: EvalPath| match p {
        EvalPath::Series => 0,
        EvalPath::Asymptotic => 1,
        EvalPath::OdeFallback => 2,
    };
    if rank(a) >= rank(b) {
        a
    } else {
        b
    }
}

fn pick(current: Option<EvalReport>, candidate: EvalReport) -> EvalReport {
    match current {
        Some(c) if c.est_abs_error <= candidate.est_abs_error => c,
        _ => candidate,
    }
}

/// Closed forms at the origin: `(D_nu(0), D'_nu(0))`.
pub(crate) fn origin_data(nu: f64) -> (f64, f64) {
    let scale = libm::exp2(0.5 * nu) * SQRT_PI;
    (scale * rgamma(0.5 * (1.0 - nu)), -scale * SQRT_2 * rgamma(-0.5 * nu))
}

fn series(nu: f64, z: f64) -> Result<EvalReport> {
    // z^2/2 is formed exactly and the two halves are combined in
    // double-double, so the result is smooth in z even where they cancel
    let x = Dd::product(z, z).scale(0.5);
    let even = kummer_series(-0.5 * nu, 0.5, x)?;
    let odd = kummer_series(0.5 * (1.0 - nu), 1.5, x)?;
    let a = rgamma(0.5 * (1.0 - nu));
    let c = SQRT_2 * rgamma(-0.5 * nu);
    let b = c * z;
    let pref = libm::exp2(0.5 * nu) * SQRT_PI * libm::exp(-0.25 * z * z);
    let combined = even.sum.scale(a) - odd.sum.scale(z).scale(c);
    let value = pref * combined.value();
    let magnitude = pref * (a.abs() * even.magnitude + b.abs() * odd.magnitude);
    if !value.is_finite() || !magnitude.is_finite() {
        return Err(Error::Overflow { what: "parabolic cylinder series" });
    }
    let est_abs_error = pref * (a.abs() * even.est_abs_error + b.abs() * odd.est_abs_error)
        + 4.0 * f64::EPSILON * magnitude
        + 4.0 * f64::EPSILON * value.abs();
    Ok(EvalReport { value, est_abs_error, path: EvalPath::Series })
}

/// Truncated asymptotic expansion for `z > 0`, kept in log form so it can be
/// used as an ODE starting point far beyond the representable range.
struct Asymptotic {
    /// `nu ln z - z^2/4`
    log_scale: f64,
    sum: f64,
    /// relative error of `sum`
    rel_error: f64,
    /// `y'/y`
    log_derivative: f64,
    /// `1 + |nu ln z| + z^2/4`, the scale of the rounding in `log_scale`
    log_terms: f64,
}

impl Asymptotic {
    fn at(nu: f64, z: f64) -> Option<Asymptotic> {
        if z <= 0.0 {
            return None;
        }
        let inv = 1.0 / (2.0 * z * z);
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let mut deriv = 0.0f64;
        let mut magnitude = 1.0f64;
        let mut decreasing = false;
        let mut omitted = 0.0f64;
        for k in 0..MAX_ASYMPTOTIC_TERMS {
            let kf = k as f64;
            let next = -term * (nu - 2.0 * kf) * (nu - 2.0 * kf - 1.0) * inv / (kf + 1.0);
            if next == 0.0 {
                omitted = 0.0;
                break;
            }
            if next.abs() < term.abs() {
                decreasing = true;
            } else if decreasing {
                omitted = next.abs();
                break;
            }
            term = next;
            sum += term;
            deriv -= 2.0 * (kf + 1.0) * term / z;
            magnitude += term.abs();
            omitted = term.abs();
            if term.abs() <= 1e-3 * f64::EPSILON * sum.abs() {
                omitted = 0.0;
                break;
            }
        }
        if sum == 0.0 || !sum.is_finite() {
            return None;
        }
        let rel_error = (omitted + 2.0 * f64::EPSILON * magnitude) / sum.abs();
        Some(Asymptotic {
            log_scale: nu * libm::log(z) - 0.25 * z * z,
            sum,
            rel_error,
            log_derivative: nu / z - 0.5 * z + deriv / sum,
            log_terms: 1.0 + (nu * libm::log(z)).abs() + 0.25 * z * z,
        })
    }

    fn report(&self) -> Option<EvalReport> {
        let value = libm::exp(self.log_scale) * self.sum;
        if !value.is_finite() {
            return None;
        }
        // exp of a large argument carries its own rounding
        let est_abs_error = value.abs() * (self.rel_error + 2.0 * f64::EPSILON * self.log_terms);
        Some(EvalReport { value, est_abs_error, path: EvalPath::Asymptotic })
    }
}

/// One classical RK4 step, returned as the increment.
fn rk4_increment<F: Fn(f64, [f64; 2]) -> [f64; 2]>(f: &F, t: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
    let k3 = f(t + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
    let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
    [h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]), h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])]
}

fn rk4<F: Fn(f64, [f64; 2]) -> [f64; 2]>(f: &F, t: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let d = rk4_increment(f, t, y, h);
    [y[0] + d[0], y[1] + d[1]]
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn weber_q(nu: f64, t: f64) -> f64 {
    0.25 * t * t - nu - 0.5
}

/// Integrates from `start` to `end` in steps no longer than `step_at(t)`,
/// landing exactly on `end`.
fn march<S, F>(start: f64, end: f64, mut state: S, step_at: impl Fn(f64) -> f64, mut advance: F) -> S
where
    F: FnMut(f64, S, f64) -> S,
{
    let dir = if end >= start { 1.0 } else { -1.0 };
    // the abscissa is itself a long running sum; drift in it shows up as
    // phase error in the oscillatory region
    let mut t = CompensatedSum { sum: start, carry: 0.0 };
    loop {
        let now = t.value();
        if (end - now) * dir <= 0.0 {
            break;
        }
        let remaining = (end - now).abs();
        let mut h = step_at(now).min(remaining);
        // avoid a sliver of a final step
        if remaining - h < 0.25 * h {
            h = remaining;
        }
        state = advance(now, state, dir * h);
        if remaining == h {
            break;
        }
        t.add(dir * h);
    }
    state
}

/// Recessive solution at `z > 0`, one pass at step scale `scale`.
/// Returns `(log|y|, sign)`.
fn inward_pass(nu: f64, z: f64, start: f64, start_asym: &Asymptotic, scale: f64) -> (f64, f64) {
    // Riccati region: q comfortably positive
    let switch = if nu + 1.5 > 0.0 { 2.0 * libm::sqrt(nu + 1.5) } else { 0.0 };
    let riccati_end = z.max(switch);
    // state is (w, unused); ln|y| is accumulated separately with compensation
    // because it sums tens of thousands of increments
    let riccati = |t: f64, s: [f64; 2]| [weber_q(nu, t) - s[0] * s[0], s[0]];
    let mut log_gain = CompensatedSum::default();
    let [w, _] = march(
        start,
        riccati_end,
        [start_asym.log_derivative, 0.0],
        |t| scale * (0.01f64).min(0.03 / libm::sqrt(weber_q(nu, t).max(1.0))),
        |t, s, h| {
            let d = rk4_increment(&riccati, t, s, h);
            log_gain.add(d[1]);
            [s[0] + d[0], 0.0]
        },
    );
    let mut log_mag = start_asym.log_scale + libm::log(start_asym.sum.abs()) + log_gain.value();
    let sign = start_asym.sum.signum();
    if riccati_end <= z {
        return (log_mag, sign);
    }
    // linear region, renormalised as it goes
    let linear = |t: f64, s: [f64; 2]| [s[1], weber_q(nu, t) * s[0]];
    let qmax = (nu + 0.5).abs() + 1.0;
    let h = scale * (0.0015f64).min(0.003 / libm::sqrt(qmax));
    let [y, _] = march(
        riccati_end,
        z,
        [1.0, w],
        |_| h,
        |t, s, h| {
            let next = rk4(&linear, t, s, h);
            let m = next[0].abs().max(next[1].abs());
            if m > 1e100 {
                log_mag += libm::log(m);
                [next[0] / m, next[1] / m]
            } else {
                next
            }
        },
    );
    log_mag += libm::log(y.abs());
    (log_mag, sign * y.signum())
}

fn ode_inward(nu: f64, z: f64) -> Result<EvalReport> {
    let mut start = z.max(1.0);
    let asym = loop {
        match Asymptotic::at(nu, start) {
            Some(a) if a.rel_error <= START_ACCURACY => break a,
            _ => {}
        }
        start = start * 1.15 + 0.5;
        if start > 5_000.0 {
            return Err(Error::NonConvergence { what: "asymptotic starting point", iterations: 0 });
        }
    };
    let (log_coarse, sign_coarse) = inward_pass(nu, z, start, &asym, 1.0);
    let (log_fine, sign_fine) = inward_pass(nu, z, start, &asym, 0.5);
    let coarse = sign_coarse * libm::exp(log_coarse);
    let fine = sign_fine * libm::exp(log_fine);
    if !fine.is_finite() {
        return Err(Error::Overflow { what: "parabolic cylinder function" });
    }
    let diff = fine - coarse;
    let value = fine + diff / 15.0;
    let est_abs_error = 2.0 * diff.abs() / 15.0 + 8.0 * f64::EPSILON * value.abs() * asym.log_terms;
    Ok(EvalReport { value, est_abs_error, path: EvalPath::OdeFallback })
}

/// Integrates the even and odd fundamental solutions from the origin to
/// `z` at step scale `scale`. Returns `(y_even, y_odd)` at `z`.
fn outward_pass(nu: f64, z: f64, scale: f64) -> [f64; 2] {
    let linear = |t: f64, s: [f64; 2]| [s[1], weber_q(nu, t) * s[0]];
    let qmax = (nu + 0.5).abs().max(0.25 * z * z) + 1.0;
    let h = scale * (0.0015f64).min(0.003 / libm::sqrt(qmax));
    let even = march(0.0, z, [1.0, 0.0], |_| h, |t, s, h| rk4(&linear, t, s, h));
    let odd = march(0.0, z, [0.0, 1.0], |_| h, |t, s, h| rk4(&linear, t, s, h));
    [even[0], odd[0]]
}

fn ode_outward(nu: f64, z: f64) -> Result<EvalReport> {
    let (d0, dp0) = origin_data(nu);
    let coarse = outward_pass(nu, z, 1.0);
    let fine = outward_pass(nu, z, 0.5);
    let v_coarse = d0 * coarse[0] + dp0 * coarse[1];
    let v_fine = d0 * fine[0] + dp0 * fine[1];
    if !v_fine.is_finite() {
        return Err(Error::Overflow { what: "parabolic cylinder function" });
    }
    let diff = v_fine - v_coarse;
    let value = v_fine + diff / 15.0;
    // rounding in the origin data is amplified by the growing fundamental
    // solutions, which matters when the result is itself recessive
    let amplified = 8.0 * f64::EPSILON * (d0.abs() * fine[0].abs() + dp0.abs() * fine[1].abs());
    let est_abs_error = 2.0 * diff.abs() / 15.0 + amplified;
    Ok(EvalReport { value, est_abs_error, path: EvalPath::OdeFallback })
}
