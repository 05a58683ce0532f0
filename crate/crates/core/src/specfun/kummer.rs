use super::dd::Dd;
use super::{EvalPath, EvalReport};
use crate::{Error, Result};

/// Largest `|z|` accepted by [`kummer_m`].
pub const KUMMER_MAX_Z: f64 = 400.0;
/// Term budget of the power series.
pub const KUMMER_MAX_TERMS: usize = 10_000;

/// Raw output of the series: the sum, the sum of term magnitudes and the
/// claimed absolute error.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KummerSum {
    pub sum: Dd,
    pub magnitude: f64,
    pub est_abs_error: f64,
}

/// Sums the series at a double-double argument. The running term and sum
/// are kept in double-double so the result has no rounding noise as a
/// function of `x`; what remains is the rounding of the coefficient ratios,
/// which is fixed for given `a, b` and so varies smoothly with `x`.
pub(crate) fn kummer_series(a: f64, b: f64, x: Dd) -> Result<KummerSum> {
    let z = x.value();
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut magnitude = 1.0f64;
    // rounding of a coefficient built from k ratios grows like sqrt(k) ulp
    let mut weighted = 1.0f64;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let coeff = (a + kf) / ((b + kf) * (kf + 1.0));
        if coeff == 0.0 || z == 0.0 {
            // terminating polynomial, or z = 0
            break;
        }
        term = (term * x).scale(coeff);
        k += 1;
        if !term.hi.is_finite() {
            return Err(Error::Overflow { what: "Kummer series term" });
        }
        sum = sum + term;
        let t = term.hi.abs();
        magnitude += t;
        weighted += t * libm::sqrt(k as f64 + 1.0);
        // once the ratio is below 1/2 and stays decreasing, the tail is
        // bounded by the current term
        let next = ((a + kf + 1.0) * z / ((b + kf + 1.0) * (kf + 2.0))).abs();
        if next < 0.5 && kf + 1.0 > (a.abs() + b.abs()) && t <= f64::EPSILON * 1e-2 * sum.hi.abs() {
            break;
        }
        if k >= KUMMER_MAX_TERMS {
            return Err(Error::NonConvergence { what: "Kummer series", iterations: k });
        }
    }
    if !sum.hi.is_finite() || !magnitude.is_finite() {
        return Err(Error::Overflow { what: "Kummer series" });
    }
    let est_abs_error = 4.0 * f64::EPSILON * weighted + f64::EPSILON * sum.hi.abs();
    Ok(KummerSum { sum, magnitude, est_abs_error })
}

/// Kummer's confluent hypergeometric function `M(a, b, z) = 1F1(a; b; z)`.
///
/// Summed directly as a power series. The reported error grows with the
/// magnitude of the terms, so cancellation (large negative `z`, or
/// alternating terms from negative `a`) shows up there.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<EvalReport> {
    if !a.is_finite() {
        return Err(Error::Domain { what: "Kummer parameter a", value: a });
    }
    if !b.is_finite() || (b <= 0.0 && b == libm::floor(b)) {
        return Err(Error::Domain { what: "Kummer parameter b", value: b });
    }
    if !z.is_finite() || z.abs() > KUMMER_MAX_Z {
        return Err(Error::Domain { what: "Kummer argument z", value: z });
    }
    let s = kummer_series(a, b, Dd::from_f64(z))?;
    Ok(EvalReport { value: s.sum.value(), est_abs_error: s.est_abs_error, path: EvalPath::Series })
}
