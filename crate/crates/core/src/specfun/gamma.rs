use core::f64::consts::PI;

use crate::{Error, Result};

/// Largest argument for which `Γ(x)` is finite in `f64`.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// `sin(πx)` with exact argument reduction, so integers give exact zeros.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * libm::round(x * 0.5);
    let folded = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    libm::sin(PI * folded)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == libm::floor(x)
}

/// The gamma function for real arguments.
///
/// Uses the reflection formula below 1/2. Errors at the poles and when the
/// result would overflow.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain { what: "gamma argument", value: x });
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { x });
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow { what: "gamma" });
    }
    if x >= 0.5 {
        return Ok(libm::tgamma(x));
    }
    // Γ(x) = π / (sin(πx) Γ(1 - x))
    let s = sin_pi(x);
    let reflected = 1.0 - x;
    if reflected > GAMMA_MAX_ARG {
        let log_mag = libm::log(PI / s.abs()) - ln_gamma(reflected);
        return Ok(libm::copysign(libm::exp(log_mag), s));
    }
    Ok(PI / (s * libm::tgamma(reflected)))
}

/// `1/Γ(x)`, an entire function: exactly zero at `0, -1, -2, ...`.
///
/// Very negative arguments can overflow to infinity.
pub fn rgamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x >= 0.5 {
        if x > GAMMA_MAX_ARG {
            return libm::exp(-ln_gamma(x));
        }
        return 1.0 / libm::tgamma(x);
    }
    let s = sin_pi(x);
    let reflected = 1.0 - x;
    if reflected > GAMMA_MAX_ARG {
        return s * libm::exp(ln_gamma(reflected)) / PI;
    }
    s * libm::tgamma(reflected) / PI
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    libm::lgamma(x)
}
