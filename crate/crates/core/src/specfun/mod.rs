//! Real-argument special functions needed for the parabolic cylinder
//! solutions: gamma and its reciprocal, Kummer's confluent hypergeometric
//! function, physicists' Hermite polynomials and `D_nu(z)`.
//!
//! Everything here is a pure function of its arguments.

mod dd;
mod gamma;
mod hermite;
mod kummer;
mod pcf;

pub use gamma::{gamma, ln_gamma, rgamma, GAMMA_MAX_ARG};
pub use hermite::{hermite, MAX_HERMITE_DEGREE};
pub use kummer::{kummer_m, KUMMER_MAX_TERMS, KUMMER_MAX_Z};
pub use pcf::{pcf_d, pcf_d_prime, PcfOrder, PCF_MAX_ABS_Z, PCF_MAX_ORDER, PCF_MIN_ORDER};

/// How a value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalPath {
    /// Convergent power series.
    Series,
    /// Large-argument asymptotic expansion.
    Asymptotic,
    /// RK4 integration of the defining differential equation.
    OdeFallback,
}

impl EvalPath {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalPath::Series => "series",
            EvalPath::Asymptotic => "asymptotic",
            EvalPath::OdeFallback => "ode-fallback",
        }
    }
}

/// A value together with the absolute error bound claimed by the path that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub value: f64,
    pub est_abs_error: f64,
    pub path: EvalPath,
}

impl EvalReport {
    /// `est_abs_error / |value|`, infinite when the value is zero.
    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            if self.est_abs_error == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.est_abs_error / self.value.abs()
        }
    }
}
