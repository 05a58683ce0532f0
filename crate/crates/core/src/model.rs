//! The physical model: a Dirac particle of mass `m` in the Lorentz-scalar
//! potential `g|x|`, in natural units.
//!
//! The bispinor `(psi1, psi2)` obeys
//!
//! ```text
//! psi1' = E psi2 - (m + g|x|) psi1
//! psi2' = (m + g|x|) psi2 - E psi1
//! ```
//!
//! With `eta = sqrt2 (alpha + sqrt g x)` on the right and
//! `eta' = sqrt2 (alpha - sqrt g x)` on the left, where `alpha = m / sqrt g`,
//! the decaying solutions are
//!
//! ```text
//! x >= 0:  (C  D_{nu+1}(eta),  D  D_nu(eta))
//! x <  0:  (C' D_nu(eta'),     D' D_{nu+1}(eta'))
//! ```
//!
//! with `E^2 = 2g (nu + 1)` and `D/C = C'/D' = E / sqrt(2g)`.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::quad;
use crate::quantize::{QuantizationRoot, SignBranch};
use crate::specfun::{pcf_d, PcfOrder, PCF_MAX_ABS_Z};
use crate::{Error, Result};

/// Integrand at the domain edge, relative to its peak, above which the
/// normalization refuses to proceed.
pub const TAIL_RATIO: f64 = 1e-12;
/// Target relative accuracy of the normalization integral.
const NORM_TOL: f64 = 1e-12;
/// Points used to locate the peak of the density.
const PEAK_SAMPLES: usize = 4001;
const QUAD_PANELS: usize = 64;

/// Mass `m >= 0` and coupling `g > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    m: f64,
    g: f64,
}

impl PotentialParams {
    pub fn new(m: f64, g: f64) -> Result<Self> {
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::Domain { what: "mass m", value: m });
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::Domain { what: "coupling g", value: g });
        }
        Ok(PotentialParams { m, g })
    }

    /// Parameters with `m = alpha sqrt g`.
    pub fn from_alpha(alpha: f64, g: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::Domain { what: "alpha", value: alpha });
        }
        PotentialParams::new(alpha * libm::sqrt(g), g)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// `m / sqrt g`, the only combination the orders depend on.
    pub fn alpha(&self) -> f64 {
        self.m / libm::sqrt(self.g)
    }

    /// `m + g|x|`.
    pub fn scalar_at(&self, x: f64) -> f64 {
        self.m + potential_at(self, x)
    }
}

/// `g|x|`.
pub fn potential_at(params: &PotentialParams, x: f64) -> f64 {
    params.g * x.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `x >= 0`
    Right,
    /// `x < 0`
    Left,
}

/// `xi = sqrt g (m/g ± x)` and `eta = sqrt2 xi`, with `+` on the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coordinates {
    pub xi: f64,
    pub eta: f64,
    pub side: Side,
}

pub fn coordinates(params: &PotentialParams, x: f64) -> Coordinates {
    let sg = libm::sqrt(params.g);
    let alpha = params.m / sg;
    let (xi, side) = if x >= 0.0 { (alpha + sg * x, Side::Right) } else { (alpha - sg * x, Side::Left) };
    Coordinates { xi, eta: SQRT_2 * xi, side }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergySign {
    Positive,
    Negative,
}

impl EnergySign {
    pub fn sign(self) -> f64 {
        match self {
            EnergySign::Positive => 1.0,
            EnergySign::Negative => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EnergySign::Positive => "positive",
            EnergySign::Negative => "negative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub nu: f64,
    /// The matching branch, when the level came from a quantization root.
    pub branch: Option<SignBranch>,
    pub energy: f64,
    pub energy_sign: EnergySign,
}

impl EnergyLevel {
    pub fn from_root(params: &PotentialParams, root: &QuantizationRoot, sign: EnergySign) -> Result<Self> {
        Ok(EnergyLevel { branch: Some(root.branch), ..energy_from_nu(params, root.nu, sign)? })
    }
}

/// `E = ± sqrt(2g (nu + 1))`.
pub fn energy_from_nu(params: &PotentialParams, nu: f64, sign: EnergySign) -> Result<EnergyLevel> {
    if !(nu.is_finite() && nu >= -1.0) {
        return Err(Error::Domain { what: "order nu (needs nu >= -1)", value: nu });
    }
    let energy = sign.sign() * libm::sqrt(2.0 * params.g * (nu + 1.0));
    Ok(EnergyLevel { nu, branch: None, energy, energy_sign: sign })
}

/// `sqrt(2 (n + 1) g)`, the positive energy of an integer-order level.
pub fn energy_integer_case(g: f64, n: u32) -> f64 {
    libm::sqrt(2.0 * (n as f64 + 1.0) * g)
}

/// `C, D` on the right and `C', D'` on the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionCoefficients {
    pub c_plus: f64,
    pub d_plus: f64,
    pub c_minus: f64,
    pub d_minus: f64,
}

impl WavefunctionCoefficients {
    pub fn scaled(&self, s: f64) -> Self {
        WavefunctionCoefficients {
            c_plus: s * self.c_plus,
            d_plus: s * self.d_plus,
            c_minus: s * self.c_minus,
            d_minus: s * self.d_minus,
        }
    }

    /// Largest relative difference between corresponding coefficients.
    pub fn max_relative_difference(&self, other: &Self) -> f64 {
        let pairs = [
            (self.c_plus, other.c_plus),
            (self.d_plus, other.d_plus),
            (self.c_minus, other.c_minus),
            (self.d_minus, other.d_minus),
        ];
        pairs.iter().map(|&(a, b)| if a == b { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) }).fold(0.0, f64::max)
    }
}

fn order(nu: f64) -> Result<PcfOrder> {
    PcfOrder::new(nu)
}

/// Fixes `C = c_scale` and `D = C E / sqrt(2g)`, then `C'` and `D'` from
/// continuity of each component at `x = 0`. At a root of the matching
/// condition the left pair then satisfies `C'/D' = E / sqrt(2g)` as well.
pub fn assemble_coefficients(
    params: &PotentialParams,
    root: &QuantizationRoot,
    energy_sign: EnergySign,
    c_scale: f64,
) -> Result<WavefunctionCoefficients> {
    if !(c_scale.is_finite() && c_scale != 0.0) {
        return Err(Error::Domain { what: "coefficient scale", value: c_scale });
    }
    let level = energy_from_nu(params, root.nu, energy_sign)?;
    let nu = order(root.nu)?;
    let z = SQRT_2 * params.alpha();
    let d0 = pcf_d(nu, z)?.value;
    let d1 = pcf_d(nu.succ()?, z)?.value;
    // both vanishing together is impossible (their Wronskian-type
    // combination is nonzero), and one alone is not a root
    if d0 == 0.0 || d1 == 0.0 {
        return Err(Error::Degenerate { nu: root.nu });
    }
    let c_plus = c_scale;
    let d_plus = c_plus * level.energy / libm::sqrt(2.0 * params.g);
    Ok(WavefunctionCoefficients { c_plus, d_plus, c_minus: c_plus * d1 / d0, d_minus: d_plus * d0 / d1 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BispinorSample {
    pub x: f64,
    pub psi1: f64,
    pub psi2: f64,
}

/// Largest `|x|` at which the wavefunction can be sampled.
pub fn max_sample_extent(params: &PotentialParams) -> f64 {
    (PCF_MAX_ABS_Z / SQRT_2 - params.alpha()) / libm::sqrt(params.g)
}

/// The bispinor at `x`; `x = 0` uses the right-hand formula.
pub fn wavefunction_at(
    params: &PotentialParams,
    coeffs: &WavefunctionCoefficients,
    nu: f64,
    x: f64,
) -> Result<BispinorSample> {
    if !x.is_finite() {
        return Err(Error::Domain { what: "position x", value: x });
    }
    let at = coordinates(params, x);
    let here = order(nu)?;
    let low = pcf_d(here, at.eta)?.value;
    let high = pcf_d(here.succ()?, at.eta)?.value;
    let (psi1, psi2) = match at.side {
        Side::Right => (coeffs.c_plus * high, coeffs.d_plus * low),
        Side::Left => (coeffs.c_minus * low, coeffs.d_minus * high),
    };
    Ok(BispinorSample { x, psi1, psi2 })
}

/// The bispinor at each grid point, in grid order.
pub fn sample_wavefunction(
    params: &PotentialParams,
    coeffs: &WavefunctionCoefficients,
    nu: f64,
    grid: &[f64],
) -> Result<Vec<BispinorSample>> {
    grid.iter().map(|&x| wavefunction_at(params, coeffs, nu, x)).collect()
}

/// `(psi1, psi2)` at `x = 0` from the left-hand formulas, for comparison
/// with the right-hand value used at the origin.
pub fn left_limit_at_origin(
    params: &PotentialParams,
    coeffs: &WavefunctionCoefficients,
    nu: f64,
) -> Result<(f64, f64)> {
    let z = SQRT_2 * params.alpha();
    let here = order(nu)?;
    let low = pcf_d(here, z)?.value;
    let high = pcf_d(here.succ()?, z)?.value;
    Ok((coeffs.c_minus * low, coeffs.d_minus * high))
}

/// Domain halfwidth that leaves the density negligible at the edges: the
/// classical turning point plus a margin of 8 in `sqrt g x`, clamped to the
/// sampling range.
pub fn default_halfwidth(params: &PotentialParams, nu: f64) -> f64 {
    let reach = (libm::sqrt(2.0 * (nu + 1.0).max(0.0)) + 8.0) / libm::sqrt(params.g);
    reach.min(max_sample_extent(params))
}

/// Result of [`normalize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalized {
    pub coeffs: WavefunctionCoefficients,
    /// `∫ (psi1^2 + psi2^2) dx` before rescaling.
    pub norm_before: f64,
    /// Estimated relative error of that integral.
    pub norm_error: f64,
}

fn density(params: &PotentialParams, coeffs: &WavefunctionCoefficients, nu: f64, x: f64) -> Result<f64> {
    let s = wavefunction_at(params, coeffs, nu, x)?;
    Ok(s.psi1 * s.psi1 + s.psi2 * s.psi2)
}

/// Rescales all four coefficients by one factor so that the density
/// integrates to one over `[-halfwidth, halfwidth]`, with the overall sign
/// fixed by `C > 0`.
pub fn normalize(
    params: &PotentialParams,
    coeffs: &WavefunctionCoefficients,
    nu: f64,
    halfwidth: f64,
) -> Result<Normalized> {
    if !(halfwidth.is_finite() && halfwidth > 0.0) {
        return Err(Error::Domain { what: "domain halfwidth", value: halfwidth });
    }
    let rho = |x: f64| density(params, coeffs, nu, x);
    let mut peak = 0.0f64;
    let mut rough = 0.0f64;
    let dx = 2.0 * halfwidth / (PEAK_SAMPLES - 1) as f64;
    for i in 0..PEAK_SAMPLES {
        let v = rho(-halfwidth + i as f64 * dx)?;
        peak = peak.max(v);
        rough += v * dx;
    }
    if peak == 0.0 {
        return Err(Error::Degenerate { nu });
    }
    let edge = rho(-halfwidth)?.max(rho(halfwidth)?);
    if edge > TAIL_RATIO * peak {
        return Err(Error::Tail { halfwidth, ratio: edge / peak });
    }
    let tol = NORM_TOL * rough;
    let left = quad::integrate(rho, -halfwidth, 0.0, 0.5 * tol, QUAD_PANELS)?;
    let right = quad::integrate(rho, 0.0, halfwidth, 0.5 * tol, QUAD_PANELS)?;
    let norm = left.value + right.value;
    let norm_error = (left.est_error + right.est_error) / norm;
    let mut s = 1.0 / libm::sqrt(norm);
    if coeffs.c_plus < 0.0 {
        s = -s;
    }
    Ok(Normalized { coeffs: coeffs.scaled(s), norm_before: norm, norm_error })
}

/// Residuals of the two first-order equations at `x != 0`, with `psi'`
/// from a five-point stencil of step `1e-4 / sqrt g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracResidual {
    /// `psi1' + (m + g|x|) psi1 - E psi2`
    pub r1: f64,
    /// `-psi2' + (m + g|x|) psi2 - E psi1`
    pub r2: f64,
    /// Size of the largest term in either equation.
    pub scale: f64,
}

pub fn dirac_residual(
    params: &PotentialParams,
    level: &EnergyLevel,
    coeffs: &WavefunctionCoefficients,
    x: f64,
) -> Result<DiracResidual> {
    if !x.is_finite() || x == 0.0 {
        return Err(Error::Domain { what: "residual position (x = 0 is the kink)", value: x });
    }
    let h = 1e-4 / libm::sqrt(params.g);
    let at = |t: f64| wavefunction_at(params, coeffs, level.nu, t);
    let (m2, m1, p1, p2) = (at(x - 2.0 * h)?, at(x - h)?, at(x + h)?, at(x + 2.0 * h)?);
    let deriv = |f: fn(&BispinorSample) -> f64| (f(&m2) - 8.0 * f(&m1) + 8.0 * f(&p1) - f(&p2)) / (12.0 * h);
    let d1 = deriv(|s| s.psi1);
    let d2 = deriv(|s| s.psi2);
    let c = at(x)?;
    let s = params.scalar_at(x);
    let e = level.energy;
    let r1 = d1 + s * c.psi1 - e * c.psi2;
    let r2 = -d2 + s * c.psi2 - e * c.psi1;
    let scale = [d1, s * c.psi1, e * c.psi2, d2, s * c.psi2, e * c.psi1].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(DiracResidual { r1, r2, scale })
}
