//! Independent eigenvalue solver: two-sided RK4 shooting on the first-order
//! system
//!
//! ```text
//! psi1' = E psi2 - S(x) psi1,    psi2' = S(x) psi2 - E psi1,    S = m + g|x|
//! ```
//!
//! Each side starts at `|x| = x_max` in the decaying direction and is
//! integrated toward the kink, where the two solutions must be
//! proportional. Nothing here uses the special functions, so agreement with
//! [`crate::quantize`] is a genuine cross-check.

use alloc::vec::Vec;

use crate::model::{PotentialParams, Side};
use crate::{Error, Result};

/// Steps between renormalisations of the integrated solution.
const RESCALE_EVERY: usize = 100;
const MAX_BISECTIONS: usize = 200;
/// A refined zero of the determinant larger than this is a sign jump, not
/// an eigenvalue.
const CONVERGED_MISMATCH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    /// Half width of the domain.
    pub x_max: f64,
    /// RK4 step.
    pub h: f64,
    pub e_min: f64,
    pub e_max: f64,
    pub e_step: f64,
    /// Relative energy width at which bisection stops.
    pub tol: f64,
    /// Accept steps coarser than `1e-3 x_max`. Only useful to demonstrate
    /// what an under-resolved integration does.
    pub allow_coarse_step: bool,
}

impl ShootingConfig {
    /// `x_max = 10/sqrt g`, `h = 1e-3 x_max`, energies `[0, 5 sqrt g]` in
    /// steps of `0.01 sqrt g`.
    pub fn for_params(params: &PotentialParams) -> Self {
        let sg = libm::sqrt(params.g());
        let x_max = 10.0 / sg;
        ShootingConfig {
            x_max,
            h: 1e-3 * x_max,
            e_min: 0.0,
            e_max: 5.0 * sg,
            e_step: 0.01 * sg,
            tol: 1e-12,
            allow_coarse_step: false,
        }
    }

    pub fn validate(&self, params: &PotentialParams) -> Result<()> {
        let sg = libm::sqrt(params.g());
        if !(self.x_max.is_finite() && self.x_max * sg >= 8.0) {
            return Err(Error::Domain { what: "x_max (needs x_max sqrt g >= 8)", value: self.x_max });
        }
        if !(self.h.is_finite() && self.h > 0.0 && self.h < self.x_max) {
            return Err(Error::Domain { what: "step h", value: self.h });
        }
        if !self.allow_coarse_step && self.h > 1e-3 * self.x_max * (1.0 + 1e-12) {
            return Err(Error::Domain { what: "step h (needs h <= 1e-3 x_max)", value: self.h });
        }
        if !(self.e_min.is_finite() && self.e_min >= 0.0) {
            return Err(Error::Domain { what: "e_min", value: self.e_min });
        }
        if !(self.e_max.is_finite() && self.e_max >= self.e_min) {
            return Err(Error::Domain { what: "e_max", value: self.e_max });
        }
        if !(self.e_step.is_finite() && self.e_step > 0.0) {
            return Err(Error::Domain { what: "e_step", value: self.e_step });
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Domain { what: "tol", value: self.tol });
        }
        Ok(())
    }
}

/// One side's solution at the kink, `exp(log_scale) (psi1, psi2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideSolution {
    pub psi1: f64,
    pub psi2: f64,
    pub log_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchResult {
    pub energy: f64,
    /// Normalized matching determinant at the refined energy.
    pub mismatch: f64,
    pub converged: bool,
    /// Within two scan steps of either end of the energy window.
    pub near_window_edge: bool,
}

fn rhs(params: &PotentialParams, e: f64, x: f64, y: [f64; 2]) -> [f64; 2] {
    let s = params.m() + params.g() * x.abs();
    [e * y[1] - s * y[0], s * y[1] - e * y[0]]
}

/// Integrates one side from `∓x_max` to the kink.
pub fn integrate_side(params: &PotentialParams, e: f64, side: Side, config: &ShootingConfig) -> Result<SideSolution> {
    config.validate(params)?;
    if !(e.is_finite() && e >= 0.0) {
        return Err(Error::Domain { what: "shooting energy", value: e });
    }
    let s = params.m() + params.g() * config.x_max;
    if s <= e {
        return Err(Error::Domain { what: "shooting energy above the scalar potential at x_max", value: e });
    }
    let kappa = libm::sqrt((s - e) * (s + e));
    // decaying direction of the constant-coefficient system at the edge
    let small = e / (s + kappa);
    let (start, mut y, dir) = match side {
        Side::Right => (config.x_max, [1.0, small], -1.0),
        Side::Left => (-config.x_max, [small, 1.0], 1.0),
    };
    let n = libm::ceil(config.x_max / config.h * (1.0 - 1e-12)) as usize;
    let h = dir * config.x_max / n as f64;
    let f = |x: f64, y: [f64; 2]| rhs(params, e, x, y);
    let mut log_scale = 0.0;
    for i in 0..n {
        // positions from the index, so no drift accumulates
        let x = start + i as f64 * h;
        let k1 = f(x, y);
        let k2 = f(x + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f(x + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        if (i + 1) % RESCALE_EVERY == 0 || i + 1 == n {
            let m = y[0].abs().max(y[1].abs());
            if !m.is_finite() || m == 0.0 {
                return Err(Error::Step { x: x + h });
            }
            log_scale += libm::log(m);
            y = [y[0] / m, y[1] / m];
        }
    }
    Ok(SideSolution { psi1: y[0], psi2: y[1], log_scale })
}

/// `(psi1_L psi2_R - psi1_R psi2_L) / (|psi_L| |psi_R|)`: the sine of the
/// angle between the two solutions at the kink, zero exactly when they are
/// proportional.
pub fn match_determinant(params: &PotentialParams, e: f64, config: &ShootingConfig) -> Result<f64> {
    let l = integrate_side(params, e, Side::Left, config)?;
    let r = integrate_side(params, e, Side::Right, config)?;
    let norm = libm::hypot(l.psi1, l.psi2) * libm::hypot(r.psi1, r.psi2);
    Ok((l.psi1 * r.psi2 - r.psi1 * l.psi2) / norm)
}

fn refine(
    params: &PotentialParams,
    config: &ShootingConfig,
    mut a: f64,
    mut fa: f64,
    mut b: f64,
) -> Result<(f64, f64)> {
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (a + b);
        if b - a <= config.tol * b.max(1.0) || mid <= a || mid >= b {
            return Ok((mid, match_determinant(params, mid, config)?));
        }
        let fm = match_determinant(params, mid, config)?;
        if fm == 0.0 {
            return Ok((mid, 0.0));
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Err(Error::NonConvergence { what: "shooting bisection", iterations: MAX_BISECTIONS })
}

/// All sign changes of the determinant on the energy grid of `config`,
/// refined by bisection, in increasing energy.
pub fn eigenvalues(params: &PotentialParams, config: &ShootingConfig) -> Result<Vec<MatchResult>> {
    config.validate(params)?;
    let steps = libm::floor((config.e_max - config.e_min) / config.e_step * (1.0 + 1e-12)) as usize;
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=steps {
        let e = config.e_min + k as f64 * config.e_step;
        let f = match_determinant(params, e, config)?;
        if let Some((ep, fp)) = prev {
            if fp == 0.0 || (fp < 0.0) != (f < 0.0) && f != 0.0 {
                let (energy, mismatch) = if fp == 0.0 { (ep, 0.0) } else { refine(params, config, ep, fp, e)? };
                out.push(MatchResult {
                    energy,
                    mismatch,
                    converged: mismatch.abs() <= CONVERGED_MISMATCH,
                    near_window_edge: energy - config.e_min <= 2.0 * config.e_step
                        || config.e_max - energy <= 2.0 * config.e_step,
                });
            }
        }
        prev = Some((e, f));
    }
    if let Some((e, f)) = prev {
        if f == 0.0 {
            out.push(MatchResult { energy: e, mismatch: 0.0, converged: true, near_window_edge: true });
        }
    }
    Ok(out)
}

/// The `n` lowest positive eigenvalues, widening the window of `config`
/// upwards until enough are found or the scalar potential at `x_max` is
/// reached.
pub fn lowest_eigenvalues(params: &PotentialParams, n: usize, config: &ShootingConfig) -> Result<Vec<MatchResult>> {
    config.validate(params)?;
    let ceiling = params.m() + params.g() * config.x_max;
    let mut cfg = *config;
    loop {
        let mut found = eigenvalues(params, &cfg)?;
        // a level sitting on the upper edge may be cut off; keep widening
        let complete = found.len() > n || (found.len() == n && cfg.e_max - found[n - 1].energy > 2.0 * cfg.e_step);
        if complete {
            found.truncate(n);
            return Ok(found);
        }
        if cfg.e_max >= ceiling {
            return Err(Error::WindowExhausted { found: found.len(), wanted: n, limit: cfg.e_max });
        }
        cfg.e_max = (cfg.e_max * 2.0).min(ceiling * (1.0 - 1e-9));
    }
}
