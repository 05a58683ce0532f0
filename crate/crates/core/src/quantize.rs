//! Matching conditions at the kink as functions of the order `nu`, and the
//! root search that turns them into a spectrum.
//!
//! Continuity of both components at `x = 0` requires
//!
//! ```text
//! D_{nu+1}(sqrt2 a) = ± sqrt(nu + 1) D_nu(sqrt2 a),        a = m / sqrt g
//! ```
//!
//! The same condition can be written with the derivative,
//! `D'_nu = (a/sqrt2 ∓' sqrt(nu + 1)) D_nu`, where the sign flips between the
//! two forms: using `D'_nu(z) = (z/2) D_nu(z) - D_{nu+1}(z)`, the `+` branch of
//! the first is the `-` branch of the second.
//!
//! Roots are bracketed by sign changes on a uniform grid in `nu` and then
//! refined by bisection with secant steps.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::specfun::{hermite, pcf_d, PcfOrder, PCF_MAX_ORDER};
use crate::{Error, Result};

/// Lowest order searched: just above the `nu = -1` threshold where `E = 0`.
pub const DEFAULT_NU_MIN: f64 = -1.0 + 1e-9;
pub const DEFAULT_STEP: f64 = 0.01;
pub const DEFAULT_TOL: f64 = 1e-12;
/// The search stops here: the condition needs `D_{nu+1}`, and orders above
/// 200 are not supported.
pub const NU_CAP: f64 = 199.0;
/// Highest degree `n` accepted by [`hermite_check`].
/// How far below zero a root must sit before [`QuantizationRoot::is_below_zero`].
pub const BELOW_ZERO_SLACK: f64 = 1e-9;
pub const HERMITE_CHECK_MAX_N: u32 = 250;

const MAX_REFINE_ITERATIONS: usize = 200;
/// Refinement also stops once the residual is this small relative to the
/// size of the two terms it is the difference of.
const RESIDUAL_STOP: f64 = 1e-13;
/// Grid points per chunk of the incremental spectrum scan.
const CHUNK: usize = 256;

/// The `±` of the continuity condition `D_{nu+1} = ± sqrt(nu+1) D_nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignBranch {
    Plus,
    Minus,
}

impl SignBranch {
    pub const BOTH: [SignBranch; 2] = [SignBranch::Plus, SignBranch::Minus];

    pub fn sign(self) -> f64 {
        match self {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        }
    }

    /// The sign of the derivative form that expresses the same condition.
    pub fn derivative_sign(self) -> DerivativeSign {
        match self {
            SignBranch::Plus => DerivativeSign::Minus,
            SignBranch::Minus => DerivativeSign::Plus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignBranch::Plus => "plus",
            SignBranch::Minus => "minus",
        }
    }
}

/// The `±` of the derivative form `D'_nu = (a/sqrt2 ± sqrt(nu+1)) D_nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivativeSign {
    Plus,
    Minus,
}

impl DerivativeSign {
    pub fn sign(self) -> f64 {
        match self {
            DerivativeSign::Plus => 1.0,
            DerivativeSign::Minus => -1.0,
        }
    }

    pub fn branch(self) -> SignBranch {
        match self {
            DerivativeSign::Plus => SignBranch::Minus,
            DerivativeSign::Minus => SignBranch::Plus,
        }
    }
}

/// Consecutive grid orders between which the residual changes sign.
///
/// A grid point where the residual is exactly zero is reported as a
/// degenerate bracket with `nu_lo == nu_hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub nu_lo: f64,
    pub nu_hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl RootBracket {
    pub fn is_degenerate(&self) -> bool {
        self.nu_lo == self.nu_hi && self.f_lo == 0.0
    }

    fn is_valid(&self) -> bool {
        self.is_degenerate() || (self.nu_lo < self.nu_hi && self.f_lo * self.f_hi < 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationRoot {
    pub nu: f64,
    pub branch: SignBranch,
    pub residual: f64,
    pub iterations: usize,
}

impl QuantizationRoot {
    /// Roots with `-1 < nu < 0` have no integer-order counterpart; they
    /// are genuine levels but worth pointing out. A root at zero refined to
    /// a few ulps below it does not count.
    pub fn is_below_zero(&self) -> bool {
        self.nu < -BELOW_ZERO_SLACK
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what: "alpha", value: alpha })
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if nu.is_finite() && nu > -1.0 {
        Ok(())
    } else {
        Err(Error::Domain { what: "order nu (needs nu > -1)", value: nu })
    }
}

/// `(D_nu(z), D_{nu+1}(z))` at the matching point `z = sqrt2 alpha`.
fn matching_values(nu: f64, alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    check_nu(nu)?;
    let order = PcfOrder::new(nu)?;
    let z = SQRT_2 * alpha;
    Ok((pcf_d(order, z)?.value, pcf_d(order.succ()?, z)?.value))
}

/// Residual and the magnitude of the terms it is the difference of.
fn residual_and_scale(nu: f64, alpha: f64, branch: SignBranch) -> Result<(f64, f64)> {
    let (d, d_up) = matching_values(nu, alpha)?;
    let root = libm::sqrt(nu + 1.0);
    Ok((d_up - branch.sign() * root * d, d_up.abs() + root * d.abs()))
}

/// `D_{nu+1}(sqrt2 alpha) ∓ sqrt(nu + 1) D_nu(sqrt2 alpha)`, with `-` for
/// [`SignBranch::Plus`].
pub fn condition_residual(nu: f64, alpha: f64, branch: SignBranch) -> Result<f64> {
    residual_and_scale(nu, alpha, branch).map(|(f, _)| f)
}

/// `D'_nu(sqrt2 alpha) - (alpha/sqrt2 ± sqrt(nu + 1)) D_nu(sqrt2 alpha)`.
///
/// Equals `-condition_residual(nu, alpha, sign.branch())`.
pub fn condition_residual_deriv_form(nu: f64, alpha: f64, sign: DerivativeSign) -> Result<f64> {
    let (d, d_up) = matching_values(nu, alpha)?;
    let z = SQRT_2 * alpha;
    let deriv = 0.5 * z * d - d_up;
    Ok(deriv - (alpha * FRAC_1_SQRT_2 + sign.sign() * libm::sqrt(nu + 1.0)) * d)
}

fn check_grid(nu_min: f64, nu_max: f64, step: f64) -> Result<usize> {
    check_nu(nu_min)?;
    if !nu_max.is_finite() || nu_max <= nu_min {
        return Err(Error::Domain { what: "upper end of the order range", value: nu_max });
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::Domain { what: "scan step", value: step });
    }
    // tolerate rounding in the division so an endpoint that is a whole
    // number of steps away is included
    let span = (nu_max - nu_min) / step;
    Ok(libm::floor(span * (1.0 + 4.0 * f64::EPSILON)) as usize)
}

/// The scan grid `nu_min + k step` for `k = 0, 1, ...` while not beyond
/// `nu_max`.
pub fn scan_grid(nu_min: f64, nu_max: f64, step: f64) -> Result<Vec<f64>> {
    let last = check_grid(nu_min, nu_max, step)?;
    Ok((0..=last).map(|k| nu_min + k as f64 * step).collect())
}

/// Incremental grid scan of both branches, sharing the `D_nu` evaluations.
/// Grid points are `nu_min + k step`, so scanning in chunks gives the same
/// brackets as one pass.
struct GridScan {
    alpha: f64,
    nu_min: f64,
    step: f64,
    next: usize,
    /// Previous grid point and its residuals, indexed like [`SignBranch::BOTH`].
    prev: Option<(f64, [f64; 2])>,
}

impl GridScan {
    fn new(alpha: f64, nu_min: f64, step: f64) -> Self {
        GridScan { alpha, nu_min, step, next: 0, prev: None }
    }

    fn residuals(&self, nu: f64) -> Result<[f64; 2]> {
        let (d, d_up) = matching_values(nu, self.alpha).map_err(|e| e.at_order(nu))?;
        let root = libm::sqrt(nu + 1.0);
        Ok(SignBranch::BOTH.map(|b| d_up - b.sign() * root * d))
    }

    /// Scans grid points up to and including index `last`, appending the
    /// brackets of each branch to the matching entry of `out`.
    fn advance_to(&mut self, last: usize, out: &mut [Vec<RootBracket>; 2]) -> Result<()> {
        while self.next <= last {
            let nu = self.nu_min + self.next as f64 * self.step;
            self.next += 1;
            let f = self.residuals(nu)?;
            for (i, branch) in SignBranch::BOTH.into_iter().enumerate() {
                if f[i] == 0.0 {
                    out[i].push(RootBracket { nu_lo: nu, nu_hi: nu, f_lo: 0.0, f_hi: 0.0 });
                } else if let Some((nu_p, f_p)) = self.prev {
                    if f_p[i] * f[i] < 0.0 {
                        let b = RootBracket { nu_lo: nu_p, nu_hi: nu, f_lo: f_p[i], f_hi: f[i] };
                        if self.passes_continuity_guard(&b, branch)? {
                            out[i].push(b);
                        }
                    }
                }
            }
            self.prev = Some((nu, f));
        }
        Ok(())
    }

    /// A sign change through a pole would show a huge midpoint value.
    fn passes_continuity_guard(&self, b: &RootBracket, branch: SignBranch) -> Result<bool> {
        let mid = 0.5 * (b.nu_lo + b.nu_hi);
        let f = condition_residual(mid, self.alpha, branch).map_err(|e| e.at_order(mid))?;
        Ok(f.abs() <= 10.0 * b.f_lo.abs().max(b.f_hi.abs()))
    }
}

/// Every consecutive grid pair on which the residual changes sign, in
/// increasing order. Evaluation failures carry the offending order.
pub fn scan_brackets(alpha: f64, branch: SignBranch, nu_min: f64, nu_max: f64, step: f64) -> Result<Vec<RootBracket>> {
    check_alpha(alpha)?;
    let last = check_grid(nu_min, nu_max, step)?;
    let mut scan = GridScan::new(alpha, nu_min, step);
    let mut out = [Vec::new(), Vec::new()];
    scan.advance_to(last, &mut out)?;
    let [plus, minus] = out;
    Ok(match branch {
        SignBranch::Plus => plus,
        SignBranch::Minus => minus,
    })
}

/// Narrows a bracket to a root by bisection, taking secant steps while they
/// make good progress. Stops when the bracket is narrower than `tol` or the
/// residual is negligible next to the terms that cancel in it.
pub fn refine_root(bracket: RootBracket, alpha: f64, branch: SignBranch, tol: f64) -> Result<QuantizationRoot> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain { what: "root tolerance", value: tol });
    }
    if !bracket.is_valid() {
        return Err(Error::InvalidBracket { nu_lo: bracket.nu_lo, nu_hi: bracket.nu_hi });
    }
    if bracket.is_degenerate() {
        return Ok(QuantizationRoot { nu: bracket.nu_lo, branch, residual: 0.0, iterations: 0 });
    }
    let eval = |nu: f64| residual_and_scale(nu, alpha, branch).map_err(|e| e.at_order(nu));
    let (mut a, mut fa) = (bracket.nu_lo, bracket.f_lo);
    let (mut b, mut fb) = (bracket.nu_hi, bracket.f_hi);
    let mut bisect = true;
    for iteration in 1..=MAX_REFINE_ITERATIONS {
        let width = b - a;
        let secant = b - fb * (b - a) / (fb - fa);
        let margin = 1e-3 * width;
        let use_secant = !bisect && secant > a + margin && secant < b - margin;
        let x = if use_secant { secant } else { 0.5 * (a + b) };
        let (fx, scale) = eval(x)?;
        if fx == 0.0 || fx.abs() <= RESIDUAL_STOP * scale {
            return Ok(QuantizationRoot { nu: x, branch, residual: fx, iterations: iteration });
        }
        if fa * fx < 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
        if b - a <= tol {
            let (nu, residual) = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
            return Ok(QuantizationRoot { nu, branch, residual, iterations: iteration });
        }
        // a secant step that only nibbled at one end is followed by bisection
        bisect = use_secant && b - a > 0.5 * width;
    }
    Err(Error::NonConvergence { what: "quantization root refinement", iterations: MAX_REFINE_ITERATIONS })
}

/// Search settings for [`spectrum_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub nu_min: f64,
    pub step: f64,
    pub tol: f64,
    /// Highest order the scan may reach before giving up.
    pub nu_cap: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { nu_min: DEFAULT_NU_MIN, step: DEFAULT_STEP, tol: DEFAULT_TOL, nu_cap: NU_CAP }
    }
}

/// The `n_levels` lowest roots of both branches, in increasing `nu`.
pub fn spectrum(alpha: f64, n_levels: usize) -> Result<Vec<QuantizationRoot>> {
    spectrum_with(alpha, n_levels, &SpectrumOptions::default())
}

/// As [`spectrum`], with explicit search settings.
///
/// The grid is scanned upwards in chunks until enough roots are known; the
/// result is the same as scanning the whole range at once.
pub fn spectrum_with(alpha: f64, n_levels: usize, opts: &SpectrumOptions) -> Result<Vec<QuantizationRoot>> {
    check_alpha(alpha)?;
    if n_levels == 0 {
        return Err(Error::Domain { what: "number of levels", value: 0.0 });
    }
    if opts.nu_cap.is_nan() || opts.nu_cap > PCF_MAX_ORDER - 1.0 {
        return Err(Error::Domain { what: "order cap", value: opts.nu_cap });
    }
    let last = check_grid(opts.nu_min, opts.nu_cap, opts.step)?;
    let mut scan = GridScan::new(alpha, opts.nu_min, opts.step);
    let mut roots: Vec<QuantizationRoot> = Vec::new();
    let mut upto = 0usize;
    loop {
        upto = (upto + CHUNK).min(last);
        let mut brackets = [Vec::new(), Vec::new()];
        scan.advance_to(upto, &mut brackets)?;
        for (branch, found) in SignBranch::BOTH.into_iter().zip(brackets) {
            for b in found {
                roots.push(refine_root(b, alpha, branch, opts.tol)?);
            }
        }
        if roots.len() >= n_levels {
            break;
        }
        if upto == last {
            return Err(Error::WindowExhausted { found: roots.len(), wanted: n_levels, limit: opts.nu_cap });
        }
    }
    roots.sort_by(|a, b| a.nu.total_cmp(&b.nu));
    roots.dedup_by(|b, a| (b.nu - a.nu).abs() <= 1e-9);
    roots.truncate(n_levels);
    Ok(roots)
}

/// `H_{n+1}(alpha) ∓ sqrt(2(n+1)) H_n(alpha)`, the integer-order form of the
/// condition, with `-` for [`SignBranch::Plus`].
pub fn hermite_condition_residual(n: u32, alpha: f64, branch: SignBranch) -> Result<f64> {
    if n > HERMITE_CHECK_MAX_N {
        return Err(Error::Domain { what: "Hermite check degree", value: n as f64 });
    }
    check_alpha(alpha)?;
    let up = hermite(n + 1, alpha)?;
    let here = hermite(n, alpha)?;
    Ok(up - branch.sign() * libm::sqrt(2.0 * (n as f64 + 1.0)) * here)
}

/// One degree of the integer-order check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteCheckRow {
    pub n: u32,
    /// NaN when the polynomials overflow.
    pub residual_plus: f64,
    pub residual_minus: f64,
    pub root_plus: bool,
    pub root_minus: bool,
    pub overflow: bool,
}

impl HermiteCheckRow {
    pub fn is_root(&self) -> bool {
        self.root_plus || self.root_minus
    }
}

/// Evaluates the integer-order condition for `n = 0..=n_max`. A degree
/// counts as a root when the residual is within `1e-9 |H_{n+1}(alpha)|` of
/// zero.
pub fn hermite_check(alpha: f64, n_max: u32) -> Result<Vec<HermiteCheckRow>> {
    check_alpha(alpha)?;
    if n_max > HERMITE_CHECK_MAX_N {
        return Err(Error::Domain { what: "Hermite check degree", value: n_max as f64 });
    }
    let mut rows = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let row = match (hermite(n + 1, alpha), hermite(n, alpha)) {
            (Ok(up), Ok(here)) => {
                let root = libm::sqrt(2.0 * (n as f64 + 1.0)) * here;
                let (plus, minus) = (up - root, up + root);
                let tol = 1e-9 * up.abs();
                HermiteCheckRow {
                    n,
                    residual_plus: plus,
                    residual_minus: minus,
                    root_plus: plus.abs() <= tol,
                    root_minus: minus.abs() <= tol,
                    overflow: false,
                }
            }
            (Err(Error::Overflow { .. }), _) | (_, Err(Error::Overflow { .. })) => HermiteCheckRow {
                n,
                residual_plus: f64::NAN,
                residual_minus: f64::NAN,
                root_plus: false,
                root_minus: false,
                overflow: true,
            },
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        rows.push(row);
    }
    Ok(rows)
}
