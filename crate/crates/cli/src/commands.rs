use std::fmt;

use weber_dirac::model::{self, EnergySign, PotentialParams};
use weber_dirac::oracle::{self, ShootingConfig};
use weber_dirac::quantize::{self, SignBranch, SpectrumOptions};
use weber_dirac::Error;

use crate::args::{BranchArg, Command, GlobalArgs, ParamArgs, SignArg};
use crate::record::{fmt_float, Record};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

/// Most rows a single wavefunction or scan request may produce.
const MAX_ROWS: usize = 10_000_000;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl Failure {
    pub fn domain(message: impl Into<String>) -> Self {
        Failure { code: EXIT_DOMAIN, message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Failure { code: EXIT_NUMERIC, message: message.into() }
    }
}

/// Bad inputs and exhausted windows are 2, everything else the numerics
/// gave up on is 3.
pub fn exit_code(e: &Error) -> i32 {
    match e.root_cause() {
        Error::Domain { .. } | Error::Pole { .. } | Error::WindowExhausted { .. } => EXIT_DOMAIN,
        _ => EXIT_NUMERIC,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

/// A finished table and the exit status that goes with it.
pub struct Outcome {
    pub record: Record,
    pub code: i32,
}

impl From<Record> for Outcome {
    fn from(record: Record) -> Self {
        Outcome { record, code: 0 }
    }
}

fn resolve(p: &ParamArgs) -> Result<PotentialParams, Failure> {
    let params = match (p.alpha, p.m, p.g) {
        (Some(alpha), None, None) => PotentialParams::from_alpha(alpha, 1.0)?,
        (None, Some(m), Some(g)) => PotentialParams::new(m, g)?,
        // clap enforces the combinations
        _ => return Err(Failure { code: EXIT_USAGE, message: "give --alpha, or --m and --g".into() }),
    };
    Ok(params)
}

fn describe(record: &mut Record, p: &PotentialParams) {
    record.parameters = vec![("alpha", p.alpha().into()), ("m", p.m().into()), ("g", p.g().into())];
}

fn branch(b: BranchArg) -> SignBranch {
    match b {
        BranchArg::Plus => SignBranch::Plus,
        BranchArg::Minus => SignBranch::Minus,
    }
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Failure::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `lo, lo + step, ...` up to `hi`; empty when `hi < lo`.
fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Failure::domain(format!("grid limits must be finite, got [{lo}, {hi}]")));
    }
    positive("grid step", step)?;
    if hi < lo {
        return Ok(Vec::new());
    }
    let last = ((hi - lo) / step * (1.0 + 4.0 * f64::EPSILON)).floor();
    if last >= MAX_ROWS as f64 {
        return Err(Failure::domain(format!("grid of {last} points is too large")));
    }
    Ok((0..=last as usize).map(|k| lo + k as f64 * step).collect())
}

pub fn run(command: &Command, global: &GlobalArgs, argv: &[String]) -> Result<Outcome, Failure> {
    positive("--tol-nu", global.tol_nu)?;
    positive("--tol-energy", global.tol_energy)?;
    match command {
        Command::Spectrum { params, levels, step } => spectrum(params, *levels, *step, global, argv),
        Command::Scan { params, branch: b, nu_min, nu_max, step } => {
            scan(params, branch(*b), *nu_min, *nu_max, *step, argv)
        }
        Command::Wavefunction { params, level, energy_sign, x_min, x_max, dx, normalize } => {
            let sign = match energy_sign {
                SignArg::Positive => EnergySign::Positive,
                SignArg::Negative => EnergySign::Negative,
            };
            wavefunction(params, *level, sign, (*x_min, *x_max, *dx), *normalize, global, argv)
        }
        Command::HermiteCheck { params, n_max } => hermite_check(params, *n_max, argv),
        Command::OracleCompare { params, levels, x_max, h, e_step, allow_coarse } => {
            oracle_compare(params, *levels, (*x_max, *h, *e_step), *allow_coarse, global, argv)
        }
    }
}

fn options(step: f64, global: &GlobalArgs) -> SpectrumOptions {
    SpectrumOptions { step, tol: global.tol_nu, nu_cap: global.nu_cap, ..SpectrumOptions::default() }
}

fn spectrum(p: &ParamArgs, levels: u32, step: f64, global: &GlobalArgs, argv: &[String]) -> Result<Outcome, Failure> {
    let params = resolve(p)?;
    let opts = options(positive("--step", step)?, global);
    let roots = quantize::spectrum_with(params.alpha(), levels as usize, &opts)?;
    let mut r =
        Record::new("spectrum", argv, &["index", "nu", "branch", "e_plus", "e_minus", "residual", "below_zero"]);
    describe(&mut r, &params);
    r.meta("step", opts.step);
    r.meta("tol_nu", opts.tol);
    r.meta("nu_min", opts.nu_min);
    r.meta("nu_cap", opts.nu_cap);
    for (i, root) in roots.iter().enumerate() {
        let e = model::energy_from_nu(&params, root.nu, EnergySign::Positive)?.energy;
        r.push(vec![
            (i + 1).into(),
            root.nu.into(),
            root.branch.as_str().into(),
            e.into(),
            (-e).into(),
            root.residual.into(),
            root.is_below_zero().into(),
        ]);
        if root.is_below_zero() {
            r.warnings.push(format!(
                "level {} has nu = {} in (-1, 0); check it with oracle-compare before treating it as physical",
                i + 1,
                fmt_float(root.nu)
            ));
        }
    }
    Ok(r.into())
}

fn scan(
    p: &ParamArgs,
    branch: SignBranch,
    nu_min: f64,
    nu_max: f64,
    step: f64,
    argv: &[String],
) -> Result<Outcome, Failure> {
    let params = resolve(p)?;
    let alpha = params.alpha();
    let nus = grid(nu_min, nu_max, step)?;
    let mut r = Record::new("scan", argv, &["nu", "residual", "residual_derivative_form", "sign_change"]);
    describe(&mut r, &params);
    r.meta("branch", branch.as_str());
    r.meta("step", step);
    let mut prev: Option<f64> = None;
    let mut changes = 0usize;
    for nu in nus {
        let f = quantize::condition_residual(nu, alpha, branch)?;
        let d = quantize::condition_residual_deriv_form(nu, alpha, branch.derivative_sign())?;
        // exact zeros are flagged directly; a sign change flags whichever
        // neighbour has the smaller residual
        let crossed = prev.is_some_and(|q| q != 0.0 && f != 0.0 && (q < 0.0) != (f < 0.0));
        let mut flagged = f == 0.0;
        if crossed {
            let q = prev.unwrap_or(f);
            if q.abs() <= f.abs() {
                let last = r.rows.len() - 1;
                r.rows[last][3] = true.into();
            } else {
                flagged = true;
            }
        }
        changes += (crossed || f == 0.0) as usize;
        r.push(vec![nu.into(), f.into(), d.into(), flagged.into()]);
        prev = Some(f);
    }
    r.meta("sign_changes", changes);
    Ok(r.into())
}

fn wavefunction(
    p: &ParamArgs,
    level: u32,
    sign: EnergySign,
    (x_min, x_max, dx): (Option<f64>, Option<f64>, Option<f64>),
    normalize: bool,
    global: &GlobalArgs,
    argv: &[String],
) -> Result<Outcome, Failure> {
    let params = resolve(p)?;
    let opts = options(quantize::DEFAULT_STEP, global);
    let roots = quantize::spectrum_with(params.alpha(), level as usize, &opts)?;
    let root = roots[level as usize - 1];
    let halfwidth = model::default_halfwidth(&params, root.nu);
    let lo = x_min.unwrap_or(-halfwidth);
    let hi = x_max.unwrap_or(halfwidth);
    let xs = grid(lo, hi, dx.unwrap_or((hi - lo) / 1000.0))?;
    let extent = model::max_sample_extent(&params);
    if lo.abs().max(hi.abs()) > extent {
        return Err(Failure::numeric(format!(
            "grid reaches |x| = {}, beyond the supported {}",
            fmt_float(lo.abs().max(hi.abs())),
            fmt_float(extent)
        )));
    }
    let level_info = model::EnergyLevel::from_root(&params, &root, sign)?;
    let mut coeffs = model::assemble_coefficients(&params, &root, sign, 1.0)?;
    let mut r = Record::new("wavefunction", argv, &["x", "psi1", "psi2"]);
    describe(&mut r, &params);
    r.meta("level", level);
    r.meta("nu", root.nu);
    r.meta("branch", root.branch.as_str());
    r.meta("energy", level_info.energy);
    r.meta("energy_sign", sign.as_str());
    r.meta("normalized", normalize);
    if normalize {
        let n = model::normalize(&params, &coeffs, root.nu, halfwidth)?;
        coeffs = n.coeffs;
        r.meta("norm_halfwidth", halfwidth);
        r.meta("norm_before", n.norm_before);
        r.meta("norm_error", n.norm_error);
    }
    r.meta("c_plus", coeffs.c_plus);
    r.meta("d_plus", coeffs.d_plus);
    r.meta("c_minus", coeffs.c_minus);
    r.meta("d_minus", coeffs.d_minus);
    if root.is_below_zero() {
        r.warnings.push(format!("nu = {} lies in (-1, 0)", fmt_float(root.nu)));
    }
    for s in model::sample_wavefunction(&params, &coeffs, root.nu, &xs)? {
        r.push(vec![s.x.into(), s.psi1.into(), s.psi2.into()]);
    }
    Ok(r.into())
}

fn hermite_check(p: &ParamArgs, n_max: u32, argv: &[String]) -> Result<Outcome, Failure> {
    let params = resolve(p)?;
    let rows = quantize::hermite_check(params.alpha(), n_max)?;
    let mut r = Record::new(
        "hermite-check",
        argv,
        &["n", "residual_plus", "residual_minus", "root_plus", "root_minus", "is_root", "overflow"],
    );
    describe(&mut r, &params);
    r.meta("n_max", n_max);
    let mut roots = Vec::new();
    for row in &rows {
        if row.overflow {
            r.warnings.push(format!("n = {}: Hermite values overflow, row not decided", row.n));
        }
        if row.is_root() {
            roots.push(row.n.to_string());
        }
        r.push(vec![
            row.n.into(),
            row.residual_plus.into(),
            row.residual_minus.into(),
            row.root_plus.into(),
            row.root_minus.into(),
            row.is_root().into(),
            row.overflow.into(),
        ]);
    }
    r.meta("root_count", roots.len());
    r.meta("roots", roots.join(" "));
    Ok(r.into())
}

fn oracle_compare(
    p: &ParamArgs,
    levels: u32,
    (x_max, h, e_step): (Option<f64>, Option<f64>, Option<f64>),
    allow_coarse: bool,
    global: &GlobalArgs,
    argv: &[String],
) -> Result<Outcome, Failure> {
    let params = resolve(p)?;
    let n = levels as usize;
    let roots = quantize::spectrum_with(params.alpha(), n, &options(quantize::DEFAULT_STEP, global))?;
    let mut cfg = ShootingConfig::for_params(&params);
    if let Some(x) = x_max {
        cfg.x_max = x;
        cfg.h = 1e-3 * x;
    }
    cfg.h = h.unwrap_or(cfg.h);
    cfg.e_step = e_step.unwrap_or(cfg.e_step);
    cfg.allow_coarse_step = allow_coarse;
    cfg.validate(&params)?;
    let found = oracle::lowest_eigenvalues(&params, n, &cfg)?;
    let mut r = Record::new(
        "oracle-compare",
        argv,
        &["index", "nu", "e_analytic", "e_oracle", "abs_diff", "rel_diff", "mismatch", "converged", "pass"],
    );
    describe(&mut r, &params);
    r.meta("tol_energy", global.tol_energy);
    r.meta("x_max", cfg.x_max);
    r.meta("h", cfg.h);
    r.meta("e_step", cfg.e_step);
    let mut failures = 0usize;
    for (i, (root, m)) in roots.iter().zip(&found).enumerate() {
        let e = model::energy_from_nu(&params, root.nu, EnergySign::Positive)?.energy;
        let diff = (m.energy - e).abs();
        let rel = diff / e.abs().max(f64::MIN_POSITIVE);
        let pass = m.converged && rel <= global.tol_energy;
        failures += !pass as usize;
        if m.near_window_edge {
            r.warnings.push(format!("oracle level {} sits near the edge of its energy window", i + 1));
        }
        r.push(vec![
            (i + 1).into(),
            root.nu.into(),
            e.into(),
            m.energy.into(),
            diff.into(),
            rel.into(),
            m.mismatch.into(),
            m.converged.into(),
            pass.into(),
        ]);
    }
    r.meta("failures", failures);
    let code = if failures > 0 {
        r.warnings.push(format!("{failures} of {n} levels disagree beyond the tolerance"));
        EXIT_MISMATCH
    } else {
        0
    };
    Ok(Outcome { record: r, code })
}
