//! Adaptive Simpson quadrature.

use crate::{Error, Result};

/// Deepest bisection level before an interval is accepted as is.
const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the local Richardson error estimates.
    pub est_error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
}

/// `∫_a^b f` to absolute tolerance `tol`, split first into `panels` equal
/// pieces so that features narrower than the whole interval are not missed.
///
/// Each piece is bisected until the two halves agree with the whole to
/// `15 tol_piece`; the accepted value carries the Richardson correction.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, panels: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain { what: "integration limit", value: if a.is_finite() { b } else { a } });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain { what: "quadrature tolerance", value: tol });
    }
    let panels = panels.max(1);
    let mut out = QuadResult { value: 0.0, est_error: 0.0, evaluations: 0 };
    if a == b {
        return Ok(out);
    }
    let width = (b - a) / panels as f64;
    let mut eval = |x: f64, out: &mut QuadResult| -> Result<f64> {
        out.evaluations += 1;
        let y = f(x)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Domain { what: "non-finite integrand at", value: x })
        }
    };
    let mut fa = eval(a, &mut out)?;
    for i in 0..panels {
        let pa = a + i as f64 * width;
        let pb = if i + 1 == panels { b } else { a + (i + 1) as f64 * width };
        let fm = eval(0.5 * (pa + pb), &mut out)?;
        let fb = eval(pb, &mut out)?;
        let whole = Panel::simpson(pa, pb, fa, fm, fb);
        let panel = Panel { a: pa, b: pb, fa, fm, fb, whole };
        refine(&mut eval, panel, tol / panels as f64, 0, &mut out)?;
        fa = fb;
    }
    Ok(out)
}

fn refine<E>(eval: &mut E, p: Panel, tol: f64, depth: u32, out: &mut QuadResult) -> Result<()>
where
    E: FnMut(f64, &mut QuadResult) -> Result<f64>,
{
    let m = 0.5 * (p.a + p.b);
    let flm = eval(0.5 * (p.a + m), out)?;
    let frm = eval(0.5 * (m + p.b), out)?;
    let left = Panel::simpson(p.a, m, p.fa, flm, p.fm);
    let right = Panel::simpson(m, p.b, p.fm, frm, p.fb);
    let diff = left + right - p.whole;
    if diff.abs() <= 15.0 * tol || depth >= MAX_DEPTH || m <= p.a || m >= p.b {
        out.value += left + right + diff / 15.0;
        out.est_error += diff.abs() / 15.0;
        return Ok(());
    }
    refine(eval, Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left }, 0.5 * tol, depth + 1, out)?;
    refine(eval, Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right }, 0.5 * tol, depth + 1, out)
}
