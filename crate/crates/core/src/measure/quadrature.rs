//! Adaptive Simpson quadrature for complex integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_DEPTH: usize = 30;

/// Agreement of the two Simpson estimates below this many ulps of the panel
/// mass is indistinguishable from rounding, so refinement stops there.
const NOISE_ULPS: f64 = 64.0;

/// `∫_a^b f` to absolute tolerance `tol`, starting from uniform panels no
/// wider than `max_panel` (so features narrower than the whole interval are
/// sampled before refinement decides where to look).
pub fn integrate<F>(f: &F, a: f64, b: f64, max_panel: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if !(b > a) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let panels = ((b - a) / max_panel).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let panel_tol = tol / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut left = a;
    let mut f_left = f(a)?;
    for i in 0..panels {
        let right = if i + 1 == panels { b } else { a + (i + 1) as f64 * h };
        let mid = 0.5 * (left + right);
        let f_mid = f(mid)?;
        let f_right = f(right)?;
        let whole = (f_left + f_mid * 4.0 + f_right) * ((right - left) / 6.0);
        total += refine(f, [left, mid, right], [f_left, f_mid, f_right], whole, panel_tol, 0)?;
        left = right;
        f_left = f_right;
    }
    Ok(total)
}

fn refine<F>(f: &F, x: [f64; 3], fx: [Complex64; 3], whole: Complex64, tol: f64, depth: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let [a, m, b] = x;
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let f_lm = f(lm)?;
    let f_rm = f(rm)?;
    let left = (fx[0] + f_lm * 4.0 + fx[1]) * ((m - a) / 6.0);
    let right = (fx[1] + f_rm * 4.0 + fx[2]) * ((b - m) / 6.0);
    let delta = left + right - whole;
    let peak = [fx[0], fx[1], fx[2], f_lm, f_rm].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let noise = NOISE_ULPS * f64::EPSILON * (b - a) * peak;
    if delta.norm() <= 15.0 * tol || delta.norm() <= noise {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature { a, b, depth });
    }
    Ok(refine(f, [a, lm, m], [fx[0], f_lm, fx[1]], left, 0.5 * tol, depth + 1)?
        + refine(f, [m, rm, b], [fx[1], f_rm, fx[2]], right, 0.5 * tol, depth + 1)?)
}
