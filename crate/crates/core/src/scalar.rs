//! Bracketed scalar root finding and 1-D minimization.

use crate::error::{CsError, Result};

/// Bisection on a bracketing interval.  `f(lo)` and `f(hi)` must have opposite
/// signs (an endpoint that is exactly zero is returned as the root).  Iterates
/// until the bracket width falls below `tol_abs + 4 eps |k|` or 200 steps.
pub fn bisect_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol_abs: f64) -> Result<f64> {
    let mut lo = lo;
    let mut hi = hi;
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(CsError::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol_abs + 4.0 * f64::EPSILON * mid.abs() || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Grow `hi` geometrically from `start` until `f` changes sign against
/// `f(start)`, then return the bracket.
pub fn grow_bracket_up(f: impl Fn(f64) -> f64, start: f64, factor: f64) -> Result<(f64, f64)> {
    let f0 = f(start);
    let mut hi = start * factor;
    for _ in 0..200 {
        if f(hi).signum() != f0.signum() {
            return Ok((start, hi));
        }
        hi *= factor;
        if !hi.is_finite() {
            break;
        }
    }
    Err(CsError::NoBracket { lo: start, hi })
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
/// Returns `(argmin, min)`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..300 {
        if b - a <= tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (a + b);
    (xm, f(xm))
}
