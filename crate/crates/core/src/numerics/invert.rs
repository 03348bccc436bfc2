use crate::dist::Cdf1D;
use crate::error::{domain, Result};

use super::quadrature::Interval;

/// Bracketing tolerance, relative to `max(scale, |x|)`.
pub const QUANTILE_TOL: f64 = 1e-12;

/// Generalized inverse `inf { x : F(x) >= q }` of a CDF.
pub fn invert_cdf(cdf: &Cdf1D, q: f64) -> Result<f64> {
    invert_monotone(|x| cdf.eval(x), q, cdf.support(), cdf.scale())
}

/// Generalized inverse of any non-decreasing `f` on `support` taking values in
/// `[0, 1]`. `scale` sets the first bracket step on infinite supports and the
/// absolute part of the stopping tolerance.
pub fn invert_monotone<F>(f: F, q: f64, support: Interval, scale: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(q > 0.0 && q < 1.0) {
        return domain(format!("quantile level must lie in (0, 1), got {q}"));
    }
    let scale = if scale.is_finite() && scale > 0.0 { scale } else { 1.0 };

    // lo: F(lo) < q, hi: F(hi) >= q
    let (mut lo, mut flo) = if support.lo.is_finite() {
        let v = f(support.lo);
        if v >= q {
            return Ok(support.lo);
        }
        (support.lo, v)
    } else {
        let start = if support.hi.is_finite() {
            support.hi - scale
        } else {
            0.0
        };
        let mut step = scale;
        let mut x = start;
        let mut v = f(x);
        let mut guard = 0;
        while v >= q {
            x -= step;
            step *= 2.0;
            v = f(x);
            guard += 1;
            if guard > 2000 || !x.is_finite() {
                return domain(format!("no lower bracket for quantile {q}"));
            }
        }
        (x, v)
    };
    let (mut hi, mut fhi) = if support.hi.is_finite() {
        (support.hi, f(support.hi).max(q))
    } else {
        let mut step = scale;
        let mut x = if lo.is_finite() { lo.max(0.0) + step } else { step };
        let mut v = f(x);
        let mut guard = 0;
        while v < q {
            x += step;
            step *= 2.0;
            v = f(x);
            guard += 1;
            if guard > 2000 || !x.is_finite() {
                return domain(format!("no upper bracket for quantile {q}"));
            }
        }
        (x, v)
    };
    if hi <= lo {
        return domain("cdf is not monotone on its support");
    }

    let mut last_width = hi - lo;
    let mut force_bisect = false;
    for _ in 0..400 {
        let width = hi - lo;
        if width <= QUANTILE_TOL * scale.max(lo.abs().min(hi.abs())) {
            break;
        }
        let bisect = 0.5 * (lo + hi);
        let mut x = bisect;
        if !force_bisect && fhi > flo {
            // false position step
            let cand = lo + (q - flo) / (fhi - flo) * width;
            if cand > lo && cand < hi {
                x = cand;
            }
        }
        if !(x > lo && x < hi) {
            break;
        }
        let v = f(x);
        if v >= q {
            hi = x;
            fhi = v;
        } else {
            lo = x;
            flo = v;
        }
        let new_width = hi - lo;
        // fall back to bisection whenever the bracket fails to halve
        force_bisect = !force_bisect && new_width > 0.5 * last_width;
        last_width = new_width;
    }
    Ok(hi)
}
