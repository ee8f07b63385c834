use crate::error::{Error, Result};

/// Root of `f` in `[a, b]` given a sign change.
///
/// Bisection narrows the bracket to a tenth of its width, then Illinois
/// regula falsi finishes to a few ulps. The result is always inside the
/// last bracket.
pub fn bracket_root<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a}, {b}]: f = {flo:e}, {fhi:e}"
        )));
    }
    let width0 = hi - lo;
    while hi - lo > 0.1 * width0 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    let mut side = 0i8;
    for _ in 0..200 {
        let x = (lo * fhi - hi * flo) / (fhi - flo);
        let x = if x > lo && x < hi { x } else { 0.5 * (lo + hi) };
        if x <= lo || x >= hi {
            break;
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(if flo.abs() < fhi.abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let r = bracket_root(|x| x * x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_missing_bracket() {
        assert!(bracket_root(|x| x * x + 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn steep_function() {
        let r = bracket_root(|x| (x - 0.3).powi(3) * 1e8 + (x - 0.3), 0.0, 1.0).unwrap();
        assert!((r - 0.3).abs() < 1e-14);
    }
}
