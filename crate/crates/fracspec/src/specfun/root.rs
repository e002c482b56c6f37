//! Brent's method: inverse-quadratic interpolation with a bisection
//! safeguard, after Numerical Recipes.

use crate::error::{Error, Result};

use super::RootBracket;

const MAX_ITER: usize = 200;

/// Locate a root of `f` inside `bracket`. The function must change sign on
/// the bracket; the result is refined until the interval width is below
/// `bracket.tol` (plus a machine-precision floor).
pub fn find_root<F: Fn(f64) -> f64>(f: F, bracket: &RootBracket) -> Result<f64> {
    let mut a = bracket.lo;
    let mut b = bracket.hi;
    let mut fa = f(a);
    let mut fb = f(b);

    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let eps = f64::EPSILON;
    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * eps * b.abs() + 0.5 * bracket.tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Err(Error::RootIterations(MAX_ITER))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn linear_root() {
        let b = RootBracket::new(0.0, 5.0, 1e-12).unwrap();
        assert_relative_eq!(find_root(|x| x - 2.0, &b).unwrap(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn inverse_square_root() {
        // nu^-2 = 0.25  =>  nu = 2
        let b = RootBracket::new(1.0, 10.0, 1e-12).unwrap();
        let r = find_root(|nu| nu.powi(-2) - 0.25, &b).unwrap();
        assert_relative_eq!(r, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn clamped_beam_frequency() {
        // First positive root of cos(v) cosh(v) + 1 = 0, checked against a
        // plain bisection oracle.
        let f = |v: f64| v.cos() * v.cosh() + 1.0;
        let b = RootBracket::new(1.8, 2.0, 1e-13).unwrap();
        let brent = find_root(f, &b).unwrap();

        let (mut lo, mut hi) = (1.8_f64, 2.0_f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f(lo).signum() == f(mid).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_relative_eq!(brent, 0.5 * (lo + hi), epsilon = 1e-11);
        assert_relative_eq!(brent, 1.875_104_068_7, epsilon = 1e-9);
    }

    #[test]
    fn rejects_unbracketed_root() {
        let b = RootBracket::new(3.0, 5.0, 1e-12).unwrap();
        match find_root(|x| x - 2.0, &b) {
            Err(Error::NoSignChange { .. }) => {}
            other => panic!("expected NoSignChange, got {other:?}"),
        }
    }

    #[test]
    fn residual_consistent_with_tolerance() {
        let b = RootBracket::new(0.5, 2.0, 1e-10).unwrap();
        let f = |x: f64| x.exp() - 2.0;
        let r = find_root(f, &b).unwrap();
        // |f(x*)| <= |f'(root)| * tol, with f' = e^x ~ 2 near the root
        assert!(f(r).abs() <= 2.0 * 1e-9);
    }
}
