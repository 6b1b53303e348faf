//! Brent root bracketing and Brent scalar minimization.

use crate::error::{CoreError, Result};

/// A sign-changing interval of a real function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(f_lo * f_hi < 0.0) || !lo.is_finite() || !hi.is_finite() {
            return Err(CoreError::InvalidBracket { lo, hi, f_lo, f_hi });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    /// Evaluate `g` at both ends and validate.
    pub fn from_fn(g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, g(lo), g(hi))
    }
}

/// Brent's method on a validated bracket; stops when the bracket is narrower than `tol`.
pub fn find_root(g: impl Fn(f64) -> f64, bracket: Bracket, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    if !(fa * fb < 0.0) {
        return Err(CoreError::InvalidBracket { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
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
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = g(b);
        if !fb.is_finite() {
            return Err(CoreError::NonFinite(format!("g({b})")));
        }
    }
    Err(CoreError::NoConvergence("brent root: iteration budget".into()))
}

/// Result of a scalar minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
}

/// Golden-section search with parabolic acceleration (Brent) on `[a, b]`.
///
/// A minimizer that lands within a few tolerances of an end point is reported
/// as [`CoreError::BoundaryMinimum`].
pub fn minimize_scalar(g: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Minimum> {
    let m = brent_min(&g, a, b, tol)?;
    let edge = 4.0 * (tol + 1e-12 * m.x.abs());
    if (m.x - a.min(b)).abs() <= edge || (a.max(b) - m.x).abs() <= edge {
        return Err(CoreError::BoundaryMinimum { x: m.x, fx: m.fx });
    }
    Ok(m)
}

fn brent_min(g: &impl Fn(f64) -> f64, a0: f64, b0: f64, tol: f64) -> Result<Minimum> {
    const CGOLD: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = (a0.min(b0), a0.max(b0));
    let mut x = a + CGOLD * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = g(x);
    if !fx.is_finite() {
        return Err(CoreError::NonFinite(format!("g({x})")));
    }
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..500 {
        let xm = 0.5 * (a + b);
        let tol1 = tol + 1e-12 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            return Ok(Minimum { x, fx });
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = g(u);
        if !fu.is_finite() {
            return Err(CoreError::NonFinite(format!("g({u})")));
        }
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok(Minimum { x, fx })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sqrt_two() {
        let g = |x: f64| x * x - 2.0;
        let r = find_root(g, Bracket::from_fn(g, 1.0, 2.0).unwrap(), 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cosine_root() {
        let r = find_root(f64::cos, Bracket::from_fn(f64::cos, 1.0, 2.0).unwrap(), 1e-13).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn invalid_bracket_rejected() {
        assert!(Bracket::from_fn(|x| x * x + 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn parabola_minimum() {
        let m = minimize_scalar(|x| (x - 3.0).powi(2), 0.0, 10.0, 1e-9).unwrap();
        assert!((m.x - 3.0).abs() < 1e-7);
    }

    #[test]
    fn cosh_minimum() {
        let m = minimize_scalar(f64::cosh, -1.0, 1.0, 1e-9).unwrap();
        assert!(m.x.abs() < 1e-6);
    }

    #[test]
    fn boundary_minimum_reported() {
        let r = minimize_scalar(|x| x, 0.0, 1.0, 1e-8);
        assert!(matches!(r, Err(CoreError::BoundaryMinimum { .. })));
    }

    proptest! {
        #[test]
        fn root_stays_inside_bracket(r in -5.0f64..5.0, w1 in 0.01f64..3.0, w2 in 0.01f64..3.0) {
            let g = |x: f64| (x - r).powi(3) + 0.1 * (x - r);
            let (lo, hi) = (r - w1, r + w2);
            let x = find_root(g, Bracket::from_fn(g, lo, hi).unwrap(), 1e-12).unwrap();
            prop_assert!(x >= lo && x <= hi);
            prop_assert!((x - r).abs() < 1e-10);
        }

        #[test]
        fn minimizer_stays_inside(c in -3.0f64..3.0, a in -10.0f64..-4.0, b in 4.0f64..10.0) {
            let m = brent_min(&|x: f64| (x - c).powi(2) + 0.3 * (x - c).powi(4), a, b, 1e-9).unwrap();
            prop_assert!(m.x >= a && m.x <= b);
            prop_assert!((m.x - c).abs() < 1e-6);
        }
    }
}
