//! Real roots of cubic polynomials.

use std::f64::consts::PI;

fn eval(c: [f64; 4], x: f64) -> (f64, f64) {
    let p = ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
    let dp = (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2];
    (p, dp)
}

fn polish(c: [f64; 4], mut x: f64) -> f64 {
    for _ in 0..3 {
        let (p, dp) = eval(c, x);
        if dp == 0.0 || p == 0.0 {
            break;
        }
        let xn = x - p / dp;
        if eval(c, xn).0.abs() < p.abs() {
            x = xn;
        } else {
            break;
        }
    }
    x
}

/// Real roots of `c3 x^3 + c2 x^2 + c1 x + c0`, sorted ascending, repeated by multiplicity.
///
/// When the discriminant is within rounding of zero the three-real-root branch is
/// taken, so near-double roots come back as a close pair rather than vanishing.
pub fn cubic_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    assert!(c3 != 0.0, "leading coefficient must be nonzero");
    let (a, b, c) = (c2 / c3, c1 / c3, c0 / c3);
    let shift = -a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let hq = 0.5 * q;
    let tp = p / 3.0;
    let disc = hq * hq + tp * tp * tp;
    let scale = (hq * hq).max(tp.abs().powi(3));
    let coeffs = [1.0, a, b, c];

    let mut roots = if scale == 0.0 || (p.abs() <= 1e-15 * (1.0 + a * a) && q.abs() <= 1e-15 * (1.0 + a.abs().powi(3))) {
        vec![shift; 3]
    } else if disc <= 1e-13 * scale && p < 0.0 {
        let r = (-tp).sqrt();
        let arg = (-hq / (r * r * r)).clamp(-1.0, 1.0);
        let phi = arg.acos();
        (0..3).map(|k| 2.0 * r * ((phi - 2.0 * PI * k as f64) / 3.0).cos() + shift).collect()
    } else {
        let sd = disc.max(0.0).sqrt();
        let t = (-hq + sd).cbrt() + (-hq - sd).cbrt();
        vec![t + shift]
    };
    for r in roots.iter_mut() {
        *r = polish(coeffs, *r);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triple_zero() {
        assert_eq!(cubic_roots(1.0, 0.0, 0.0, 0.0), vec![0.0; 3]);
    }

    #[test]
    fn one_two_three() {
        let r = cubic_roots(1.0, -6.0, 11.0, -6.0);
        for (x, e) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-12);
        }
    }

    #[test]
    fn corner_of_phase_plane_boundary() {
        // X^3 - tau X^2 + H X - K^2 at the corner of the admissible region
        let tau: f64 = 1.3;
        let (h, k2) = (tau * tau / 3.0, (tau / 3.0).powi(3));
        let r = cubic_roots(1.0, -tau, h, -k2);
        assert_eq!(r.len(), 3);
        for x in r {
            assert!((x - tau / 3.0).abs() < 1e-5);
        }
    }

    #[test]
    fn single_real_root() {
        let r = cubic_roots(1.0, 0.0, 1.0, 1.0);
        assert_eq!(r.len(), 1);
        assert!(eval([1.0, 0.0, 1.0, 1.0], r[0]).0.abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn residuals_small(c3 in prop_oneof![-3.0f64..-0.1, 0.1f64..3.0], c2 in -5.0f64..5.0, c1 in -5.0f64..5.0, c0 in -5.0f64..5.0) {
            let m = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
            for x in cubic_roots(c3, c2, c1, c0) {
                let p = ((c3 * x + c2) * x + c1) * x + c0;
                prop_assert!(p.abs() < 1e-10 * m * (1.0 + x.abs()).powi(3), "x={x} p={p}");
            }
        }

        #[test]
        fn recovers_distinct_roots(r1 in -4.0f64..-1.5, r2 in -1.0f64..1.0, r3 in 1.5f64..4.0) {
            let r = cubic_roots(1.0, -(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3, -r1 * r2 * r3);
            prop_assert_eq!(r.len(), 3);
            prop_assert!((r[0] - r1).abs() < 1e-10 && (r[1] - r2).abs() < 1e-10 && (r[2] - r3).abs() < 1e-10);
        }
    }
}
