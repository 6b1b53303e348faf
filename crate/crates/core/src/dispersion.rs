//! Non-axisymmetric shooting problem: the boundary determinant, critical
//! Taylor numbers over (alpha, B), the leading eigenvalue and the fit of its
//! expansion near onset.

use crate::error::{CoreError, Result};
use crate::kernels::fit::{polyfit, Monomial, Sample};
use crate::kernels::linalg::{det3, CMat3};
use crate::kernels::ode::{Dopri, OdeControl};
use crate::kernels::roots::minimize_scalar;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type C = Complex64;
const I: C = C::new(0.0, 1.0);

/// Accepted size of the column-normalized determinant at a neutral point.
pub const NEUTRAL_TOL: f64 = 1e-7;
const SCAN_RATIO: f64 = 1.02;
const SCAN_CEILING: f64 = 1e7;

/// Parameters of one shooting problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingParams {
    pub alpha: f64,
    /// B = beta * R.
    pub bbeta: f64,
    pub taylor: f64,
    pub lambda: C,
}

impl ShootingParams {
    pub fn new(alpha: f64, bbeta: f64, taylor: f64, lambda: C) -> Self {
        Self { alpha, bbeta, taylor, lambda }
    }

    fn check(&self) -> Result<()> {
        let ok = self.alpha > 0.0
            && self.bbeta.is_finite()
            && self.taylor.is_finite()
            && self.lambda.re.is_finite()
            && self.lambda.im.is_finite();
        if !ok {
            return Err(CoreError::Domain(format!("invalid shooting parameters {self:?}")));
        }
        Ok(())
    }
}

/// Companion matrix of the first-order system for (u_x, Du_x, D2u_x, D3u_x, u_y, Du_y).
pub fn rhs_matrix(x: f64, p: &ShootingParams) -> [[C; 6]; 6] {
    let a2 = p.alpha * p.alpha;
    let s = p.lambda + a2 - I * (p.bbeta * x);
    let z = C::new(0.0, 0.0);
    let o = C::new(1.0, 0.0);
    [
        [z, o, z, z, z, z],
        [z, z, o, z, z, z],
        [z, z, z, o, z, z],
        [-s * a2, z, s + a2, z, C::new(p.taylor * a2, 0.0), z],
        [z, z, z, z, z, o],
        [-o, z, z, z, s, z],
    ]
}

fn shoot_rhs(p: ShootingParams) -> impl Fn(f64, &Vec<C>) -> Vec<C> {
    let a2 = p.alpha * p.alpha;
    let ta2 = p.taylor * a2;
    move |x: f64, y: &Vec<C>| {
        let s = p.lambda + a2 - I * (p.bbeta * x);
        let mut d = vec![C::new(0.0, 0.0); y.len()];
        for (u, du) in y.chunks_exact(6).zip(d.chunks_exact_mut(6)) {
            du[0] = u[1];
            du[1] = u[2];
            du[2] = u[3];
            du[3] = -s * a2 * u[0] + (s + a2) * u[2] + ta2 * u[4];
            du[4] = u[5];
            du[5] = s * u[4] - u[0];
        }
        d
    }
}

/// Boundary determinant, raw and with each trace column scaled to unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOutcome {
    pub raw: C,
    pub scaled: C,
}

/// Propagate the three canonical solutions (unit vectors 3, 4, 6 at x = -1/2).
pub fn shoot(p: &ShootingParams, ctrl: OdeControl) -> Result<ShootOutcome> {
    p.check()?;
    let mut y = vec![C::new(0.0, 0.0); 18];
    y[2] = C::new(1.0, 0.0);
    y[6 + 3] = C::new(1.0, 0.0);
    y[12 + 5] = C::new(1.0, 0.0);
    let mut d = Dopri::new(shoot_rhs(*p), ctrl);
    d.advance(-0.5, 0.5, &mut y)?;
    let mut m: CMat3 = [[C::new(0.0, 0.0); 3]; 3];
    let mut scaled = m;
    for j in 0..3 {
        let col = [y[6 * j], y[6 * j + 1], y[6 * j + 4]];
        let n = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for i in 0..3 {
            m[i][j] = col[i];
            scaled[i][j] = col[i] / n;
        }
    }
    let out = ShootOutcome { raw: det3(&m), scaled: det3(&scaled) };
    if !(out.raw.re.is_finite() && out.raw.im.is_finite()) {
        return Err(CoreError::NonFinite("shooting determinant".into()));
    }
    Ok(out)
}

/// Column-normalized boundary determinant with the default integrator tolerances.
pub fn shoot_delta(p: &ShootingParams) -> Result<C> {
    Ok(shoot(p, OdeControl::default())?.scaled)
}

/// Smallest neutral Taylor number at fixed (alpha, B).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalSurfacePoint {
    pub alpha: f64,
    pub bbeta: f64,
    pub taylor_crit: f64,
    pub residual: f64,
}

fn delta_sq(alpha: f64, bbeta: f64, t: f64) -> f64 {
    shoot_delta(&ShootingParams::new(alpha, bbeta, t, C::new(0.0, 0.0)))
        .map(|d| d.norm_sqr())
        .unwrap_or(f64::NAN)
}

/// Scan |delta(0; alpha, B, T)|^2 upward from alpha^4 and return the first
/// local minimum that is a genuine zero.
pub fn critical_taylor(alpha: f64, bbeta: f64) -> Result<CriticalSurfacePoint> {
    if !(alpha > 0.0) {
        return Err(CoreError::Domain(format!("alpha = {alpha} must be positive")));
    }
    let g = |t: f64| delta_sq(alpha, bbeta, t);
    let mut ts = [0.0; 3];
    let mut gs = [0.0; 3];
    ts[1] = 1.001 * alpha.powi(4);
    gs[1] = g(ts[1]);
    ts[2] = ts[1] * SCAN_RATIO;
    gs[2] = g(ts[2]);
    while ts[2] < SCAN_CEILING {
        ts.rotate_left(1);
        gs.rotate_left(1);
        ts[2] = ts[1] * SCAN_RATIO;
        gs[2] = g(ts[2]);
        if gs.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite(format!("|delta|^2 near T = {}", ts[1])));
        }
        if gs[1] < gs[0] && gs[1] <= gs[2] {
            let m = match minimize_scalar(g, ts[0], ts[2], 1e-11 * ts[2]) {
                Ok(m) => m,
                Err(CoreError::BoundaryMinimum { .. }) => continue,
                Err(e) => return Err(e),
            };
            let residual = m.fx.sqrt();
            if residual < NEUTRAL_TOL {
                return Ok(CriticalSurfacePoint { alpha, bbeta, taylor_crit: m.x, residual });
            }
        }
    }
    Err(CoreError::NotFound(format!(
        "no neutral point below T = {SCAN_CEILING:e} at (alpha, B) = ({alpha}, {bbeta})"
    )))
}

/// Minimum over alpha of the critical Taylor number at one B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMinimum {
    pub bbeta: f64,
    pub alpha_c: f64,
    pub taylor_c: f64,
}

#[derive(Debug, Clone)]
pub struct SurfaceRow {
    pub alpha: f64,
    pub bbeta: f64,
    pub point: std::result::Result<CriticalSurfacePoint, CoreError>,
}

#[derive(Debug, Clone)]
pub struct SurfaceTable {
    pub rows: Vec<SurfaceRow>,
    pub minima: Vec<std::result::Result<SurfaceMinimum, CoreError>>,
}

/// Minimize `critical_taylor(., bbeta)` over alpha in `[lo, hi]`.
pub fn surface_minimum(bbeta: f64, lo: f64, hi: f64) -> Result<SurfaceMinimum> {
    let g = |a: f64| critical_taylor(a, bbeta).map(|p| p.taylor_crit).unwrap_or(f64::INFINITY);
    let m = minimize_scalar(g, lo, hi, 1e-7)?;
    Ok(SurfaceMinimum { bbeta, alpha_c: m.x, taylor_c: m.fx })
}

/// Critical Taylor numbers over a grid plus the per-B minimum over alpha.
pub fn critical_surface(alpha_grid: &[f64], bbeta_grid: &[f64]) -> Result<SurfaceTable> {
    if alpha_grid.is_empty() || bbeta_grid.is_empty() {
        return Err(CoreError::Invalid("empty grid".into()));
    }
    let mut rows = Vec::new();
    let mut minima = Vec::new();
    for &b in bbeta_grid {
        let start = rows.len();
        for &a in alpha_grid {
            rows.push(SurfaceRow { alpha: a, bbeta: b, point: critical_taylor(a, b) });
        }
        let slice = &rows[start..];
        let best = slice
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.point.as_ref().ok().map(|p| (i, p.taylor_crit)))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        let min = match best {
            None => Err(CoreError::NotFound(format!("no surface point at B = {b}"))),
            Some((i, t)) if i == 0 || i + 1 == slice.len() => {
                // grid edge: report the grid value, the refinement would leave the grid
                Ok(SurfaceMinimum { bbeta: b, alpha_c: slice[i].alpha, taylor_c: t })
            }
            Some((i, _)) => surface_minimum(b, slice[i - 1].alpha, slice[i + 1].alpha),
        };
        minima.push(min);
    }
    Ok(SurfaceTable { rows, minima })
}

/// Newton iteration on the raw determinant in lambda.
pub fn leading_eigenvalue(alpha: f64, bbeta: f64, taylor: f64, guess: C) -> Result<f64> {
    let z = newton_lambda(alpha, bbeta, taylor, guess)?;
    if z.im.abs() >= 1e-6 * (1.0 + z.re.abs()) {
        return Err(CoreError::SymmetryViolation { re: z.re, im: z.im });
    }
    Ok(z.re)
}

/// Complex root of the raw determinant in lambda near `guess`.
pub fn newton_lambda(alpha: f64, bbeta: f64, taylor: f64, guess: C) -> Result<C> {
    let ctrl = OdeControl::with_tol(1e-11);
    let delta = |l: C| shoot(&ShootingParams::new(alpha, bbeta, taylor, l), ctrl).map(|o| o.raw);
    let mut l = guess;
    for _ in 0..60 {
        let h = 1e-5 * (1.0 + l.norm());
        let d0 = delta(l)?;
        let dp = (delta(l + h)? - delta(l - h)?) / (2.0 * h);
        if dp.norm() == 0.0 {
            return Err(CoreError::NoConvergence("flat determinant".into()));
        }
        let step = d0 / dp;
        let step = if step.norm() > 1.0 + l.norm() { step * ((1.0 + l.norm()) / step.norm()) } else { step };
        l -= step;
        if step.norm() < 1e-12 * (1.0 + l.norm()) {
            return Ok(l);
        }
    }
    Err(CoreError::NoConvergence(format!("lambda Newton from {guess} at T = {taylor}")))
}

/// Leading eigenvalue at `taylor`, continued in T from the neutral point where it vanishes.
pub fn leading_eigenvalue_continued(alpha: f64, bbeta: f64, taylor: f64) -> Result<f64> {
    let t0 = critical_taylor(alpha, bbeta)?.taylor_crit;
    let n = (((taylor - t0).abs() / (0.02 * t0)).ceil() as usize).max(1);
    let mut prev: (f64, f64) = (t0, 0.0);
    let mut slope = 0.0;
    for k in 1..=n {
        let t = t0 + (taylor - t0) * k as f64 / n as f64;
        let guess = prev.1 + slope * (t - prev.0);
        let l = leading_eigenvalue(alpha, bbeta, t, C::new(guess, 0.0))?;
        slope = (l - prev.1) / (t - prev.0);
        prev = (t, l);
    }
    Ok(prev.1)
}

/// Half-widths of the symmetric sample box around the critical point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleBox {
    pub tau: f64,
    pub alpha_hat: f64,
    pub bbeta: f64,
}

impl SampleBox {
    pub fn default_for(taylor_c: f64) -> Self {
        Self { tau: 0.02 * taylor_c, alpha_hat: 0.4, bbeta: 1.0 }
    }
}

/// Coefficients of the leading eigenvalue near onset, in
/// `lambda0 = a3 tau + a4 B^2 + a6 ah^2 + a7 B^2 ah + a9 tau ah + a10 tau^2`
/// with `ah = alpha^2 - alpha_c^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionFit {
    pub alpha_c: f64,
    pub taylor_c: f64,
    pub a3: f64,
    pub a4: f64,
    pub a6: f64,
    pub a7: f64,
    pub a9: f64,
    pub a10: f64,
    pub b4: f64,
    pub b6: f64,
    pub fit_residual: f64,
    pub max_lambda: f64,
    /// Coefficient of a linear `ah` term when the basis is widened by {1, ah}.
    pub linear_alpha_term: f64,
    pub sample_box: SampleBox,
}

const NODES: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

fn fit_basis() -> Vec<Monomial> {
    // inputs are (tau, B, ah)
    vec![
        Monomial(vec![1, 0, 0]),
        Monomial(vec![0, 2, 0]),
        Monomial(vec![0, 0, 2]),
        Monomial(vec![0, 2, 1]),
        Monomial(vec![1, 0, 1]),
        Monomial(vec![2, 0, 0]),
    ]
}

/// Leading-eigenvalue samples on the symmetric box, continued in tau from tau = 0.
pub fn sample_leading_eigenvalues(center: (f64, f64), bx: SampleBox) -> Result<Vec<Sample>> {
    let (alpha_c, taylor_c) = center;
    let mut out = Vec::new();
    for &bn in &[0.0, 0.5, 1.0] {
        let b = bn * bx.bbeta;
        for &an in &NODES {
            let ah = an * bx.alpha_hat;
            let alpha = (alpha_c * alpha_c + ah).sqrt();
            let l0 = leading_eigenvalue(alpha, b, taylor_c, C::new(0.0, 0.0))?;
            out.push(Sample { inputs: vec![0.0, b, ah], value: l0 });
            for dir in [-1.0, 1.0] {
                let mut prev = (0.0, l0);
                let mut slope = 0.0;
                for &tn in &[0.5, 1.0] {
                    let tau = dir * tn * bx.tau;
                    let guess = prev.1 + slope * (tau - prev.0);
                    let l = leading_eigenvalue(alpha, b, taylor_c + tau, C::new(guess, 0.0))?;
                    slope = (l - prev.1) / (tau - prev.0);
                    prev = (tau, l);
                    out.push(Sample { inputs: vec![tau, b, ah], value: l });
                }
            }
        }
    }
    Ok(out)
}

/// Fit the six-term expansion; shrinks the box (up to three times) until the
/// model residual is below 1% of the largest sampled |lambda0|.
pub fn fit_dispersion(center: (f64, f64), bx: SampleBox) -> Result<DispersionFit> {
    let mut bx = bx;
    let mut last = 0.0;
    for _ in 0..4 {
        let samples = sample_leading_eigenvalues(center, bx)?;
        let fit = fit_samples(center, bx, &samples)?;
        last = fit.fit_residual / fit.max_lambda;
        if last < 0.01 {
            return Ok(fit);
        }
        bx = SampleBox { tau: 0.5 * bx.tau, alpha_hat: 0.5 * bx.alpha_hat, bbeta: 0.5 * bx.bbeta };
    }
    Err(CoreError::BoxTooLarge(last))
}

/// Least-squares fit of precomputed samples (inputs `(tau, B, ah)`).
pub fn fit_samples(center: (f64, f64), bx: SampleBox, samples: &[Sample]) -> Result<DispersionFit> {
    let basis = fit_basis();
    let f = polyfit(samples, &basis)?;
    if f.ill_conditioned {
        return Err(CoreError::Singular(format!("dispersion fit condition {:e}", f.condition)));
    }
    let mut wide = basis.clone();
    wide.push(Monomial(vec![0, 0, 0]));
    wide.push(Monomial(vec![0, 0, 1]));
    let fw = polyfit(samples, &wide)?;
    let c = &f.coeffs;
    let max_lambda = samples.iter().fold(0.0f64, |m, s| m.max(s.value.abs()));
    let fit = DispersionFit {
        alpha_c: center.0,
        taylor_c: center.1,
        a3: c[0],
        a4: c[1],
        a6: c[2],
        a7: c[3],
        a9: c[4],
        a10: c[5],
        b4: -c[1],
        b6: -c[2],
        fit_residual: f.rms_residual,
        max_lambda,
        linear_alpha_term: fw.coeffs[7],
        sample_box: bx,
    };
    if !(fit.a3 > 0.0 && fit.a4 < 0.0 && fit.a6 < 0.0) {
        return Err(CoreError::Invalid(format!(
            "fitted signs violate a3 > 0, a4 < 0, a6 < 0: {} {} {}",
            fit.a3, fit.a4, fit.a6
        )));
    }
    Ok(fit)
}

/// Critical shift of (alpha^2, T) with B from the fitted expansion.
pub fn predicted_critical_shift(fit: &DispersionFit, bbeta: f64) -> (f64, f64) {
    let b2 = bbeta * bbeta;
    let (a3, a7, a9, a10, b4, b6, a4) = (fit.a3, fit.a7, fit.a9, fit.a10, fit.b4, fit.b6, fit.a4);
    let shift = (a7 / (2.0 * b6) + a9 * b4 / (2.0 * b6 * a3)) * b2;
    let quartic = ((a3 * a7 + a9 * b4).powi(2) + 4.0 * a10 * b6 * a4 * a4) / (4.0 * b6 * a3.powi(3));
    (shift, fit.taylor_c + b4 / a3 * b2 - quartic * b2 * b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axisym::{critical_point, f1, neutral_taylor, Parity};
    use proptest::prelude::*;

    const AC: f64 = 3.116323555929377;
    const TC: f64 = 1707.7617771047196;

    fn p(a: f64, b: f64, t: f64, l: C) -> ShootingParams {
        ShootingParams::new(a, b, t, l)
    }

    #[test]
    fn matrix_real_for_axisymmetric_real_lambda() {
        let m = rhs_matrix(0.3, &p(3.0, 0.0, 1700.0, C::new(0.2, 0.0)));
        assert!(m.iter().flatten().all(|z| z.im == 0.0));
        // fourth row: D4 ux = -(l+a^2) a^2 ux + (l + 2a^2) D2 ux + T a^2 uy
        assert_eq!(m[3][0].re, -(0.2 + 9.0) * 9.0);
        assert_eq!(m[3][2].re, 0.2 + 18.0);
        assert_eq!(m[3][4].re, 1700.0 * 9.0);
    }

    #[test]
    fn uy_row_by_hand() {
        let pp = p(2.5, 1.3, 900.0, C::new(-0.1, 0.4));
        for x in [-0.5, -0.1, 0.37] {
            let m = rhs_matrix(x, &pp);
            let s = C::new(-0.1 + 6.25, 0.4 - 1.3 * x);
            assert!((m[5][4] - s).norm() < 1e-14);
            assert_eq!(m[5][0], C::new(-1.0, 0.0));
        }
    }

    #[test]
    fn reflection_conjugates_matrix() {
        let pp = p(3.1, 0.7, 1750.0, C::new(0.05, 0.0));
        let mut q = pp;
        q.bbeta = -pp.bbeta;
        let (a, b) = (rhs_matrix(0.2, &pp), rhs_matrix(0.2, &q));
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(a[i][j], b[i][j].conj());
            }
        }
    }

    #[test]
    fn determinant_vanishes_at_critical_point() {
        let d = shoot_delta(&p(AC, 0.0, TC, C::new(0.0, 0.0))).unwrap();
        assert!(d.norm() < NEUTRAL_TOL, "{d}");
    }

    #[test]
    fn conjugation_symmetry_in_b() {
        let d1 = shoot_delta(&p(3.0, 1.5, 1750.0, C::new(0.01, 0.0))).unwrap();
        let d2 = shoot_delta(&p(3.0, -1.5, 1750.0, C::new(0.01, 0.0))).unwrap();
        assert!((d1 - d2.conj()).norm() < 1e-10);
    }

    #[test]
    fn cauchy_riemann() {
        let ctrl = OdeControl::with_tol(1e-12);
        for &(a, b, t, l) in &[(3.1, 0.8, 1720.0, C::new(0.01, 0.02)), (2.6, 2.0, 2000.0, C::new(-0.3, 0.1))] {
            let d = |z: C| shoot(&p(a, b, t, z), ctrl).unwrap().raw;
            let h = 1e-4;
            let dx = (d(l + h) - d(l - h)) / (2.0 * h);
            let dy = (d(l + I * h) - d(l - I * h)) / (2.0 * h);
            assert!((dy - I * dx).norm() < 1e-6 * dx.norm(), "{dx} {dy}");
        }
    }

    #[test]
    fn axisymmetric_zeros_match_closed_form() {
        for a in [2.0, 3.0, 4.0] {
            let ct = critical_taylor(a, 0.0).unwrap();
            let e = neutral_taylor(a, Parity::Even).unwrap().taylor;
            assert!((ct.taylor_crit - e).abs() < 1e-4 * e);
            // the odd threshold is a zero of delta as well
            let o = neutral_taylor(a, Parity::Odd).unwrap().taylor;
            assert!(shoot_delta(&p(a, 0.0, o, C::new(0.0, 0.0))).unwrap().norm() < 1e-6);
        }
    }

    #[test]
    fn critical_value_near_classical() {
        let ct = critical_taylor(3.117, 0.0).unwrap();
        assert!((ct.taylor_crit - 1708.0).abs() < 3.0);
        assert!(ct.residual < NEUTRAL_TOL);
    }

    #[test]
    fn surface_increasing_and_even_in_b() {
        let mut prev = 0.0;
        for b in [0.0, 0.5, 1.0, 2.0] {
            let t = critical_taylor(AC, b).unwrap().taylor_crit;
            assert!(t > prev);
            prev = t;
        }
        let tp = critical_taylor(AC, 1.5).unwrap().taylor_crit;
        let tm = critical_taylor(AC, -1.5).unwrap().taylor_crit;
        assert!((tp - tm).abs() < 1e-6 * tp);
    }

    #[test]
    fn leading_eigenvalue_zero_at_onset() {
        let l = leading_eigenvalue(AC, 0.0, TC, C::new(0.01, 0.0)).unwrap();
        assert!(l.abs() < 1e-6);
    }

    #[test]
    fn leading_eigenvalue_negative_at_alpha_fourth() {
        for a in [2.0, AC] {
            let l = leading_eigenvalue_continued(a, 0.0, a.powi(4)).unwrap();
            assert!(l < 0.0, "alpha = {a}: {l}");
        }
    }

    #[test]
    fn leading_eigenvalue_changes_sign_at_threshold() {
        for b in [0.0, 1.0] {
            let t = critical_taylor(3.0, b).unwrap().taylor_crit;
            let lo = leading_eigenvalue(3.0, b, t - 5.0, C::new(0.0, 0.0)).unwrap();
            let hi = leading_eigenvalue(3.0, b, t + 5.0, C::new(0.0, 0.0)).unwrap();
            assert!(lo < 0.0 && hi > 0.0);
        }
    }

    #[test]
    fn growth_rate_slope_matches_finite_differences() {
        // leading coefficient of the T-dependence, central differences
        let lp = leading_eigenvalue(AC, 0.0, TC + 10.0, C::new(0.0, 0.0)).unwrap();
        let lm = leading_eigenvalue(AC, 0.0, TC - 10.0, C::new(0.0, 0.0)).unwrap();
        assert!((lp - 0.0762).abs() < 5e-4 && (lm + 0.0762).abs() < 5e-4);
    }

    #[test]
    fn critical_point_consistent_with_closed_form() {
        let (a, t) = critical_point(Parity::Even).unwrap();
        assert!(f1(a, t).unwrap().abs() < 1e-9);
    }

    #[test]
    fn predicted_shift_trivial_cases() {
        let fit = DispersionFit {
            alpha_c: AC,
            taylor_c: TC,
            a3: 0.0076,
            a4: -0.0006,
            a6: -0.05,
            a7: 0.001,
            a9: 0.0002,
            a10: -1e-6,
            b4: 0.0006,
            b6: 0.05,
            fit_residual: 0.0,
            max_lambda: 1.0,
            linear_alpha_term: 0.0,
            sample_box: SampleBox::default_for(TC),
        };
        assert_eq!(predicted_critical_shift(&fit, 0.0), (0.0, TC));
        let eps = 1e-3;
        let (_, t) = predicted_critical_shift(&fit, eps);
        assert!(((t - TC) / (eps * eps) - fit.b4 / fit.a3).abs() < 1e-4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn eigenvalues_real_and_even_in_b(b in 0.0f64..1.0, tau in -30.0f64..30.0, ah in -0.4f64..0.4) {
            let a = (AC * AC + ah).sqrt();
            let lp = newton_lambda(a, b, TC + tau, C::new(0.0, 0.0)).unwrap();
            prop_assert!(lp.im.abs() < 1e-6 * (1.0 + lp.re.abs()));
            let lm = leading_eigenvalue(a, -b, TC + tau, C::new(0.0, 0.0)).unwrap();
            prop_assert!((lp.re - lm).abs() < 1e-8);
        }
    }
}
