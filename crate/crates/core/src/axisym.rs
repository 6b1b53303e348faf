//! Closed-form axisymmetric neutral curves and the critical eigenfunction.

use crate::error::{CoreError, Result};
use crate::kernels::linalg::{null_direction, CMat3};
use crate::kernels::quad::GaussLegendre;
use crate::kernels::roots::{find_root, minimize_scalar, Bracket};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Default number of uniform samples on [-1/2, 1/2].
pub const GRID_POINTS: usize = 2001;
/// Ceiling of the threshold scan.
pub const SCAN_CEILING: f64 = 1e7;
/// Multiplicative step of the threshold scan.
pub const SCAN_RATIO: f64 = 1.02;
/// Distance to a tan pole below which f1/f2 refuse to evaluate.
pub const POLE_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl std::str::FromStr for Parity {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(CoreError::Invalid(format!("unknown parity '{s}'"))),
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Exponents of the six modes `e^{±lambda_k x}` of the neutral problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalRoots {
    pub sigma: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub lambda: [Complex64; 3],
}

/// j = exp(2 pi i / 3).
pub fn cube_root_of_unity() -> Complex64 {
    Complex64::new(-0.5, 0.5 * SQRT3)
}

pub fn modal_roots(alpha: f64, taylor: f64) -> Result<ModalRoots> {
    let a2s = alpha * alpha;
    if !(alpha > 0.0) || !(taylor > a2s * a2s) {
        return Err(CoreError::Domain(format!(
            "need T > alpha^4 for a neutral mode (alpha = {alpha}, T = {taylor})"
        )));
    }
    let sigma = (taylor * a2s).cbrt();
    let b1 = (sigma - a2s).sqrt();
    let q = (a2s * a2s + a2s * sigma + sigma * sigma).sqrt();
    let a2 = ((q + a2s + 0.5 * sigma) * 0.5).sqrt();
    let b2 = -((q - a2s - 0.5 * sigma) * 0.5).sqrt();
    Ok(ModalRoots {
        sigma,
        b1,
        a2,
        b2,
        lambda: [Complex64::new(0.0, b1), Complex64::new(a2, b2), Complex64::new(a2, -b2)],
    })
}

struct Pieces {
    b1: f64,
    th: f64,
    sech: f64,
    cb2: f64,
    sb2: f64,
    p: f64,
    m: f64,
    c: f64,
    s: f64,
}

fn pieces(alpha: f64, taylor: f64) -> Result<Pieces> {
    let r = modal_roots(alpha, taylor)?;
    let (a2, b2) = (r.a2, r.b2);
    Ok(Pieces {
        b1: r.b1,
        th: a2.tanh(),
        sech: 1.0 / a2.cosh(),
        cb2: b2.cos(),
        sb2: b2.sin(),
        p: SQRT3 * b2 - a2,
        m: SQRT3 * a2 + b2,
        c: (0.5 * r.b1).cos(),
        s: (0.5 * r.b1).sin(),
    })
}

fn pole_check(pc: &Pieces) -> Result<()> {
    // |cos(b1/2)| approximates the distance of b1/2 to the nearest pole
    if pc.c.abs() < POLE_GUARD {
        return Err(CoreError::TanPole { dist: pc.c.abs() });
    }
    Ok(())
}

/// Even-parity dispersion function, divided by cosh(a2).
pub fn f1(alpha: f64, taylor: f64) -> Result<f64> {
    let pc = pieces(alpha, taylor)?;
    pole_check(&pc)?;
    let t = pc.s / pc.c;
    Ok(-pc.b1 * t * (1.0 + pc.cb2 * pc.sech) + pc.p * pc.th + pc.m * pc.sb2 * pc.sech)
}

/// Odd-parity dispersion function, divided by cosh(a2).
pub fn f2(alpha: f64, taylor: f64) -> Result<f64> {
    let pc = pieces(alpha, taylor)?;
    pole_check(&pc)?;
    let t = pc.s / pc.c;
    Ok(pc.b1 * (1.0 - pc.cb2 * pc.sech) + t * (pc.p * pc.th - pc.m * pc.sb2 * pc.sech))
}

/// `cos(b1/2) * f_parity`: same zeros as f1/f2 and free of tan poles.
pub fn scan_function(alpha: f64, taylor: f64, parity: Parity) -> Result<f64> {
    let pc = pieces(alpha, taylor)?;
    Ok(match parity {
        Parity::Even => {
            -pc.b1 * pc.s * (1.0 + pc.cb2 * pc.sech) + pc.c * (pc.p * pc.th + pc.m * pc.sb2 * pc.sech)
        }
        Parity::Odd => {
            pc.b1 * pc.c * (1.0 - pc.cb2 * pc.sech) + pc.s * (pc.p * pc.th - pc.m * pc.sb2 * pc.sech)
        }
    })
}

/// A point on an axisymmetric neutral curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeutralPoint {
    pub alpha: f64,
    pub taylor: f64,
    pub parity: Parity,
}

/// Smallest `T > alpha^4` on the neutral curve of the given parity.
pub fn neutral_taylor(alpha: f64, parity: Parity) -> Result<NeutralPoint> {
    if !(alpha > 0.0) {
        return Err(CoreError::Domain(format!("alpha = {alpha} must be positive")));
    }
    let g = |t: f64| scan_function(alpha, t, parity).unwrap_or(f64::NAN);
    let mut t0 = 1.001 * alpha.powi(4);
    let mut g0 = g(t0);
    while t0 < SCAN_CEILING {
        let t1 = t0 * SCAN_RATIO;
        let g1 = g(t1);
        if g0 == 0.0 {
            return Ok(NeutralPoint { alpha, taylor: t0, parity });
        }
        if g0 * g1 < 0.0 {
            let root = find_root(g, Bracket::new(t0, t1, g0, g1)?, 1e-12 * t1)?;
            let resid = g(root).abs();
            if resid > 1e-9 {
                return Err(CoreError::NoConvergence(format!("neutral root residual {resid:e}")));
            }
            return Ok(NeutralPoint { alpha, taylor: root, parity });
        }
        t0 = t1;
        g0 = g1;
    }
    Err(CoreError::NotFound(format!(
        "no {parity} neutral point below T = {SCAN_CEILING:e} at alpha = {alpha}"
    )))
}

/// Minimum of the neutral curve: `(alpha_c, T_c)`.
pub fn critical_point(parity: Parity) -> Result<(f64, f64)> {
    let (lo, hi) = match parity {
        Parity::Even => (2.0, 4.5),
        Parity::Odd => (4.0, 7.5),
    };
    let g = |a: f64| neutral_taylor(a, parity).map(|p| p.taylor).unwrap_or(f64::INFINITY);
    let m = minimize_scalar(g, lo, hi, 1e-7)?;
    Ok((m.x, m.fx))
}

/// Uniform grid with `n` points on [-1/2, 1/2]; the midpoint is exactly 0 for odd `n`.
pub fn standard_grid(n: usize) -> Vec<f64> {
    let h = 1.0 / (n - 1) as f64;
    (0..n).map(|k| if 2 * k + 1 == n { 0.0 } else { -0.5 + k as f64 * h }).collect()
}

/// Value and derivatives of the eigenfunction at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfPoint {
    /// u_x and its first four derivatives.
    pub ux: [f64; 5],
    /// u_y and its first two derivatives.
    pub uy: [f64; 3],
}

/// Even critical eigenfunction in modal form plus its samples on a uniform grid.
///
/// Normalized so that `u_y(0) = 1`; `u_z = (i/alpha) D u_x` is stored through its
/// imaginary part.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pub alpha: f64,
    pub taylor: f64,
    pub roots: ModalRoots,
    pub modal_coeffs: [Complex64; 3],
    pub grid: Vec<f64>,
    pub ux: Vec<f64>,
    pub uy: Vec<f64>,
    pub uz: Vec<f64>,
}

pub const NORMALIZATION: &str = "uy(0)=1";

fn uy_factor(alpha: f64, l: Complex64) -> Complex64 {
    1.0 / (alpha * alpha - l * l)
}

/// Boundary-trace matrix of the even modes at x = 1/2 (rows u_x, Du_x, u_y).
pub fn even_trace_matrix(alpha: f64, roots: &ModalRoots) -> CMat3 {
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (k, &l) in roots.lambda.iter().enumerate() {
        let ch = (0.5 * l).cosh();
        m[0][k] = ch;
        m[1][k] = l * (0.5 * l).sinh();
        m[2][k] = ch * uy_factor(alpha, l);
    }
    m
}

impl Eigenfunction {
    /// Build from modal coefficients, normalizing so that `u_y(0) = 1`.
    pub fn from_modal(alpha: f64, taylor: f64, coeffs: [Complex64; 3], n: usize) -> Result<Self> {
        let roots = modal_roots(alpha, taylor)?;
        let uy0: Complex64 =
            (0..3).map(|k| 2.0 * coeffs[k] * uy_factor(alpha, roots.lambda[k])).sum();
        if uy0.norm() == 0.0 {
            return Err(CoreError::Singular("u_y(0) vanishes; cannot normalize".into()));
        }
        let c = coeffs.map(|a| a / uy0);
        Ok(Self::assemble(alpha, taylor, roots, c, n))
    }

    fn assemble(alpha: f64, taylor: f64, roots: ModalRoots, c: [Complex64; 3], n: usize) -> Self {
        let mut ef = Self {
            alpha,
            taylor,
            roots,
            modal_coeffs: c,
            grid: standard_grid(n),
            ux: Vec::new(),
            uy: Vec::new(),
            uz: Vec::new(),
        };
        let pts: Vec<EfPoint> = ef.grid.iter().map(|&x| ef.eval(x)).collect();
        ef.ux = pts.iter().map(|p| p.ux[0]).collect();
        ef.uy = pts.iter().map(|p| p.uy[0]).collect();
        ef.uz = pts.iter().map(|p| p.ux[1] / alpha).collect();
        ef
    }

    /// Same shape, amplitude multiplied by `s` (no renormalization).
    pub fn scaled(&self, s: f64) -> Self {
        let c = self.modal_coeffs.map(|a| a * s);
        Self::assemble(self.alpha, self.taylor, self.roots, c, self.grid.len())
    }

    /// Same modal data resampled on an `n`-point grid.
    pub fn resampled(&self, n: usize) -> Self {
        Self::assemble(self.alpha, self.taylor, self.roots, self.modal_coeffs, n)
    }

    pub fn eval(&self, x: f64) -> EfPoint {
        let mut ux = [0.0; 5];
        let mut uy = [0.0; 3];
        for k in 0..3 {
            let l = self.roots.lambda[k];
            let a = self.modal_coeffs[k];
            let (ep, em) = ((l * x).exp(), (-l * x).exp());
            let f = uy_factor(self.alpha, l);
            let mut lp = Complex64::new(1.0, 0.0);
            for (d, slot) in ux.iter_mut().enumerate() {
                let sym = if d % 2 == 0 { ep + em } else { ep - em };
                let v = a * lp * sym;
                *slot += v.re;
                if d < 3 {
                    uy[d] += (v * f).re;
                }
                lp *= l;
            }
        }
        EfPoint { ux, uy }
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.grid.len() - 1) as f64
    }

    /// Integral over [-1/2, 1/2] of a functional of the analytic eigenfunction,
    /// one 4-point Gauss panel per grid cell.
    pub fn integrate(&self, g: impl Fn(f64, &EfPoint) -> f64) -> f64 {
        let gl = GaussLegendre::new(4);
        self.grid
            .windows(2)
            .map(|w| gl.mapped(w[0], w[1]).map(|(x, wt)| wt * g(x, &self.eval(x))).sum::<f64>())
            .sum()
    }
}

/// Critical eigenfunction at a point of the even neutral curve.
pub fn eigenfunction_at(alpha: f64, taylor: f64) -> Result<Eigenfunction> {
    eigenfunction_on_grid(alpha, taylor, GRID_POINTS)
}

pub fn eigenfunction_on_grid(alpha: f64, taylor: f64, n: usize) -> Result<Eigenfunction> {
    let roots = modal_roots(alpha, taylor)?;
    let m = even_trace_matrix(alpha, &roots);
    let nd = null_direction(&m);
    if nd.residual > 1e-6 {
        return Err(CoreError::Domain(format!(
            "(alpha, T) = ({alpha}, {taylor}) is not on the even neutral curve (trace residual {:e})",
            nd.residual
        )));
    }
    Eigenfunction::from_modal(alpha, taylor, nd.v, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    const AC: f64 = 3.116323555929377;
    const TC: f64 = 1707.7617771047196;

    #[test]
    fn modal_roots_at_quoted_point() {
        let r = modal_roots(3.117, 1708.0).unwrap();
        assert!((r.sigma - 25.5067).abs() < 1e-3);
        assert!((r.b1 - 3.97379).abs() < 1e-4);
        assert!((r.a2 - 5.19508).abs() < 1e-4);
        assert!((r.b2 + 2.12599).abs() < 1e-4);
    }

    #[test]
    fn modal_root_identities() {
        for &(a, t) in &[(1.0, 5.0), (3.117, 1708.0), (6.0, 20000.0), (0.4, 1e5)] {
            let r = modal_roots(a, t).unwrap();
            let a2s: f64 = a * a;
            assert!((r.b1 * r.b1 + a2s - r.sigma).abs() < 1e-12 * r.sigma);
            assert!((r.a2 * r.a2 - r.b2 * r.b2 - (a2s + 0.5 * r.sigma)).abs() < 1e-10 * r.sigma);
            let q2 = a2s * a2s + a2s * r.sigma + r.sigma * r.sigma;
            assert!(((r.a2 * r.a2 + r.b2 * r.b2).powi(2) - q2).abs() < 1e-10 * q2);
            assert_eq!(r.lambda[2], r.lambda[1].conj());
            let j = cube_root_of_unity();
            let lhs = (a2s - r.lambda[1] * r.lambda[1]).powi(2);
            let rhs = r.sigma * r.sigma * j * j;
            assert!((lhs - rhs).norm() < 1e-10 * r.sigma * r.sigma);
        }
    }

    #[test]
    fn below_alpha_fourth_is_rejected() {
        assert!(modal_roots(1.0, 1.0).is_err());
        assert!(modal_roots(2.0, 15.0).is_err());
        assert!(f1(1.0, 0.5).is_err());
    }

    #[test]
    fn f1_vanishes_at_critical_point() {
        assert!(f1(AC, TC).unwrap().abs() < 1e-9);
    }

    #[test]
    fn f1_brackets_threshold_at_three() {
        let (lo, hi) = (f1(3.0, 1500.0).unwrap(), f1(3.0, 2000.0).unwrap());
        assert!(lo * hi < 0.0);
    }

    #[test]
    fn f2_brackets_odd_threshold_at_three() {
        let t = neutral_taylor(3.0, Parity::Odd).unwrap().taylor;
        assert!(f2(3.0, t - 10.0).unwrap() * f2(3.0, t + 10.0).unwrap() < 0.0);
        assert!(t > 1708.0);
    }

    #[test]
    fn small_b1_limits() {
        let a = 2.0f64;
        let t = a.powi(4) * (1.0 + 1e-9);
        let r = modal_roots(a, t).unwrap();
        let (a2, b2, sech) = (r.a2, r.b2, 1.0 / r.a2.cosh());
        let tail = ((SQRT3 * b2 - a2) * a2.sinh() + (SQRT3 * a2 + b2) * b2.sin()) * sech;
        assert!((f1(a, t).unwrap() - tail).abs() < 1e-6);
        // f2 is linear in b1 near the boundary; slope from both terms
        let slope = (1.0 - b2.cos() * sech)
            + 0.5 * ((SQRT3 * b2 - a2) * a2.tanh() - (SQRT3 * a2 + b2) * b2.sin() * sech);
        assert!((f2(a, t).unwrap() / r.b1 - slope).abs() < 1e-6);
    }

    #[test]
    fn tan_pole_is_flagged() {
        // b1 = pi exactly: sigma = alpha^2 + pi^2, T = sigma^3 / alpha^2
        let a = 3.0f64;
        let sigma = a * a + std::f64::consts::PI.powi(2);
        let t = sigma.powi(3) / (a * a);
        assert!(matches!(f1(a, t), Err(CoreError::TanPole { .. })));
        assert!(scan_function(a, t, Parity::Even).unwrap().is_finite());
    }

    #[test]
    fn neutral_threshold_at_quoted_alpha() {
        let p = neutral_taylor(3.117, Parity::Even).unwrap();
        assert!((p.taylor - 1707.7619).abs() < 1e-3);
        let q = neutral_taylor(3.117, Parity::Odd).unwrap();
        assert!((q.taylor - 24982.08).abs() < 0.05);
    }

    #[test]
    fn parity_ordering_on_grid() {
        for k in 0..=8 {
            let a = 2.0 + 0.5 * k as f64;
            let e = neutral_taylor(a, Parity::Even).unwrap();
            let o = neutral_taylor(a, Parity::Odd).unwrap();
            assert!(o.taylor > e.taylor, "alpha = {a}");
            assert!(e.taylor > a.powi(4));
        }
    }

    #[test]
    fn tabulated_thresholds() {
        // independent values from a bracketing scan of the unrescaled functions
        let table = [(2.0, 2177.41, 47005.6), (4.0, 1879.26, 19684.6), (6.0, 3417.98, 17933.0)];
        for (a, e, o) in table {
            assert!((neutral_taylor(a, Parity::Even).unwrap().taylor - e).abs() < 0.01);
            assert!((neutral_taylor(a, Parity::Odd).unwrap().taylor - o).abs() < 0.1);
        }
    }

    #[test]
    fn divergence_toward_extreme_wavenumbers() {
        let lo = neutral_taylor(0.5, Parity::Even).unwrap().taylor;
        let hi = neutral_taylor(8.0, Parity::Even).unwrap().taylor;
        assert!((lo - 21009.80).abs() < 0.05 && (hi - 7084.509).abs() < 0.01);
        assert!(lo > 4.0 * TC && hi > 4.0 * TC);
    }

    #[test]
    fn critical_point_even() {
        let (a, t) = critical_point(Parity::Even).unwrap();
        assert!((a - AC).abs() < 1e-4);
        assert!((t - TC).abs() < 1e-6);
    }

    #[test]
    fn neutral_curve_convex_on_grid() {
        let ts: Vec<f64> = (0..=10)
            .map(|k| neutral_taylor(2.0 + 0.25 * k as f64, Parity::Even).unwrap().taylor)
            .collect();
        for w in ts.windows(3) {
            assert!(w[0] - 2.0 * w[1] + w[2] > 0.0);
        }
    }

    #[test]
    fn no_common_zero_of_f1_and_f2() {
        for k in 0..=8 {
            let a = 2.0 + 0.5 * k as f64;
            let e = neutral_taylor(a, Parity::Even).unwrap().taylor;
            assert!(scan_function(a, e, Parity::Odd).unwrap().abs() > 1e-3);
        }
    }

    #[test]
    fn eigenfunction_boundary_and_parity() {
        let ef = eigenfunction_at(AC, TC).unwrap();
        for x in [-0.5, 0.5] {
            let p = ef.eval(x);
            assert!(p.ux[0].abs() < 1e-8 && p.ux[1].abs() < 1e-8 && p.uy[0].abs() < 1e-8);
        }
        let n = ef.grid.len();
        for i in 0..n {
            let j = n - 1 - i;
            assert!((ef.ux[i] - ef.ux[j]).abs() < 1e-10);
            assert!((ef.uy[i] - ef.uy[j]).abs() < 1e-10);
            assert!((ef.uz[i] + ef.uz[j]).abs() < 1e-10);
        }
        assert!((ef.uy[n / 2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenfunction_is_real() {
        let ef = eigenfunction_at(AC, TC).unwrap();
        let c = ef.modal_coeffs;
        assert!((c[2] - c[1].conj()).norm() < 1e-12 * c[1].norm());
        assert!(c[0].im.abs() < 1e-12 * c[0].norm());
    }

    #[test]
    fn off_curve_is_rejected() {
        assert!(eigenfunction_at(AC, 1500.0).is_err());
    }

    #[test]
    fn normalization_invariance() {
        let ef = eigenfunction_at(AC, TC).unwrap();
        let s = Complex64::new(-2.5, 1.7);
        let g = Eigenfunction::from_modal(AC, TC, ef.modal_coeffs.map(|a| a * s), GRID_POINTS)
            .unwrap();
        for i in 0..ef.grid.len() {
            assert!((ef.ux[i] - g.ux[i]).abs() < 1e-12 * (1.0 + ef.ux[i].abs()));
            assert!((ef.uy[i] - g.uy[i]).abs() < 1e-12);
        }
    }

    /// Sixth-order central difference of order `d` on samples spaced `h`.
    fn fd(f: &dyn Fn(f64) -> f64, x: f64, h: f64, d: usize) -> f64 {
        // weights for stencils of width 9 (first..fourth derivatives)
        let w: &[f64] = match d {
            2 => &[-1.0 / 560.0, 8.0 / 315.0, -1.0 / 5.0, 8.0 / 5.0, -205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0],
            4 => &[7.0 / 240.0, -2.0 / 5.0, 169.0 / 60.0, -122.0 / 15.0, 91.0 / 8.0, -122.0 / 15.0, 169.0 / 60.0, -2.0 / 5.0, 7.0 / 240.0],
            _ => unreachable!(),
        };
        w.iter().enumerate().map(|(k, c)| c * f(x + (k as f64 - 4.0) * h)).sum::<f64>() / h.powi(d as i32)
    }

    #[test]
    fn eigenvalue_system_residual_by_finite_differences() {
        let ef = eigenfunction_at(AC, TC).unwrap();
        let a2 = AC * AC;
        let h = 8.0 * ef.spacing();
        let ux = |x: f64| ef.eval(x).ux[0];
        let uy = |x: f64| ef.eval(x).uy[0];
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in (0..ef.grid.len()).step_by(10) {
            let x = ef.grid[i];
            if x.abs() > 0.5 - 4.0 * h {
                continue;
            }
            let r = a2 * a2 * ux(x) - 2.0 * a2 * fd(&ux, x, h, 2) + fd(&ux, x, h, 4) - a2 * TC * uy(x);
            worst = worst.max(r.abs());
            scale = scale.max((a2 * TC * uy(x)).abs());
            let r2 = a2 * uy(x) - fd(&uy, x, h, 2) - ux(x);
            worst = worst.max(r2.abs() * a2 * TC);
        }
        assert!(worst < 1e-5 * scale, "residual {worst:e} vs {scale:e}");
    }
}
