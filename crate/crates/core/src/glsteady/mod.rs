//! Steady solutions of the amplitude equation.
//!
//! Phase-plane work uses the scaled form `A'' = -tau A + 2 A |A|^2`, with
//! `A = rho e^{i theta}`, `rho^2 theta' = K` and
//! `rho'^2 = u(rho) = -K^2/rho^2 + rho^4 - tau rho^2 + H`. In `X = rho^2` the
//! turning points are the roots of `f(X) = X^3 - tau X^2 + H X - K^2`.

mod profile;

pub use profile::{build_profile, conservation_drift, homoclinic_orbit, reconstruct_profile, Drift, Profile, Start};

use crate::error::{CoreError, Result};
use crate::kernels::cubic::cubic_roots;
use crate::kernels::quad::GaussLegendre;
use crate::kernels::roots::{find_root, Bracket};
use crate::landau::GLCoefficients;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Scaled coefficients: `y = R k y_hat`, `A = k A_hat`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledGLParams {
    pub a0: f64,
    pub c0: f64,
    pub tau: f64,
    pub k: f64,
    pub tau_tilde: f64,
    pub b4: f64,
    pub reynolds: f64,
    pub beta: f64,
}

pub fn rescale(gl: &GLCoefficients) -> Result<ScaledGLParams> {
    if !(gl.b4 > 0.0 && gl.c > 0.0 && gl.a3 > 0.0 && gl.reynolds > 0.0) {
        return Err(CoreError::Domain("rescale needs a3, b4, c, R > 0".into()));
    }
    let a0 = gl.a3 / gl.b4;
    let c0 = gl.c / (2.0 * gl.b4);
    let k = c0.powf(-0.25);
    Ok(ScaledGLParams {
        a0,
        c0,
        tau: gl.tau,
        k,
        tau_tilde: a0 * gl.tau * k * k,
        b4: gl.b4,
        reynolds: gl.reynolds,
        beta: gl.beta,
    })
}

impl ScaledGLParams {
    pub fn unscale(&self) -> GLCoefficients {
        GLCoefficients {
            a3: self.a0 * self.b4,
            c: 2.0 * self.c0 * self.b4,
            b4: self.b4,
            reynolds: self.reynolds,
            tau: self.tau,
            beta: self.beta,
        }
    }

    /// Azimuthal wavenumber in scaled units.
    pub fn scaled_wavenumber(&self, beta: f64) -> f64 {
        beta * self.reynolds * self.k
    }

    pub fn scaled_y(&self, y: f64) -> f64 {
        y / (self.reynolds * self.k)
    }

    pub fn scaled_modulus_sq(&self, rho_sq: f64) -> f64 {
        rho_sq / (self.k * self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Tvf,
    ConstantModulus,
    Periodic,
    Homoclinic,
    HeteroclinicK0,
    Empty,
}

impl OrbitKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrbitKind::Tvf => "tvf",
            OrbitKind::ConstantModulus => "constant_modulus",
            OrbitKind::Periodic => "periodic",
            OrbitKind::Homoclinic => "homoclinic",
            OrbitKind::HeteroclinicK0 => "heteroclinic_k0",
            OrbitKind::Empty => "empty",
        }
    }
}

impl std::fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpec {
    pub tau: f64,
    pub h: f64,
    pub k: f64,
}

impl OrbitSpec {
    pub fn new(tau: f64, h: f64, k: f64) -> Self {
        Self { tau, h, k }
    }

    pub fn f(&self, x: f64) -> f64 {
        ((x - self.tau) * x + self.h) * x - self.k * self.k
    }

    pub fn u(&self, rho: f64) -> f64 {
        let x = rho * rho;
        -self.k * self.k / x + x * x - self.tau * x + self.h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub spec: OrbitSpec,
    pub kind: OrbitKind,
    pub rho_min: Option<f64>,
    pub rho_max: Option<f64>,
    /// Period of A in scaled y (for K = 0 this is twice the period of |A|).
    pub period: Option<f64>,
    pub beta_prime: Option<f64>,
    pub rho_infty: Option<f64>,
    pub winding_integral: Option<f64>,
    /// Real roots of f, ascending.
    pub roots: Vec<f64>,
}

impl OrbitResult {
    fn bare(spec: OrbitSpec, kind: OrbitKind, roots: Vec<f64>) -> Self {
        Self {
            spec,
            kind,
            rho_min: None,
            rho_max: None,
            period: None,
            beta_prime: None,
            rho_infty: None,
            winding_integral: None,
            roots,
        }
    }

    /// winding / 2 pi and its distance to the nearest integer.
    pub fn eligibility(&self) -> Option<(f64, f64)> {
        self.winding_integral.map(|w| {
            let r = w / (2.0 * PI);
            (r, (r - r.round()).abs())
        })
    }
}

/// Relative gap below which two roots of f count as a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-7;

/// Largest |K| with bounded non-trivial orbits.
pub fn k_max(tau: f64) -> f64 {
    if tau > 0.0 {
        (tau / 3.0).powf(1.5)
    } else {
        0.0
    }
}

/// Boundary of the admissible region, parametrized by the double root X.
pub fn boundary_point(tau: f64, x: f64) -> (f64, f64) {
    (-3.0 * x * x + 2.0 * tau * x, (tau * x * x - 2.0 * x * x * x).max(0.0).sqrt())
}

/// Double roots `(X_inner, X_outer)` on the two boundary branches for given K.
pub fn boundary_roots(tau: f64, k: f64) -> Result<(f64, f64)> {
    let km = k_max(tau);
    let k = k.abs();
    if tau <= 0.0 || k > km {
        return Err(CoreError::Domain(format!("|K| = {k} outside [0, {km}] for tau = {tau}")));
    }
    let g = |x: f64| tau * x * x - 2.0 * x * x * x - k * k;
    let x3 = tau / 3.0;
    if k == km {
        return Ok((x3, x3));
    }
    let inner = if k == 0.0 { 0.0 } else { find_root(g, Bracket::from_fn(g, 0.0, x3)?, 1e-15 * tau)? };
    let outer = if k == 0.0 { 0.5 * tau } else { find_root(g, Bracket::from_fn(g, x3, 0.5 * tau)?, 1e-15 * tau)? };
    Ok((inner, outer))
}

/// `(H_min, H_max)` of the periodic family at this K.
pub fn admissible_h_range(tau: f64, k: f64) -> Result<(f64, f64)> {
    let (xi, xo) = boundary_roots(tau, k)?;
    Ok((boundary_point(tau, xi).0, boundary_point(tau, xo).0))
}

/// Real roots of f; a double root lost to rounding in the discriminant is
/// recovered from the critical points of f.
pub fn turning_roots(spec: &OrbitSpec) -> Vec<f64> {
    let OrbitSpec { tau, h, k } = *spec;
    let mut roots = cubic_roots(1.0, -tau, h, -k * k);
    let disc = tau * tau - 3.0 * h;
    if roots.len() == 1 && disc >= 0.0 {
        let scale = tau.abs().powi(3) + h.abs().powf(1.5) + k * k;
        for xc in [(tau - disc.sqrt()) / 3.0, (tau + disc.sqrt()) / 3.0] {
            if spec.f(xc).abs() <= 1e-12 * scale {
                roots.extend([xc, xc]);
                roots.sort_by(f64::total_cmp);
                break;
            }
        }
    }
    roots
}

pub fn classify(spec: &OrbitSpec) -> OrbitResult {
    let OrbitSpec { tau, h, k } = *spec;
    let roots = turning_roots(spec);
    let mut r = OrbitResult::bare(*spec, OrbitKind::Empty, roots.clone());
    if !(tau.is_finite() && h.is_finite() && k.is_finite()) {
        return r;
    }
    if k == 0.0 {
        if tau <= 0.0 {
            if h == 0.0 {
                r.kind = OrbitKind::ConstantModulus;
                r.rho_min = Some(0.0);
                r.rho_max = Some(0.0);
                r.beta_prime = Some(0.0);
            }
            return r;
        }
        let hh = 0.25 * tau * tau;
        if (h - hh).abs() <= 1e-12 * hh {
            r.kind = OrbitKind::HeteroclinicK0;
            r.rho_min = Some(0.0);
            r.rho_max = Some((0.5 * tau).sqrt());
            r.rho_infty = Some((0.5 * tau).sqrt());
            r.beta_prime = Some(0.0);
        } else if h.abs() <= 1e-14 * hh {
            r.kind = OrbitKind::ConstantModulus;
            r.rho_min = Some(0.0);
            r.rho_max = Some(0.0);
            r.beta_prime = Some(0.0);
        } else if h > 0.0 && h < hh {
            let xm = 0.5 * (tau - (tau * tau - 4.0 * h).sqrt());
            r.kind = OrbitKind::Periodic;
            r.rho_min = Some(0.0);
            r.rho_max = Some(xm.sqrt());
            r.beta_prime = Some(0.0);
            r.period = Some(2.0 * rho_period(0.0, xm, tau - xm));
        }
        return r;
    }
    if roots.len() < 3 || roots[0] <= 0.0 {
        return r;
    }
    let (x1, x2, x3) = (roots[0], roots[1], roots[2]);
    let tol = DOUBLE_ROOT_TOL * x3;
    if x3 - x1 < tol || x2 - x1 < tol {
        let x0 = if x3 - x1 < tol { tau / 3.0 } else { 0.5 * (x1 + x2) };
        r.kind = OrbitKind::ConstantModulus;
        r.rho_min = Some(x0.sqrt());
        r.rho_max = Some(x0.sqrt());
        r.beta_prime = Some(k / x0);
    } else if x3 - x2 < tol {
        let xinf = boundary_roots(tau, k).map(|b| b.1).unwrap_or(0.5 * (x2 + x3));
        r.kind = OrbitKind::Homoclinic;
        r.rho_min = Some(x1.sqrt());
        r.rho_max = Some(xinf.sqrt());
        r.rho_infty = Some(xinf.sqrt());
        r.beta_prime = Some(k / xinf);
        r.winding_integral = Some(winding_quadrature(tau - 2.0 * xinf, xinf, k));
    } else {
        r.kind = OrbitKind::Periodic;
        r.rho_min = Some(x1.sqrt());
        r.rho_max = Some(x2.sqrt());
        let t = rho_period(x1, x2, x3);
        r.period = Some(t);
        r.beta_prime = Some(k * winding_average(x1, x2, x3) / t);
    }
    r
}

/// Gauss-Legendre over [0, pi/2] with panels graded toward 0 at width `w`.
fn graded(g: impl Fn(f64) -> f64, w: f64) -> f64 {
    let gl = GaussLegendre::new(20);
    let mut breaks = vec![0.0];
    if w < 0.2 {
        let mut b = w;
        while b < FRAC_PI_2 {
            breaks.push(b);
            b *= 2.0;
        }
    }
    breaks.push(FRAC_PI_2);
    let mut s = 0.0;
    for p in breaks.windows(2) {
        // split wide panels so every panel is at most pi/8
        let n = ((p[1] - p[0]) / (PI / 8.0)).ceil().max(1.0) as usize;
        let h = (p[1] - p[0]) / n as f64;
        for j in 0..n {
            s += gl.integrate(&g, p[0] + j as f64 * h, p[0] + (j + 1) as f64 * h);
        }
    }
    s
}

// With phi = pi/2 - psi, X = X1 + (X2 - X1) cos^2 phi and
// psi' = sqrt((X3 - X2) + (X2 - X1) sin^2 phi).
fn psi_rate(x1: f64, x2: f64, x3: f64, phi: f64) -> f64 {
    let s = phi.sin();
    ((x3 - x2) + (x2 - x1) * s * s).sqrt()
}

fn width(x1: f64, x2: f64, x3: f64) -> f64 {
    ((x3 - x2) / (x3 - x1)).sqrt()
}

/// Period of rho between turning points X1 < X2 (third root X3).
pub fn rho_period(x1: f64, x2: f64, x3: f64) -> f64 {
    2.0 * graded(|p| 1.0 / psi_rate(x1, x2, x3, p), width(x1, x2, x3))
}

/// `int_0^T dy / X` over one period of rho.
fn winding_average(x1: f64, x2: f64, x3: f64) -> f64 {
    let b = x2 - x1;
    2.0 * graded(
        |p| {
            let c = p.cos();
            1.0 / ((x1 + b * c * c) * psi_rate(x1, x2, x3, p))
        },
        width(x1, x2, x3),
    )
}

/// `K int (1/X - 1/X_inf) dy` over the whole homoclinic orbit, in the
/// variable `X = X1 + (X_inf - X1) sin^2 psi` where the integrand is smooth.
pub fn winding_quadrature(x1: f64, xinf: f64, k: f64) -> f64 {
    let b = xinf - x1;
    let gl = GaussLegendre::new(48);
    let v = gl.integrate(
        |p| {
            let s = p.sin();
            p.cos() / (x1 + b * s * s)
        },
        0.0,
        FRAC_PI_2,
    );
    2.0 * k * b.sqrt() * v / xinf
}

/// Closed form of the homoclinic winding integral.
pub fn winding_closed_form(tau: f64, k: f64) -> Result<f64> {
    let (_, xinf) = boundary_roots(tau, k)?;
    let x1 = tau - 2.0 * xinf;
    let d = (3.0 * xinf - tau).sqrt();
    Ok(2.0 * k.signum() * (d / x1.sqrt()).atan())
}

pub fn orbit_period(spec: &OrbitSpec) -> Result<f64> {
    let r = classify(spec);
    match (r.kind, r.period) {
        (OrbitKind::Periodic, Some(t)) => Ok(t),
        (kind, _) => Err(CoreError::Domain(format!("orbit is {kind}, not periodic"))),
    }
}

pub fn beta_prime(spec: &OrbitSpec) -> Result<f64> {
    let r = classify(spec);
    match r.kind {
        OrbitKind::Periodic | OrbitKind::ConstantModulus => Ok(r.beta_prime.unwrap_or(0.0)),
        kind => Err(CoreError::Domain(format!("mean winding undefined for a {kind} orbit"))),
    }
}

/// Modulus of the wavy branch `rho^2 = (a3 tau - b4 beta^2 R^2) / c`.
pub fn wavy_amplitude(gl: &GLCoefficients, beta: f64) -> Result<f64> {
    let bb = beta * gl.reynolds;
    let lin = gl.a3 * gl.tau;
    let mut r2 = (lin - gl.b4 * bb * bb) / gl.c;
    // on the locus itself rounding may leave a tiny negative radicand
    if r2 < 0.0 && -r2 * gl.c <= 1e-12 * lin.abs() {
        r2 = 0.0;
    }
    if r2 < 0.0 {
        return Err(CoreError::Domain(format!(
            "wavy branch does not exist at beta R = {bb} (radicand {r2:e})"
        )));
    }
    Ok(r2.sqrt())
}

/// Constant-modulus orbit of the wavy branch, expressed in scaled variables.
pub fn wavy_orbit(gl: &GLCoefficients, beta: f64) -> Result<OrbitResult> {
    let rho = wavy_amplitude(gl, beta)?;
    let s = rescale(gl)?;
    let x = s.scaled_modulus_sq(rho * rho);
    let b = s.scaled_wavenumber(beta);
    let k = x * b;
    let h = b * b * x - x * x + s.tau_tilde * x;
    let spec = OrbitSpec::new(s.tau_tilde, h, k);
    let mut r = OrbitResult::bare(spec, OrbitKind::ConstantModulus, cubic_roots(1.0, -s.tau_tilde, h, -k * k));
    if beta == 0.0 {
        r.kind = OrbitKind::Tvf;
    }
    r.rho_min = Some(x.sqrt());
    r.rho_max = Some(x.sqrt());
    r.beta_prime = Some(b);
    Ok(r)
}

/// Closed-form rates `(mu1, mu2)` of a wavy state at beta0 perturbed at beta'.
pub fn stability_rates(gl: &GLCoefficients, beta0: f64, beta_p: f64) -> Result<(f64, f64)> {
    let rho = wavy_amplitude(gl, beta0)?;
    let d = gl.b4 * gl.reynolds * gl.reynolds;
    let mu1 = d * (beta0 * beta0 - beta_p * beta_p);
    Ok((mu1, mu1 - 2.0 * gl.c * rho * rho))
}

/// Rates of the coupled sideband pair (beta', 2 beta0 - beta') about a wavy
/// state; larger first.
pub fn sideband_rates(gl: &GLCoefficients, beta0: f64, beta_p: f64) -> Result<(f64, f64)> {
    let rho = wavy_amplitude(gl, beta0)?;
    let d = gl.b4 * gl.reynolds * gl.reynolds;
    let s = gl.c * rho * rho;
    let kap = beta_p - beta0;
    let root = (4.0 * d * d * beta0 * beta0 * kap * kap + s * s).sqrt();
    Ok((-d * kap * kap - s + root, -d * kap * kap - s - root))
}
