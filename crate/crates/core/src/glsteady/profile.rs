//! Steady profiles A(y), integrated from a turning point in the angle psi that
//! parametrizes the modulus between its turning values.

use super::{boundary_roots, classify, winding_quadrature, OrbitKind, OrbitResult, OrbitSpec};
use crate::error::{CoreError, Result};
use crate::kernels::ode::{integrate_to_grid, OdeControl};
use crate::kernels::quad::boole;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Turning point the integration starts from (placed at y = 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Start {
    #[default]
    Inner,
    Outer,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Profile {
    pub spec: OrbitSpec,
    pub kind: OrbitKind,
    pub y: Vec<f64>,
    pub rho: Vec<f64>,
    pub theta: Vec<f64>,
    pub a: Vec<Complex64>,
    /// dA/dy.
    pub da: Vec<Complex64>,
    pub beta_prime: f64,
    pub theta0: f64,
    /// theta - beta' y - theta0.
    pub phi: Vec<f64>,
    /// Period of rho where one exists.
    pub period: Option<f64>,
}

fn ctrl() -> OdeControl {
    OdeControl { atol: 1e-13, rtol: 1e-12, ..OdeControl::default() }
}

/// Orbit in the turning-point angle: `X = x1 + b sin^2 psi`,
/// `psi' = sqrt(a + b cos^2 psi)`, `theta' = K / X`.
#[derive(Debug, Clone, Copy)]
struct Geometry {
    x1: f64,
    b: f64,
    a: f64,
    k: f64,
    /// K = 0 orbits through the origin: A = sqrt(b) sin(psi) stays on a line.
    signed: bool,
}

impl Geometry {
    fn of(r: &OrbitResult) -> Result<Self> {
        let OrbitSpec { tau, k, .. } = r.spec;
        let g = |x1: f64, b: f64, a: f64, signed: bool| Geometry { x1, b, a, k, signed };
        Ok(match r.kind {
            OrbitKind::Empty => return Err(CoreError::Domain("no bounded orbit for this (H, K)".into())),
            OrbitKind::HeteroclinicK0 => g(0.0, 0.5 * tau, 0.0, true),
            OrbitKind::Homoclinic => {
                let (x1, xi) = (r.rho_min.unwrap().powi(2), r.rho_infty.unwrap().powi(2));
                g(x1, xi - x1, 0.0, false)
            }
            OrbitKind::Periodic if k == 0.0 => {
                let xm = r.rho_max.unwrap().powi(2);
                g(0.0, xm, tau - 2.0 * xm, true)
            }
            OrbitKind::Periodic => {
                let (x1, x2, x3) = (r.roots[0], r.roots[1], r.roots[2]);
                g(x1, x2 - x1, x3 - x2, false)
            }
            OrbitKind::ConstantModulus | OrbitKind::Tvf => g(r.rho_min.unwrap().powi(2), 0.0, 1.0, k == 0.0),
        })
    }

    fn rate(&self, psi: f64) -> f64 {
        let c = psi.cos();
        if self.a == 0.0 {
            // asymptotic orbits: keep psi = pi/2 attracting from both sides
            self.b.sqrt() * c
        } else {
            (self.a + self.b * c * c).sqrt()
        }
    }

    fn x(&self, psi: f64) -> f64 {
        let s = psi.sin();
        self.x1 + self.b * s * s
    }

    fn rhs(self) -> impl Fn(f64, &Vec<f64>) -> Vec<f64> {
        move |_, s: &Vec<f64>| {
            let th = if self.signed { 0.0 } else { self.k / self.x(s[0]) };
            vec![self.rate(s[0]), th]
        }
    }

    /// (A, A') from the state (psi, theta).
    fn field(&self, s: &[f64], phase: f64) -> (Complex64, Complex64) {
        let (psi, th) = (s[0], s[1]);
        let w = self.rate(psi);
        if self.signed {
            let e = Complex64::from_polar(1.0, phase);
            let r = self.b.sqrt();
            (e * (r * psi.sin()), e * (r * psi.cos() * w))
        } else {
            let rho = self.x(psi).sqrt();
            let drho = self.b * (2.0 * psi).sin() * w / (2.0 * rho);
            let e = Complex64::from_polar(1.0, th);
            (e * rho, e * Complex64::new(drho, self.k / rho))
        }
    }
}

fn start_angle(r: &OrbitResult, start: Start) -> Result<f64> {
    match (r.kind, start) {
        (OrbitKind::Homoclinic | OrbitKind::HeteroclinicK0, Start::Outer) => {
            Err(CoreError::Domain(format!("a {} orbit has a single turning point", r.kind)))
        }
        (_, Start::Inner) => Ok(0.0),
        (_, Start::Outer) => Ok(FRAC_PI_2),
    }
}

fn integrate_samples(geo: Geometry, s0: Vec<f64>, ys: &[f64]) -> Result<Vec<Vec<f64>>> {
    let mut out = vec![Vec::new(); ys.len()];
    let (neg, pos): (Vec<usize>, Vec<usize>) = (0..ys.len()).partition(|&i| ys[i] < 0.0);
    for idx in [pos, neg.into_iter().rev().collect::<Vec<_>>()] {
        if idx.is_empty() {
            continue;
        }
        let mut grid = vec![0.0];
        grid.extend(idx.iter().map(|&i| ys[i]));
        let traj = integrate_to_grid(geo.rhs(), s0.clone(), &grid, ctrl())?;
        for (j, &i) in idx.iter().enumerate() {
            out[i] = traj[j + 1].clone();
        }
    }
    Ok(out)
}

/// Mean over one rho-period of `theta(y) - theta(0) - beta' y`.
fn phase_mean(geo: Geometry, psi0: f64, period: f64, beta_p: f64) -> Result<f64> {
    let n = 1024;
    let grid: Vec<f64> = (0..=n).map(|j| period * j as f64 / n as f64).collect();
    let traj = integrate_to_grid(geo.rhs(), vec![psi0, 0.0], &grid, ctrl())?;
    let v: Vec<f64> = traj.iter().zip(&grid).map(|(s, y)| s[1] - beta_p * y).collect();
    Ok(boole(&v, period / n as f64)? / period)
}

/// Build the profile of a classified orbit on `samples` points of `window`.
pub fn build_profile(r: &OrbitResult, theta0: f64, window: (f64, f64), samples: usize, start: Start) -> Result<Profile> {
    if samples < 2 || !(window.1 > window.0) {
        return Err(CoreError::Invalid("profile window needs lo < hi and at least 2 samples".into()));
    }
    let k = r.spec.k;
    let geo = Geometry::of(r)?;
    let psi0 = start_angle(r, start)?;
    let beta_p = r.beta_prime.unwrap_or(0.0);
    let rho_period = match (r.kind, r.period) {
        (OrbitKind::Periodic, Some(t)) if k != 0.0 => Some(t),
        (OrbitKind::Periodic, Some(t)) => Some(0.5 * t),
        _ => None,
    };
    let phase = match rho_period {
        Some(t) if k != 0.0 => theta0 - phase_mean(geo, psi0, t, beta_p)?,
        _ => theta0,
    };
    let ys: Vec<f64> = (0..samples)
        .map(|j| window.0 + (window.1 - window.0) * j as f64 / (samples - 1) as f64)
        .collect();
    let states = integrate_samples(geo, vec![psi0, phase], &ys)?;
    let (a, da): (Vec<Complex64>, Vec<Complex64>) = states.iter().map(|s| geo.field(s, phase)).unzip();
    let theta: Vec<f64> = if geo.signed {
        // A stays on the line through e^{i phase}
        states.iter().map(|s| if s[0].sin() >= 0.0 { phase } else { phase + PI }).collect()
    } else {
        states.iter().map(|s| s[1]).collect()
    };
    let phi = theta.iter().zip(&ys).map(|(t, y)| t - beta_p * y - theta0).collect();
    Ok(Profile {
        spec: r.spec,
        kind: r.kind,
        rho: a.iter().map(|z| z.norm()).collect(),
        y: ys,
        theta,
        a,
        da,
        beta_prime: beta_p,
        theta0,
        phi,
        period: rho_period,
    })
}

pub fn reconstruct_profile(spec: &OrbitSpec, theta0: f64, window: (f64, f64), samples: usize, start: Start) -> Result<Profile> {
    build_profile(&classify(spec), theta0, window, samples, start)
}

/// Homoclinic orbit at the top of the periodic family for this K, with its
/// profile centred on the inner turning point.
pub fn homoclinic_orbit(tau: f64, k: f64, half_width: f64, samples: usize) -> Result<(OrbitResult, Profile)> {
    let km = super::k_max(tau);
    if !(k != 0.0 && k.abs() < km) {
        return Err(CoreError::Domain(format!("homoclinic orbits need 0 < |K| < {km}")));
    }
    let (_, xinf) = boundary_roots(tau, k)?;
    let x1 = tau - 2.0 * xinf;
    let h = super::boundary_point(tau, xinf).0;
    let spec = OrbitSpec::new(tau, h, k);
    let r = OrbitResult {
        spec,
        kind: OrbitKind::Homoclinic,
        rho_min: Some(x1.sqrt()),
        rho_max: Some(xinf.sqrt()),
        period: None,
        beta_prime: Some(k / xinf),
        rho_infty: Some(xinf.sqrt()),
        winding_integral: Some(winding_quadrature(x1, xinf, k)),
        roots: vec![x1, xinf, xinf],
    };
    let p = build_profile(&r, 0.0, (-half_width, half_width), samples, Start::Inner)?;
    Ok((r, p))
}

/// Largest relative deviations of the two first integrals along a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    /// `|A'|^2 - |A|^4 + tau |A|^2` against H.
    pub energy: f64,
    /// `Im(conj(A) A') = rho^2 theta'` against K.
    pub momentum: f64,
}

pub fn conservation_drift(p: &Profile) -> Drift {
    let OrbitSpec { tau, h, k } = p.spec;
    let mut e_scale = h.abs();
    let mut e_dev = 0.0f64;
    let mut m_scale = k.abs();
    let mut m_dev = 0.0f64;
    for (a, d) in p.a.iter().zip(&p.da) {
        let (m, dm) = (a.norm_sqr(), d.norm_sqr());
        e_scale = e_scale.max(dm + m * m + tau.abs() * m);
        e_dev = e_dev.max((dm - m * m + tau * m - h).abs());
        if k == 0.0 {
            m_scale = m_scale.max(a.norm() * d.norm());
        }
        m_dev = m_dev.max(((a.conj() * d).im - k).abs());
    }
    let rel = |d: f64, s: f64| if s > 0.0 { d / s } else { d };
    Drift { energy: rel(e_dev, e_scale), momentum: rel(m_dev, m_scale) }
}
