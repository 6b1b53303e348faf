//! Energy-conservation identity of the quadratic term on fields periodic in z.
//!
//! Fields are sampled on Gauss-Legendre nodes in x and uniform nodes over one
//! period in z; the inner product weights the y component by T.

use crate::axisym::Eigenfunction;
use crate::error::{CoreError, Result};
use crate::kernels::quad::GaussLegendre;
use std::f64::consts::PI;

/// Velocity and its x, z derivatives at one node (components x, y, z).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FieldSample {
    pub u: [f64; 3],
    pub dx: [f64; 3],
    pub dz: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct Field2D {
    pub alpha: f64,
    pub taylor: f64,
    pub x: Vec<f64>,
    pub wx: Vec<f64>,
    pub z: Vec<f64>,
    /// Row-major: index `ix * nz + iz`.
    pub data: Vec<FieldSample>,
}

impl Field2D {
    /// Sample `f(x, z)`; rejects fields that are not divergence-free or do not
    /// vanish at the walls.
    pub fn from_fn(
        alpha: f64,
        taylor: f64,
        nx: usize,
        nz: usize,
        f: impl Fn(f64, f64) -> FieldSample,
    ) -> Result<Self> {
        let gl = GaussLegendre::new(nx);
        let (x, wx): (Vec<f64>, Vec<f64>) = gl.mapped(-0.5, 0.5).unzip();
        let period = 2.0 * PI / alpha;
        let z: Vec<f64> = (0..nz).map(|k| period * k as f64 / nz as f64).collect();
        let mut data = Vec::with_capacity(nx * nz);
        for &xi in &x {
            for &zi in &z {
                data.push(f(xi, zi));
            }
        }
        let grad = data
            .iter()
            .flat_map(|s| s.dx.iter().chain(&s.dz))
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let div = data.iter().map(|s| (s.dx[0] + s.dz[2]).abs()).fold(0.0, f64::max);
        if div > 1e-9 * grad.max(1e-300) {
            return Err(CoreError::Invalid(format!("field is not divergence-free ({div:e})")));
        }
        let size = data.iter().flat_map(|s| s.u).fold(0.0f64, |m, v| m.max(v.abs()));
        for &zi in &z {
            for xw in [-0.5, 0.5] {
                let w = f(xw, zi).u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if w > 1e-9 * size.max(1e-300) {
                    return Err(CoreError::Invalid(format!("field does not vanish at x = {xw}")));
                }
            }
        }
        Ok(Self { alpha, taylor, x, wx, z, data })
    }

    fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        let nz = self.z.len();
        self.wx.iter().flat_map(move |&w| std::iter::repeat(w / nz as f64).take(nz))
    }

    fn same_grid(&self, o: &Self) -> Result<()> {
        if self.x.len() != o.x.len() || self.z.len() != o.z.len() || self.alpha != o.alpha {
            return Err(CoreError::Invalid("fields live on different grids".into()));
        }
        Ok(())
    }

    /// `<U, V> = mean_z int (Ux Vx + T Uy Vy + Uz Vz) dx`.
    pub fn inner(&self, o: &Self) -> Result<f64> {
        self.same_grid(o)?;
        let t = self.taylor;
        Ok(self
            .weights()
            .zip(self.data.iter().zip(&o.data))
            .map(|(w, (a, b))| w * (a.u[0] * b.u[0] + t * a.u[1] * b.u[1] + a.u[2] * b.u[2]))
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).unwrap_or(0.0).sqrt()
    }
}

/// `t(U, V, W) = <(U . grad) V, W>` with `grad = (d/dx, d/dz)`.
pub fn trilinear(u: &Field2D, v: &Field2D, w: &Field2D) -> Result<f64> {
    u.same_grid(v)?;
    u.same_grid(w)?;
    let t = u.taylor;
    Ok(u.weights()
        .enumerate()
        .map(|(i, wt)| {
            let (a, b, c) = (&u.data[i], &v.data[i], &w.data[i]);
            let adv = |k: usize| a.u[0] * b.dx[k] + a.u[2] * b.dz[k];
            wt * (adv(0) * c.u[0] + t * adv(1) * c.u[1] + adv(2) * c.u[2])
        })
        .sum())
}

/// `<B(U, V), W>` with the symmetrized quadratic term `B(U, V) = -1/2 [(U.grad)V + (V.grad)U]`.
pub fn quadratic_form(u: &Field2D, v: &Field2D, w: &Field2D) -> Result<f64> {
    Ok(-0.5 * (trilinear(u, v, w)? + trilinear(v, u, w)?))
}

/// `<B(U, U), U>`, zero for admissible fields.
pub fn yudovich_identity(u: &Field2D) -> Result<f64> {
    quadratic_form(u, u, u)
}

/// Scalar polynomial in x with derivative support.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn deriv(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut r = vec![0.0; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        Poly(r)
    }
}

/// Coefficients of a stream-function field. Mode `m` carries
/// `psi = (1/4 - x^2)^2 (P_m cos + Q_m sin)(m alpha z)` and
/// `u_y = (1/4 - x^2) (R_m cos + S_m sin)(m alpha z)`.
#[derive(Debug, Clone, Default)]
pub struct StreamCoeffs {
    pub psi_cos: Vec<Vec<f64>>,
    pub psi_sin: Vec<Vec<f64>>,
    pub uy_cos: Vec<Vec<f64>>,
    pub uy_sin: Vec<Vec<f64>>,
}

struct ModeProfiles {
    g: [Poly; 3],
    h: [Poly; 3],
    p: [Poly; 2],
    q: [Poly; 2],
}

fn derivs3(p: Poly) -> [Poly; 3] {
    let d = p.deriv();
    let dd = d.deriv();
    [p, d, dd]
}

fn derivs2(p: Poly) -> [Poly; 2] {
    let d = p.deriv();
    [p, d]
}

/// Divergence-free field with no-slip walls built from a stream function.
pub fn stream_field(alpha: f64, taylor: f64, c: &StreamCoeffs, nx: usize, nz: usize) -> Result<Field2D> {
    let w = Poly(vec![0.25, 0.0, -1.0]);
    let w2 = w.mul(&w);
    let get = |v: &Vec<Vec<f64>>, m: usize| Poly(v.get(m).cloned().unwrap_or_default());
    let modes = c.psi_cos.len().max(c.psi_sin.len()).max(c.uy_cos.len()).max(c.uy_sin.len());
    let prof: Vec<ModeProfiles> = (0..modes)
        .map(|m| ModeProfiles {
            g: derivs3(w2.mul(&get(&c.psi_cos, m))),
            h: derivs3(w2.mul(&get(&c.psi_sin, m))),
            p: derivs2(w.mul(&get(&c.uy_cos, m))),
            q: derivs2(w.mul(&get(&c.uy_sin, m))),
        })
        .collect();
    let f = |x: f64, z: f64| {
        let mut s = FieldSample::default();
        for (m, pr) in prof.iter().enumerate() {
            let k = m as f64 * alpha;
            let (sn, cs) = (k * z).sin_cos();
            let ev = |p: &Poly| if p.0.is_empty() { 0.0 } else { p.eval(x) };
            let (g0, g1, g2) = (ev(&pr.g[0]), ev(&pr.g[1]), ev(&pr.g[2]));
            let (h0, h1, h2) = (ev(&pr.h[0]), ev(&pr.h[1]), ev(&pr.h[2]));
            let (p0, p1) = (ev(&pr.p[0]), ev(&pr.p[1]));
            let (q0, q1) = (ev(&pr.q[0]), ev(&pr.q[1]));
            // u_x = d psi/dz, u_z = -d psi/dx
            s.u[0] += k * (-g0 * sn + h0 * cs);
            s.dx[0] += k * (-g1 * sn + h1 * cs);
            s.dz[0] += -k * k * (g0 * cs + h0 * sn);
            s.u[2] += -(g1 * cs + h1 * sn);
            s.dx[2] += -(g2 * cs + h2 * sn);
            s.dz[2] += -k * (-g1 * sn + h1 * cs);
            s.u[1] += p0 * cs + q0 * sn;
            s.dx[1] += p1 * cs + q1 * sn;
            s.dz[1] += k * (-p0 * sn + q0 * cs);
        }
        s
    };
    Field2D::from_fn(alpha, taylor, nx, nz, f)
}

/// The real critical mode `zeta + conj(zeta)`: `2 (u_x cos, u_y cos, -u_z sin)(alpha z)`
/// with `u_z = Du_x / alpha`.
pub fn critical_mode_field(ef: &Eigenfunction, nx: usize, nz: usize) -> Result<Field2D> {
    let a = ef.alpha;
    Field2D::from_fn(a, ef.taylor, nx, nz, |x, z| {
        let p = ef.eval(x);
        let (sn, cs) = (a * z).sin_cos();
        FieldSample {
            u: [2.0 * p.ux[0] * cs, 2.0 * p.uy[0] * cs, -2.0 * p.ux[1] / a * sn],
            dx: [2.0 * p.ux[1] * cs, 2.0 * p.uy[1] * cs, -2.0 * p.ux[2] / a * sn],
            dz: [-2.0 * a * p.ux[0] * sn, -2.0 * a * p.uy[0] * sn, -2.0 * p.ux[1] * cs],
        }
    })
}
