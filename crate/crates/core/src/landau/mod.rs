//! Bifurcation coefficients of the amplitude equation: the linear growth
//! coefficient a3, the cubic coefficient c (through the second-order fields
//! Phi11 and Phi20) and the diffusion coefficient b4 (through the first-order
//! response Phi01 to slow azimuthal modulation).

pub mod yudovich;

use crate::axisym::{Eigenfunction, EfPoint};
use crate::error::{CoreError, Result};
use crate::kernels::linalg::solve_dense;
use crate::kernels::ode::{integrate_to_grid, OdeControl};
use crate::kernels::quad::{boole, GaussLegendre};
use serde::{Deserialize, Serialize};

/// Coefficients of `dA/dt = a3 tau A + b4 R^2 d2A/dy2 - c A|A|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GLCoefficients {
    pub a3: f64,
    /// Tied to the eigenfunction normalization uy(0) = 1.
    pub c: f64,
    pub b4: f64,
    pub reynolds: f64,
    /// T - T_c.
    pub tau: f64,
    /// Azimuthal wavenumber; B = beta R.
    pub beta: f64,
}

impl GLCoefficients {
    pub fn validate(&self) -> Result<()> {
        if !(self.a3 > 0.0 && self.c > 0.0 && self.b4 > 0.0 && self.reynolds > 0.0) {
            return Err(CoreError::Domain(format!(
                "coefficients need a3, c, b4, R > 0 (got {}, {}, {}, {})",
                self.a3, self.c, self.b4, self.reynolds
            )));
        }
        Ok(())
    }

    /// Diffusion coefficient b = R^2 b4.
    pub fn b(&self) -> f64 {
        self.reynolds * self.reynolds * self.b4
    }

    /// B = beta R.
    pub fn bbeta(&self) -> f64 {
        self.beta * self.reynolds
    }
}

/// `int (ux^2 + T uy^2 + (Dux)^2 / alpha^2)`, the squared weighted norm of the
/// critical mode (z-average carried out analytically).
pub fn zeta_norm_sq(ef: &Eigenfunction) -> f64 {
    let (a2, t) = (ef.alpha * ef.alpha, ef.taylor);
    ef.integrate(|_, p| p.ux[0] * p.ux[0] + t * p.uy[0] * p.uy[0] + p.ux[1] * p.ux[1] / a2)
}

/// Linear growth coefficient from the solvability condition.
pub fn a3_from_integrals(ef: &Eigenfunction) -> Result<f64> {
    let num = ef.integrate(|_, p| p.ux[0] * p.uy[0]);
    let den = zeta_norm_sq(ef);
    if !(den > 0.0) {
        return Err(CoreError::Singular("eigenfunction has zero norm".into()));
    }
    Ok(num / den)
}

/// Mean-flow correction: only the u_y component is nonzero.
#[derive(Debug, Clone)]
pub struct Phi11Profile {
    pub grid: Vec<f64>,
    pub uy11: Vec<f64>,
    pub duy11: Vec<f64>,
}

/// `uy11(x) = 2 int_0^x ux uy - 4 x int_0^{1/2} ux uy`, by per-cell Gauss quadrature.
pub fn phi11(ef: &Eigenfunction) -> Phi11Profile {
    let gl = GaussLegendre::new(6);
    let g = |x: f64| {
        let p = ef.eval(x);
        p.ux[0] * p.uy[0]
    };
    let n = ef.grid.len();
    let mid = n / 2;
    let mut cum = vec![0.0; n];
    for i in mid + 1..n {
        cum[i] = cum[i - 1] + gl.integrate(g, ef.grid[i - 1], ef.grid[i]);
    }
    for i in (0..mid).rev() {
        cum[i] = cum[i + 1] - gl.integrate(g, ef.grid[i], ef.grid[i + 1]);
    }
    let half = cum[n - 1];
    let uy11 = ef.grid.iter().zip(&cum).map(|(x, c)| 2.0 * c - 4.0 * x * half).collect();
    let duy11 = ef.grid.iter().map(|&x| 2.0 * g(x) - 4.0 * half).collect();
    Phi11Profile { grid: ef.grid.clone(), uy11, duy11 }
}

/// Second-harmonic correction `e^{2 i alpha z}` of the critical mode.
#[derive(Debug, Clone)]
pub struct Phi20Profile {
    pub grid: Vec<f64>,
    pub ux20: Vec<f64>,
    pub dux20: Vec<f64>,
    pub d2ux20: Vec<f64>,
    pub d3ux20: Vec<f64>,
    pub uy20: Vec<f64>,
    pub duy20: Vec<f64>,
    /// Imaginary part of u_z20 = (i / 2 alpha) Du_x20.
    pub uz20_imag: Vec<f64>,
}

/// Forcing of the Phi20 system: (fourth-order u_x row, second-order u_y row).
pub fn phi20_forcing(p: &EfPoint) -> (f64, f64) {
    let u = &p.ux;
    let v = &p.uy;
    (2.0 * (u[0] * u[3] - u[1] * u[2]), u[0] * v[1] - v[0] * u[1])
}

fn linear6(a2: f64, t: f64, k: f64, y: &[f64], d: &mut [f64]) {
    // (D^2 - k^2 a^2)^2 ux - k^2 a^2 T uy = f ; (D^2 - k^2 a^2) uy + ux = g
    let ka2 = k * k * a2;
    d[0] = y[1];
    d[1] = y[2];
    d[2] = y[3];
    d[3] = 2.0 * ka2 * y[2] - ka2 * ka2 * y[0] + ka2 * t * y[4];
    d[4] = y[5];
    d[5] = ka2 * y[4] - y[0];
}

/// Superposition shooting for the linear 6th-order system with wavenumber
/// `k alpha`: particular solution plus the homogeneous solutions started from
/// the unit vectors `free`, combined to zero the `pinned` components at the end.
fn superpose(
    a2: f64,
    t: f64,
    k: f64,
    forcing: impl Fn(f64) -> (f64, f64),
    grid: &[f64],
    free: [usize; 3],
) -> Result<Vec<[f64; 6]>> {
    let rhs = |x: f64, y: &Vec<f64>| {
        let mut d = vec![0.0; 24];
        for j in 0..4 {
            linear6(a2, t, k, &y[6 * j..6 * j + 6], &mut d[6 * j..6 * j + 6]);
        }
        let (f, g) = forcing(x);
        d[3] += f;
        d[5] += g;
        d
    };
    let mut y0 = vec![0.0; 24];
    for (j, &c) in free.iter().enumerate() {
        y0[6 * (j + 1) + c] = 1.0;
    }
    let ctrl = OdeControl { atol: 1e-13, rtol: 1e-12, ..OdeControl::default() };
    let traj = integrate_to_grid(rhs, y0, grid, ctrl)?;
    let end = traj.last().unwrap();
    let pinned = [0usize, 1, 4];
    let m: Vec<Vec<f64>> =
        pinned.iter().map(|&r| (1..4).map(|j| end[6 * j + r]).collect()).collect();
    let b: Vec<f64> = pinned.iter().map(|&r| -end[r]).collect();
    let cond = crate::kernels::linalg::condition_1(&m)
        .map_err(|_| CoreError::Singular("boundary system".into()))?;
    if cond > 1e12 {
        return Err(CoreError::Singular(format!("boundary system condition {cond:e}")));
    }
    let c = solve_dense(&m, &b)?;
    Ok(traj
        .iter()
        .map(|y| {
            let mut s = [0.0; 6];
            for (i, slot) in s.iter_mut().enumerate() {
                *slot = y[i] + c[0] * y[6 + i] + c[1] * y[12 + i] + c[2] * y[18 + i];
            }
            s
        })
        .collect())
}

/// Solve the Phi20 boundary-value problem on the eigenfunction grid.
pub fn phi20(ef: &Eigenfunction) -> Result<Phi20Profile> {
    let a2 = ef.alpha * ef.alpha;
    let sol = superpose(a2, ef.taylor, 2.0, |x| phi20_forcing(&ef.eval(x)), &ef.grid, [2, 3, 5])?;
    let col = |i: usize| sol.iter().map(|s| s[i]).collect::<Vec<f64>>();
    let dux20 = col(1);
    Ok(Phi20Profile {
        grid: ef.grid.clone(),
        ux20: col(0),
        uz20_imag: dux20.iter().map(|d| d / (2.0 * ef.alpha)).collect(),
        dux20,
        d2ux20: col(2),
        d3ux20: col(3),
        uy20: col(4),
        duy20: col(5),
    })
}

fn sampled_integral(ef: &Eigenfunction, g: impl Fn(usize, &EfPoint) -> f64) -> Result<f64> {
    let v: Vec<f64> = ef.grid.iter().enumerate().map(|(i, &x)| g(i, &ef.eval(x))).collect();
    boole(&v, ef.spacing())
}

/// Cubic Landau coefficient from the solvability condition at third order.
pub fn landau_c(ef: &Eigenfunction, p11: &Phi11Profile, p20: &Phi20Profile) -> Result<f64> {
    let (a2, t) = (ef.alpha * ef.alpha, ef.taylor);
    let rhs = sampled_integral(ef, |i, p| {
        let (u, v) = (&p.ux, &p.uy);
        let (x0, x1, x2) = (p20.ux20[i], p20.dux20[i], p20.d2ux20[i]);
        let (y0, y1) = (p20.uy20[i], p20.duy20[i]);
        let w = p11.duy11[i];
        let t1 = t * v[0] * (u[0] * w + u[0] * y1 + 2.0 * y0 * u[1] + x0 * v[1] + 0.5 * v[0] * x1);
        let t2 = u[0] * ((u[1] * x0 + u[0] * x1) + 2.0 * x0 * u[1] + 0.5 * u[0] * x1);
        let t3 = u[1] * ((u[1] * x1 + u[0] * x2) - 2.0 * x0 * u[2]) / (2.0 * a2);
        t1 + t2 + t3
    })?;
    Ok(rhs / zeta_norm_sq(ef))
}

/// `<L0 Phi2, Phi2>` for the real second-order field assembled from Phi11 and Phi20.
pub fn l0_phi2_phi2(ef: &Eigenfunction, p11: &Phi11Profile, p20: &Phi20Profile) -> Result<f64> {
    let (a2, t) = (ef.alpha * ef.alpha, ef.taylor);
    let h = ef.spacing();
    let mean = boole(&p11.duy11.iter().map(|w| w * w).collect::<Vec<_>>(), h)?;
    let v: Vec<f64> = (0..p20.grid.len())
        .map(|i| {
            let (x0, x1, x2) = (p20.ux20[i], p20.dux20[i], p20.d2ux20[i]);
            let (y0, y1) = (p20.uy20[i], p20.duy20[i]);
            let vel = x1 * x1 + 4.0 * a2 * x0 * x0 + x2 * x2 / (4.0 * a2) + x1 * x1;
            -vel - t * (y1 * y1 + 4.0 * a2 * y0 * y0) + 2.0 * t * x0 * y0
        })
        .collect();
    Ok(-t * mean + 2.0 * boole(&v, h)?)
}

/// c from the energy route `c <z+zb, z+zb> = -<L0 Phi2, Phi2>`.
pub fn landau_c_phi2_route(ef: &Eigenfunction, p11: &Phi11Profile, p20: &Phi20Profile) -> Result<f64> {
    Ok(-l0_phi2_phi2(ef, p11, p20)? / (2.0 * zeta_norm_sq(ef)))
}

/// Response to slow azimuthal modulation (odd in x), on [0, 1/2].
#[derive(Debug, Clone)]
pub struct Phi01Solution {
    pub grid: Vec<f64>,
    pub phix: Vec<f64>,
    pub d2phix: Vec<f64>,
    pub phiy: Vec<f64>,
    pub b4: f64,
    /// b = R^2 b4.
    pub b: f64,
    /// Relative projection of the forcing on the critical mode (should vanish).
    pub solvability_residual: f64,
}

impl Phi01Solution {
    /// Odd extension of a half-interval column onto the full grid.
    pub fn odd_extension(&self, col: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.grid.len();
        let mut xs = Vec::with_capacity(2 * n - 1);
        let mut vs = Vec::with_capacity(2 * n - 1);
        for i in (1..n).rev() {
            xs.push(-self.grid[i]);
            vs.push(-col[i]);
        }
        xs.extend_from_slice(&self.grid);
        vs.extend_from_slice(col);
        (xs, vs)
    }
}

/// Forcing of the Phi01 system at x.
pub fn phi01_forcing(alpha: f64, x: f64, p: &EfPoint) -> (f64, f64) {
    let a2 = alpha * alpha;
    (x * (a2 * p.ux[0] - p.ux[2]), -x * p.uy[0])
}

/// Diffusion coefficient from the solvability condition of the Phi01 problem.
pub fn b4_from_bvp(ef: &Eigenfunction, reynolds: f64) -> Result<Phi01Solution> {
    let (alpha, t) = (ef.alpha, ef.taylor);
    let a2 = alpha * alpha;
    // odd forcing against the even critical mode
    let proj = ef.integrate(|x, p| {
        let (f, g) = phi01_forcing(alpha, x, p);
        f * p.ux[0] + t * g * p.uy[0]
    });
    let fnorm = ef.integrate(|x, p| {
        let (f, g) = phi01_forcing(alpha, x, p);
        f * f + t * g * g
    });
    let znorm = ef.integrate(|_, p| p.ux[0] * p.ux[0] + t * p.uy[0] * p.uy[0]);
    let solvability_residual = proj.abs() / (fnorm * znorm).sqrt();
    if solvability_residual > 1e-6 {
        return Err(CoreError::Singular(format!(
            "forcing not orthogonal to the critical mode ({solvability_residual:e})"
        )));
    }
    let m = (ef.grid.len() - 1) / 2;
    let grid: Vec<f64> = (0..=m).map(|k| 0.5 * k as f64 / m as f64).collect();
    // odd at x = 0: phix = D2phix = phiy = 0; free slopes Dphix, D3phix, Dphiy
    let sol = superpose(a2, t, 1.0, |x| phi01_forcing(alpha, x, &ef.eval(x)), &grid, [1, 3, 5])?;
    let phix: Vec<f64> = sol.iter().map(|s| s[0]).collect();
    let d2phix: Vec<f64> = sol.iter().map(|s| s[2]).collect();
    let phiy: Vec<f64> = sol.iter().map(|s| s[4]).collect();
    let h = 0.5 / m as f64;
    let v: Vec<f64> = grid
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let p = ef.eval(x);
            x * p.ux[0] * (a2 * phix[i] - d2phix[i]) + a2 * t * x * phiy[i] * p.uy[0]
        })
        .collect();
    let num = 2.0 * boole(&v, h)?;
    let b4 = num / (a2 * zeta_norm_sq(ef));
    Ok(Phi01Solution {
        grid,
        phix,
        d2phix,
        phiy,
        b4,
        b: reynolds * reynolds * b4,
        solvability_residual,
    })
}

/// Every coefficient computable from the critical eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauReport {
    pub alpha_c: f64,
    pub taylor_c: f64,
    pub a3: f64,
    pub c: f64,
    pub c_phi2_route: f64,
    pub l0_phi2_phi2: f64,
    pub b4: f64,
}

pub fn landau_report(ef: &Eigenfunction) -> Result<LandauReport> {
    let p11 = phi11(ef);
    let p20 = phi20(ef)?;
    Ok(LandauReport {
        alpha_c: ef.alpha,
        taylor_c: ef.taylor,
        a3: a3_from_integrals(ef)?,
        c: landau_c(ef, &p11, &p20)?,
        c_phi2_route: landau_c_phi2_route(ef, &p11, &p20)?,
        l0_phi2_phi2: l0_phi2_phi2(ef, &p11, &p20)?,
        b4: b4_from_bvp(ef, 1.0)?.b4,
    })
}
