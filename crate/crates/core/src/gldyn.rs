//! Time-dependent amplitude equation on a periodic azimuthal domain.
//!
//! Integrates `dA/dt = a3 tau A + b4 d2A/dy2 - c A|A|^2` in `y = y_phys / R`
//! (so the diffusion coefficient is b4 and wavenumbers are B = beta R) by
//! exponential Euler: the linear part exactly in Fourier space, the cubic term
//! explicitly with 2/3-rule dealiasing.

use crate::error::{CoreError, Result};
use crate::landau::GLCoefficients;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub domain_length: f64,
    pub modes: usize,
    pub dt: f64,
    /// `reynolds` and `beta` are not used: the domain is already in units of R.
    pub gl: GLCoefficients,
}

pub const DEFAULT_DT: f64 = 1e-3;

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.modes < 32 || !self.modes.is_power_of_two() {
            return Err(CoreError::Invalid(format!("modes = {} must be a power of two >= 32", self.modes)));
        }
        if !(self.dt > 0.0 && self.domain_length > 0.0) {
            return Err(CoreError::Invalid("dt and domain_length must be positive".into()));
        }
        let g = &self.gl;
        if ![g.a3, g.tau, g.b4, g.c].iter().all(|v| v.is_finite()) || g.b4 < 0.0 || g.c < 0.0 {
            return Err(CoreError::Invalid("simulator needs finite a3, tau and b4, c >= 0".into()));
        }
        Ok(())
    }

    /// Domain holding `periods` wavelengths of wavenumber `bbeta0`.
    pub fn length_for(bbeta0: f64, periods: usize) -> f64 {
        2.0 * PI * periods as f64 / bbeta0
    }

    /// Signed mode index of FFT slot `j`.
    pub fn index(&self, j: usize) -> i64 {
        let n = self.modes as i64;
        let j = j as i64;
        if j <= n / 2 {
            j
        } else {
            j - n
        }
    }

    pub fn slot(&self, index: i64) -> Result<usize> {
        let n = self.modes as i64;
        if index.abs() > n / 2 {
            return Err(CoreError::Invalid(format!("mode {index} not resolved with {n} modes")));
        }
        Ok(index.rem_euclid(n) as usize)
    }

    pub fn wavenumber(&self, index: i64) -> f64 {
        2.0 * PI * index as f64 / self.domain_length
    }

    /// Nearest mode index to wavenumber `bbeta`, if it is resolved exactly.
    pub fn index_of(&self, bbeta: f64) -> Option<i64> {
        let x = bbeta * self.domain_length / (2.0 * PI);
        let i = x.round();
        ((x - i).abs() < 1e-9 * (1.0 + x.abs()) && i.abs() <= (self.modes / 2) as f64).then_some(i as i64)
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.modes).map(|j| self.domain_length * j as f64 / self.modes as f64).collect()
    }
}

/// Linear rate `a3 tau - b4 B^2` of wavenumber B about A = 0.
pub fn linear_rate(gl: &GLCoefficients, bbeta: f64) -> f64 {
    gl.a3 * gl.tau - gl.b4 * bbeta * bbeta
}

pub struct Stepper {
    cfg: SimConfig,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    decay: Vec<f64>,
    phi: Vec<f64>,
    keep: Vec<bool>,
    spec: Vec<C>,
    nl: Vec<C>,
}

impl Stepper {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.modes;
        let mut planner = FftPlanner::new();
        let (mut decay, mut phi, mut keep) = (vec![0.0; n], vec![0.0; n], vec![false; n]);
        for j in 0..n {
            let m = cfg.index(j);
            let l = linear_rate(&cfg.gl, cfg.wavenumber(m));
            let h = cfg.dt;
            decay[j] = (l * h).exp();
            phi[j] = if (l * h).abs() < 1e-8 { h * (1.0 + 0.5 * l * h) } else { (l * h).exp_m1() / l };
            keep[j] = 3 * m.unsigned_abs() as usize <= n;
        }
        Ok(Self {
            cfg,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            decay,
            phi,
            keep,
            spec: vec![C::new(0.0, 0.0); n],
            nl: vec![C::new(0.0, 0.0); n],
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn step(&mut self, field: &mut [C]) -> Result<()> {
        let n = self.cfg.modes;
        if field.len() != n {
            return Err(CoreError::Invalid(format!("field has {} samples, expected {n}", field.len())));
        }
        let c = self.cfg.gl.c;
        for (d, a) in self.nl.iter_mut().zip(field.iter()) {
            *d = -c * a * a.norm_sqr();
        }
        self.spec.copy_from_slice(field);
        self.fwd.process(&mut self.spec);
        self.fwd.process(&mut self.nl);
        for j in 0..n {
            let nl = if self.keep[j] { self.nl[j] } else { C::new(0.0, 0.0) };
            self.spec[j] = self.decay[j] * self.spec[j] + self.phi[j] * nl;
        }
        self.inv.process(&mut self.spec);
        let inv_n = 1.0 / n as f64;
        for (a, s) in field.iter_mut().zip(&self.spec) {
            *a = s * inv_n;
        }
        if field.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(CoreError::NonFinite("simulator field".into()));
        }
        Ok(())
    }

    /// Normalized Fourier coefficients (a plane wave of amplitude e has |A_k| = e).
    pub fn spectrum(&self, field: &[C]) -> Vec<C> {
        let mut s = field.to_vec();
        self.fwd.process(&mut s);
        let inv_n = 1.0 / field.len() as f64;
        s.iter_mut().for_each(|v| *v *= inv_n);
        s
    }
}

/// One step from a fresh stepper.
pub fn step(field: &[C], cfg: &SimConfig) -> Result<Vec<C>> {
    let mut f = field.to_vec();
    Stepper::new(*cfg)?.step(&mut f)?;
    Ok(f)
}

/// `amplitude e^{i (B y + phase)}` for mode `index`.
pub fn plane_wave(cfg: &SimConfig, index: i64, amplitude: f64, phase: f64) -> Vec<C> {
    let b = cfg.wavenumber(index);
    cfg.grid().iter().map(|y| C::from_polar(amplitude, b * y + phase)).collect()
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RecordSpec {
    /// Record every `stride` steps (the initial state is always recorded).
    pub stride: usize,
    /// Record |A_k - R_k| against this reference state instead of |A_k|.
    pub reference: Option<Vec<C>>,
    /// Mode indices to keep; all when `None`.
    pub modes: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub modes: Vec<i64>,
    pub wavenumbers: Vec<f64>,
    /// `amps[r][m]`: record r, mode `modes[m]`.
    pub amps: Vec<Vec<f64>>,
    pub final_field: Vec<C>,
}

impl Trajectory {
    pub fn column(&self, index: i64) -> Result<Vec<f64>> {
        let m = self
            .modes
            .iter()
            .position(|&i| i == index)
            .ok_or_else(|| CoreError::Invalid(format!("mode {index} was not recorded")))?;
        Ok(self.amps.iter().map(|r| r[m]).collect())
    }
}

pub fn simulate(cfg: &SimConfig, init: &[C], t_end: f64, rec: &RecordSpec) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(CoreError::Invalid("t_end must be positive".into()));
    }
    let mut st = Stepper::new(*cfg)?;
    let n = cfg.modes;
    if init.len() != n {
        return Err(CoreError::Invalid(format!("initial field has {} samples, expected {n}", init.len())));
    }
    let modes: Vec<i64> = rec.modes.clone().unwrap_or_else(|| (0..n).map(|j| cfg.index(j)).collect());
    let slots = modes.iter().map(|&m| cfg.slot(m)).collect::<Result<Vec<_>>>()?;
    let reference = match &rec.reference {
        Some(r) if r.len() != n => return Err(CoreError::Invalid("reference has the wrong length".into())),
        Some(r) => Some(st.spectrum(r)),
        None => None,
    };
    let stride = rec.stride.max(1);
    let steps = (t_end / cfg.dt).round() as usize;
    let mut field = init.to_vec();
    let mut times = Vec::new();
    let mut amps = Vec::new();
    let mut record = |st: &Stepper, f: &[C], t: f64| {
        let s = st.spectrum(f);
        times.push(t);
        amps.push(
            slots
                .iter()
                .map(|&j| match &reference {
                    Some(r) => (s[j] - r[j]).norm(),
                    None => s[j].norm(),
                })
                .collect::<Vec<f64>>(),
        );
    };
    record(&st, &field, 0.0);
    for k in 1..=steps {
        st.step(&mut field)?;
        if k % stride == 0 || k == steps {
            record(&st, &field, k as f64 * cfg.dt);
        }
    }
    Ok(Trajectory {
        times,
        wavenumbers: modes.iter().map(|&m| cfg.wavenumber(m)).collect(),
        modes,
        amps,
        final_field: field,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub rate: f64,
    pub samples: usize,
    /// RMS residual of the log-linear fit.
    pub residual: f64,
    /// Whether the amplitude moved in one direction over the whole window.
    pub monotone: bool,
}

/// Least-squares slope of log |A_k| over records with t in `window`.
pub fn measure_growth_rate(traj: &Trajectory, index: i64, window: (f64, f64)) -> Result<GrowthFit> {
    let col = traj.column(index)?;
    let pts: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&col)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .map(|(t, a)| (*t, *a))
        .collect();
    if pts.len() < 3 {
        return Err(CoreError::Invalid(format!("only {} records inside the fit window", pts.len())));
    }
    if pts.iter().any(|p| !(p.1 > 0.0)) {
        return Err(CoreError::Domain("zero amplitude inside the fit window".into()));
    }
    let n = pts.len() as f64;
    let (mt, ml) = pts.iter().fold((0.0, 0.0), |(a, b), (t, v)| (a + t / n, b + v.ln() / n));
    let (mut stt, mut stl) = (0.0, 0.0);
    for (t, v) in &pts {
        stt += (t - mt) * (t - mt);
        stl += (t - mt) * (v.ln() - ml);
    }
    let rate = stl / stt;
    let residual =
        (pts.iter().map(|(t, v)| (v.ln() - ml - rate * (t - mt)).powi(2)).sum::<f64>() / n).sqrt();
    let monotone = pts.windows(2).all(|w| (w[1].1 - w[0].1) * rate >= 0.0);
    Ok(GrowthFit { rate, samples: pts.len(), residual, monotone })
}
