//! Adaptive Dormand-Prince 5(4) integration for real and complex state vectors.

use crate::error::{CoreError, Result};
use num_complex::Complex64;

/// Vector-space operations the integrator needs from a state type.
pub trait OdeState: Clone {
    fn zeros_like(&self) -> Self;
    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);
    /// Largest component of `|err| / (atol + rtol * max(|y0|, |y1|))`.
    fn scaled_error(err: &Self, y0: &Self, y1: &Self, atol: f64, rtol: f64) -> f64;
    fn all_finite(&self) -> bool;
}

impl OdeState for f64 {
    fn zeros_like(&self) -> Self {
        0.0
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
    fn scaled_error(err: &Self, y0: &Self, y1: &Self, atol: f64, rtol: f64) -> f64 {
        err.abs() / (atol + rtol * y0.abs().max(y1.abs()))
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl OdeState for Vec<f64> {
    fn zeros_like(&self) -> Self {
        vec![0.0; self.len()]
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x) {
            *s += a * v;
        }
    }
    fn scaled_error(err: &Self, y0: &Self, y1: &Self, atol: f64, rtol: f64) -> f64 {
        let mut m = 0.0f64;
        for i in 0..err.len() {
            let sc = atol + rtol * y0[i].abs().max(y1[i].abs());
            m = m.max(err[i].abs() / sc);
        }
        m
    }
    fn all_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

impl OdeState for Vec<Complex64> {
    fn zeros_like(&self) -> Self {
        vec![Complex64::new(0.0, 0.0); self.len()]
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x) {
            *s += v * a;
        }
    }
    fn scaled_error(err: &Self, y0: &Self, y1: &Self, atol: f64, rtol: f64) -> f64 {
        let mut m = 0.0f64;
        for i in 0..err.len() {
            let sc = atol + rtol * y0[i].norm().max(y1[i].norm());
            m = m.max(err[i].norm() / sc);
        }
        m
    }
    fn all_finite(&self) -> bool {
        self.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Step-size and tolerance policy.
#[derive(Debug, Clone, Copy)]
pub struct OdeControl {
    pub atol: f64,
    pub rtol: f64,
    /// Initial step; `None` picks a fraction of the interval.
    pub h_init: Option<f64>,
    /// Largest allowed step; `None` means unbounded.
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeControl {
    fn default() -> Self {
        Self { atol: 1e-10, rtol: 1e-10, h_init: None, h_max: None, max_steps: 1_000_000 }
    }
}

impl OdeControl {
    pub fn with_tol(tol: f64) -> Self {
        Self { atol: tol, rtol: tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

// Dormand-Prince tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrator that keeps its step size across successive calls, so a
/// trajectory can be advanced grid interval by grid interval.
pub struct Dopri<S: OdeState, F: Fn(f64, &S) -> S> {
    rhs: F,
    ctrl: OdeControl,
    h: Option<f64>,
    pub stats: OdeStats,
    _s: std::marker::PhantomData<S>,
}

impl<S: OdeState, F: Fn(f64, &S) -> S> Dopri<S, F> {
    pub fn new(rhs: F, ctrl: OdeControl) -> Self {
        Self { rhs, ctrl, h: ctrl.h_init, stats: OdeStats::default(), _s: std::marker::PhantomData }
    }

    /// Advance `y` from `x0` to `x1` (either direction).
    pub fn advance(&mut self, x0: f64, x1: f64, y: &mut S) -> Result<()> {
        let span = x1 - x0;
        if span == 0.0 {
            return Ok(());
        }
        let dir = span.signum();
        let mut x = x0;
        let mut h = self.h.unwrap_or(span.abs() * 1e-2).abs().min(span.abs());
        if let Some(hm) = self.ctrl.h_max {
            h = h.min(hm);
        }
        let mut k1 = (self.rhs)(x, y);
        self.stats.rhs_evals += 1;
        let mut steps = 0usize;
        loop {
            let remaining = (x1 - x) * dir;
            if remaining <= 1e-14 * span.abs().max(x1.abs()) {
                break;
            }
            let last = h >= remaining;
            let hs = if last { remaining } else { h };
            let hd = hs * dir;
            if hs < 1e-14 * (1.0 + x.abs()) {
                return Err(CoreError::StepUnderflow { x, h: hs });
            }
            steps += 1;
            if steps > self.ctrl.max_steps {
                return Err(CoreError::TooManySteps(self.ctrl.max_steps));
            }

            let rhs = &self.rhs;
            let stage = |coeffs: &[(f64, &S)]| {
                let mut t = y.clone();
                for (c, k) in coeffs {
                    t.axpy(hd * c, k);
                }
                t
            };
            let k2 = rhs(x + C2 * hd, &stage(&[(A21, &k1)]));
            let k3 = rhs(x + C3 * hd, &stage(&[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(x + C4 * hd, &stage(&[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = rhs(x + C5 * hd, &stage(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = rhs(
                x + hd,
                &stage(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let ynew = stage(&[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = rhs(x + hd, &ynew);
            self.stats.rhs_evals += 6;

            let mut err = y.zeros_like();
            for (c, k) in [(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)] {
                err.axpy(hd * c, k);
            }
            let en = S::scaled_error(&err, y, &ynew, self.ctrl.atol, self.ctrl.rtol);
            if !en.is_finite() || !ynew.all_finite() {
                self.stats.rejected += 1;
                h = hs * 0.1;
                continue;
            }
            if en <= 1.0 {
                self.stats.accepted += 1;
                x = if last { x1 } else { x + hd };
                *y = ynew;
                k1 = k7;
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                // keep the unclamped step for the next call when the last step was shortened
                h = if last { h.max(hs * fac) } else { hs * fac };
            } else {
                self.stats.rejected += 1;
                h = hs * (0.9 * en.powf(-0.2)).max(0.1);
            }
            if let Some(hm) = self.ctrl.h_max {
                h = h.min(hm);
            }
        }
        self.h = Some(h);
        Ok(())
    }
}

/// Integrate `y' = rhs(x, y)` from `x0` to `x1`.
pub fn integrate_ivp<S, F>(rhs: F, y0: S, x0: f64, x1: f64, ctrl: OdeControl) -> Result<(S, OdeStats)>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    if !y0.all_finite() {
        return Err(CoreError::NonFinite("initial state".into()));
    }
    let mut d = Dopri::new(rhs, ctrl);
    let mut y = y0;
    d.advance(x0, x1, &mut y)?;
    Ok((y, d.stats))
}

/// Integrate through the monotone abscissae `grid`, returning the state at every point.
pub fn integrate_to_grid<S, F>(rhs: F, y0: S, grid: &[f64], ctrl: OdeControl) -> Result<Vec<S>>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    let mut d = Dopri::new(rhs, ctrl);
    let mut out = Vec::with_capacity(grid.len());
    let mut y = y0;
    out.push(y.clone());
    for w in grid.windows(2) {
        d.advance(w[0], w[1], &mut y)?;
        out.push(y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exponential() {
        let (y, _) = integrate_ivp(|_, y: &f64| *y, 1.0, 0.0, 1.0, OdeControl::default()).unwrap();
        assert!((y - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn constant_solution_is_exact() {
        let (y, _) = integrate_ivp(|_, _: &f64| 0.0, 3.25, -2.0, 5.0, OdeControl::default()).unwrap();
        assert_eq!(y, 3.25);
    }

    #[test]
    fn harmonic_oscillator() {
        let rhs = |_: f64, y: &Vec<f64>| vec![y[1], -y[0]];
        let (y, _) = integrate_ivp(rhs, vec![1.0, 0.0], 0.0, 2.0 * PI, OdeControl::default()).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-8 && y[1].abs() < 1e-8);
    }

    #[test]
    fn backward_and_complex() {
        let i = Complex64::new(0.0, 1.0);
        let rhs = move |_: f64, y: &Vec<Complex64>| vec![i * y[0]];
        let (y, _) = integrate_ivp(rhs, vec![Complex64::new(1.0, 0.0)], 0.0, -PI, OdeControl::default())
            .unwrap();
        assert!((y[0] + 1.0).norm() < 1e-9);
    }

    #[test]
    fn tolerance_halving_tracks_order() {
        let err = |tol: f64| {
            let (y, _) = integrate_ivp(|_, y: &f64| *y, 1.0, 0.0, 1.0, OdeControl::with_tol(tol)).unwrap();
            (y - std::f64::consts::E).abs()
        };
        // error should fall at least as fast as the tolerance
        let e1 = err(1e-6);
        let e2 = err(1e-9);
        assert!(e2 < e1 * 1e-2, "{e1} {e2}");
    }

    #[test]
    fn grid_output_matches_closed_form() {
        let grid: Vec<f64> = (0..=100).map(|k| k as f64 * 0.01).collect();
        let ys = integrate_to_grid(|_, y: &f64| -2.0 * y, 1.0, &grid, OdeControl::default()).unwrap();
        for (x, y) in grid.iter().zip(&ys) {
            assert!((y - (-2.0 * x).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn blowup_is_reported() {
        let r = integrate_ivp(|_, y: &f64| y * y, 1.0, 0.0, 2.0, OdeControl::default());
        assert!(r.is_err());
    }
}
