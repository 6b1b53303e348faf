use crate::config::{BaseKind, SimulateConfig};
use crate::emit::{json_string, Cell, Format, Table};
use crate::error::{CliError, Result};
use couette_core::axisym::{critical_point, eigenfunction_at, neutral_taylor, Parity, NORMALIZATION};
use couette_core::dispersion::{critical_surface, fit_dispersion, SampleBox};
use couette_core::gldyn::{linear_rate, measure_growth_rate, plane_wave, simulate, RecordSpec};
use couette_core::glsteady::{
    boundary_point, build_profile, classify, conservation_drift, homoclinic_orbit, sideband_rates, stability_rates,
    wavy_amplitude, OrbitKind, OrbitResult, OrbitSpec, Profile, Start,
};
use couette_core::landau::landau_report;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const NEUTRAL_COLUMNS: [&str; 2] = ["alpha", "taylor_c"];
pub const SURFACE_COLUMNS: [&str; 3] = ["alpha", "bbeta", "taylor_c"];
pub const MINIMA_COLUMNS: [&str; 3] = ["bbeta", "alpha_c", "taylor_c"];
pub const ORBIT_COLUMNS: [&str; 8] =
    ["H", "K", "kind", "rho_min", "rho_max", "period", "beta_prime", "winding_over_2pi"];
pub const PROFILE_COLUMNS: [&str; 5] = ["y", "rho", "theta", "reA", "imA"];
pub const TRAJECTORY_COLUMNS: [&str; 3] = ["t", "k", "abs_amp"];

fn warn(msg: impl std::fmt::Display) {
    eprintln!("warning: {msg}");
}

pub fn neutral(alphas: &[f64], parity: Parity) -> Table {
    let mut t = Table::new("neutral", &NEUTRAL_COLUMNS);
    t.meta("parity", parity);
    for &a in alphas {
        let cell = match neutral_taylor(a, parity) {
            Ok(p) => Cell::Num(p.taylor),
            Err(e) => {
                warn(format_args!("alpha = {a}: {e}"));
                Cell::Empty
            }
        };
        t.push(vec![a.into(), cell]);
    }
    t
}

/// Least-squares `T0 + q B^2` through the minima.
pub fn quadratic_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0 * p.0).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if points.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - mx) * (p.1 - my)).sum();
    let q = sxy / sxx;
    Some((my - q * mx, q))
}

pub fn surface(alphas: &[f64], bbetas: &[f64]) -> Result<(Table, Table)> {
    let st = critical_surface(alphas, bbetas)?;
    let mut t = Table::new("surface", &SURFACE_COLUMNS);
    for r in &st.rows {
        let cell = match &r.point {
            Ok(p) => Cell::Num(p.taylor_crit),
            Err(e) => {
                warn(format_args!("(alpha, B) = ({}, {}): {e}", r.alpha, r.bbeta));
                Cell::Empty
            }
        };
        t.push(vec![r.alpha.into(), r.bbeta.into(), cell]);
    }
    let mut m = Table::new("minima", &MINIMA_COLUMNS);
    let mut pts = Vec::new();
    for (b, min) in bbetas.iter().zip(&st.minima) {
        match min {
            Ok(s) => {
                pts.push((s.bbeta, s.taylor_c));
                m.push(vec![s.bbeta.into(), s.alpha_c.into(), s.taylor_c.into()]);
            }
            Err(e) => {
                warn(format_args!("minimum at B = {b}: {e}"));
                m.push(vec![(*b).into(), Cell::Empty, Cell::Empty]);
            }
        }
    }
    if let Some((t0, q)) = quadratic_fit(&pts) {
        m.meta("fit_taylor_0", crate::emit::fmt_num(t0));
        m.meta("fit_quadratic", crate::emit::fmt_num(q));
    }
    Ok((t, m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Signs {
    pub a3_positive: bool,
    pub a4_negative: bool,
    pub a6_negative: bool,
    pub c_positive: bool,
    pub b4_positive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsReport {
    pub schema: String,
    pub alpha_c: f64,
    pub taylor_c: f64,
    pub a3: f64,
    pub a4: f64,
    pub a6: f64,
    pub a7: f64,
    pub a9: f64,
    pub a10: f64,
    pub b4_bvp: f64,
    pub c: f64,
    pub a3_integral: f64,
    pub c_phi2_route: f64,
    pub l0_phi2_phi2: f64,
    pub normalization: String,
    pub signs: Signs,
    /// |b4_bvp + a4| / b4_bvp.
    pub b4_gap: f64,
    pub b4_gap_ok: bool,
}

pub fn coeffs() -> Result<CoeffsReport> {
    let (alpha_c, taylor_c) = critical_point(Parity::Even)?;
    let fit = fit_dispersion((alpha_c, taylor_c), SampleBox::default_for(taylor_c))?;
    let ef = eigenfunction_at(alpha_c, taylor_c)?;
    let l = landau_report(&ef)?;
    let gap = (l.b4 + fit.a4).abs() / l.b4;
    Ok(CoeffsReport {
        schema: format!("{} coeffs v{}", crate::emit::TAG, crate::emit::VERSION),
        alpha_c,
        taylor_c,
        a3: fit.a3,
        a4: fit.a4,
        a6: fit.a6,
        a7: fit.a7,
        a9: fit.a9,
        a10: fit.a10,
        b4_bvp: l.b4,
        c: l.c,
        a3_integral: l.a3,
        c_phi2_route: l.c_phi2_route,
        l0_phi2_phi2: l.l0_phi2_phi2,
        normalization: NORMALIZATION.into(),
        signs: Signs {
            a3_positive: fit.a3 > 0.0,
            a4_negative: fit.a4 < 0.0,
            a6_negative: fit.a6 < 0.0,
            c_positive: l.c > 0.0,
            b4_positive: l.b4 > 0.0,
        },
        b4_gap: gap,
        b4_gap_ok: gap < 0.01,
    })
}

pub fn coeffs_table(r: &CoeffsReport) -> Table {
    let mut t = Table::new("coeffs", &["name", "value"]);
    for (k, v) in [
        ("alpha_c", r.alpha_c),
        ("taylor_c", r.taylor_c),
        ("a3", r.a3),
        ("a4", r.a4),
        ("a6", r.a6),
        ("a7", r.a7),
        ("a9", r.a9),
        ("a10", r.a10),
        ("b4_bvp", r.b4_bvp),
        ("c", r.c),
        ("a3_integral", r.a3_integral),
        ("c_phi2_route", r.c_phi2_route),
        ("l0_phi2_phi2", r.l0_phi2_phi2),
        ("b4_gap", r.b4_gap),
    ] {
        t.push(vec![k.into(), v.into()]);
    }
    t.meta("normalization", &r.normalization);
    t
}

pub fn render_coeffs(r: &CoeffsReport, fmt: Format) -> String {
    match fmt {
        Format::Json => json_string(r),
        Format::Csv => coeffs_table(r).to_csv(),
    }
}

fn orbit_row(r: &OrbitResult) -> Vec<Cell> {
    vec![
        r.spec.h.into(),
        r.spec.k.into(),
        r.kind.as_str().into(),
        r.rho_min.into(),
        r.rho_max.into(),
        r.period.into(),
        r.beta_prime.into(),
        r.eligibility().map(|e| e.0).into(),
    ]
}

pub fn orbits_grid(tau: f64, hs: &[f64], ks: &[f64]) -> Table {
    let mut t = Table::new("orbits", &ORBIT_COLUMNS);
    t.meta("tau", tau);
    for &k in ks {
        for &h in hs {
            t.push(orbit_row(&classify(&OrbitSpec::new(tau, h, k))));
        }
    }
    t
}

/// Boundary of the admissible (H, K) region, X from 0 to tau/2 plus the corner X = tau/3.
pub fn orbits_boundary(tau: f64, points: usize) -> Result<Table> {
    if !(tau > 0.0) || points < 2 {
        return Err(CliError::Usage("boundary scan needs tau > 0 and at least 2 points".into()));
    }
    let mut xs: Vec<f64> = (0..points).map(|j| 0.5 * tau * j as f64 / (points - 1) as f64).collect();
    xs.push(tau / 3.0);
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * tau);
    let mut t = Table::new("orbits", &ORBIT_COLUMNS);
    t.meta("tau", tau);
    t.meta("scan", "boundary");
    for x in xs {
        let (h, k) = boundary_point(tau, x);
        // the endpoint X = tau/2 sits at K = 0 where the sqrt may round off
        let spec = if (x - 0.5 * tau).abs() < 1e-12 * tau { OrbitSpec::new(tau, 0.25 * tau * tau, 0.0) } else { OrbitSpec::new(tau, h, k) };
        t.push(orbit_row(&classify(&spec)));
    }
    Ok(t)
}

pub struct ProfileRequest {
    pub tau: f64,
    pub h: Option<f64>,
    pub k: f64,
    pub window: (f64, f64),
    pub samples: usize,
    pub theta0: f64,
    pub start: Start,
    pub tol: f64,
}

/// Build, check and tabulate one profile.
pub fn profile(req: &ProfileRequest) -> Result<Table> {
    let (orbit, p) = match req.h {
        None => {
            let (r, _) = homoclinic_orbit(req.tau, req.k, 1.0, 2)?;
            let p = build_profile(&r, req.theta0, req.window, req.samples, req.start)?;
            (r, p)
        }
        Some(h) => {
            let r = classify(&OrbitSpec::new(req.tau, h, req.k));
            let p = build_profile(&r, req.theta0, req.window, req.samples, req.start)?;
            (r, p)
        }
    };
    let drift = conservation_drift(&p);
    if drift.energy > req.tol || drift.momentum > req.tol {
        return Err(CliError::Check(format!(
            "first integrals drift by {:.3e} / {:.3e} (tolerance {:e})",
            drift.energy, drift.momentum, req.tol
        )));
    }
    let mut t = Table::new("profile", &PROFILE_COLUMNS);
    t.meta("tau", req.tau);
    t.meta("H", orbit.spec.h);
    t.meta("K", req.k);
    t.meta("kind", orbit.kind);
    t.meta("beta_prime", p.beta_prime);
    t.meta("theta0", req.theta0);
    if let Some(per) = p.period {
        let gap = phase_periodicity_gap(&orbit, &p, req)?;
        if gap > req.tol {
            return Err(CliError::Check(format!("theta - beta' y - theta0 is not periodic (gap {gap:.3e})")));
        }
        t.meta("period", per);
    }
    if let Some(ri) = orbit.rho_infty {
        let tail = (p.rho[0] - ri).abs().max((p.rho[p.rho.len() - 1] - ri).abs());
        t.meta("rho_infty", ri);
        t.meta("tail_gap", crate::emit::fmt_num(tail));
    }
    t.meta("drift_energy", crate::emit::fmt_num(drift.energy));
    t.meta("drift_momentum", crate::emit::fmt_num(drift.momentum));
    for j in 0..p.y.len() {
        t.push(vec![p.y[j].into(), p.rho[j].into(), p.theta[j].into(), p.a[j].re.into(), p.a[j].im.into()]);
    }
    Ok(t)
}

/// Largest |phi(y + T) - phi(y)| over the window, T the period of rho.
fn phase_periodicity_gap(r: &OrbitResult, p: &Profile, req: &ProfileRequest) -> Result<f64> {
    if r.kind != OrbitKind::Periodic || r.spec.k == 0.0 {
        return Ok(0.0);
    }
    let per = p.period.unwrap_or(0.0);
    let shifted = build_profile(r, req.theta0, (req.window.0 + per, req.window.1 + per), req.samples, req.start)?;
    Ok(p.phi.iter().zip(&shifted.phi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub schema: String,
    pub seed: u64,
    pub base: String,
    pub bbeta0: f64,
    pub mode: i64,
    pub bbeta_prime: f64,
    pub window: [f64; 2],
    pub measured: f64,
    pub predicted: f64,
    pub rel_gap: f64,
    pub closed_form: [f64; 2],
    pub coupled: [f64; 2],
    pub monotone: bool,
    pub fit_residual: f64,
}

/// Rate the perturbation component should show: the larger coupled rate once
/// it is positive, otherwise the one whose eigenvector lies mostly on B'.
fn predicted_rate(d: f64, s: f64, b0: f64, bp: f64, pair: (f64, f64)) -> f64 {
    if pair.0 > 0.0 {
        return pair.0;
    }
    let kap = bp - b0;
    let d1 = -s - d * kap * kap - 2.0 * d * b0 * kap;
    let weight = |l: f64| s * s / (s * s + (d1 - l).powi(2));
    if weight(pair.1) > weight(pair.0) + 1e-12 {
        pair.1
    } else {
        pair.0
    }
}

pub fn run_simulation(cfg: &SimulateConfig, seed_override: Option<u64>) -> Result<(Table, RateReport)> {
    let sim = cfg.sim_config()?;
    let gl = sim.gl;
    let seed = seed_override.or(cfg.seed).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mode = cfg.perturbation.mode;
    sim.slot(mode).map_err(|e| CliError::Config(e.to_string()))?;
    let bp = sim.wavenumber(mode);
    let (base, b0, base_index) = match cfg.base.kind {
        BaseKind::Zero => (vec![Complex64::new(0.0, 0.0); sim.modes], 0.0, None),
        BaseKind::Wavy => {
            let b0 = cfg.base.bbeta;
            let idx = sim
                .index_of(b0)
                .ok_or_else(|| CliError::Config(format!("B0 = {b0} is not a mode of the domain")))?;
            let rho = wavy_amplitude(&gl, b0)?;
            (plane_wave(&sim, idx, rho, 0.0), b0, Some(idx))
        }
    };
    let p = plane_wave(&sim, mode, cfg.perturbation.amplitude, rng.gen_range(0.0..2.0 * PI));
    let init: Vec<Complex64> = base.iter().zip(&p).map(|(a, b)| a + b).collect();
    let mut modes = vec![mode];
    if let Some(i0) = base_index {
        let mirror = 2 * i0 - mode;
        if mirror != mode && sim.slot(mirror).is_ok() {
            modes.push(mirror);
        }
    }
    let rec = RecordSpec { stride: cfg.run.stride, reference: Some(base), modes: Some(modes) };
    let traj = simulate(&sim, &init, cfg.run.t_end, &rec)?;
    let window = (cfg.run.window[0], cfg.run.window[1]);
    let fit = measure_growth_rate(&traj, mode, window)?;
    let (closed, coupled, predicted) = match cfg.base.kind {
        BaseKind::Zero => {
            let l = linear_rate(&gl, bp);
            ([l, l], [l, l], l)
        }
        BaseKind::Wavy => {
            let (m1, m2) = stability_rates(&gl, b0, bp)?;
            let pair = sideband_rates(&gl, b0, bp)?;
            let s = gl.c * wavy_amplitude(&gl, b0)?.powi(2);
            ([m1, m2], [pair.0, pair.1], predicted_rate(gl.b4, s, b0, bp, pair))
        }
    };
    let mut t = Table::new("simulate", &TRAJECTORY_COLUMNS);
    t.meta("seed", seed);
    for (r, time) in traj.times.iter().enumerate() {
        for (m, k) in traj.wavenumbers.iter().enumerate() {
            t.push(vec![(*time).into(), (*k).into(), traj.amps[r][m].into()]);
        }
    }
    let report = RateReport {
        schema: format!("{} rate v{}", crate::emit::TAG, crate::emit::VERSION),
        seed,
        base: match cfg.base.kind {
            BaseKind::Zero => "zero".into(),
            BaseKind::Wavy if b0 == 0.0 => "tvf".into(),
            BaseKind::Wavy => "wavy".into(),
        },
        bbeta0: b0,
        mode,
        bbeta_prime: bp,
        window: cfg.run.window,
        measured: fit.rate,
        predicted,
        rel_gap: (fit.rate - predicted).abs() / predicted.abs().max(1e-300),
        closed_form: closed,
        coupled,
        monotone: fit.monotone,
        fit_residual: fit.residual,
    };
    Ok((t, report))
}
