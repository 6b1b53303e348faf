//! Gauss-Legendre rules and composite quadrature of sampled data.

use crate::error::{CoreError, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut pp = 0.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (1.0, 0.0);
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
                }
                pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integral of `g` over `[a, b]`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let (h, m) = (0.5 * (b - a), 0.5 * (a + b));
        self.nodes.iter().zip(&self.weights).map(|(t, w)| w * g(m + h * t)).sum::<f64>() * h
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (h, m) = (0.5 * (b - a), 0.5 * (a + b));
        self.nodes.iter().zip(&self.weights).map(move |(t, w)| (m + h * t, w * h))
    }
}

/// `n`-point Gauss-Legendre integral of `g` over `[a, b]`, rejecting non-finite samples.
pub fn quadrature(g: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<f64> {
    let gl = GaussLegendre::new(n);
    let mut s = 0.0;
    for (x, w) in gl.mapped(a, b) {
        let v = g(x);
        if !v.is_finite() {
            return Err(CoreError::NonFinite(format!("integrand at x = {x}")));
        }
        s += w * v;
    }
    Ok(s)
}

/// Gauss-Legendre over the panels delimited by `breaks`.
pub fn composite(g: impl Fn(f64) -> f64, breaks: &[f64], gl: &GaussLegendre) -> f64 {
    breaks.windows(2).map(|w| gl.integrate(&g, w[0], w[1])).sum()
}

/// Composite Boole rule on uniformly spaced samples; needs `len - 1` divisible by 4.
pub fn boole(samples: &[f64], h: f64) -> Result<f64> {
    let n = samples.len();
    if n < 5 || (n - 1) % 4 != 0 {
        return Err(CoreError::Invalid(format!("Boole rule needs 4k+1 samples, got {n}")));
    }
    let mut s = 0.0;
    for p in (0..n - 1).step_by(4) {
        s += 7.0 * (samples[p] + samples[p + 4]) + 32.0 * (samples[p + 1] + samples[p + 3])
            + 12.0 * samples[p + 2];
    }
    Ok(s * 2.0 * h / 45.0)
}

/// Composite trapezoid rule on uniform samples.
pub fn trapezoid(samples: &[f64], h: f64) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 0.0;
    }
    h * (samples.iter().sum::<f64>() - 0.5 * (samples[0] + samples[n - 1]))
}
