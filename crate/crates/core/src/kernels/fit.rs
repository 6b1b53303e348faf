//! Least-squares fitting over monomial bases.

use crate::error::{CoreError, Result};
use crate::kernels::linalg::{condition_1, solve_dense};

/// Monomial `prod_i x_i^{e_i}` over the sample inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product()
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub inputs: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub coeffs: Vec<f64>,
    pub rms_residual: f64,
    pub max_residual: f64,
    /// One-norm condition estimate of the column-scaled normal matrix.
    pub condition: f64,
    pub ill_conditioned: bool,
}

/// Condition estimates above this raise the warning flag.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Normal-equation least squares with unit-norm column scaling.
pub fn polyfit(samples: &[Sample], basis: &[Monomial]) -> Result<FitResult> {
    let (n, p) = (samples.len(), basis.len());
    if n < p || p == 0 {
        return Err(CoreError::Invalid(format!("polyfit: {n} samples for {p} basis functions")));
    }
    let design: Vec<Vec<f64>> =
        samples.iter().map(|s| basis.iter().map(|m| m.eval(&s.inputs)).collect()).collect();
    let scale: Vec<f64> = (0..p)
        .map(|j| {
            let c = design.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt();
            if c > 0.0 {
                c
            } else {
                1.0
            }
        })
        .collect();
    let mut g = vec![vec![0.0; p]; p];
    let mut rhs = vec![0.0; p];
    for (row, s) in design.iter().zip(samples) {
        for i in 0..p {
            let ri = row[i] / scale[i];
            rhs[i] += ri * s.value;
            for j in 0..p {
                g[i][j] += ri * row[j] / scale[j];
            }
        }
    }
    let condition = condition_1(&g).unwrap_or(f64::INFINITY);
    let z = solve_dense(&g, &rhs)?;
    let coeffs: Vec<f64> = z.iter().zip(&scale).map(|(z, s)| z / s).collect();
    let mut ss = 0.0;
    let mut mx = 0.0f64;
    for (row, s) in design.iter().zip(samples) {
        let r = row.iter().zip(&coeffs).map(|(a, c)| a * c).sum::<f64>() - s.value;
        ss += r * r;
        mx = mx.max(r.abs());
    }
    Ok(FitResult {
        coeffs,
        rms_residual: (ss / n as f64).sqrt(),
        max_residual: mx,
        condition,
        ill_conditioned: condition > CONDITION_LIMIT,
    })
}
