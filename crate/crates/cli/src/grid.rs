use crate::error::{CliError, Result};

/// Inclusive uniform range `min, min + step, ..., <= max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Range {
    pub fn points(&self, name: &str) -> Result<Vec<f64>> {
        let Range { min, max, step } = *self;
        if ![min, max, step].iter().all(|v| v.is_finite()) {
            return Err(CliError::Usage(format!("{name} range must be finite")));
        }
        if step <= 0.0 {
            return Err(CliError::Usage(format!("{name} step must be positive")));
        }
        if max < min {
            return Err(CliError::Usage(format!("{name} grid is empty ({min} > {max})")));
        }
        let n = ((max - min) / step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|j| min + step * j as f64).collect())
    }
}
