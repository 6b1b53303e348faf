use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// Physical regime of a Couette-Taylor apparatus in the small-gap scalings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    pub eta: f64,
    pub mu: f64,
    pub omega_hat: f64,
    pub reynolds: f64,
    pub taylor: f64,
}

impl RegimeParams {
    /// Build from radii ratio, rotation ratio and rescaled inner rotation rate.
    pub fn new(eta: f64, mu: f64, omega_hat: f64) -> Result<Self> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(CoreError::Domain(format!("eta = {eta} outside (0, 1)")));
        }
        let reynolds = omega_hat * (1.0 - mu) / (1.0 - eta);
        let taylor = 2.0 * omega_hat * reynolds;
        if !(reynolds > 0.0 && taylor > 0.0) || !taylor.is_finite() {
            return Err(CoreError::Domain(format!(
                "regime needs R > 0 and T > 0 (got R = {reynolds}, T = {taylor})"
            )));
        }
        Ok(Self { eta, mu, omega_hat, reynolds, taylor })
    }

    /// Inner rotation rate that puts the apparatus at Taylor number `taylor`.
    pub fn at_taylor(eta: f64, mu: f64, taylor: f64) -> Result<Self> {
        if taylor <= 0.0 || mu >= 1.0 {
            return Err(CoreError::Domain("need T > 0 and mu < 1".into()));
        }
        let omega_hat = (taylor * (1.0 - eta) / (2.0 * (1.0 - mu))).sqrt();
        Self::new(eta, mu, omega_hat)
    }
}
