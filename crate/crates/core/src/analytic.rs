//! Closed-form approximations for a high-Q mirror in a cold bath
//! (`omega_m >> gamma_m`, `kappa >> nbar gamma_m`).
//!
//! None of these replace the Lyapunov solution; they are reported alongside.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::LinearizedSystem;
use crate::units::SystemParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("outside the domain of the approximation: {0}")]
    DomainError(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoolingLimit {
    /// Effective detuning that minimises the approximate occupancy, rad/s.
    pub delta_opt: f64,
    pub n_min: f64,
    pub kappa_plus: f64,
}

fn shifted(sys: &LinearizedSystem) -> Result<f64, AnalyticError> {
    let x = sys.shifted_detuning();
    if x > 0.0 {
        Ok(x)
    } else {
        Err(AnalyticError::DomainError("Delta1 + Gamma_i must be positive"))
    }
}

/// Approximate position and momentum variances `(V11, V22)` for a given `eta1`.
pub fn variances_approx(sys: &LinearizedSystem, params: &SystemParams, eta1: f64) -> Result<(f64, f64), AnalyticError> {
    let x = shifted(sys)?;
    if !(eta1 > 0.0) {
        return Err(AnalyticError::DomainError("eta1 must be positive"));
    }
    let wm = params.mech_freq;
    let kp = params.cavity_decay + sys.gamma_r;
    let common = x * x + kp * kp;
    let v11 = (eta1 * wm * wm + common) / (4.0 * eta1 * wm * x);
    let v22 = (wm * wm + common) / (4.0 * wm * x);
    Ok((v11, v22))
}

/// `n_eff ~ [(Delta1 + Gamma_i - omega_m)^2 + kappa_+^2] / [4 omega_m (Delta1 + Gamma_i)]`.
pub fn n_eff_approx(sys: &LinearizedSystem, params: &SystemParams) -> Result<f64, AnalyticError> {
    let x = shifted(sys)?;
    let wm = params.mech_freq;
    let kp = params.cavity_decay + sys.gamma_r;
    Ok(((x - wm).powi(2) + kp * kp) / (4.0 * wm * x))
}

/// Same as [`n_eff_approx`] from the raw shifted detuning `x = Delta + 2G sin(theta)`.
pub fn n_eff_approx_at(x: f64, omega_m: f64, kappa_plus: f64) -> Result<f64, AnalyticError> {
    if !(x > 0.0) {
        return Err(AnalyticError::DomainError("Delta1 + Gamma_i must be positive"));
    }
    Ok(((x - omega_m).powi(2) + kappa_plus * kappa_plus) / (4.0 * omega_m * x))
}

/// Optimal effective detuning and the resulting minimum occupancy.
pub fn cooling_limit(params: &SystemParams) -> CoolingLimit {
    let wm = params.mech_freq;
    let kp = params.kappa_plus();
    let r = wm.hypot(kp);
    CoolingLimit {
        delta_opt: r - params.opa_detuning_shift(),
        // (R - omega_m) / (2 omega_m) without the cancellation
        n_min: kp * kp / (2.0 * wm * (r + wm)),
        kappa_plus: kp,
    }
}

/// Whether the point sits where the approximations are meant to hold:
/// `omega_m > 1e3 gamma_m`, `kappa > 1e2 nbar gamma_m`, `Delta1 + Gamma_i > 0`
/// and `eta1 > 0.99`.
pub fn regime_valid(sys: &LinearizedSystem, params: &SystemParams, eta1: Option<f64>) -> bool {
    let nbar = params.derive().nbar;
    params.mech_freq > 1e3 * params.mech_damping
        && params.cavity_decay > 1e2 * nbar * params.mech_damping
        && sys.shifted_detuning() > 0.0
        && eta1.is_some_and(|e| e > 0.99)
}
