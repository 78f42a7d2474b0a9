//! Linearized fluctuation dynamics around a steady state and its stability.
//!
//! Fluctuations are ordered `(dq, dp, dx, dy)`: mirror position and momentum,
//! then the cavity amplitude and phase quadratures.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{eig4, ComplexNumber, Mat4, NumericsError};
use crate::steady_state::SteadyStateBranch;
use crate::units::SystemParams;

/// Eigenvalues must have real parts below `-STABILITY_MARGIN_REL * omega_m`.
///
/// Small enough that the bare mechanical damping rate (`gamma_m / 2` is a few
/// 1e-7 of `omega_m` for the reference device) still counts as stable.
pub const STABILITY_MARGIN_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("stability parameter undefined: s1 = 0 (parametric threshold)")]
    DegenerateDenominator,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearizedSystem {
    /// Enhanced coupling `sqrt(2) g0 a_s`, rad/s.
    pub g1: f64,
    /// `2G cos(theta)`, rad/s.
    pub gamma_r: f64,
    /// `2G sin(theta) - 2 chi I`, rad/s.
    pub gamma_i: f64,
    /// `Delta + 2 chi I`, rad/s.
    pub delta1: f64,
    /// Drift matrix M.
    pub drift: Mat4,
}

impl LinearizedSystem {
    /// `|Gamma|^2`.
    pub fn gamma_sq(&self) -> f64 {
        self.gamma_r * self.gamma_r + self.gamma_i * self.gamma_i
    }

    /// `Delta1 + Gamma_i`, which equals `Delta + 2G sin(theta)`.
    pub fn shifted_detuning(&self) -> f64 {
        self.delta1 + self.gamma_i
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub eigenvalues: [ComplexNumber; 4],
    pub max_real_part: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// `None` at `s1 = 0`.
    pub eta1: Option<f64>,
    pub eta2: f64,
    /// Eigenvalue verdict.
    pub stable: bool,
    /// `s1 > 0 && s2 > 0 && s3 > 0`.
    pub rh_stable: bool,
    pub rh_disagreement: bool,
}

pub fn linearize(branch: &SteadyStateBranch, params: &SystemParams) -> LinearizedSystem {
    let g0 = params.derive().g0;
    let g1 = std::f64::consts::SQRT_2 * g0 * branch.amplitude;
    let gamma_r = 2.0 * params.opa_gain * params.opa_phase.cos();
    let gamma_i = params.opa_detuning_shift() - 2.0 * params.kerr_coeff * branch.intensity;
    let delta1 = branch.delta1;
    let k = params.cavity_decay;
    let wm = params.mech_freq;
    let drift = Mat4([
        [0.0, wm, 0.0, 0.0],
        [-wm, -params.mech_damping, g1, 0.0],
        [0.0, 0.0, -k + gamma_r, delta1 + gamma_i],
        [g1, 0.0, -delta1 + gamma_i, -k - gamma_r],
    ]);
    LinearizedSystem { g1, gamma_r, gamma_i, delta1, drift }
}

/// Routh-Hurwitz quantities `(s1, s2, s3)`; all positive iff M is stable.
pub fn routh_hurwitz(sys: &LinearizedSystem, params: &SystemParams) -> (f64, f64, f64) {
    let k = params.cavity_decay;
    let wm = params.mech_freq;
    let gm = params.mech_damping;
    let g1sq = sys.g1 * sys.g1;
    let x = sys.shifted_detuning();
    let s1 = k * k + sys.delta1 * sys.delta1 - sys.gamma_sq();
    let s2 = wm * s1 - g1sq * x;
    let wm2 = wm * wm;
    let s3 = 2.0 * k * gm * ((s1 - wm2).powi(2) + (gm + 2.0 * k) * (gm * s1 + 2.0 * k * wm2))
        + g1sq * x * wm * (2.0 * k + gm).powi(2);
    (s1, s2, s3)
}

/// `(eta1, eta2)` with `eta2 = s1 / (kappa^2 + Delta1^2)` and
/// `eta1 = s2 / (omega_m s1)`.
pub fn stability_parameters(sys: &LinearizedSystem, params: &SystemParams) -> Result<(f64, f64), DynamicsError> {
    let (s1, s2, _) = routh_hurwitz(sys, params);
    let eta2 = s1 / (params.cavity_decay.powi(2) + sys.delta1 * sys.delta1);
    if s1 == 0.0 {
        return Err(DynamicsError::DegenerateDenominator);
    }
    Ok((s2 / (params.mech_freq * s1), eta2))
}

pub fn assess_stability(sys: &LinearizedSystem, params: &SystemParams) -> Result<StabilityReport, NumericsError> {
    let eigenvalues = eig4(&sys.drift)?;
    let max_real_part = eigenvalues.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
    let stable = max_real_part < -STABILITY_MARGIN_REL * params.mech_freq;
    let (s1, s2, s3) = routh_hurwitz(sys, params);
    let rh_stable = s1 > 0.0 && s2 > 0.0 && s3 > 0.0;
    let (eta1, eta2) = match stability_parameters(sys, params) {
        Ok((e1, e2)) => (Some(e1), e2),
        Err(_) => (None, 0.0),
    };
    Ok(StabilityReport {
        eigenvalues,
        max_real_part,
        s1,
        s2,
        s3,
        eta1,
        eta2,
        stable,
        rh_stable,
        rh_disagreement: stable != rh_stable,
    })
}

/// Whether all of `s1, s2, s3` are farther from zero than `margin` after
/// scaling by the matching power of `omega_m` (2, 3 and 6).
pub fn rh_clear_of_margin(s: (f64, f64, f64), omega_m: f64, margin: f64) -> bool {
    s.0.abs() / omega_m.powi(2) > margin
        && s.1.abs() / omega_m.powi(3) > margin
        && s.2.abs() / omega_m.powi(6) > margin
}
