//! Classical steady state of the driven cavity.
//!
//! The intracavity intensity `I` obeys
//! `eps^2 = I [(Delta - 2G sin(theta))^2 + kappa_-^2]` with the effective
//! detuning `Delta = Delta0 + beta I`, which is a cubic in `I`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{cubic_real_roots, NumericsError};
use crate::units::SystemParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SteadyStateError {
    #[error("the intensity cubic has no non-negative root")]
    NoPhysicalRoot,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Which part of the S-shaped response a root lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Segment {
    /// No turning points exist: the response is single valued.
    Single,
    /// Below the lower turning intensity.
    Lower,
    /// Between the turning intensities.
    Middle,
    /// Above the upper turning intensity.
    Upper,
}

impl Segment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Segment::Single => "single",
            Segment::Lower => "lower",
            Segment::Middle => "middle",
            Segment::Upper => "upper",
        }
    }
}

/// One physical root of the intensity equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateBranch {
    /// Intracavity photon number `a_s^2`.
    pub intensity: f64,
    /// Real, non-negative field amplitude.
    pub amplitude: f64,
    /// Dimensionless mirror displacement `(g0 / omega_m) I`.
    pub displacement: f64,
    /// Bare detuning this branch was computed for, rad/s.
    pub delta0: f64,
    /// Effective detuning, rad/s.
    pub delta_eff: f64,
    /// `Delta + 2 chi I`, rad/s.
    pub delta1: f64,
    pub kappa_minus: f64,
    pub kappa_plus: f64,
    /// 0 for the lowest intensity.
    pub branch_index: usize,
    pub segment: Segment,
}

/// Coefficients `(c3, c2, c1, c0)` of
/// `beta^2 I^3 + 2 A beta I^2 + (A^2 + kappa_-^2) I - eps^2`, `A = Delta0 - 2G sin(theta)`.
pub fn intensity_cubic(params: &SystemParams) -> [f64; 4] {
    let d = params.derive();
    let a = params.bare_detuning - params.opa_detuning_shift();
    let km = params.kappa_minus();
    [d.beta * d.beta, 2.0 * a * d.beta, a * a + km * km, -d.epsilon * d.epsilon]
}

/// Turning-point intensities `(I_lo, I_hi)`, ascending.
///
/// `None` when the response is single valued: `beta = 0`, the detuning
/// condition `|2G sin(theta) - Delta0| >= sqrt(3) |kappa_-|` fails, or the
/// turning points fall at negative intensity (detuning on the wrong side for
/// the sign of `beta`). Equality in the detuning condition gives `I_lo == I_hi`.
pub fn multistability_bounds(params: &SystemParams) -> Option<(f64, f64)> {
    let beta = params.derive().beta;
    if beta == 0.0 {
        return None;
    }
    let a = params.bare_detuning - params.opa_detuning_shift();
    let km = params.kappa_minus();
    let disc = a * a - 3.0 * km * km;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let i1 = (-2.0 * a + root) / (3.0 * beta);
    let i2 = (-2.0 * a - root) / (3.0 * beta);
    let (lo, hi) = if i1 <= i2 { (i1, i2) } else { (i2, i1) };
    if lo < 0.0 {
        return None;
    }
    Some((lo, hi))
}

/// Segment of a root with intensity `i` given the turning points.
pub fn classify(bounds: Option<(f64, f64)>, i: f64) -> Segment {
    match bounds {
        None => Segment::Single,
        Some((lo, hi)) => {
            if i < lo {
                Segment::Lower
            } else if i > hi {
                Segment::Upper
            } else {
                Segment::Middle
            }
        }
    }
}

/// All non-negative roots, ascending in intensity.
pub fn solve_branches(params: &SystemParams) -> Result<Vec<SteadyStateBranch>, SteadyStateError> {
    let [c3, c2, c1, c0] = intensity_cubic(params);
    let roots = cubic_real_roots(c3, c2, c1, c0)?;
    let bounds = multistability_bounds(params);
    let branches: Vec<SteadyStateBranch> = roots
        .into_iter()
        .filter(|&i| i >= 0.0)
        .enumerate()
        .map(|(k, i)| {
            let mut b = branch_from_intensity(params, i);
            b.branch_index = k;
            b.segment = classify(bounds, i);
            b
        })
        .collect();
    if branches.is_empty() {
        return Err(SteadyStateError::NoPhysicalRoot);
    }
    Ok(branches)
}

/// Builds the branch record for a known intensity at the bare detuning in
/// `params`. `branch_index` is 0 and the segment is classified.
pub fn branch_from_intensity(params: &SystemParams, intensity: f64) -> SteadyStateBranch {
    let d = params.derive();
    let delta_eff = params.bare_detuning + d.beta * intensity;
    SteadyStateBranch {
        intensity,
        amplitude: intensity.sqrt(),
        displacement: d.g0 / params.mech_freq * intensity,
        delta0: params.bare_detuning,
        delta_eff,
        delta1: delta_eff + 2.0 * params.kerr_coeff * intensity,
        kappa_minus: params.kappa_minus(),
        kappa_plus: params.kappa_plus(),
        branch_index: 0,
        segment: classify(multistability_bounds(params), intensity),
    }
}

/// Intensity that makes the effective detuning equal `delta_eff`; the
/// intensity equation is explicit once `Delta` is known.
pub fn intensity_at_effective_detuning(params: &SystemParams, delta_eff: f64) -> f64 {
    let eps = params.derive().epsilon;
    let off = delta_eff - params.opa_detuning_shift();
    let km = params.kappa_minus();
    eps * eps / (off * off + km * km)
}

/// The unique steady state with effective detuning `delta_eff`, together with
/// the bare detuning `Delta0 = Delta - beta I` that produces it.
pub fn solve_at_effective_detuning(params: &SystemParams, delta_eff: f64) -> (SystemParams, SteadyStateBranch) {
    let i = intensity_at_effective_detuning(params, delta_eff);
    let beta = params.derive().beta;
    let resolved = SystemParams { bare_detuning: delta_eff - beta * i, ..*params };
    let mut branch = branch_from_intensity(&resolved, i);
    // keep the requested value rather than the round trip through Delta0
    branch.delta_eff = delta_eff;
    branch.delta1 = delta_eff + 2.0 * params.kerr_coeff * i;
    if let Ok(all) = solve_branches(&resolved) {
        if let Some(k) = nearest(&all, i) {
            branch.branch_index = k;
        }
    }
    (resolved, branch)
}

fn nearest(all: &[SteadyStateBranch], i: f64) -> Option<usize> {
    all.iter()
        .enumerate()
        .min_by(|a, b| (a.1.intensity - i).abs().total_cmp(&(b.1.intensity - i).abs()))
        .map(|(k, _)| k)
}

/// Relative residual of `eps^2 = I [(Delta - 2G sin(theta))^2 + kappa_-^2]`.
pub fn consistency_residual(params: &SystemParams, branch: &SteadyStateBranch) -> f64 {
    let eps2 = params.derive().epsilon.powi(2);
    let off = branch.delta_eff - params.opa_detuning_shift();
    let rhs = branch.intensity * (off * off + branch.kappa_minus * branch.kappa_minus);
    if eps2 == 0.0 {
        rhs.abs()
    } else {
        ((rhs - eps2) / eps2).abs()
    }
}
