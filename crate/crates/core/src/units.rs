//! Physical parameters of the cavity, mirror, drive and nonlinear media.
//!
//! Everything is stored in one coherent unit system: angular frequencies and
//! rates in rad/s, lengths in metres, mass in kilograms, power in watts and
//! temperature in kelvin. Figure-style normalised inputs (detuning in units of
//! the mechanical frequency, OPA gain in units of the cavity linewidth, power
//! in mW, phase in units of pi) are converted at the boundary with the helpers
//! on [`SystemParams`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{name} must be strictly positive and finite (got {value})")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{name} must be non-negative and finite (got {value})")]
    Negative { name: &'static str, value: f64 },
    #[error("{name} must be finite (got {value})")]
    NotFinite { name: &'static str, value: f64 },
}

/// All physical inputs of the model.
///
/// Field names double as the keys of the configuration file format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// Cavity length L, m.
    pub cavity_length: f64,
    /// Drive laser wavelength, m.
    pub laser_wavelength: f64,
    /// Effective mirror mass, kg.
    pub mirror_mass: f64,
    /// Mechanical angular frequency, rad/s.
    pub mech_freq: f64,
    /// Mechanical energy damping rate, rad/s.
    pub mech_damping: f64,
    /// Cavity field decay rate, rad/s.
    pub cavity_decay: f64,
    /// Drive laser power, W.
    pub input_power: f64,
    /// Bare cavity detuning from the laser, rad/s.
    pub bare_detuning: f64,
    /// OPA nonlinear gain, rad/s.
    pub opa_gain: f64,
    /// Phase of the field pumping the OPA, rad, kept in [0, 2pi).
    pub opa_phase: f64,
    /// Kerr anharmonicity, s^-1 (rad/s).
    pub kerr_coeff: f64,
    /// Mirror bath temperature, K.
    pub bath_temperature: f64,
}

/// Quantities that follow from [`SystemParams`] alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Single-photon optomechanical coupling, rad/s.
    pub g0: f64,
    /// Drive amplitude, rad/s (sqrt of photon flux times 2 kappa).
    pub epsilon: f64,
    /// Mean thermal phonon number of the mirror bath.
    pub nbar: f64,
    /// Slope of the effective detuning with intracavity intensity,
    /// `2 chi - g0^2 / omega_m`, rad/s.
    pub beta: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::reference()
    }
}

impl SystemParams {
    /// The reference device: a 1 mm cavity driven at 810 nm, a 5 ng mirror at
    /// 10 MHz with 100 s^-1 damping, kappa = 0.9 omega_m, 15 mW of drive and a
    /// 400 mK bath. No OPA, no Kerr medium, zero bare detuning.
    pub fn reference() -> Self {
        let mech_freq = TWO_PI * 10.0e6;
        Self {
            cavity_length: 1.0e-3,
            laser_wavelength: 810.0e-9,
            mirror_mass: 5.0e-12,
            mech_freq,
            mech_damping: 100.0,
            cavity_decay: 0.9 * mech_freq,
            input_power: 15.0e-3,
            bare_detuning: 0.0,
            opa_gain: 0.0,
            opa_phase: 0.0,
            kerr_coeff: 0.0,
            bath_temperature: 0.4,
        }
    }

    /// Checks the field invariants and returns a copy with the OPA phase
    /// reduced to [0, 2pi).
    pub fn validated(mut self) -> Result<Self, ParamError> {
        let positive = [
            ("cavity_length", self.cavity_length),
            ("laser_wavelength", self.laser_wavelength),
            ("mirror_mass", self.mirror_mass),
            ("mech_freq", self.mech_freq),
            ("cavity_decay", self.cavity_decay),
            ("input_power", self.input_power),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(ParamError::NotPositive { name, value });
            }
        }
        let non_negative = [
            ("mech_damping", self.mech_damping),
            ("bath_temperature", self.bath_temperature),
            ("opa_gain", self.opa_gain),
            ("kerr_coeff", self.kerr_coeff),
        ];
        for (name, value) in non_negative {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ParamError::Negative { name, value });
            }
        }
        for (name, value) in [
            ("bare_detuning", self.bare_detuning),
            ("opa_phase", self.opa_phase),
        ] {
            if !value.is_finite() {
                return Err(ParamError::NotFinite { name, value });
            }
        }
        self.opa_phase = reduce_phase(self.opa_phase);
        Ok(self)
    }

    /// Laser angular frequency `2 pi c / lambda`.
    pub fn laser_freq(&self) -> f64 {
        TWO_PI * SPEED_OF_LIGHT / self.laser_wavelength
    }

    pub fn derive(&self) -> DerivedParams {
        let g0 = derive_coupling(self);
        DerivedParams {
            g0,
            epsilon: drive_amplitude(self),
            nbar: thermal_occupation(self.bath_temperature, self.mech_freq),
            beta: 2.0 * self.kerr_coeff - g0 * g0 / self.mech_freq,
        }
    }

    /// `kappa - 2 G cos(theta)`.
    pub fn kappa_minus(&self) -> f64 {
        self.cavity_decay - 2.0 * self.opa_gain * self.opa_phase.cos()
    }

    /// `kappa + 2 G cos(theta)`, the effective linewidth seen by the mirror.
    pub fn kappa_plus(&self) -> f64 {
        self.cavity_decay + 2.0 * self.opa_gain * self.opa_phase.cos()
    }

    /// `2 G sin(theta)`, the OPA contribution to the detuning.
    pub fn opa_detuning_shift(&self) -> f64 {
        2.0 * self.opa_gain * self.opa_phase.sin()
    }

    /// Mechanical quality factor `omega_m / gamma_m`.
    pub fn quality_factor(&self) -> f64 {
        self.mech_freq / self.mech_damping
    }

    // Figure-unit setters and getters.

    pub fn with_bare_detuning_wm(mut self, delta0_over_wm: f64) -> Self {
        self.bare_detuning = delta0_over_wm * self.mech_freq;
        self
    }

    pub fn with_kappa_wm(mut self, kappa_over_wm: f64) -> Self {
        self.cavity_decay = kappa_over_wm * self.mech_freq;
        self
    }

    /// Sets G as a multiple of the *current* cavity decay rate.
    pub fn with_gain_kappa(mut self, g_over_kappa: f64) -> Self {
        self.opa_gain = g_over_kappa * self.cavity_decay;
        self
    }

    pub fn with_phase_pi(mut self, theta_over_pi: f64) -> Self {
        self.opa_phase = reduce_phase(theta_over_pi * PI);
        self
    }

    pub fn with_power_mw(mut self, p_mw: f64) -> Self {
        self.input_power = p_mw * 1.0e-3;
        self
    }

    pub fn with_kerr(mut self, chi: f64) -> Self {
        self.kerr_coeff = chi;
        self
    }

    pub fn with_bath_mk(mut self, t0_mk: f64) -> Self {
        self.bath_temperature = t0_mk * 1.0e-3;
        self
    }
}

/// Reduces an angle to [0, 2pi).
pub fn reduce_phase(theta: f64) -> f64 {
    let r = theta.rem_euclid(TWO_PI);
    // rem_euclid rounds tiny negative inputs up to exactly 2pi
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Single-photon coupling `g0 = (omega_L / L) sqrt(hbar / (m omega_m))`.
///
/// The laser frequency stands in for the cavity resonance; the two differ by
/// the detuning, which is at most a few 1e-7 of either.
pub fn derive_coupling(params: &SystemParams) -> f64 {
    let zpf = (HBAR / (params.mirror_mass * params.mech_freq)).sqrt();
    params.laser_freq() / params.cavity_length * zpf
}

/// Drive amplitude `epsilon = sqrt(2 kappa P / (hbar omega_L))`.
pub fn drive_amplitude(params: &SystemParams) -> f64 {
    (2.0 * params.cavity_decay * params.input_power / (HBAR * params.laser_freq())).sqrt()
}

/// Input power needed for a given `epsilon^2`; inverse of [`drive_amplitude`].
pub fn power_for_drive_squared(params: &SystemParams, epsilon_sq: f64) -> f64 {
    epsilon_sq * HBAR * params.laser_freq() / (2.0 * params.cavity_decay)
}

/// Bose occupation `1 / (exp(hbar omega_m / k_B T) - 1)`; zero at T = 0.
pub fn thermal_occupation(t0: f64, omega_m: f64) -> f64 {
    if t0 <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega_m / (K_B * t0);
    if x > 700.0 {
        return 0.0;
    }
    1.0 / x.exp_m1()
}

/// Temperature of a thermal state with `n` quanta at `omega_m`.
///
/// Returns `None` for `n <= 0`, where the logarithm is undefined (ground state).
pub fn occupation_temperature(n: f64, omega_m: f64) -> Option<f64> {
    if n > 0.0 {
        Some(HBAR * omega_m / (K_B * (1.0 / n).ln_1p()))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn coupling_matches_direct_arithmetic() {
        let p = SystemParams::reference();
        // omega_L / L = 2.3255e18, sqrt(hbar / (m omega_m)) = 5.7937e-16
        let expected = (2.0 * PI * SPEED_OF_LIGHT / 810e-9 / 1e-3)
            * (HBAR / (5e-12 * 2.0 * PI * 1e7)).sqrt();
        assert!(rel(derive_coupling(&p), expected) < 1e-14);
        assert!(rel(derive_coupling(&p), 1.35e3) < 5e-3);
    }

    #[test]
    fn coupling_scaling() {
        let p = SystemParams::reference();
        let g0 = derive_coupling(&p);
        let heavy = SystemParams { mirror_mass: 4.0 * p.mirror_mass, ..p };
        let long = SystemParams { cavity_length: 2.0 * p.cavity_length, ..p };
        assert!(rel(derive_coupling(&heavy), g0 / 2.0) < 1e-15);
        assert!(rel(derive_coupling(&long), g0 / 2.0) < 1e-15);
    }

    #[test]
    fn drive_amplitude_examples() {
        let p = SystemParams::reference();
        let eps = drive_amplitude(&p);
        assert!(rel(eps, 2.6e12) < 0.02, "eps = {eps:e}");
        let quad = SystemParams { input_power: 4.0 * p.input_power, ..p };
        assert!(rel(drive_amplitude(&quad), 2.0 * eps) < 1e-15);
        let back = power_for_drive_squared(&p, eps * eps);
        assert!(rel(back, p.input_power) < 1e-14);
    }

    #[test]
    fn zero_power_gives_zero_drive() {
        let p = SystemParams { input_power: 0.0, ..SystemParams::reference() };
        assert_eq!(drive_amplitude(&p), 0.0);
    }

    #[test]
    fn thermal_occupation_examples() {
        let wm = 2.0 * PI * 1e7;
        assert_eq!(thermal_occupation(0.0, wm), 0.0);
        // hbar omega_m / k_B T at 400 mK is 1.2e-3
        let n400 = thermal_occupation(0.4, wm);
        assert!((n400 - 832.9).abs() < 0.5, "{n400}");
        let n25 = thermal_occupation(0.025, wm);
        assert!((n25 - 51.6).abs() < 0.1, "{n25}");
        // deep quantum regime underflows to zero without NaN
        assert_eq!(thermal_occupation(1e-9, wm), 0.0);
    }

    #[test]
    fn temperature_inverts_occupation() {
        let wm = 2.0 * PI * 1e7;
        for t in [0.025, 0.4, 3.0] {
            let n = thermal_occupation(t, wm);
            assert!(rel(occupation_temperature(n, wm).unwrap(), t) < 1e-12);
        }
        assert!(occupation_temperature(0.0, wm).is_none());
    }

    #[test]
    fn beta_identity_and_sign_change() {
        let p = SystemParams::reference();
        let d = p.derive();
        let g0 = derive_coupling(&p);
        assert_eq!(d.beta, 2.0 * p.kerr_coeff - g0 * g0 / p.mech_freq);
        let threshold = g0 * g0 / (2.0 * p.mech_freq);
        assert!(threshold > 0.01 && threshold < 0.02, "{threshold}");
        assert!(p.with_kerr(0.01).derive().beta < 0.0);
        assert!(p.with_kerr(0.04).derive().beta > 0.0);
        assert!(p.with_kerr(0.1).derive().beta > 0.0);
        assert_eq!(p.with_kerr(threshold).derive().beta, 0.0);
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let p = SystemParams::reference();
        assert!(matches!(
            SystemParams { mirror_mass: 0.0, ..p }.validated(),
            Err(ParamError::NotPositive { name: "mirror_mass", .. })
        ));
        assert!(matches!(
            SystemParams { kerr_coeff: -1.0, ..p }.validated(),
            Err(ParamError::Negative { name: "kerr_coeff", .. })
        ));
        assert!(SystemParams { bare_detuning: f64::NAN, ..p }.validated().is_err());
        assert!(SystemParams { mech_damping: 0.0, bath_temperature: 0.0, ..p }
            .validated()
            .is_ok());
    }

    #[test]
    fn phase_is_reduced() {
        let p = SystemParams { opa_phase: -0.5 * PI, ..SystemParams::reference() };
        let v = p.validated().unwrap();
        assert!((v.opa_phase - 1.5 * PI).abs() < 1e-15);
        assert_eq!(reduce_phase(-1e-300), 0.0);
        assert_eq!(reduce_phase(2.0 * PI), 0.0);
    }

    #[test]
    fn figure_unit_helpers() {
        let p = SystemParams::reference()
            .with_kappa_wm(0.3)
            .with_gain_kappa(0.6)
            .with_phase_pi(0.67)
            .with_power_mw(2.5)
            .with_bare_detuning_wm(-2.5)
            .with_bath_mk(25.0);
        assert!(rel(p.cavity_decay, 0.3 * p.mech_freq) < 1e-15);
        assert!(rel(p.opa_gain, 0.18 * p.mech_freq) < 1e-15);
        assert!(rel(p.opa_phase, 0.67 * PI) < 1e-15);
        assert!(rel(p.input_power, 2.5e-3) < 1e-15);
        assert!(rel(p.bare_detuning, -2.5 * p.mech_freq) < 1e-15);
        assert!(rel(p.bath_temperature, 0.025) < 1e-15);
        assert!(rel(p.kappa_minus() + p.kappa_plus(), 2.0 * p.cavity_decay) < 1e-15);
    }
}
